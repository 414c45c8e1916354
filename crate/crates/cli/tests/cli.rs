//! End-to-end runs of the `relsheaf` binary: subcommand behavior, exit
//! codes, and byte-stable output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn relsheaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relsheaf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_accepts_fixtures_and_rejects_the_pentagon() {
    let ok = relsheaf(&["validate", fixture("b4.lat").to_str().unwrap()]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("valid Heyting algebra: 4 elements"));

    let bad = relsheaf(&["validate", fixture("n5.lat").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("not a Heyting algebra"));
    assert!(stderr(&bad).contains("adjunction fails"));
}

#[test]
fn validate_reports_parse_errors_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.lat");
    std::fs::write(&path, "").unwrap();
    let out = relsheaf(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(":1: empty file"), "{}", stderr(&out));
}

#[test]
fn downsets_prints_the_inclusion_lattice() {
    let out = relsheaf(&["downsets", fixture("c3.lat").to_str().unwrap()]);
    assert!(out.status.success());
    let expected = "\
[lattice]
elements = {} {⊥} {⊥,m} {⊥,m,⊤}
leq = {}<={⊥}
leq = {⊥}<={⊥,m}
leq = {⊥,m}<={⊥,m,⊤}
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn sheaf_check_verdicts_and_exit_codes() {
    let yes = relsheaf(&["sheaf-check", fixture("SEP.psh").to_str().unwrap()]);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "sheaf: yes\n");

    let no = relsheaf(&["sheaf-check", fixture("NSH.psh").to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(1));
    let text = stdout(&no);
    assert!(text.contains("sheaf: no"));
    assert!(text.contains("2 amalgamations"), "{text}");

    let mis = relsheaf(&["sheaf-check", fixture("MIS.psh").to_str().unwrap()]);
    assert_eq!(mis.status.code(), Some(1));
    assert!(stdout(&mis).contains("0 amalgamations"));
}

#[test]
fn sheafify_adjoins_the_missing_amalgamation() {
    let out = relsheaf(&["sheafify", fixture("MIS.psh").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("carrier ⊤ = [⊥,a,b]"), "{text}");
    assert!(text.ends_with("# sheaf-check: pass\n"));

    // determinism: a second run is byte-identical
    let again = relsheaf(&["sheafify", fixture("MIS.psh").to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn delta_prints_the_agreement_matrix() {
    let out = relsheaf(&["delta", fixture("NSH.psh").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("[reltrans]\nlattice = B4\n"));
    assert!(text.contains("M: ⊤:y ⊤:x = ⊤"), "{text}");
    assert!(text.contains("M: a:m ⊤:y = a"), "{text}");
}

#[test]
fn theta_prints_the_presheaf_of_singletons() {
    let out = relsheaf(&["theta", fixture("PER.rt").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    // two singletons at ⊤ (one per class), one at ⊥
    assert!(text.contains("carrier ⊤ = [⊥,⊥,⊤] [⊤,⊤,⊥]"), "{text}");
    assert!(text.contains("carrier ⊥ = [⊥,⊥,⊥]"), "{text}");

    // a non-object is refused
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rt");
    std::fs::write(
        &bad,
        "[reltrans]\nlattice = B4\ncarrier = x y\nM: x y = a\n",
    )
    .unwrap();
    let refused = relsheaf(&["theta", bad.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(stderr(&refused).contains("not a relational sheaf"));
}

#[test]
fn check_suite_runs_fixtures_and_reports() {
    let out = relsheaf(&["check-suite", "sheaf-iff", "--fixtures"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["SEP", "NSH", "MIS"] {
        assert!(text.contains(&format!("instance {name}:")), "{text}");
    }
    assert!(text.contains("result: PASS (3 checks)"));
    // machine section: suite, law, verdict, counterexample
    assert!(text.contains("sheaf-iff\tSEP/sheaf-iff-eta-iso\tpass\t"));

    let again = relsheaf(&["check-suite", "sheaf-iff", "--fixtures"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn check_suite_generated_is_seed_stable() {
    let args = [
        "check-suite",
        "comparison",
        "--seed",
        "3",
        "--count",
        "4",
        "--max-h",
        "4",
    ];
    let one = relsheaf(&args);
    assert!(one.status.success(), "{}", stdout(&one));
    let two = relsheaf(&args);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn unknown_suites_and_flags_are_errors() {
    let bad = relsheaf(&["check-suite", "nope", "--fixtures"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("unknown suite"));

    let flag = relsheaf(&["check-suite", "sheaf-iff", "--nonsense"]);
    assert_eq!(flag.status.code(), Some(2));

    let cmd = relsheaf(&["frobnicate"]);
    assert_eq!(cmd.status.code(), Some(2));
}

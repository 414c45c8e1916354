//! The named theorem suites and their reports. Instances within a suite
//! are checked in parallel; report lines are assembled in instance order so
//! output is deterministic regardless of scheduling.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use relsheaf_core::heyting::{downset_algebra, DownsetAlgebra};
use relsheaf_core::presheaf::{Presheaf, Transformation};
use relsheaf_core::pretrans::{
    check_morphism, FiberMatrix, Mode, PreTransformation, RelMorphism, RelObject,
};
use relsheaf_core::rel::{FiniteSet, SetRef};
use relsheaf_core::singleton::enumerate_singletons;
use relsheaf_core::{fixtures, functor};

use crate::generate::{self, GenParams};

pub const SUITES: &[&str] = &[
    "comparison",
    "pt-comparison",
    "adjunction",
    "sheaf-iff",
    "equivalence",
    "example-2pt",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of {})", SUITES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Load(#[from] crate::formats::LoadError),
    #[error("{0}: suite `{1}` expects a different object kind")]
    WrongKind(String, String),
}

/// Where a suite's instances come from: the fixture library, a single
/// file, or the seeded generator.
#[derive(Debug, Clone)]
pub enum Source {
    Fixtures,
    File(PathBuf),
    Generated(GenParams),
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub instance: String,
    pub law: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckLine>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_plain(&self) -> String {
        let mut out = format!("suite: {}\n", self.suite);
        let mut current = String::new();
        for c in &self.checks {
            if c.instance != current {
                current = c.instance.clone();
                out.push_str(&format!("instance {current}:\n"));
            }
            let verdict = if c.pass { "pass" } else { "FAIL" };
            match &c.counterexample {
                Some(w) => out.push_str(&format!("  {:<28} {verdict}  [{w}]\n", c.law)),
                None => out.push_str(&format!("  {:<28} {verdict}\n", c.law)),
            }
        }
        let n = self.checks.len();
        if self.all_pass() {
            out.push_str(&format!("result: PASS ({n} checks)\n"));
        } else {
            let failed = self.checks.iter().filter(|c| !c.pass).count();
            out.push_str(&format!("result: FAIL ({failed} of {n} checks failed)\n"));
        }
        out
    }

    /// One check per line: suite, law (qualified by instance), verdict,
    /// counterexample. Tab-separated.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}\t{}/{}\t{}\t{}\n",
                self.suite,
                c.instance,
                c.law,
                if c.pass { "pass" } else { "fail" },
                c.counterexample.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

fn line(instance: &str, law: &str, result: Result<(), String>) -> CheckLine {
    match result {
        Ok(()) => CheckLine {
            instance: instance.to_owned(),
            law: law.to_owned(),
            pass: true,
            counterexample: None,
        },
        Err(w) => CheckLine {
            instance: instance.to_owned(),
            law: law.to_owned(),
            pass: false,
            counterexample: Some(w),
        },
    }
}

fn bool_line(instance: &str, law: &str, ok: bool, witness: &str) -> CheckLine {
    line(
        instance,
        law,
        if ok { Ok(()) } else { Err(witness.to_owned()) },
    )
}

pub fn run_suite(name: &str, source: Source) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let checks = match name {
        "comparison" => comparison_suite(&source)?,
        "pt-comparison" => pt_comparison_suite(&source)?,
        "adjunction" => adjunction_suite(&source)?,
        "sheaf-iff" => sheaf_iff_suite(&source)?,
        "equivalence" => equivalence_suite(&source)?,
        "example-2pt" => example_2pt_suite(&source),
        other => return Err(SuiteError::UnknownSuite(other.to_owned())),
    };
    Ok(SuiteReport {
        suite: name.to_owned(),
        checks,
        millis: start.elapsed().as_millis(),
    })
}

/// Fixture presheaves, a presheaf loaded from a file, or generated ones,
/// with instance descriptors.
fn presheaf_instances(
    source: &Source,
    cap_h: Option<usize>,
) -> Result<Vec<(String, Presheaf)>, SuiteError> {
    Ok(match source {
        Source::Fixtures => vec![
            ("SEP".into(), fixtures::sep()),
            ("NSH".into(), fixtures::nsh()),
            ("MIS".into(), fixtures::mis()),
        ],
        Source::File(path) => match crate::formats::load(path)? {
            crate::formats::Loaded::Presheaf(f) => vec![(f.label().to_owned(), f)],
            _ => {
                return Err(SuiteError::WrongKind(
                    path.display().to_string(),
                    "presheaf".into(),
                ))
            }
        },
        Source::Generated(params) => {
            let mut rng = generate::rng_for(params.seed);
            let max_h = cap_h.map_or(params.max_h, |c| params.max_h.min(c));
            (0..params.count)
                .map(|i| {
                    let alg = generate::lattice(&mut rng, max_h);
                    let label = format!("gen{i}");
                    let f = generate::presheaf(&mut rng, &alg, params.max_carrier, &label);
                    (format!("gen{i}(|H|={})", alg.len()), f)
                })
                .collect()
        }
    })
}

fn dh_of(f: &Presheaf) -> DownsetAlgebra {
    downset_algebra(f.algebra().clone())
}

// ---------------------------------------------------------------------------

fn comparison_suite(source: &Source) -> Result<Vec<CheckLine>, SuiteError> {
    let instances = presheaf_instances(source, Some(4))?;
    Ok(instances
        .par_iter()
        .map(|(name, f)| {
            let dh = dh_of(f);
            let g = functor::gamma(&dh, f);
            match functor::comparison_check(&dh, f, &g) {
                Ok(outcomes) => outcomes
                    .into_iter()
                    .map(|o| line(name, o.law, o.result))
                    .collect::<Vec<_>>(),
                Err(cex) => vec![line(
                    name,
                    "gamma-sheaf",
                    Err(format!("Γ(F) rejected as comparison target: {cex:?}")),
                )],
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

// ---------------------------------------------------------------------------

struct PtInstance {
    name: String,
    dh: DownsetAlgebra,
    tau: PreTransformation,
    sigma: PreTransformation,
    inf_tau: PreTransformation,
    inf_sigma: PreTransformation,
}

fn pt_comparison_suite(source: &Source) -> Result<Vec<CheckLine>, SuiteError> {
    let carrier = |label: &str, n: usize| -> SetRef {
        Arc::new(FiniteSet::new(
            label,
            (0..n).map(|i| format!("{label}{i}")).collect(),
        ))
    };
    let instances: Vec<PtInstance> = match source {
        Source::Fixtures => {
            let mut rng = generate::rng_for(1);
            [fixtures::c3(), fixtures::b4()]
                .into_iter()
                .enumerate()
                .map(|(i, alg)| {
                    let alg = Arc::new(alg);
                    let dh = downset_algebra(alg.clone());
                    let (a, b, c) = (carrier("a", 2), carrier("b", 2), carrier("c", 2));
                    PtInstance {
                        name: format!("fixture{i}(|H|={})", alg.len()),
                        tau: generate::ord_pretrans(&mut rng, &alg, &a, &b),
                        sigma: generate::ord_pretrans(&mut rng, &alg, &b, &c),
                        inf_tau: generate::inf_pretrans(&mut rng, &dh.algebra, &a, &b),
                        inf_sigma: generate::inf_pretrans(&mut rng, &dh.algebra, &b, &c),
                        dh,
                    }
                })
                .collect()
        }
        Source::File(path) => {
            let crate::formats::Loaded::PreTrans(pt) = crate::formats::load(path)? else {
                return Err(SuiteError::WrongKind(
                    path.display().to_string(),
                    "reltrans".into(),
                ));
            };
            let dh = downset_algebra(pt.algebra().clone());
            if !pt.classify().order_preserving {
                return Err(SuiteError::WrongKind(
                    path.display().to_string(),
                    "order-preserving family".into(),
                ));
            }
            let tau = pt;
            let inf_tau = functor::psi(&dh, &tau).expect("order-preserving file");
            vec![PtInstance {
                name: path.display().to_string(),
                sigma: tau.clone(),
                inf_sigma: inf_tau.clone(),
                tau,
                inf_tau,
                dh,
            }]
        }
        Source::Generated(params) => {
            let mut rng = generate::rng_for(params.seed);
            (0..params.count)
                .map(|i| {
                    let alg = if i % 2 == 0 {
                        Arc::new(fixtures::c3())
                    } else {
                        Arc::new(fixtures::b4())
                    };
                    let dh = downset_algebra(alg.clone());
                    let n = 1 + (i % params.max_carrier.max(1));
                    let (a, b, c) = (carrier("a", n), carrier("b", n), carrier("c", n));
                    PtInstance {
                        name: format!("pt{i}(|H|={},|A|={n})", alg.len()),
                        tau: generate::ord_pretrans(&mut rng, &alg, &a, &b),
                        sigma: generate::ord_pretrans(&mut rng, &alg, &b, &c),
                        inf_tau: generate::inf_pretrans(&mut rng, &dh.algebra, &a, &b),
                        inf_sigma: generate::inf_pretrans(&mut rng, &dh.algebra, &b, &c),
                        dh,
                    }
                })
                .collect()
        }
    };

    Ok(instances
        .par_iter()
        .map(|inst| {
            let mut out = Vec::new();
            let round =
                functor::phi(&inst.dh, &functor::psi(&inst.dh, &inst.tau).unwrap()).unwrap();
            out.push(bool_line(
                &inst.name,
                "phi-psi-id",
                round == inst.tau,
                "ΦΨ(τ) ≠ τ",
            ));
            let round =
                functor::psi(&inst.dh, &functor::phi(&inst.dh, &inst.inf_tau).unwrap()).unwrap();
            out.push(bool_line(
                &inst.name,
                "psi-phi-id",
                round == inst.inf_tau,
                "ΨΦ(τ) ≠ τ",
            ));
            let lhs = functor::psi(
                &inst.dh,
                &PreTransformation::compose_ord(&inst.sigma, &inst.tau).unwrap(),
            )
            .unwrap();
            let rhs = PreTransformation::compose_inf(
                &functor::psi(&inst.dh, &inst.sigma).unwrap(),
                &functor::psi(&inst.dh, &inst.tau).unwrap(),
            )
            .unwrap();
            out.push(bool_line(
                &inst.name,
                "psi-compose",
                lhs == rhs,
                "Ψ(σ∘τ) ≠ Ψσ∘Ψτ",
            ));
            let lhs = functor::phi(
                &inst.dh,
                &PreTransformation::compose_inf(&inst.inf_sigma, &inst.inf_tau).unwrap(),
            )
            .unwrap();
            let rhs = PreTransformation::compose_ord(
                &functor::phi(&inst.dh, &inst.inf_sigma).unwrap(),
                &functor::phi(&inst.dh, &inst.inf_tau).unwrap(),
            )
            .unwrap();
            out.push(bool_line(
                &inst.name,
                "phi-compose",
                lhs == rhs,
                "Φ(σ∘τ) ≠ Φσ∘Φτ",
            ));
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

// ---------------------------------------------------------------------------

struct AdjInstance {
    name: String,
    presheaf: Presheaf,
    pair: Option<(Transformation, Transformation)>,
    object: RelObject,
}

fn adjunction_instances(source: &Source) -> Result<Vec<AdjInstance>, SuiteError> {
    Ok(match source {
        Source::Fixtures => {
            let collapse = fixtures::collapse_nsh_to_sep();
            let pick = fixtures::pick_x_sep_to_nsh();
            vec![
                AdjInstance {
                    name: "SEP".into(),
                    presheaf: fixtures::sep(),
                    pair: Some((collapse.clone(), pick.clone())),
                    object: functor::delta_obj(&fixtures::sep()),
                },
                AdjInstance {
                    name: "NSH".into(),
                    presheaf: fixtures::nsh(),
                    pair: Some((pick, collapse)),
                    object: functor::delta_obj(&fixtures::nsh()),
                },
                AdjInstance {
                    name: "MIS".into(),
                    presheaf: fixtures::mis(),
                    pair: None,
                    object: fixtures::per_h2(),
                },
            ]
        }
        Source::File(_) => {
            let instances = presheaf_instances(source, None)?;
            instances
                .into_iter()
                .map(|(name, f)| AdjInstance {
                    object: functor::delta_obj(&f),
                    presheaf: f,
                    pair: None,
                    name,
                })
                .collect()
        }
        Source::Generated(params) => {
            let mut rng = generate::rng_for(params.seed);
            (0..params.count)
                .map(|i| {
                    let alg = generate::lattice(&mut rng, params.max_h);
                    let f = generate::presheaf(&mut rng, &alg, params.max_carrier, "F");
                    let g = generate::presheaf(&mut rng, &alg, params.max_carrier, "G");
                    let k = generate::presheaf(&mut rng, &alg, params.max_carrier, "K");
                    let pair = generate::composable_pair(&mut rng, &f, &g, &k).or_else(|| {
                        Some((Transformation::identity(&f), Transformation::identity(&f)))
                    });
                    let car = generate::named_carrier(&mut rng, "A", params.max_carrier);
                    let object = generate::inf_object(&mut rng, &alg, &car);
                    AdjInstance {
                        name: format!("adj{i}(|H|={})", alg.len()),
                        presheaf: f,
                        pair,
                        object,
                    }
                })
                .collect()
        }
    })
}

fn adjunction_suite(source: &Source) -> Result<Vec<CheckLine>, SuiteError> {
    Ok(adjunction_instances(source)?
        .par_iter()
        .map(|inst| {
            let mut out = Vec::new();
            if let Some((sigma, tau)) = &inst.pair {
                let lhs = functor::delta_mor(&Transformation::compose(sigma, tau));
                let rhs =
                    RelMorphism::compose(&functor::delta_mor(sigma), &functor::delta_mor(tau))
                        .unwrap();
                out.push(bool_line(
                    &inst.name,
                    "delta-functorial",
                    lhs.pt() == rhs.pt(),
                    "Δ(στ) ≠ Δ(σ)Δ(τ)",
                ));
                out.push(line(
                    &inst.name,
                    "delta-key-identity",
                    functor::delta_key_identity(tau),
                ));
                out.push(line(
                    &inst.name,
                    "eta-natural",
                    functor::eta_naturality(tau),
                ));
                out.push(line(
                    &inst.name,
                    "epsilon-natural",
                    functor::epsilon_naturality(&functor::delta_mor(tau)),
                ));
            }
            out.push(line(
                &inst.name,
                "epsilon-iso",
                functor::epsilon_iso_laws(&inst.object),
            ));
            out.push(line(
                &inst.name,
                "triangle-left",
                functor::triangle_left(&inst.presheaf),
            ));
            out.push(line(
                &inst.name,
                "triangle-right",
                functor::triangle_right(&inst.object),
            ));
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

// ---------------------------------------------------------------------------

fn sheaf_iff_suite(source: &Source) -> Result<Vec<CheckLine>, SuiteError> {
    Ok(presheaf_instances(source, None)?
        .par_iter()
        .map(|(name, f)| {
            let (sheaf, eta_iso) = functor::sheaf_iff_eta_iso(f);
            let agree = sheaf.is_ok() == eta_iso;
            vec![bool_line(
                name,
                "sheaf-iff-eta-iso",
                agree,
                &format!("is_sheaf = {}, η iso = {eta_iso}", sheaf.is_ok()),
            )]
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

// ---------------------------------------------------------------------------

fn equivalence_suite(source: &Source) -> Result<Vec<CheckLine>, SuiteError> {
    let fixture_run = matches!(source, Source::Fixtures);
    let mut checks: Vec<CheckLine> = presheaf_instances(source, Some(4))?
        .par_iter()
        .map(|(name, f)| {
            let mut out = Vec::new();
            let a = functor::a_shv(f);
            out.push(line(
                name,
                "a-shv-sheaf",
                a.is_sheaf().map_err(|c| format!("{c:?}")),
            ));

            // η is an isomorphism on Θ's image, certified by flattening
            let obj = functor::delta_obj(f);
            let theta = functor::theta_obj(&obj);
            let dtf = functor::delta_obj(&theta);
            let mut flatten_ok = Ok(());
            'levels: for h in obj.algebra().elements() {
                for single in enumerate_singletons(&dtf, h) {
                    if let Err(e) = functor::flatten_represents(&obj, &single) {
                        flatten_ok = Err(format!("at {}: {e}", obj.algebra().name(h)));
                        break 'levels;
                    }
                }
            }
            out.push(line(name, "flatten-represents", flatten_ok));
            out.push(bool_line(
                name,
                "eta-theta-iso",
                functor::eta(&theta).is_levelwise_bijection(),
                "η_{Θ(F)} is not levelwise bijective",
            ));
            out.push(line(
                name,
                "pre-equivalence",
                functor::pre_equivalence_iso(&dh_of(f), f),
            ));
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    if fixture_run {
        let top = fixtures::b4().top();
        let a_mis = functor::a_shv(&fixtures::mis());
        checks.push(bool_line(
            "MIS",
            "a-shv-top-count",
            a_mis.carrier(top).len() == 1,
            &format!("a_shv(MIS)(⊤) has {} elements", a_mis.carrier(top).len()),
        ));
        let a_nsh = functor::a_shv(&fixtures::nsh());
        checks.push(bool_line(
            "NSH",
            "a-shv-top-count",
            a_nsh.carrier(top).len() == 1,
            &format!("a_shv(NSH)(⊤) has {} elements", a_nsh.carrier(top).len()),
        ));
        let sep = fixtures::sep();
        let a_sep = functor::a_shv(&sep);
        let same = sep
            .algebra()
            .elements()
            .all(|h| a_sep.carrier(h).len() == sep.carrier(h).len());
        checks.push(bool_line(
            "SEP",
            "a-shv-preserves-sheaf",
            same,
            "a_shv(SEP) level counts differ from SEP",
        ));
    }
    Ok(checks)
}

// ---------------------------------------------------------------------------

/// All partial equivalence relations on `n` points, as pair bitmaps.
fn all_pers(n: usize) -> Vec<Vec<bool>> {
    let cells = n * n;
    let mut out = Vec::new();
    'next: for bits in 0u32..1 << cells {
        let get = |b: usize, a: usize| bits >> (b * n + a) & 1 == 1;
        for x in 0..n {
            for y in 0..n {
                if get(x, y) != get(y, x) {
                    continue 'next;
                }
                for z in 0..n {
                    if get(x, y) && get(y, z) && !get(x, z) {
                        continue 'next;
                    }
                }
            }
        }
        out.push((0..cells).map(|i| bits >> i & 1 == 1).collect());
    }
    out
}

/// Every Inf object over H2 on the given carrier.
fn all_h2_objects(alg: &Arc<relsheaf_core::HeytingAlgebra>, car: &SetRef) -> Vec<RelObject> {
    let n = car.len();
    let mut out = Vec::new();
    for bits in 0u32..1 << (n * n) {
        let mut m = FiberMatrix::constant(alg.clone(), car.clone(), car.clone(), alg.bottom());
        for b in 0..n {
            for a in 0..n {
                if bits >> (b * n + a) & 1 == 1 {
                    m.set_entry(b, a, alg.top());
                }
            }
        }
        if let Ok(obj) = RelObject::new(m.to_pretrans(), Mode::Inf) {
            out.push(obj);
        }
    }
    out
}

fn per_classes(rel: &PreTransformation, top: usize) -> Vec<Vec<usize>> {
    let n = rel.source().len();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if rel.fiber(x, x).contains(top) {
            if let Some(c) = classes
                .iter_mut()
                .find(|c| rel.fiber(c[0], x).contains(top))
            {
                c.push(x);
            } else {
                classes.push(vec![x]);
            }
        }
    }
    classes
}

fn example_2pt_suite(_source: &Source) -> Vec<CheckLine> {
    let alg = Arc::new(fixtures::h2());
    let top = alg.top();
    let mut out = Vec::new();

    for n in 0..=3usize {
        let name = format!("carrier{n}");
        let car: SetRef = Arc::new(FiniteSet::new(
            "A",
            (0..n).map(|i| format!("a{i}")).collect(),
        ));
        let objects = all_h2_objects(&alg, &car);
        let pers = all_pers(n);
        out.push(bool_line(
            &name,
            "object-count-is-per-count",
            objects.len() == pers.len(),
            &format!("{} objects vs {} PERs", objects.len(), pers.len()),
        ));
        let all_are_pers = objects.iter().all(|obj| {
            let bitmap: Vec<bool> = (0..n * n)
                .map(|i| obj.pt().fiber(i / n, i % n).contains(top))
                .collect();
            pers.contains(&bitmap)
        });
        out.push(bool_line(
            &name,
            "objects-are-pers",
            all_are_pers,
            "some object's top level is not a PER",
        ));
    }

    // morphisms ↔ functions between class sets, for carriers of size ≤ 3
    for na in 0..=3usize {
        for nb in 0..=3usize {
            let name = format!("hom{na}to{nb}");
            let ca: SetRef = Arc::new(FiniteSet::new(
                "A",
                (0..na).map(|i| format!("a{i}")).collect(),
            ));
            let cb: SetRef = Arc::new(FiniteSet::new(
                "B",
                (0..nb).map(|i| format!("b{i}")).collect(),
            ));
            let mut all_ok = Ok(());
            'outer: for dom in all_h2_objects(&alg, &ca) {
                for cod in all_h2_objects(&alg, &cb) {
                    let dom_classes = per_classes(dom.pt(), top);
                    let cod_classes = per_classes(cod.pt(), top);
                    let expected = if dom_classes.is_empty() {
                        1
                    } else if cod_classes.is_empty() {
                        0
                    } else {
                        cod_classes.len().pow(dom_classes.len() as u32)
                    };

                    let mut found = 0usize;
                    for bits in 0u32..1 << (nb * na) {
                        let mut m = FiberMatrix::constant(
                            alg.clone(),
                            ca.clone(),
                            cb.clone(),
                            alg.bottom(),
                        );
                        for b in 0..nb {
                            for a in 0..na {
                                if bits >> (b * na + a) & 1 == 1 {
                                    m.set_entry(b, a, top);
                                }
                            }
                        }
                        let theta = m.to_pretrans();
                        if check_morphism(&theta, &dom, &cod).is_ok() {
                            found += 1;
                            // the top level must be a class function graph
                            let graph_ok = dom_classes.iter().all(|dc| {
                                let images: Vec<&Vec<usize>> = cod_classes
                                    .iter()
                                    .filter(|cc| theta.fiber(cc[0], dc[0]).contains(top))
                                    .collect();
                                images.len() == 1
                                    && dc.iter().all(|&x| {
                                        (0..nb).all(|y| {
                                            theta.fiber(y, x).contains(top)
                                                == images[0].contains(&y)
                                        })
                                    })
                            });
                            if !graph_ok {
                                all_ok = Err(format!("{name}: a morphism is not a class function"));
                                break 'outer;
                            }
                        }
                    }
                    if found != expected {
                        all_ok = Err(format!(
                            "{name}: {found} morphisms vs {expected} class functions"
                        ));
                        break 'outer;
                    }
                }
            }
            out.push(line(&name, "morphisms-are-class-functions", all_ok));
        }
    }
    out
}

// ---------------------------------------------------------------------------

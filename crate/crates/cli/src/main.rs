use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relsheaf_cli::formats::{self, Loaded};
use relsheaf_cli::generate::GenParams;
use relsheaf_cli::suites::{self, Source};
use relsheaf_core::heyting::downset_algebra;
use relsheaf_core::pretrans::{Mode, RelObject};
use relsheaf_core::{functor, Presheaf};

/// Workbench for finite complete Heyting algebras: presheaves, sheaves,
/// relational presheaves and sheaves, and the functors between them.
#[derive(Parser)]
#[command(name = "relsheaf", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and fully validate a lattice, presheaf, or pre-transformation file
    Validate { file: PathBuf },
    /// Print the Heyting algebra of down-sets of a lattice
    Downsets { file: PathBuf },
    /// Decide sheafhood of a presheaf, with a counterexample on failure
    SheafCheck { file: PathBuf },
    /// Apply the associated sheaf functor and print the result
    Sheafify { file: PathBuf },
    /// Print the relational sheaf of a presheaf
    Delta { file: PathBuf },
    /// Print the presheaf of singletons of a relational sheaf
    Theta { file: PathBuf },
    /// Run a named theorem suite
    CheckSuite {
        name: String,
        /// Generator seed
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of generated instances
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Largest generated lattice
        #[arg(long = "max-h", default_value_t = 5)]
        max_h: usize,
        /// Largest generated carrier
        #[arg(long = "max-carrier", default_value_t = 3)]
        max_carrier: usize,
        /// Run on the fixture library instead of generated instances
        #[arg(long)]
        fixtures: bool,
    },
}

fn load_presheaf(file: &PathBuf) -> Result<(Presheaf, String), String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let lattice_ref = formats::lattice_ref(&text).unwrap_or_else(|| "?".to_owned());
    match formats::load_str(&file.display().to_string(), &text, file.parent()) {
        Ok(Loaded::Presheaf(f)) => Ok((f, lattice_ref)),
        Ok(_) => Err(format!("{}: expected a [presheaf] file", file.display())),
        Err(e) => Err(e.to_string()),
    }
}

fn run() -> Result<bool, String> {
    match Cli::parse().command {
        Command::Validate { file } => {
            let loaded = formats::load(&file).map_err(|e| e.to_string())?;
            println!("{}", formats::describe(&loaded));
            Ok(true)
        }
        Command::Downsets { file } => {
            let loaded = formats::load(&file).map_err(|e| e.to_string())?;
            let Loaded::Lattice(alg) = loaded else {
                return Err(format!("{}: expected a [lattice] file", file.display()));
            };
            let dh = downset_algebra(alg);
            print!("{}", formats::print_lattice(&dh.algebra));
            Ok(true)
        }
        Command::SheafCheck { file } => {
            let (f, _) = load_presheaf(&file)?;
            match f.is_sheaf() {
                Ok(()) => {
                    println!("sheaf: yes");
                    Ok(true)
                }
                Err(cex) => {
                    let alg = f.algebra();
                    println!("sheaf: no");
                    println!(
                        "counterexample: cover {} of {} has a matching family {} with {} amalgamations",
                        alg.format_set(cex.cover.parts),
                        alg.name(cex.cover.of),
                        f.describe_family(&cex.family),
                        cex.count
                    );
                    Ok(false)
                }
            }
        }
        Command::Sheafify { file } => {
            let (f, lattice_ref) = load_presheaf(&file)?;
            let sheafified = functor::a_shv(&f);
            print!("{}", formats::print_presheaf(&sheafified, &lattice_ref));
            match sheafified.is_sheaf() {
                Ok(()) => {
                    println!("# sheaf-check: pass");
                    Ok(true)
                }
                Err(_) => {
                    println!("# sheaf-check: FAIL");
                    Ok(false)
                }
            }
        }
        Command::Delta { file } => {
            let (f, lattice_ref) = load_presheaf(&file)?;
            let obj = functor::delta_obj(&f);
            print!("{}", formats::print_reltrans(obj.pt(), &lattice_ref));
            Ok(true)
        }
        Command::Theta { file } => {
            let text =
                std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let lattice_ref = formats::lattice_ref(&text).unwrap_or_else(|| "?".to_owned());
            let loaded = formats::load_str(&file.display().to_string(), &text, file.parent())
                .map_err(|e| e.to_string())?;
            let Loaded::PreTrans(pt) = loaded else {
                return Err(format!("{}: expected a [reltrans] file", file.display()));
            };
            let obj = RelObject::new(pt, Mode::Inf)
                .map_err(|e| format!("not a relational sheaf: {e}"))?;
            let theta = functor::theta_obj(&obj);
            print!("{}", formats::print_presheaf(&theta, &lattice_ref));
            Ok(true)
        }
        Command::CheckSuite {
            name,
            seed,
            count,
            max_h,
            max_carrier,
            fixtures,
        } => {
            let source = if fixtures {
                Source::Fixtures
            } else {
                Source::Generated(GenParams {
                    seed,
                    count,
                    max_h,
                    max_carrier,
                })
            };
            let report = suites::run_suite(&name, source).map_err(|e| e.to_string())?;
            print!("{}", report.render_plain());
            println!("---");
            print!("{}", report.render_machine());
            eprintln!("suite `{}` finished in {} ms", report.suite, report.millis);
            Ok(report.all_pass())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use bellkey::attack::{alice_bob_state, AttackParams, AttackVariant};
use bellkey::entanglement::ppt_min_eigenvalue;
use bellkey::harness::{
    format_multiparty, format_report, inconsistent_count, run_multiparty, run_multiparty_ghz, scan,
    verify, write_scan_file, StateFile,
};
use bellkey::multiparty::BellFunctional;
use bellkey::secrecy::security_report;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bellkey",
    version,
    about = "CHSH violation versus secret-key rates under individual attacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a single attack point.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value = "one-qubit")]
        variant: AttackVariant,
        /// Interpret angles in degrees.
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        json: bool,
    },
    /// Scan a uniform grid over [0, pi/2]^2 and write CSV.
    Scan {
        #[arg(long, default_value_t = 181)]
        grid: usize,
        #[arg(long, default_value = "one-qubit")]
        variant: AttackVariant,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize a multiparty Bell functional for a GHZ state or a state file.
    Multiparty {
        /// JSON state file.
        #[arg(conflicts_with = "ghz", required_unless_present = "ghz")]
        state_file: Option<PathBuf>,
        #[arg(long)]
        ghz: Option<usize>,
        #[arg(long, default_value = "mk")]
        functional: BellFunctional,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the closed-form versus oracle verification suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_DOMAIN: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze {
            alpha,
            beta,
            variant,
            degrees,
            json,
        } => {
            let (alpha, beta) = if degrees {
                (alpha.to_radians(), beta.to_radians())
            } else {
                (alpha, beta)
            };
            let params = match AttackParams::new(alpha, beta) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_DOMAIN, e),
            };
            let report = security_report(&params, variant);
            let ppt = match ppt_min_eigenvalue(&alice_bob_state(&params, variant)) {
                Ok(v) => v,
                Err(e) => return fail(EXIT_DOMAIN, e),
            };
            if json {
                let mut value = serde_json::to_value(report).expect("report serializes");
                value["ppt_min"] = ppt.into();
                println!("{value}");
            } else {
                println!("{}", format_report(&report, ppt));
            }
        }
        Command::Scan { grid, variant, out } => {
            if grid < 2 {
                return fail(EXIT_DOMAIN, "--grid must be at least 2");
            }
            let records = scan(grid, variant);
            if let Err(e) = write_scan_file(&records, &out) {
                return fail(EXIT_IO, format!("{}: {e}", out.display()));
            }
            println!("inconsistent={}", inconsistent_count(&records));
        }
        Command::Multiparty {
            state_file,
            ghz,
            functional,
            seed,
            json,
        } => {
            let report = match (state_file, ghz) {
                (_, Some(n)) => run_multiparty_ghz(n, functional, seed),
                (Some(path), None) => {
                    let text = match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => return fail(EXIT_IO, format!("{}: {e}", path.display())),
                    };
                    StateFile::parse(&text)
                        .and_then(|f| f.density())
                        .and_then(|rho| run_multiparty(&rho, functional, seed))
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            match report {
                Ok(r) if json => {
                    println!("{}", serde_json::to_string(&r).expect("report serializes"))
                }
                Ok(r) => println!("{}", format_multiparty(&r)),
                Err(e) => return fail(EXIT_DOMAIN, e),
            }
        }
        Command::Verify { seed } => {
            let report = verify(seed);
            println!("{}", report.table());
            if !report.all_passed() {
                return ExitCode::from(EXIT_VERIFY);
            }
        }
    }
    ExitCode::SUCCESS
}

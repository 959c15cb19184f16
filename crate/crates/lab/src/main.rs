use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use enp_lab::config::ExperimentConfig;
use enp_lab::runner;
use enp_lab::suite::SuiteCase;

/// Numerical lab for surface Riesz transforms and the elastic
/// Neumann-Poincare operator.
#[derive(Parser)]
#[command(name = "enp-lab", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// List the compactness cases and the claims they probe.
    ListCases {
        /// One `NAME<TAB>kind<TAB>claim` line per case.
        #[arg(long)]
        machine: bool,
    },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::Version => {
            println!("enp-lab {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::ListCases { machine } => {
            for c in SuiteCase::ALL {
                let kind = if c.is_planar() { "planar" } else { "surface" };
                if machine {
                    println!("{}\t{kind}\t{}", c.name(), c.claim());
                } else {
                    println!("{:<20} {:<8} {}", c.name(), kind, c.claim());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run { config } => {
            let cfg = match ExperimentConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            match runner::run(&cfg) {
                Ok(out) => {
                    for line in &out.criterion_lines {
                        println!("{line}");
                    }
                    println!(
                        "{}: summary in {}",
                        if out.summary.pass { "PASS" } else { "FAIL" },
                        out.output_dir.join("summary.txt").display()
                    );
                    ExitCode::from(out.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use bslab_cli::{list_experiments, rerun_and_compare, run, verify_manifest, ExperimentConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bslab", version, about = "Run and verify bslab experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List experiments, their parameters and defaults.
    List,
    /// Re-check the assertions and artifact hashes recorded in a manifest.
    Verify {
        manifest: PathBuf,
        /// Also re-run the experiment and compare regenerated artifacts.
        #[arg(long)]
        rerun: bool,
    },
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: Cli) -> bslab_cli::CliResult<bool> {
    match cli.command {
        Command::Run { config, output } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(o) = output {
                cfg.output = o;
            }
            let m = run(&cfg)?;
            for a in &m.assertions {
                println!("{} {}", if a.passed { "PASS" } else { "FAIL" }, a.name);
            }
            println!("wrote {} ({:.2} s)", cfg.output.join("manifest.json").display(), m.wall_time_seconds);
            Ok(m.all_passed())
        }
        Command::List => {
            print!("{}", list_experiments());
            Ok(true)
        }
        Command::Verify { manifest, rerun } => {
            let report = verify_manifest(&manifest)?;
            for (name, recorded, now) in &report.assertions {
                let status = if *recorded && *now { "PASS" } else { "FAIL" };
                let note = if recorded != now { " (recorded verdict disagrees with recomputation)" } else { "" };
                println!("{status} {name}{note}");
            }
            for f in &report.mismatched_artifacts {
                println!("FAIL artifact {f} does not match its recorded hash");
            }
            let mut ok = report.ok();
            if rerun {
                let differing = rerun_and_compare(&manifest)?;
                for f in &differing {
                    println!("FAIL artifact {f} differs on re-run");
                }
                ok &= differing.is_empty();
            }
            Ok(ok)
        }
    }
}

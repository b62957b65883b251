use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use porocdh::cli_io::{load_config, run_campaign};

#[derive(Parser)]
#[command(
    name = "porocdh",
    version,
    about = "Two-layer poroelastic seismograms by the Cagniard-de Hoop method"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute traces for every receiver in a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-phase columns.
        #[arg(long)]
        decompose: bool,
        /// Write a gnuplot script next to the CSVs.
        #[arg(long)]
        gnuplot: bool,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        config,
        out,
        decompose,
        gnuplot,
    } = Cli::parse().command;
    let mut cfg = match load_config(&config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    cfg.output.decompose |= decompose;
    cfg.output.gnuplot |= gnuplot;
    match run_campaign(&cfg) {
        Ok(done) => {
            for f in done
                .traces
                .iter()
                .chain([&done.manifest])
                .chain(done.gnuplot.as_ref())
            {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}

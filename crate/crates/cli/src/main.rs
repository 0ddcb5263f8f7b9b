use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvqe_cli::config::{Mode, Overrides, RunConfig};
use cvqe_cli::error::CliError;
use cvqe_cli::jobs;
use cvqe_cli::output::fmt_f64;

/// CVQE, UCCSD and FCI on FCIDUMP Hamiltonians.
#[derive(Parser)]
#[command(name = "cvqe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one job from a config file.
    Run {
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        flags: Flags,
    },
    /// UCCSD-only and CVQE on each fixture, plus an aggregate table.
    Scan {
        config: PathBuf,
        #[arg(required = true)]
        fixtures: Vec<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Hartree-Fock and FCI energies of a fixture.
    Fci { fcidump: PathBuf },
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    n_dets: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    /// Select determinants from exact probabilities instead of shots.
    #[arg(long)]
    exact_selection: bool,
}

impl Flags {
    fn overrides(&self, mode: Option<Mode>) -> Overrides {
        Overrides {
            seed: self.seed,
            output_dir: self.output_dir.clone(),
            mode,
            n_dets: self.n_dets,
            shots: self.shots,
            exact_selection: self.exact_selection,
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, mode, flags } => {
            let mut cfg = RunConfig::load(&config)?;
            cfg.apply(&flags.overrides(mode));
            let s = jobs::run(&cfg.resolve()?)?;
            println!("best_energy = {}", fmt_f64(s.best_energy));
            println!("fci_energy = {}", fmt_f64(s.fci_energy));
            println!("error = {}", fmt_f64(s.error));
        }
        Command::Scan { config, fixtures, flags } => {
            let mut cfg = RunConfig::load(&config)?;
            cfg.apply(&flags.overrides(None));
            let rows = jobs::scan(&cfg, &fixtures)?;
            println!("{} points written to {}", rows.len(), cfg.output_dir.join("scan.csv").display());
        }
        Command::Fci { fcidump } => {
            let r = jobs::fci_report(&fcidump)?;
            println!("hf_energy = {}", fmt_f64(r.hf_energy));
            println!("fci_energy = {}", fmt_f64(r.fci_energy));
            println!("gap = {}", fmt_f64(r.hf_energy - r.fci_energy));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

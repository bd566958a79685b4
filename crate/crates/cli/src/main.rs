use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use distro_eval::figure1::{self, Scale};
use distro_eval::{commands, CliResult};

/// Distributional evaluation of learning algorithms over seeds and
/// hyperparameters.
#[derive(Parser)]
#[command(name = "distro-eval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run or resume the sweep described by a TOML config.
    Sweep { config: PathBuf },
    /// Summarize a run store.
    Report {
        store: PathBuf,
        /// Also write the successful scores as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Summaries and KL divergence in both directions for two stores.
    Compare { store_a: PathBuf, store_b: PathBuf },
    /// Render inverse-CDF curves of one or more stores as SVG.
    PlotIcdf { plotspec: PathBuf },
    /// Sweep the three pendulum learners, then plot and compare them.
    Figure1 {
        #[arg(long, value_enum, default_value_t = Scale::Smoke)]
        scale: Scale,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = figure1::DEFAULT_ROOT_SEED)]
        seed: u64,
    },
    /// Seed-sensitivity report for fixed configurations.
    Seeds { config: PathBuf },
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Sweep { config } => commands::sweep(&config, out),
        Command::Report { store, csv } => commands::report(&store, csv.as_deref(), out),
        Command::Compare { store_a, store_b } => commands::compare_stores(&store_a, &store_b, out),
        Command::PlotIcdf { plotspec } => commands::plot_icdf(&plotspec, out),
        Command::Figure1 { scale, out: dir, seed } => {
            std::fs::create_dir_all(&dir)
                .map_err(|e| distro_eval::CliError::Usage(format!("{}: {e}", dir.display())))?;
            figure1::run(scale, &dir, seed, out)
        }
        Command::Seeds { config } => commands::seeds(&config, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hcbf::cli::{self, CliError, RunOptions};
use hcbf::geometry::DEFAULT_FOURIER_TERMS;

/// Hyperplane control barrier function safety filter.
#[derive(Parser)]
#[command(name = "hcbf", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Output directory.
    #[arg(long, env = cli::OUT_DIR_ENV, default_value = cli::DEFAULT_OUT_DIR)]
    out: PathBuf,
    /// Write SVG plots (default).
    #[arg(long, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long, overrides_with = "svg")]
    no_svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file.
    Run {
        scenario: PathBuf,
        /// orthogonal, least-restrictive or fixed-theta.
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a scenario in orthogonal and least-restrictive mode side by side.
    Compare {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Fit a conservative Fourier support model to a shape file.
    FitSupport {
        shape: PathBuf,
        /// Number of harmonics.
        #[arg(long, default_value_t = DEFAULT_FOURIER_TERMS)]
        terms: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Cross-check the joint optimizer against the grid oracle.
    OracleCheck {
        #[arg(long, default_value_t = cli::DEFAULT_ORACLE_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { scenario, mode, output } => {
            let opts = RunOptions {
                mode,
                svg: !output.no_svg,
                out_dir: output.out,
            };
            let a = cli::cmd_run(&scenario, &opts)?;
            println!("{} {}", a.metrics.mode, a.outcome.as_str());
            println!("intervention {:.6e}", a.metrics.intervention_integral);
            for p in std::iter::once(&a.csv).chain([&a.metrics_json]).chain(&a.svgs) {
                println!("wrote {}", p.display());
            }
            a.check()
        }
        Command::Compare { scenario, output } => {
            let c = cli::cmd_compare(&scenario, &output.out, !output.no_svg)?;
            print!("{}", c.table);
            println!("wrote {}", c.table_path.display());
            c.check()
        }
        Command::FitSupport { shape, terms, output } => {
            let f = cli::cmd_fit_support(&shape, terms, &output.out, !output.no_svg)?;
            println!(
                "N={} margin={:.6e} max_residual={:.6e} conservative={} off_grid_deficit={:.3e}",
                f.report.n_terms, f.report.margin, f.report.max_residual, f.report.conservative, f.report.off_grid_deficit
            );
            println!("wrote {}", f.json.display());
            if let Some(p) = &f.svg {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::OracleCheck { seed, count } => {
            let report = cli::cmd_oracle_check(seed, count);
            println!("{report}");
            report.check()
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_VALIDATION } else { cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

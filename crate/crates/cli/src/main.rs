use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::GridKind;
use config::{parse_range, CliError, CliResult, CommonArgs, ExperimentConfig};
use output::Table;

/// Exact and asymptotic experiments for the two-group Curie-Weiss model.
#[derive(Debug, Parser)]
#[command(name = "cw2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify (J, alpha) and report all three regime formulations
    Regime {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact second-order moments against the CLT covariance
    CltConvergence {
        #[command(flatten)]
        common: CommonArgs,
        /// Use N1 = floor(sqrt N) with limits taken at alpha = (0, 1)
        #[arg(long)]
        sublinear: bool,
    },
    /// Concentration of per-spin magnetizations
    Lln {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spontaneous magnetization for the symmetric coupling
    SpecialCase {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Regime and m* over a parameter grid
    PhaseGrid {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "jbar-alpha")]
        grid: GridKind,
        /// First axis as lo:hi:count [default: 0:0.9:10 or 0.2:3:15]
        #[arg(long)]
        p1_range: Option<String>,
        /// Second axis as lo:hi:count [default: 0.05:0.5:10 or 0.2:3:15]
        #[arg(long)]
        p2_range: Option<String>,
    },
    /// Laplace-integral correlations against exact and leading-order values
    LaplaceCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Moment ratio at the critical point against the limit density
    CriticalScaling {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suite; exit code 1 if any check fails
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Negate Lbar in the covariance check (the check must then fail)
        #[arg(long, hide = true)]
        flip_lbar_sign: bool,
    },
    /// Draw (S1, S2) samples from the exact table at the first size
    Sample {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Write the table itself (s1,s2,prob) instead of draws
        #[arg(long)]
        table: bool,
    },
}

fn emit(cfg: &ExperimentConfig, table: &Table) -> CliResult<()> {
    let text = table.render(cfg.format);
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Params(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Params(format!("cannot write output: {e}"))),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let resolve = |c: &CommonArgs| ExperimentConfig::resolve(c);
    match cli.command {
        Command::Regime { common } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::regime(&cfg)?)
        }
        Command::CltConvergence { common, sublinear } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::clt_convergence(&cfg, sublinear)?)
        }
        Command::Lln { common } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::lln(&cfg)?)
        }
        Command::SpecialCase { common } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::special_case(&cfg)?)
        }
        Command::PhaseGrid {
            common,
            grid,
            p1_range,
            p2_range,
        } => {
            let cfg = resolve(&common)?;
            let (d1, d2) = match grid {
                GridKind::JbarAlpha => ("0:0.9:10", "0.05:0.5:10"),
                GridKind::J1J2 => ("0.2:3:15", "0.2:3:15"),
            };
            let p1 = parse_range("p1-range", p1_range.as_deref().unwrap_or(d1))?;
            let p2 = parse_range("p2-range", p2_range.as_deref().unwrap_or(d2))?;
            emit(&cfg, &commands::phase_grid(&cfg, grid, &p1, &p2)?)
        }
        Command::LaplaceCheck { common } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::laplace_check(&cfg)?)
        }
        Command::CriticalScaling { common } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::critical_scaling(&cfg)?)
        }
        Command::Validate {
            common,
            flip_lbar_sign,
        } => {
            let cfg = resolve(&common)?;
            let (table, all_passed) = commands::validate(&cfg, flip_lbar_sign);
            emit(&cfg, &table)?;
            if all_passed {
                Ok(())
            } else {
                Err(CliError::Failed("one or more checks failed".into()))
            }
        }
        Command::Sample {
            common,
            count,
            table,
        } => {
            let cfg = resolve(&common)?;
            emit(&cfg, &commands::sample_cmd(&cfg, count, table)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cw2: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

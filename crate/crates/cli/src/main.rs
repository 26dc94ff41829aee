mod commands;
mod config;
mod error;
mod input;
mod report;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hemifill::areas::{AreaConfig, JacobianKind, DEFAULT_STEP};

use config::{Format, RunConfig};
use error::CliError;
use report::Outcome;

/// Transport on the circle, the hemisphere embedding, Lipschitz extension
/// and filling areas.
#[derive(Parser)]
#[command(name = "hemifill", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Cells in the circle grid.
    #[arg(long, global = true, default_value_t = 2048)]
    grid: usize,
    /// Gauss-Legendre nodes per axis.
    #[arg(long, global = true, default_value_t = 32)]
    quad: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override a tolerance, e.g. `--tol isometry=1e-3`.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long = "out", global = true)]
    output: Option<PathBuf>,
    /// Defaults to json, or csv for sweeps and `verify embedding`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// W1 distance between two circular measures.
    W1 {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        /// cut, cdf, or lp (atomic inputs only).
        #[arg(long, default_value = "cut")]
        method: String,
    },
    /// Embed a hemisphere point `azimuth,colatitude` as a circular measure.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Extend a curve to the hemisphere and evaluate it.
    Extend {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "eval", allow_hyphen_values = true)]
        points: Vec<String>,
        /// Certify the Lipschitz constant on this many random pairs.
        #[arg(long, default_value_t = 0)]
        certify: usize,
    },
    /// Jacobians of a planar norm.
    Jacobian {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long = "kind")]
        kinds: Vec<JacobianKind>,
    },
    /// Area of the extension of a curve against `L²/2π`.
    FillArea {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "jacobian")]
        kinds: Vec<JacobianKind>,
        #[command(flatten)]
        area: AreaArgs,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Parameter sweeps.
    Sweep {
        #[command(subcommand)]
        sweep: Sweep,
    },
}

#[derive(Args)]
struct AreaArgs {
    /// sampled or linearized.
    #[arg(long, default_value = "sampled")]
    method: String,
    #[arg(long, default_value_t = 32)]
    directions: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
}

#[derive(Subcommand)]
enum Suite {
    Transport {
        #[arg(long, default_value_t = 500)]
        pairs: usize,
    },
    Embedding {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    Lipschitz {
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 5000)]
        pairs: usize,
    },
    Monotonicity,
    Jacobians {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    Fill {
        #[arg(long)]
        curve: Option<PathBuf>,
        #[command(flatten)]
        area: AreaArgs,
    },
    /// Every suite with its defaults.
    All,
}

#[derive(Subcommand)]
enum Sweep {
    /// Jacobian ratios over random symmetric polygons.
    Mahler {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_pairs: usize,
    },
    /// Isometry error of the embedding as the grid is refined.
    Convergence {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value = "256,1024,2048,4096")]
        grids: String,
    },
    /// Cell densities of embedded points.
    Density {
        #[arg(long = "point", allow_hyphen_values = true, required = true)]
        points: Vec<String>,
    },
}

impl AreaArgs {
    fn config(&self, quad: usize) -> Result<AreaConfig, CliError> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(CliError::Usage("--step must be positive".into()));
        }
        Ok(AreaConfig { quad, step: self.step, method: commands::method(&self.method, self.directions)? })
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let g = cli.global;
    let default_format = match &cli.command {
        Command::Sweep { .. } | Command::Verify { suite: Suite::Embedding { .. } } => Format::Csv,
        _ => Format::Json,
    };
    let cfg = RunConfig::new(
        g.grid,
        g.quad,
        g.seed,
        &g.tolerances,
        g.format.unwrap_or(default_format),
        g.output,
    )?;
    let (name, outcome): (String, Outcome) = match &cli.command {
        Command::W1 { mu, nu, method } => ("w1".into(), commands::w1(mu, nu, method)?),
        Command::Embed { point } => ("embed".into(), commands::embed(point, &cfg)?),
        Command::Extend { curve, points, certify } => {
            ("extend".into(), commands::extend_cmd(curve, points, *certify, &cfg)?)
        }
        Command::Jacobian { norm, kinds } => ("jacobian".into(), commands::jacobian_cmd(norm, kinds)?),
        Command::FillArea { curve, kinds, area } => {
            let a = area.config(cfg.quadrature)?;
            ("fill-area".into(), commands::fill_area(curve, kinds, a, &cfg)?)
        }
        Command::Verify { suite } => {
            let (n, checks) = match suite {
                Suite::Transport { pairs } => ("transport", verify::transport(*pairs, &cfg)?),
                Suite::Embedding { pairs } => {
                    let (checks, pairs) = verify::embedding(*pairs, &cfg)?;
                    let mut out = verify::outcome(checks.clone());
                    out.notes = verify::notes(&checks);
                    out.table = Some(pairs);
                    return finish("verify embedding", &cfg, out);
                }
                Suite::Lipschitz { curve, pairs } => ("lipschitz", verify::lipschitz(curve.as_deref(), *pairs, &cfg)?),
                Suite::Monotonicity => ("monotonicity", verify::monotonicity()),
                Suite::Jacobians { samples } => ("jacobians", verify::jacobian_constants(*samples, &cfg)?),
                Suite::Fill { curve, area } => {
                    let a = area.config(cfg.quadrature)?;
                    ("fill", verify::fill(curve.as_deref(), &a, &cfg)?)
                }
                Suite::All => {
                    let a = AreaConfig { quad: cfg.quadrature, ..AreaConfig::default() };
                    let mut all = verify::transport(500, &cfg)?;
                    all.extend(verify::embedding(200, &cfg)?.0);
                    all.extend(verify::lipschitz(None, 5000, &cfg)?);
                    all.extend(verify::monotonicity());
                    all.extend(verify::jacobian_constants(10_000, &cfg)?);
                    all.extend(verify::fill(None, &a, &cfg)?);
                    ("all", all)
                }
            };
            (format!("verify {n}"), verify::outcome(checks))
        }
        Command::Sweep { sweep } => match sweep {
            Sweep::Mahler { samples, max_pairs } => ("sweep mahler".into(), sweep::mahler(*samples, *max_pairs, &cfg)?),
            Sweep::Convergence { pairs, grids } => {
                let grids = input::parse_list(grids)?;
                ("sweep convergence".into(), sweep::convergence(*pairs, &grids, &cfg)?)
            }
            Sweep::Density { points } => ("sweep density".into(), sweep::density(points, &cfg)?),
        },
    };
    finish(&name, &cfg, outcome)
}

fn finish(name: &str, cfg: &RunConfig, outcome: Outcome) -> Result<bool, CliError> {
    report::emit(name, cfg, &outcome)?;
    Ok(outcome.passed.unwrap_or(true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HEMIFILL_THREADS").ok().and_then(|s| s.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hemifill: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hemifill: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

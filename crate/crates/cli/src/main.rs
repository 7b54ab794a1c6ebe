//! `milnor`: germs, morsifications, certified critical points, predicted
//! Betti numbers and mesh-based checks of real Milnor fibres.
//!
//! Exit status: 0 on success, 1 when a verdict is a mismatch or a report is
//! not certified, 2 on errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "milnor", version, about = "Real Milnor fibres of ADE singularities")]
struct Cli {
    /// Output format; every command has its own default.
    #[arg(long, short, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for catalog sweeps and meshing.
    #[arg(long, global = true, env = "MILNOR_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the germ polynomial of a code such as `A3+s0n1`.
    Germ { code: String },
    /// Print the morsification family and its parameter interval.
    Morsify { code: String },
    /// Predicted Poincaré polynomials of both fibres.
    Predict {
        /// Germ code; omit with `--all`.
        code: Option<String>,
        /// Every catalog germ up to the bounds.
        #[arg(long, conflicts_with = "code")]
        all: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Certified critical points of the morsification at `t`.
    Critical {
        code: String,
        /// Parameter value as a fraction, e.g. `-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Half-width of the search cube.
        #[arg(long = "box")]
        radius: Option<String>,
        /// Solve in all coordinates instead of lifting the plane curve.
        #[arg(long)]
        full: bool,
    },
    /// Mesh the fibres and compare their homology with the prediction.
    Verify {
        /// Germ code; omit with `--all`.
        code: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Every catalog germ with n ≤ 2 up to the bounds.
        #[arg(long, conflicts_with = "code")]
        all: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Render a prediction table.
    Table {
        #[arg(value_enum)]
        kind: TableArg,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Draw a planar fibre as SVG (default file `<code>-<side>.svg`).
    PlotSvg {
        code: String,
        #[arg(long, value_enum, default_value_t = OneSide::Plus)]
        side: OneSide,
        #[command(flatten)]
        mesh: MeshArgs,
    },
}

/// Catalog bounds.
#[derive(Args, Debug, Clone, Copy)]
struct Bounds {
    #[arg(long, default_value_t = 9)]
    kmax: u32,
    #[arg(long, default_value_t = 3)]
    nmax: u32,
}

#[derive(Args, Debug, Clone)]
struct MeshArgs {
    /// Ball radius as a fraction.
    #[arg(long)]
    epsilon: Option<String>,
    /// Level as a fraction; defaults to ε^deg/16.
    #[arg(long)]
    eta: Option<String>,
    /// Grid cells per axis.
    #[arg(long)]
    resolution: Option<usize>,
    /// Skip the refinement sweep.
    #[arg(long)]
    no_sweep: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SideArg {
    Plus,
    Minus,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OneSide {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableArg {
    /// Plane curves, grouped as published.
    Theorem,
    /// Suspensions with n ≥ 2.
    Corollary,
    All,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.workers.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("cannot size the worker pool: {e}");
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = output::emit(&out.body, cli.output.as_deref().filter(|_| out.to_output)) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! `pim`: computes contours, validity diagnostics and the sparse demo, and
//! writes them as CSV for plotting.

mod commands;
mod error;
mod figures;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "pim", version, about = "Possibilistic inferential models: contours and validity diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Sampling model: normal:n or mvnormal:d.
    #[arg(long)]
    pub model: Option<String>,
    /// Prior: interval:a,b,beta | sparsity:dim,varpi | credal:m,v;m,v.
    #[arg(long, allow_hyphen_values = true)]
    pub prior: Option<String>,
    /// Comma-separated combiners, e.g. vacuous,hose:0.5,dempster,tnorm:product.
    #[arg(long)]
    pub combiners: Option<String>,
    /// Observation, comma-separated for the multivariate model.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Evaluation grid lo:hi:step, one axis per comma-separated entry.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Grid of α values, lo:hi:step.
    #[arg(long = "alpha-grid")]
    pub alpha_grid: Option<String>,
    /// Monte Carlo replications.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Seed for every random stream.
    #[arg(long, env = "IM_SEED")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Built-in configuration for a figure panel.
    #[arg(long)]
    pub figure: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contours of one or more IMs on a grid.
    Contour {
        #[command(flatten)]
        common: Common,
        /// Sparse multivariate contours instead of the scalar model.
        #[arg(long)]
        sparse: bool,
        /// Dimension of the sparse problem.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Distribution function of π_Y(Θ) under compatible priors.
    ValidityCdf {
        #[command(flatten)]
        common: Common,
        /// Compatible prior for Θ; repeat for an envelope.
        #[arg(long = "q", allow_hyphen_values = true)]
        q: Vec<String>,
        /// Also report the validified version of each combiner.
        #[arg(long)]
        validify: bool,
        /// Replications per θ for the validifier.
        #[arg(long = "mc-reps")]
        mc_reps: Option<usize>,
    },
    /// Conditional validity of the Bayes posterior for an assertion.
    CondValidity {
        #[command(flatten)]
        common: Common,
        /// Open interval assertion lo,hi.
        #[arg(long = "assert", allow_hyphen_values = true)]
        assertion: Option<String>,
    },
    /// Coverage and mean length of plausibility regions.
    Coverage {
        #[command(flatten)]
        common: Common,
        /// Level of the 100(1−α)% region.
        #[arg(long)]
        alpha: Option<f64>,
        /// Compatible prior for Θ; repeatable.
        #[arg(long = "q", allow_hyphen_values = true)]
        q: Vec<String>,
        /// Also report the validified version of each combiner.
        #[arg(long)]
        validify: bool,
        /// Replications per θ for the validifier.
        #[arg(long = "mc-reps")]
        mc_reps: Option<usize>,
    },
    /// Validified contour of a generator at one observation.
    Validify {
        #[command(flatten)]
        common: Common,
        /// Replications per θ.
        #[arg(long = "mc-reps")]
        mc_reps: Option<usize>,
    },
    /// Vacuous, t-norm and validified contours for the sparse normal mean.
    SparseDemo {
        #[command(flatten)]
        common: Common,
        /// Replications for the validifier.
        #[arg(long = "mc-reps")]
        mc_reps: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, out) = match &cli.command {
        Command::Contour { common, .. }
        | Command::ValidityCdf { common, .. }
        | Command::CondValidity { common, .. }
        | Command::Coverage { common, .. }
        | Command::Validify { common, .. }
        | Command::SparseDemo { common, .. } => (common.clone(), common.out.clone()),
    };
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(error::config("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::config(format!("cannot start thread pool: {e}")))?;
    }
    let mut summary = Vec::new();
    let text = match cli.command {
        Command::Contour { common, sparse, dim } => commands::contour(common, sparse, dim)?,
        Command::ValidityCdf {
            common,
            q,
            validify,
            mc_reps,
        } => commands::validity_cdf(common, q, validify, mc_reps)?,
        Command::CondValidity { common, assertion } => commands::cond_validity(common, assertion)?,
        Command::Coverage {
            common,
            alpha,
            q,
            validify,
            mc_reps,
        } => commands::coverage(common, alpha, q, validify, mc_reps)?,
        Command::Validify { common, mc_reps } => commands::validify(common, mc_reps)?,
        Command::SparseDemo { common, mc_reps } => {
            let (csv, areas) = commands::sparse_demo(common, mc_reps)?;
            summary = areas;
            csv
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            for line in summary {
                println!("{line}");
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                // A closed reader (`| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

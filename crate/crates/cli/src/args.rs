//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::scan::{DEFAULT_SAMPLES, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

/// Fisher-information detection of genuine tripartite entanglement.
///
/// Exit codes: 0 = GME detected (or threshold found), 1 = inconclusive (or no
/// crossing), 2 = error.
#[derive(Debug, Parser)]
#[command(name = "qfi-gme", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Bisection tolerance on the scanned parameter.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Seed for random ensembles; member i uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct BoundArgs {
    /// Single-party bound for theorem1 (default: Gell-Mann lemma value).
    #[arg(long)]
    pub f1: Option<f64>,

    /// Two-party bound for theorem1 (default: Gell-Mann lemma value).
    #[arg(long)]
    pub f2: Option<f64>,

    /// theorem2 single-party bounds F_a,F_b,F_c.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub locals: Option<Vec<f64>>,

    /// theorem2 pair bounds F_ab,F_ac,F_bc.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub pairs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Evaluate one criterion on one state.
    ///
    /// CSV columns: state,dims,criterion,statistic,threshold,margin,verdict.
    Eval {
        /// ghz:D | w3 | ghz-w-mix:X,Y | white-noise:ghz:D:P | white-noise:w3:P |
        /// maximally-mixed:DIMS | path to a JSON state file
        state: String,

        /// corollary1 | corollary2 | corollary2-fixed | corollary2:S,S,S |
        /// theorem1 | theorem2 | concurrence | knorm | knorm:K
        #[arg(short, long)]
        criterion: String,

        #[command(flatten)]
        bounds: BoundArgs,
    },

    /// Locate the detection threshold along a one-parameter family.
    ///
    /// CSV columns: kind,param,margin with kind one of sample, bisect,
    /// threshold.
    Scan {
        /// w-noise | ghz-noise:d=N | ghz-w-mix:x=X | ghz-w-mix:y=Y |
        /// maximally-mixed[:d=DIMS]
        family: String,

        #[arg(short, long)]
        criterion: String,

        #[arg(long)]
        lo: Option<f64>,

        #[arg(long)]
        hi: Option<f64>,

        /// Coarse samples taken before bisection.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,

        #[command(flatten)]
        bounds: BoundArgs,
    },

    /// Closed-form margin f(x,y) of the GHZ/W/noise mixture against the
    /// engine, over a grid restricted to x + y <= 1.
    ///
    /// CSV columns: x,y,f,engine_margin,abs_diff.
    Grid {
        /// Points per axis.
        #[arg(long, default_value_t = 50)]
        resolution: usize,

        #[arg(long, default_value_t = 0.0)]
        x_min: f64,

        #[arg(long, default_value_t = 1.0)]
        x_max: f64,

        #[arg(long, default_value_t = 0.0)]
        y_min: f64,

        #[arg(long, default_value_t = 1.0)]
        y_max: f64,
    },

    /// Lemma bounds F1, F2 and the full Gell-Mann threshold.
    ///
    /// CSV columns: d,f1,f2,threshold,additive_exact.
    Bounds {
        #[arg(default_values_t = [2usize])]
        d: Vec<usize>,
    },

    /// Detection thresholds of every applicable criterion along a family.
    ///
    /// CSV columns: family,criterion,threshold,note.
    Compare {
        family: String,

        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },

    /// Evaluate a criterion over a seeded random ensemble.
    ///
    /// CSV columns: index,seed,statistic,threshold,margin,verdict.
    Ensemble {
        #[arg(long, value_enum, default_value_t = EnsembleKindArg::Biseparable)]
        kind: EnsembleKindArg,

        /// 2, 3 or e.g. 2x3x2
        #[arg(long, default_value = "2")]
        dims: String,

        #[arg(long, default_value_t = 100)]
        count: usize,

        #[arg(short, long)]
        criterion: String,

        /// Rank of mixed members (default: full rank).
        #[arg(long)]
        rank: Option<usize>,

        /// Mixture terms per bipartition for biseparable members.
        #[arg(long, default_value_t = 3)]
        terms: usize,

        #[command(flatten)]
        bounds: BoundArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKindArg {
    Pure,
    Mixed,
    Biseparable,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "linthresh",
    version,
    about = "Thresholds, polytope volumes and solution counts for admissible linear systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Print the JSON result document instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the JSON result document into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available cores. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit `wall_time: null` so repeated runs produce identical documents.
    #[arg(long, global = true)]
    pub no_wall_time: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissibility, c(M), symmetry constant, balance, volume and mu(C).
    Analyze(AnalyzeArgs),
    /// Vol(P_M) by Ehrhart interpolation, cross-checked against closed forms.
    Volume(VolumeArgs),
    /// Solutions inside a finite set, up to symmetry.
    Count(CountArgs),
    /// Random-set experiments.
    Simulate {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

/// A named family (`kap`, `sidon`, `bhg`, `kcube`, `sumfree`, `ksumfree`,
/// `barycentric`, `m1`, `m2`, `eq7`) or a matrix file.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemArgs {
    /// Family keyword.
    #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
    pub family: Option<String>,
    /// Matrix file: "r m" then r rows, or JSON {"name", "rows"}.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub h: Option<usize>,
    #[arg(long)]
    pub g: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Largest period tried when fitting the Ehrhart quasi-polynomial.
    #[arg(long, default_value_t = linthresh::ehrhart::DEFAULT_PERIOD_MAX)]
    pub period_max: u64,
    /// Extra multiples of the period used to verify a fit.
    #[arg(long, default_value_t = linthresh::ehrhart::DEFAULT_VERIFY_SAMPLES)]
    pub verify_samples: usize,
    /// Node visits allowed per lattice count.
    #[arg(long, default_value_t = linthresh::lattice::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    /// Leave Vol(P_M) out of the report.
    #[arg(long)]
    pub skip_volume: bool,
    /// Write the matrix in the text format to this file.
    #[arg(long, value_name = "FILE")]
    pub dump_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum RangeArg {
    /// {0..n}
    #[value(name = "0n")]
    #[serde(rename = "0n")]
    ZeroToN,
    /// {1..n}
    #[value(name = "1n")]
    #[serde(rename = "1n")]
    OneToN,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// The set: a file with one integer per line, or inline such as {1,2,4,8} or [1,2,4,8].
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub set: Option<String>,
    /// Count over the interval given by --range instead of a set.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value = "1n")]
    pub range: RangeArg,
    /// Node visits allowed.
    #[arg(long, default_value_t = linthresh::lattice::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Law of X at p = C n^(-1/c(M)) against Poisson(mu).
    Poisson(PoissonArgs),
    /// Fraction of sets containing a non-trivial solution at p = n^e.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrialArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Master seed; drawn from system entropy when absent and echoed back.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Node visits allowed per trial.
    #[arg(long, default_value_t = linthresh::simulate::DEFAULT_TRIAL_BUDGET)]
    pub trial_budget: u64,
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    /// The constant C, as an integer, decimal or fraction.
    #[arg(long = "C", value_name = "C")]
    pub c: String,
    /// Largest value of X tracked individually.
    #[arg(long, default_value_t = linthresh::simulate::DEFAULT_CAP_T)]
    pub cap_t: usize,
    /// Write (t, empirical, poisson) rows to this CSV file.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    /// Comma-separated negative exponents e, each giving p = n^e.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub exponents: Vec<f64>,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wigner_fluct::{Beta, EnsembleKind};

#[derive(Debug, Parser)]
#[command(name = "wigner-fluct", version, about = "Eigenvalue fluctuation experiments for Gaussian and Wigner matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one matrix and write its ordered spectrum.
    Sample(SampleArgs),
    /// Monte Carlo of one bulk eigenvalue, normalized.
    BulkFluct(BulkArgs),
    /// Monte Carlo of one eigenvalue near the top edge, normalized.
    EdgeFluct(EdgeArgs),
    /// Monte Carlo of several eigenvalues with the predicted covariance.
    JointFluct(JointArgs),
    /// Superposition/decimation identities by two-sample KS tests.
    FrCheck(FrArgs),
    /// Expected count and count variance of the GUE on an interval.
    Kernel(KernelArgs),
    /// Counting cumulants from the discretized kernel operator.
    Cumulants(CumulantArgs),
    /// Distance between one sampled spectrum and the semicircle law.
    SemicircleCheck(SemicircleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleArg {
    Goe,
    Gue,
    Gse,
    WignerReal,
    WignerHermitian,
    Tridiag,
}

impl EnsembleArg {
    pub fn kind(self) -> EnsembleKind {
        match self {
            EnsembleArg::Goe => EnsembleKind::Goe,
            EnsembleArg::Gue => EnsembleKind::Gue,
            EnsembleArg::Gse => EnsembleKind::Gse,
            EnsembleArg::WignerReal => EnsembleKind::WignerRealMatched,
            EnsembleArg::WignerHermitian => EnsembleKind::WignerHermitianMatched,
            EnsembleArg::Tridiag => EnsembleKind::TridiagBeta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    Bulk,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrTarget {
    Gue,
    Gse,
}

pub fn parse_beta(s: &str) -> Result<Beta, String> {
    let v: u32 = s
        .parse()
        .map_err(|_| format!("'{s}' is not an integer; allowed values are {{1, 2, 4}}"))?;
    Beta::try_from(v).map_err(|_| format!("beta = {v}; allowed values are {{1, 2, 4}}"))
}

fn parse_unit_open(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0, 1]"))
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_nan() {
        Err("NaN is not allowed".into())
    } else {
        Ok(v)
    }
}

/// Output options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// JSON result path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out of the meta block.
    #[arg(long)]
    #[serde(skip)]
    pub no_timestamp: bool,
    /// Worker threads (results do not depend on it).
    #[arg(long, env = "WIGNER_FLUCT_THREADS", value_parser = clap::value_parser!(u32).range(1..=1024))]
    #[serde(skip)]
    pub threads: Option<u32>,
}

/// Options of the Monte Carlo fluctuation subcommands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    #[arg(long, value_enum, default_value = "tridiag")]
    pub ensemble: EnsembleArg,
    /// Dyson index; defaults to 1 for `tridiag` and must agree with any
    /// other ensemble.
    #[arg(long, value_parser = parse_beta)]
    #[serde(serialize_with = "ser_beta_opt")]
    pub beta: Option<Beta>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-trial CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Histogram of the first coordinate against the standard normal density.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Include per-trial vectors in the JSON result.
    #[arg(long)]
    pub per_trial: bool,
    /// Exit with status 1 when a pass/fail criterion fails.
    #[arg(long)]
    pub check: bool,
}

fn ser_beta_opt<S: serde::Serializer>(b: &Option<Beta>, s: S) -> Result<S::Ok, S::Error> {
    match b {
        Some(b) => s.serialize_some(&b.as_u32()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub ensemble: EnsembleArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=20_000))]
    pub n: u64,
    /// Only for `tridiag`; other ensembles imply their beta.
    #[arg(long, value_parser = parse_beta)]
    #[serde(serialize_with = "ser_beta_opt")]
    pub beta: Option<Beta>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BulkArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub n: u64,
    /// Eigenvalue index, 1-based from the bottom.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    pub k: u64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EdgeArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=1_000_000))]
    pub n: u64,
    /// Distance from the top: the eigenvalue tracked is number n - k.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub k: u64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JointArgs {
    #[arg(long, value_enum, default_value = "bulk")]
    pub regime: RegimeArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=1_000_000))]
    pub n: u64,
    /// Strictly increasing indices, comma separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub k: Vec<u64>,
    /// Gap exponents, one fewer than indices; derived from the gaps when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_unit_open)]
    pub theta: Option<Vec<f64>>,
    /// Edge exponent of the first index; derived from it when omitted.
    #[arg(long, value_parser = parse_unit_open)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FrArgs {
    #[arg(long, value_enum, default_value = "gue")]
    pub target: FrTarget,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=200))]
    pub n: u64,
    /// Points to compare (1-based); all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u64>>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10_000))]
    pub n: u64,
    /// Lower end of the open interval; -inf when omitted.
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    /// Upper end of the open interval; +inf when omitted.
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CumulantArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10_000))]
    pub n: u64,
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub hi: f64,
    /// Gauss-Legendre points per panel.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(16..=128))]
    pub order: u64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=4))]
    pub lmax: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SemicircleArgs {
    #[arg(long, value_enum, default_value = "goe")]
    pub ensemble: EnsembleArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=20_000))]
    pub n: u64,
    #[arg(long, value_parser = parse_beta)]
    #[serde(serialize_with = "ser_beta_opt")]
    pub beta: Option<Beta>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted sup-distance.
    #[arg(long, default_value_t = 0.05, value_parser = parse_unit_open)]
    pub max_distance: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::BulkFluct(_) => "bulk-fluct",
            Command::EdgeFluct(_) => "edge-fluct",
            Command::JointFluct(_) => "joint-fluct",
            Command::FrCheck(_) => "fr-check",
            Command::Kernel(_) => "kernel",
            Command::Cumulants(_) => "cumulants",
            Command::SemicircleCheck(_) => "semicircle-check",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Sample(a) => &a.output,
            Command::BulkFluct(a) => &a.output,
            Command::EdgeFluct(a) => &a.output,
            Command::JointFluct(a) => &a.output,
            Command::FrCheck(a) => &a.output,
            Command::Kernel(a) => &a.output,
            Command::Cumulants(a) => &a.output,
            Command::SemicircleCheck(a) => &a.output,
        }
    }

    /// Echo of the parameters that determine the result.
    pub fn config(&self) -> serde_json::Value {
        let v = match self {
            Command::Sample(a) => serde_json::to_value(a),
            Command::BulkFluct(a) => serde_json::to_value(a),
            Command::EdgeFluct(a) => serde_json::to_value(a),
            Command::JointFluct(a) => serde_json::to_value(a),
            Command::FrCheck(a) => serde_json::to_value(a),
            Command::Kernel(a) => serde_json::to_value(a),
            Command::Cumulants(a) => serde_json::to_value(a),
            Command::SemicircleCheck(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize to JSON")
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use wigner_fluct::kernel::{counting_cumulants, discretize_operator, expected_count, variance_count, CumulantReport};
use wigner_fluct::report::{per_trial_csv, Document, ExperimentDocument, Meta};
use wigner_fluct::semicircle::semicircle_distance;
use wigner_fluct::spectra::eigenvalues;
use wigner_fluct::stats::{
    forrester_rains_gse, forrester_rains_gue, run_mc, EnsembleTemplate, ExperimentPlan,
};
use wigner_fluct::{Beta, EnsembleSpec, Error, IndexSpec, Interval};

use crate::args::{
    BulkArgs, Command, CumulantArgs, EdgeArgs, EnsembleArg, FrArgs, FrTarget, JointArgs,
    KernelArgs, McArgs, RegimeArg, SampleArgs, SemicircleArgs,
};
use crate::svg;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NUMERIC: u8 = 3;
    pub const UNWRITABLE: u8 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Unwritable(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Numeric(_) => exit::NUMERIC,
            CliError::Unwritable(_) => exit::UNWRITABLE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Unwritable(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Files produced by a run, written only after the computation succeeds.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub json: String,
    pub files: Vec<(PathBuf, String)>,
    pub check_failed: bool,
}

fn check_writable(path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        return Err(CliError::Unwritable(format!("{} is a directory", path.display())));
    }
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(CliError::Unwritable(format!(
            "directory {} does not exist",
            parent.display()
        )));
    }
    Ok(())
}

fn output_paths(cmd: &Command) -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = cmd.output().out.iter().cloned().collect();
    let mc = match cmd {
        Command::BulkFluct(a) => Some(&a.mc),
        Command::EdgeFluct(a) => Some(&a.mc),
        Command::JointFluct(a) => Some(&a.mc),
        _ => None,
    };
    if let Some(mc) = mc {
        paths.extend(mc.csv.iter().cloned());
        paths.extend(mc.svg.iter().cloned());
    }
    paths
}

pub fn write_artifacts(cmd: &Command, artifacts: &Artifacts) -> Result<(), CliError> {
    let write = |path: &Path, text: &str| {
        fs::write(path, text).map_err(|e| CliError::Unwritable(format!("{}: {e}", path.display())))
    };
    for (path, text) in &artifacts.files {
        write(path, text)?;
    }
    match &cmd.output().out {
        Some(path) => write(path, &artifacts.json),
        None => {
            println!("{}", artifacts.json);
            Ok(())
        }
    }
}

fn meta(cmd: &Command) -> Meta {
    let mut m = Meta::new(cmd.name(), cmd.config());
    if !cmd.output().no_timestamp {
        m.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    m
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("results serialize to JSON")
}

fn usize_of(v: u64) -> usize {
    usize::try_from(v).expect("range-checked by the parser")
}

/// Ensemble beta from the flags: the kind's own beta, or the explicit one
/// for the tridiagonal model.
fn resolve_beta(ensemble: EnsembleArg, beta: Option<Beta>) -> Result<Beta, CliError> {
    match (ensemble.kind().implied_beta(), beta) {
        (Some(implied), Some(b)) if implied != b => Err(CliError::Usage(format!(
            "--beta {} conflicts with --ensemble {:?}, whose beta is {}",
            b.as_u32(),
            ensemble,
            implied.as_u32()
        ))),
        (Some(implied), _) => Ok(implied),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(CliError::Usage(
            "--beta is required for --ensemble tridiag; allowed values are {1, 2, 4}".into(),
        )),
    }
}

pub fn execute(cmd: &Command) -> Result<Artifacts, CliError> {
    for path in output_paths(cmd) {
        check_writable(&path)?;
    }
    let meta = meta(cmd);
    match cmd {
        Command::Sample(a) => sample(a, meta),
        Command::BulkFluct(a) => bulk(a, meta),
        Command::EdgeFluct(a) => edge(a, meta),
        Command::JointFluct(a) => joint(a, meta),
        Command::FrCheck(a) => fr_check(a, meta),
        Command::Kernel(a) => kernel(a, meta),
        Command::Cumulants(a) => cumulants(a, meta),
        Command::SemicircleCheck(a) => semicircle(a, meta),
    }
}

#[derive(Debug, Serialize)]
struct SampleResult {
    spec: EnsembleSpec,
    eigenvalues: Vec<f64>,
}

fn sample_spectrum(ensemble: EnsembleArg, n: u64, beta: Option<Beta>, seed: u64) -> Result<(EnsembleSpec, Vec<f64>), CliError> {
    let beta = resolve_beta(ensemble, beta)?;
    let spec = EnsembleSpec::with_beta(ensemble.kind(), usize_of(n), beta, seed)?;
    let values = eigenvalues(&spec.sample()?, 0)?.into_values();
    Ok((spec, values))
}

fn sample(a: &SampleArgs, mut meta: Meta) -> Result<Artifacts, CliError> {
    meta.master_seed = Some(a.seed);
    let (spec, eigenvalues) = sample_spectrum(a.ensemble, a.n, a.beta, a.seed)?;
    Ok(Artifacts {
        json: to_json(&Document {
            meta,
            result: SampleResult { spec, eigenvalues },
        }),
        ..Artifacts::default()
    })
}

fn experiment(mc: &McArgs, n: u64, index: IndexSpec, meta: Meta) -> Result<Artifacts, CliError> {
    let requested = match (mc.ensemble, mc.beta) {
        (EnsembleArg::Tridiag, None) => Some(Beta::One),
        (_, b) => b,
    };
    let beta = resolve_beta(mc.ensemble, requested)?;
    let template = EnsembleTemplate::new(mc.ensemble.kind(), usize_of(n), beta)?;
    let plan = ExperimentPlan::new(template, index, usize_of(mc.trials), mc.seed)?;
    let result = run_mc(&plan)?;
    let check_failed = mc.check && !result.summary.all_pass();

    let mut files = Vec::new();
    if let Some(path) = &mc.csv {
        files.push((path.clone(), per_trial_csv(&result.per_trial)));
    }
    if let Some(path) = &mc.svg {
        let xs: Vec<f64> = result.per_trial.iter().map(|t| t.x[0]).collect();
        let title = format!("X_1, {} trials, n = {n}", xs.len());
        files.push((path.clone(), svg::histogram(&xs, &title)));
    }
    let doc = ExperimentDocument::new(meta, result, mc.per_trial);
    Ok(Artifacts {
        json: to_json(&doc),
        files,
        check_failed,
    })
}

fn bulk(a: &BulkArgs, meta: Meta) -> Result<Artifacts, CliError> {
    if a.k > a.n {
        return Err(CliError::Usage(format!("--k {} exceeds --n {}", a.k, a.n)));
    }
    let index = IndexSpec::bulk(vec![usize_of(a.k)], vec![])?;
    experiment(&a.mc, a.n, index, meta)
}

fn edge(a: &EdgeArgs, meta: Meta) -> Result<Artifacts, CliError> {
    if a.k >= a.n {
        return Err(CliError::Usage(format!("--k {} must be below --n {}", a.k, a.n)));
    }
    let index = IndexSpec::edge_from_indices(vec![usize_of(a.k)], usize_of(a.n))?;
    experiment(&a.mc, a.n, index, meta)
}

fn joint(a: &JointArgs, meta: Meta) -> Result<Artifacts, CliError> {
    let n = usize_of(a.n);
    let ks: Vec<usize> = a.k.iter().map(|&k| usize_of(k)).collect();
    let index = match (a.regime, &a.theta, a.gamma) {
        (RegimeArg::Bulk, _, Some(_)) => {
            return Err(CliError::Usage("--gamma only applies to --regime edge".into()))
        }
        (RegimeArg::Bulk, Some(theta), None) => IndexSpec::bulk(ks, theta.clone())?,
        (RegimeArg::Bulk, None, None) => IndexSpec::bulk_from_indices(ks, n)?,
        (RegimeArg::Edge, Some(theta), Some(gamma)) => IndexSpec::edge(ks, theta.clone(), gamma)?,
        (RegimeArg::Edge, None, None) => IndexSpec::edge_from_indices(ks, n)?,
        (RegimeArg::Edge, _, _) => {
            return Err(CliError::Usage(
                "give both --theta and --gamma for --regime edge, or neither".into(),
            ))
        }
    };
    experiment(&a.mc, a.n, index, meta)
}

fn fr_check(a: &FrArgs, mut meta: Meta) -> Result<Artifacts, CliError> {
    let n = usize_of(a.n);
    let ks: Vec<usize> = match &a.k {
        Some(ks) => ks.iter().map(|&k| usize_of(k)).collect(),
        None => (1..=n).collect(),
    };
    let trials = usize_of(a.trials);
    let report = match a.target {
        FrTarget::Gue => forrester_rains_gue(n, &ks, trials, a.seed)?,
        FrTarget::Gse => forrester_rains_gse(n, &ks, trials, a.seed)?,
    };
    meta.master_seed = Some(a.seed);
    let check_failed = !report.pass();
    Ok(Artifacts {
        json: to_json(&Document {
            meta,
            result: report,
        }),
        files: Vec::new(),
        check_failed,
    })
}

fn interval(lo: Option<f64>, hi: Option<f64>) -> Result<Interval, CliError> {
    Ok(Interval::new(
        lo.unwrap_or(f64::NEG_INFINITY),
        hi.unwrap_or(f64::INFINITY),
    )?)
}

#[derive(Debug, Serialize)]
struct KernelResult {
    n: usize,
    lo: Option<f64>,
    hi: Option<f64>,
    expected_count: f64,
    variance_count: f64,
}

fn kernel(a: &KernelArgs, meta: Meta) -> Result<Artifacts, CliError> {
    let n = usize_of(a.n);
    let iv = interval(a.lo, a.hi)?;
    let result = KernelResult {
        n,
        lo: a.lo,
        hi: a.hi,
        expected_count: expected_count(n, iv)?,
        variance_count: variance_count(n, iv)?,
    };
    Ok(Artifacts {
        json: to_json(&Document { meta, result }),
        ..Artifacts::default()
    })
}

#[derive(Debug, Serialize)]
struct CumulantResult {
    n: usize,
    lo: f64,
    hi: f64,
    nodes: usize,
    operator_spectrum: (f64, f64),
    report: CumulantReport,
    normalized: Vec<f64>,
}

fn cumulants(a: &CumulantArgs, meta: Meta) -> Result<Artifacts, CliError> {
    let n = usize_of(a.n);
    let op = discretize_operator(n, Interval::new(a.lo, a.hi)?, usize_of(a.order))?;
    let report = counting_cumulants(&op, usize_of(a.lmax))?;
    let normalized = (3..=usize_of(a.lmax))
        .filter_map(|l| report.normalized(l))
        .collect();
    let result = CumulantResult {
        n,
        lo: a.lo,
        hi: a.hi,
        nodes: op.nodes.len(),
        operator_spectrum: (op.eigenvalues[0], op.eigenvalues[op.eigenvalues.len() - 1]),
        report,
        normalized,
    };
    Ok(Artifacts {
        json: to_json(&Document { meta, result }),
        ..Artifacts::default()
    })
}

#[derive(Debug, Serialize)]
struct SemicircleResult {
    spec: EnsembleSpec,
    sup_distance: f64,
    max_distance: f64,
    pass: bool,
}

fn semicircle(a: &SemicircleArgs, mut meta: Meta) -> Result<Artifacts, CliError> {
    meta.master_seed = Some(a.seed);
    let (spec, values) = sample_spectrum(a.ensemble, a.n, a.beta, a.seed)?;
    let d = semicircle_distance(&values)?;
    let pass = d <= a.max_distance;
    let result = SemicircleResult {
        spec,
        sup_distance: d,
        max_distance: a.max_distance,
        pass,
    };
    Ok(Artifacts {
        json: to_json(&Document { meta, result }),
        files: Vec::new(),
        check_failed: !pass,
    })
}

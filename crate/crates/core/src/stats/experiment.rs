use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{empirical_corr, ks_one_sample, mean, standard_normal_cdf, variance};
use crate::ensembles::{Beta, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::fluctuations::{normalize_values, predicted_cov, CovarianceMatrix, FluctuationVector, IndexSpec};
use crate::rng::trial_seed;
use crate::semicircle::Regime;
use crate::spectra::selected_eigenvalues;

/// Ensemble to sample in every trial; the seed is supplied per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleTemplate {
    pub kind: EnsembleKind,
    pub n: usize,
    pub beta: Beta,
}

impl EnsembleTemplate {
    pub fn new(kind: EnsembleKind, n: usize, beta: Beta) -> Result<Self> {
        let t = Self { kind, n, beta };
        t.with_seed(0)?;
        Ok(t)
    }

    pub fn with_seed(&self, seed: u64) -> Result<EnsembleSpec> {
        EnsembleSpec::with_beta(self.kind, self.n, self.beta, seed)
    }
}

/// Pass/fail thresholds applied to an experiment summary.
///
/// These are engineering choices for `n` in the hundreds to low thousands.
/// Convergence to the Gaussian limit is logarithmic in `n`, so they are far
/// looser than asymptotic KS critical values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub ks_max: f64,
    pub var_min: f64,
    pub var_max: f64,
    /// Allowed `|corr - Λ|` for every off-diagonal pair.
    pub corr_tol: f64,
}

impl Thresholds {
    pub fn bulk() -> Self {
        Self {
            ks_max: 0.08,
            var_min: 0.8,
            var_max: 1.25,
            corr_tol: 0.12,
        }
    }

    pub fn edge() -> Self {
        Self {
            ks_max: 0.1,
            var_min: 0.75,
            var_max: 1.3,
            corr_tol: 0.12,
        }
    }

    pub fn for_regime(regime: Regime) -> Self {
        match regime {
            Regime::Bulk => Self::bulk(),
            Regime::Edge => Self::edge(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub ensemble: EnsembleTemplate,
    pub index: IndexSpec,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the ambient rayon pool. Never affects
    /// results, so it is not serialized.
    #[serde(skip)]
    pub threads: Option<usize>,
    pub thresholds: Thresholds,
}

impl ExperimentPlan {
    pub fn new(ensemble: EnsembleTemplate, index: IndexSpec, trials: usize, master_seed: u64) -> Result<Self> {
        let thresholds = Thresholds::for_regime(index.regime);
        let plan = Self {
            ensemble,
            index,
            trials,
            master_seed,
            threads: None,
            thresholds,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        self.ensemble.with_seed(self.master_seed)?;
        self.index.validate()?;
        self.index.positions(self.ensemble.n)?;
        self.index.center_scales(self.ensemble.n, self.ensemble.beta)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionResult {
    pub name: String,
    pub value: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub pass: bool,
}

impl CriterionResult {
    fn new(name: String, value: f64, min: Option<f64>, max: Option<f64>) -> Self {
        let pass = min.is_none_or(|lo| value >= lo) && max.is_none_or(|hi| value <= hi);
        Self {
            name,
            value,
            min,
            max,
            pass,
        }
    }
}

/// Aggregates over trials. `var` and `corr` are absent with a single trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub mean: Vec<f64>,
    pub var: Option<Vec<f64>>,
    pub corr: Option<CovarianceMatrix>,
    pub lambda_pred: CovarianceMatrix,
    pub ks: Vec<f64>,
    pub pass: Vec<CriterionResult>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentResult {
    pub plan: ExperimentPlan,
    pub summary: Summary,
    pub per_trial: Vec<FluctuationVector>,
}

/// Summary of per-trial fluctuation vectors against the plan's prediction
/// and thresholds. Pure function of its inputs.
pub fn summarize(per_trial: &[FluctuationVector], index: &IndexSpec, thresholds: &Thresholds) -> Result<Summary> {
    if per_trial.is_empty() {
        return Err(Error::InvalidArgument("no trials to summarize".into()));
    }
    let m = index.m();
    if per_trial.iter().any(|v| v.x.len() != m) {
        return Err(Error::Shape(format!("expected {m} coordinates per trial")));
    }
    let cols: Vec<Vec<f64>> = (0..m)
        .map(|j| per_trial.iter().map(|v| v.x[j]).collect())
        .collect();
    let lambda_pred = predicted_cov(index)?;
    let mean_v: Vec<f64> = cols.iter().map(|c| mean(c)).collect();
    let ks = cols
        .iter()
        .map(|c| ks_one_sample(c, standard_normal_cdf))
        .collect::<Result<Vec<f64>>>()?;

    let mut pass: Vec<CriterionResult> = ks
        .iter()
        .enumerate()
        .map(|(i, &d)| CriterionResult::new(format!("ks_{}", i + 1), d, None, Some(thresholds.ks_max)))
        .collect();

    let (var_v, corr) = if per_trial.len() >= 2 {
        let var_v: Vec<f64> = cols.iter().map(|c| variance(c)).collect();
        for (i, &v) in var_v.iter().enumerate() {
            pass.push(CriterionResult::new(
                format!("var_{}", i + 1),
                v,
                Some(thresholds.var_min),
                Some(thresholds.var_max),
            ));
        }
        let rows: Vec<Vec<f64>> = per_trial.iter().map(|v| v.x.clone()).collect();
        let corr = empirical_corr(&rows)?;
        for i in 0..m {
            for j in (i + 1)..m {
                pass.push(CriterionResult::new(
                    format!("corr_{}_{}", i + 1, j + 1),
                    (corr.get(i, j) - lambda_pred.get(i, j)).abs(),
                    None,
                    Some(thresholds.corr_tol),
                ));
            }
        }
        (Some(var_v), Some(corr))
    } else {
        (None, None)
    };

    Ok(Summary {
        mean: mean_v,
        var: var_v,
        corr,
        lambda_pred,
        ks,
        pass,
    })
}

fn run_trial(plan: &ExperimentPlan, positions: &[usize], trial: u64) -> Result<FluctuationVector> {
    let seed = trial_seed(plan.master_seed, trial);
    let spec = plan.ensemble.with_seed(seed)?;
    let n = plan.ensemble.n;
    let cs = plan.index.center_scales(n, plan.ensemble.beta)?;
    let sample = spec.sample().map_err(|e| e.with_seed(seed))?;
    let values = selected_eigenvalues(&sample, positions).map_err(|e| e.with_seed(seed))?;
    normalize_values(&values, &cs, trial).map_err(|e| e.with_seed(seed))
}

/// Runs every trial of `plan` and summarizes.
///
/// Trial `t` samples from seed `trial_seed(master_seed, t)` and results are
/// collected in trial order, so the output does not depend on the number of
/// threads. On failure the error of the lowest failing trial is returned.
pub fn run_mc(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let positions = plan.index.positions(plan.ensemble.n)?;
    let work = || -> Vec<Result<FluctuationVector>> {
        (0..plan.trials as u64)
            .into_par_iter()
            .map(|t| run_trial(plan, &positions, t))
            .collect()
    };
    let outcomes = match plan.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let per_trial = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = summarize(&per_trial, &plan.index, &plan.thresholds)?;
    Ok(ExperimentResult {
        plan: plan.clone(),
        summary,
        per_trial,
    })
}

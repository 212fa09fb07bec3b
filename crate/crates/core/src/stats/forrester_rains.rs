//! Monte Carlo checks of the superposition/decimation identities
//! `GUE_n = even(GOE_n ∪ GOE_{n+1})` and `GSE_n = even(GOE_{2n+1}) / √2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ks_two_sample;
use crate::ensembles::{gse_from_goe, sample_goe, sample_gse, sample_gue, superpose_decimate_even};
use crate::error::{Error, Result};
use crate::rng::stream_seed;
use crate::spectra::eigenvalues;

/// Two-sample comparison of the `k`-th point (1-based) on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrSide {
    pub k: usize,
    pub ks: f64,
    pub ks_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrReport {
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub p_min: f64,
    pub sides: Vec<FrSide>,
}

impl FrReport {
    pub fn pass(&self) -> bool {
        self.sides.iter().all(|s| s.ks_p > self.p_min)
    }
}

fn check_ks(n: usize, trials: usize, ks: &[usize]) -> Result<()> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidArgument(format!("k = {k} out of range 1..={n}")));
    }
    Ok(())
}

fn compare(
    n: usize,
    trials: usize,
    master_seed: u64,
    ks: &[usize],
    pairs: Vec<Result<(Vec<f64>, Vec<f64>)>>,
) -> Result<FrReport> {
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let sides = ks
        .iter()
        .map(|&k| {
            let left: Vec<f64> = pairs.iter().map(|(a, _)| a[k - 1]).collect();
            let right: Vec<f64> = pairs.iter().map(|(_, b)| b[k - 1]).collect();
            let t = ks_two_sample(&left, &right)?;
            Ok(FrSide {
                k,
                ks: t.statistic,
                ks_p: t.p_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrReport {
        n,
        trials,
        master_seed,
        p_min: 0.01,
        sides,
    })
}

/// Compares the `k`-th point of `even(GOE_n ∪ GOE_{n+1})` with the `k`-th
/// eigenvalue of `GUE_n`, each side drawn independently `trials` times.
pub fn forrester_rains_gue(n: usize, ks: &[usize], trials: usize, master_seed: u64) -> Result<FrReport> {
    check_ks(n, trials, ks)?;
    let pairs = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let a = eigenvalues(&sample_goe(n, stream_seed(master_seed, 0, t))?, t)?;
            let b = eigenvalues(&sample_goe(n + 1, stream_seed(master_seed, 1, t))?, t)?;
            let g = eigenvalues(&sample_gue(n, stream_seed(master_seed, 2, t))?, t)?;
            Ok((superpose_decimate_even(a.values(), b.values())?, g.into_values()))
        })
        .collect();
    compare(n, trials, master_seed, ks, pairs)
}

/// Compares the `k`-th point of `even(GOE_{2n+1}) / √2` with the `k`-th
/// eigenvalue of `GSE_n`.
pub fn forrester_rains_gse(n: usize, ks: &[usize], trials: usize, master_seed: u64) -> Result<FrReport> {
    check_ks(n, trials, ks)?;
    let pairs = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let a = eigenvalues(&sample_goe(2 * n + 1, stream_seed(master_seed, 0, t))?, t)?;
            let g = eigenvalues(&sample_gse(n, stream_seed(master_seed, 1, t))?, t)?;
            Ok((gse_from_goe(a.values())?, g.into_values()))
        })
        .collect();
    compare(n, trials, master_seed, ks, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_k() {
        assert!(forrester_rains_gue(4, &[5], 10, 0).is_err());
        assert!(forrester_rains_gse(4, &[0], 10, 0).is_err());
        assert!(forrester_rains_gue(4, &[1], 0, 0).is_err());
    }

    #[test]
    fn small_runs_are_deterministic() {
        let a = forrester_rains_gue(3, &[1, 2, 3], 200, 5).unwrap();
        let b = forrester_rains_gue(3, &[1, 2, 3], 200, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sides.len(), 3);
    }

    #[test]
    fn wrong_pairing_is_detected() {
        // The even points of GOE_{2n+1} without the 1/√2 factor are too wide.
        let n = 3;
        let pairs: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..2000u64)
            .map(|t| {
                let a = eigenvalues(&sample_goe(2 * n + 1, stream_seed(1, 0, t))?, t)?;
                let g = eigenvalues(&sample_gse(n, stream_seed(1, 1, t))?, t)?;
                let even: Vec<f64> = a.values().iter().skip(1).step_by(2).copied().collect();
                Ok((even, g.into_values()))
            })
            .collect();
        let r = compare(n, 2000, 1, &[1, 3], pairs).unwrap();
        assert!(!r.pass());
    }
}

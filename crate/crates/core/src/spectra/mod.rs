//! Ordered spectra and eigenvalue counts.
//!
//! Dense matrices are reduced to tridiagonal form by Householder
//! reflections; the tridiagonal spectrum is then computed either by implicit
//! QL (fast path) or by Sturm bisection (reference path). Complex Hermitian
//! matrices go through their real symmetric embedding, and the resulting
//! repeated eigenvalues are merged.

mod householder;
mod tridiagonal;

pub use householder::tridiagonalize;
pub use tridiagonal::{
    count_in_interval, eigenvalues_bisection, eigenvalues_ql, kth_eigenvalue, sturm_count_below,
    IntervalCount, Tridiagonal,
};

use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleSpec, MatrixSample, Storage};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::SymmetricMatrix;

/// Relative tolerance (against the spectral radius) for merging the copies
/// of an eigenvalue produced by an embedding.
pub const DEDUP_RELATIVE_TOL: f64 = 1e-8;

/// Strictly increasing spectrum of one sampled matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    values: Vec<f64>,
    pub spec: EnsembleSpec,
    pub trial: u64,
}

impl SpectrumSample {
    pub fn new(values: Vec<f64>, spec: EnsembleSpec, trial: u64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("spectrum contains non-finite values".into()));
        }
        if let Some(w) = values.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Degenerate(format!(
                "spectrum is not strictly increasing near {}",
                w[0]
            )));
        }
        Ok(Self {
            values,
            spec,
            trial,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    ImplicitQl,
    Bisection,
}

/// Real symmetric tridiagonal form of a sample, with the number of copies of
/// each ensemble eigenvalue it carries and the factor that maps its
/// eigenvalues back to the ensemble's scale.
pub fn reduce(sample: &MatrixSample) -> Result<(Tridiagonal, usize, f64)> {
    Ok(match &sample.storage {
        Storage::RealSymmetric(m) => (tridiagonalize(m)?, 1, 1.0),
        Storage::RealEmbedded(m) => (tridiagonalize(m)?, 2, 1.0),
        Storage::ComplexHermitian(h) => (tridiagonalize(&h.real_embedding())?, 2, 1.0),
        Storage::QuaternionEmbedded(h) => (tridiagonalize(&h.real_embedding())?, 4, 1.0),
        Storage::Tridiagonal {
            matrix,
            eigen_scale,
        } => (matrix.clone(), 1, *eigen_scale),
    })
}

/// Full ordered spectrum of a sampled matrix on the ensemble's own scale.
pub fn eigenvalues(sample: &MatrixSample, trial: u64) -> Result<SpectrumSample> {
    eigenvalues_with(sample, trial, EigenMethod::default())
}

pub fn eigenvalues_with(
    sample: &MatrixSample,
    trial: u64,
    method: EigenMethod,
) -> Result<SpectrumSample> {
    let seed = sample.spec.seed;
    let (t, copies, scale) = reduce(sample).map_err(|e| e.with_seed(seed))?;
    let raw = match method {
        EigenMethod::ImplicitQl => eigenvalues_ql(&t).map_err(|e| e.with_seed(seed))?,
        EigenMethod::Bisection => eigenvalues_bisection(&t),
    };
    let merged = merge_copies(&raw, copies).map_err(|e| e.with_seed(seed))?;
    let values = merged.into_iter().map(|v| v * scale).collect();
    SpectrumSample::new(values, sample.spec, trial)
}

/// Selected eigenvalues (0-based indices into the merged spectrum) by
/// bisection, without computing the rest.
pub fn selected_eigenvalues(sample: &MatrixSample, indices: &[usize]) -> Result<Vec<f64>> {
    let (t, copies, scale) = reduce(sample)?;
    indices
        .iter()
        .map(|&k| Ok(kth_eigenvalue(&t, k * copies)? * scale))
        .collect()
}

/// Number of ensemble eigenvalues in the open interval, from Sturm counts
/// on the reduced tridiagonal form.
pub fn count_sample(sample: &MatrixSample, interval: Interval) -> Result<IntervalCount> {
    let (t, copies, scale) = reduce(sample)?;
    let scaled = Interval::new(interval.lo() / scale, interval.hi() / scale)?;
    let c = count_in_interval(&t, scaled);
    Ok(IntervalCount {
        count: c.count / copies,
        endpoint_hit: c.endpoint_hit,
    })
}

/// Collapses runs of `copies` equal eigenvalues into one value each.
pub fn merge_copies(sorted: &[f64], copies: usize) -> Result<Vec<f64>> {
    if copies == 1 {
        return Ok(sorted.to_vec());
    }
    if sorted.len() % copies != 0 {
        return Err(Error::Shape(format!(
            "spectrum of length {} is not a multiple of {copies}",
            sorted.len()
        )));
    }
    let radius = sorted.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = DEDUP_RELATIVE_TOL * radius;
    sorted
        .chunks(copies)
        .map(|group| {
            let spread = group[copies - 1] - group[0];
            if spread > tol {
                Err(Error::numerical(format!(
                    "eigenvalue copies differ by {spread:e} (tolerance {tol:e})"
                )))
            } else {
                Ok(group.iter().sum::<f64>() / copies as f64)
            }
        })
        .collect()
}

/// Cauchy interlacing: `r₁ ≤ s₁ ≤ r₂ ≤ … ≤ s_{n-1} ≤ r_n` for a parent
/// spectrum `r` of length `n` and a child spectrum `s` of length `n - 1`.
pub fn check_interlacing(parent: &[f64], child: &[f64]) -> Result<bool> {
    if parent.len() != child.len() + 1 {
        return Err(Error::Shape(format!(
            "parent spectrum of length {} cannot interlace a child of length {}",
            parent.len(),
            child.len()
        )));
    }
    Ok(child
        .iter()
        .enumerate()
        .all(|(i, &s)| parent[i] <= s && s <= parent[i + 1]))
}

/// Ordered eigenvalues of a dense real symmetric matrix.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    eigenvalues_ql(&tridiagonalize(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{
        sample_goe, sample_gse, sample_gue, sample_matched_wigner, sample_tridiag_beta, Beta,
        Symmetry,
    };
    use crate::semicircle::g_cdf;

    #[test]
    fn spectrum_sample_rejects_ties() {
        let spec = EnsembleSpec::new(crate::ensembles::EnsembleKind::Goe, 2, 0).unwrap();
        assert!(matches!(
            SpectrumSample::new(vec![1.0, 1.0], spec, 0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn interlacing_examples() {
        let parent = symmetric_eigenvalues(
            &SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        assert!(check_interlacing(&parent, &[0.0]).unwrap());
        assert!(!check_interlacing(&[0.0, 1.0], &[2.0]).unwrap());
        assert!(matches!(
            check_interlacing(&[0.0, 1.0], &[]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn interlacing_holds_for_goe_principal_submatrices() {
        for seed in 0..1000 {
            let s = sample_goe(20, seed).unwrap();
            let m = s.as_real_symmetric().unwrap();
            let parent = symmetric_eigenvalues(m).unwrap();
            let child = symmetric_eigenvalues(&m.leading_principal(19).unwrap()).unwrap();
            assert!(check_interlacing(&parent, &child).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn trace_identity_all_samplers() {
        let cases: Vec<(MatrixSample, f64)> = vec![
            {
                let s = sample_goe(120, 1).unwrap();
                let tr = s.as_real_symmetric().unwrap().trace();
                (s, tr)
            },
            {
                let s = sample_gue(60, 2).unwrap();
                let tr = s.as_hermitian().unwrap().trace();
                (s, tr)
            },
            {
                let s = sample_gse(30, 3).unwrap();
                let tr = s.as_hermitian().unwrap().trace() / 2.0;
                (s, tr)
            },
            {
                let s = sample_matched_wigner(80, 4, Symmetry::Real).unwrap();
                let tr = s.as_real_symmetric().unwrap().trace();
                (s, tr)
            },
            {
                let s = sample_matched_wigner(40, 5, Symmetry::Hermitian).unwrap();
                let tr = s.as_hermitian().unwrap().trace();
                (s, tr)
            },
            {
                let s = sample_tridiag_beta(500, Beta::Two, 6).unwrap();
                let (t, scale) = s.as_tridiagonal().unwrap();
                let tr = t.diag().iter().sum::<f64>() * scale;
                (s, tr)
            },
        ];
        for (s, tr) in cases {
            let ev = eigenvalues(&s, 0).unwrap();
            assert_eq!(ev.len(), s.spec.n);
            let sum: f64 = ev.values().iter().sum();
            let abs: f64 = ev.values().iter().map(|v| v.abs()).sum();
            assert!(
                (sum - tr).abs() <= 1e-10 * abs.max(1.0),
                "{:?}: sum {sum} trace {tr}",
                s.spec.kind
            );
        }
    }

    #[test]
    fn random_dense_trace() {
        let s = sample_goe(10, 77).unwrap();
        let m = s.as_real_symmetric().unwrap();
        let ev = symmetric_eigenvalues(m).unwrap();
        let sum: f64 = ev.iter().sum();
        assert!((sum - m.trace()).abs() <= 1e-10 * m.trace().abs().max(1.0));
    }

    #[test]
    fn gse_eigenvalues_come_in_pairs() {
        let s = sample_gse(3, 17).unwrap();
        let h = s.as_hermitian().unwrap();
        let emb = h.real_embedding();
        // The complex 6x6 spectrum appears twice in the 12x12 real form;
        // recover it by merging pairs, then check Kramers pairs.
        let raw = symmetric_eigenvalues(&emb).unwrap();
        let complex_spec = merge_copies(&raw, 2).unwrap();
        assert_eq!(complex_spec.len(), 6);
        for pair in complex_spec.chunks(2) {
            assert!((pair[1] - pair[0]).abs() < 1e-10, "{complex_spec:?}");
        }
        let ev = eigenvalues(&s, 0).unwrap();
        assert_eq!(ev.len(), 3);
    }

    #[test]
    fn bisection_and_ql_agree_on_dense_sample() {
        let s = sample_goe(150, 8).unwrap();
        let a = eigenvalues_with(&s, 0, EigenMethod::ImplicitQl).unwrap();
        let b = eigenvalues_with(&s, 0, EigenMethod::Bisection).unwrap();
        let scale = (2.0 * 150f64).sqrt();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() / scale <= 1e-10);
        }
        let picked = selected_eigenvalues(&s, &[0, 75, 149]).unwrap();
        for (p, k) in picked.iter().zip([0, 75, 149]) {
            assert!((p - a.values()[k]).abs() / scale <= 1e-10);
        }
    }

    #[test]
    fn selected_eigenvalues_on_embedded_storage() {
        let s = sample_gue(12, 4).unwrap();
        let all = eigenvalues(&s, 0).unwrap();
        let picked = selected_eigenvalues(&s, &[0, 5, 11]).unwrap();
        for (p, k) in picked.iter().zip([0, 5, 11]) {
            assert!((p - all.values()[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn goe_spectrum_near_semicircle() {
        let n = 200;
        let s = sample_goe(n, 12).unwrap();
        let ev = eigenvalues(&s, 0).unwrap();
        let scale = (2.0 * n as f64).sqrt();
        let d = ev
            .values()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let g = g_cdf((x / scale).clamp(-1.0, 1.0)).unwrap();
                (g - i as f64 / n as f64).abs().max((g - (i + 1) as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 0.08, "sup distance {d}");
    }

    #[test]
    fn count_sample_matches_full_spectrum() {
        let samples = [
            sample_goe(30, 2).unwrap(),
            sample_gue(30, 2).unwrap(),
            sample_gse(12, 2).unwrap(),
            sample_tridiag_beta(40, Beta::Four, 2).unwrap(),
        ];
        for s in &samples {
            let spec = eigenvalues(s, 0).unwrap();
            for iv in [Interval::above(0.0).unwrap(), Interval::new(-2.0, 1.5).unwrap()] {
                let c = count_sample(s, iv).unwrap();
                let direct = spec.values().iter().filter(|v| iv.contains(**v)).count();
                assert_eq!(c.count, direct);
                assert!(!c.endpoint_hit);
            }
        }
    }

    #[test]
    fn merge_copies_rejects_split_pairs() {
        assert!(merge_copies(&[0.0, 1.0], 2).is_err());
        assert!(merge_copies(&[0.0, 0.0, 1.0], 2).is_err());
        assert_eq!(merge_copies(&[0.5, 0.5, 2.0, 2.0], 2).unwrap(), vec![0.5, 2.0]);
    }
}

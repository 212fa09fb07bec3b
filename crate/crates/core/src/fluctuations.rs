//! Fluctuation coordinates of selected eigenvalues and their predicted
//! limiting covariance.
//!
//! Indices are 1-based and ascending. In the bulk, `k_i` is the eigenvalue
//! index and gaps are `k_{i+1} - k_i ~ n^{θ_i}`. At the edge, `k_i` counts
//! from the top (eigenvalue `n - k_i`), `k_1 ~ n^γ`, and again
//! `k_{i+1} - k_i ~ n^{θ_i}`.

use serde::{Deserialize, Serialize};

use crate::ensembles::Beta;
use crate::error::{Error, Result};
use crate::semicircle::{bulk_center_scale, edge_center_scale, CenterScale, Regime};
use crate::spectra::SpectrumSample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSpec {
    pub regime: Regime,
    pub indices: Vec<usize>,
    pub thetas: Vec<f64>,
    /// Edge only.
    pub gamma: Option<f64>,
}

impl IndexSpec {
    pub fn bulk(indices: Vec<usize>, thetas: Vec<f64>) -> Result<Self> {
        let s = Self {
            regime: Regime::Bulk,
            indices,
            thetas,
            gamma: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn edge(indices: Vec<usize>, thetas: Vec<f64>, gamma: f64) -> Result<Self> {
        let s = Self {
            regime: Regime::Edge,
            indices,
            thetas,
            gamma: Some(gamma),
        };
        s.validate()?;
        Ok(s)
    }

    /// Bulk spec with `θ_i = log(k_{i+1} - k_i) / log n`.
    pub fn bulk_from_indices(indices: Vec<usize>, n: usize) -> Result<Self> {
        let thetas = gap_exponents(&indices, n)?;
        Self::bulk(indices, thetas)
    }

    /// Edge spec with `γ = log k_1 / log n` and gap exponents as in the bulk.
    pub fn edge_from_indices(indices: Vec<usize>, n: usize) -> Result<Self> {
        let thetas = gap_exponents(&indices, n)?;
        let first = *indices
            .first()
            .ok_or_else(|| Error::InvalidArgument("no indices given".into()))?;
        let gamma = (first as f64).ln() / (n as f64).ln();
        Self::edge(indices, thetas, gamma)
    }

    pub fn m(&self) -> usize {
        self.indices.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.indices.is_empty() {
            return Err(Error::InvalidArgument("at least one index is required".into()));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("indices must be strictly increasing".into()));
        }
        if self.thetas.len() + 1 != self.indices.len() {
            return Err(Error::Shape(format!(
                "{} indices need {} gap exponents, got {}",
                self.indices.len(),
                self.indices.len() - 1,
                self.thetas.len()
            )));
        }
        if self.thetas.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
            return Err(Error::InvalidArgument("gap exponents must lie in (0, 1]".into()));
        }
        match (self.regime, self.gamma) {
            (Regime::Bulk, None) => Ok(()),
            (Regime::Bulk, Some(_)) => Err(Error::InvalidArgument(
                "gamma only applies to the edge regime".into(),
            )),
            (Regime::Edge, None) => {
                Err(Error::InvalidArgument("edge regime needs gamma".into()))
            }
            (Regime::Edge, Some(g)) => {
                if !(g > 0.0 && g < 1.0) {
                    return Err(Error::InvalidArgument(format!("gamma = {g} not in (0, 1)")));
                }
                if let Some(t) = self.thetas.iter().find(|&&t| t >= g) {
                    return Err(Error::InvalidArgument(format!(
                        "edge gap exponent {t} must be below gamma = {g}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// 0-based positions in the ordered spectrum of the tracked eigenvalues.
    pub fn positions(&self, n: usize) -> Result<Vec<usize>> {
        self.indices
            .iter()
            .map(|&k| match self.regime {
                Regime::Bulk if (1..=n).contains(&k) => Ok(k - 1),
                Regime::Edge if k >= 1 && k < n => Ok(n - k - 1),
                _ => Err(Error::InvalidArgument(format!(
                    "index {k} out of range for n = {n}"
                ))),
            })
            .collect()
    }

    pub fn center_scales(&self, n: usize, beta: Beta) -> Result<Vec<CenterScale>> {
        self.indices
            .iter()
            .map(|&k| match self.regime {
                Regime::Bulk => bulk_center_scale(k, n, beta),
                Regime::Edge => edge_center_scale(k, n, beta),
            })
            .collect()
    }
}

fn gap_exponents(indices: &[usize], n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let ln_n = (n as f64).ln();
    indices
        .windows(2)
        .map(|w| {
            if w[1] <= w[0] {
                Err(Error::InvalidArgument("indices must be strictly increasing".into()))
            } else if w[1] - w[0] == 1 {
                // A unit gap has exponent 0, outside (0, 1].
                Err(Error::InvalidArgument(format!(
                    "indices {} and {} are adjacent; gap exponent would be 0",
                    w[0], w[1]
                )))
            } else {
                Ok((((w[1] - w[0]) as f64).ln() / ln_n).min(1.0))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationVector {
    pub x: Vec<f64>,
    pub trial: u64,
}

/// Normalizes already-extracted eigenvalues, one per center/scale pair.
pub fn normalize_values(values: &[f64], cs: &[CenterScale], trial: u64) -> Result<FluctuationVector> {
    if values.len() != cs.len() {
        return Err(Error::Shape(format!(
            "{} values for {} normalizations",
            values.len(),
            cs.len()
        )));
    }
    let x: Vec<f64> = values.iter().zip(cs).map(|(v, c)| c.normalize(*v)).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("non-finite fluctuation coordinate".into()));
    }
    Ok(FluctuationVector { x, trial })
}

fn normalize(spectrum: &SpectrumSample, spec: &IndexSpec, beta: Beta) -> Result<FluctuationVector> {
    let n = spectrum.len();
    let pos = spec.positions(n)?;
    let cs = spec.center_scales(n, beta)?;
    let values: Vec<f64> = pos.iter().map(|&p| spectrum.values()[p]).collect();
    normalize_values(&values, &cs, spectrum.trial)
}

/// `X_i = (x_{k_i} - s_i√(2n)) / √(log n / (2β(1-s_i²)n))`, `s_i = G⁻¹(k_i/n)`.
pub fn normalize_bulk(
    spectrum: &SpectrumSample,
    spec: &IndexSpec,
    beta: Beta,
) -> Result<FluctuationVector> {
    if spec.regime != Regime::Bulk {
        return Err(Error::InvalidArgument("index spec is not in the bulk regime".into()));
    }
    normalize(spectrum, spec, beta)
}

/// Edge normalization of `x_{n-k_i}`; see [`edge_center_scale`].
pub fn normalize_edge(
    spectrum: &SpectrumSample,
    spec: &IndexSpec,
    beta: Beta,
) -> Result<FluctuationVector> {
    if spec.regime != Regime::Edge {
        return Err(Error::InvalidArgument("index spec is not in the edge regime".into()));
    }
    normalize(spectrum, spec, beta)
}

/// Symmetric correlation-type matrix stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CovarianceMatrix(pub Vec<Vec<f64>>);

impl CovarianceMatrix {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.0
    }
}

fn predicted(spec: &IndexSpec, gap_weight: f64) -> CovarianceMatrix {
    let m = spec.m();
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        rows[i][i] = 1.0;
        for j in (i + 1)..m {
            let max_theta = spec.thetas[i..j].iter().fold(0.0f64, |a, &t| a.max(t));
            let v = (1.0 - gap_weight * max_theta).clamp(0.0, 1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    CovarianceMatrix(rows)
}

/// `Λ_{ij} = 1 - max{θ_k : i ≤ k < j}` for `i < j`, unit diagonal.
pub fn predicted_cov_bulk(spec: &IndexSpec) -> Result<CovarianceMatrix> {
    if spec.regime != Regime::Bulk {
        return Err(Error::InvalidArgument("index spec is not in the bulk regime".into()));
    }
    spec.validate()?;
    Ok(predicted(spec, 1.0))
}

/// `Λ_{ij} = 1 - (1/γ) max{θ_k : i ≤ k < j}` for `i < j`, unit diagonal.
pub fn predicted_cov_edge(spec: &IndexSpec) -> Result<CovarianceMatrix> {
    if spec.regime != Regime::Edge {
        return Err(Error::InvalidArgument("index spec is not in the edge regime".into()));
    }
    spec.validate()?;
    let gamma = spec.gamma.expect("validated edge spec carries gamma");
    Ok(predicted(spec, 1.0 / gamma))
}

pub fn predicted_cov(spec: &IndexSpec) -> Result<CovarianceMatrix> {
    match spec.regime {
        Regime::Bulk => predicted_cov_bulk(spec),
        Regime::Edge => predicted_cov_edge(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EnsembleKind, EnsembleSpec};

    fn synthetic(values: Vec<f64>) -> SpectrumSample {
        let spec = EnsembleSpec::new(EnsembleKind::Goe, values.len(), 0).unwrap();
        SpectrumSample::new(values, spec, 3).unwrap()
    }

    fn spectrum_with(n: usize, pos: usize, value: f64) -> SpectrumSample {
        // Strictly increasing filler with `value` at `pos`.
        let mut v: Vec<f64> = (0..n).map(|i| (i as f64 - pos as f64) * 1e-3 + value).collect();
        v[pos] = value;
        synthetic(v)
    }

    #[test]
    fn bulk_zero_and_unit_shift() {
        let n = 100;
        let spec = IndexSpec::bulk(vec![37], vec![]).unwrap();
        let cs = bulk_center_scale(37, n, Beta::One).unwrap();
        let fv = normalize_bulk(&spectrum_with(n, 36, cs.center), &spec, Beta::One).unwrap();
        assert!(fv.x[0].abs() < 1e-12);
        assert_eq!(fv.trial, 3);
        let fv = normalize_bulk(&spectrum_with(n, 36, cs.center + cs.scale), &spec, Beta::One)
            .unwrap();
        assert!((fv.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edge_zero_and_beta_ratio() {
        let n = 200;
        let spec = IndexSpec::edge(vec![12], vec![], 0.5).unwrap();
        let cs = edge_center_scale(12, n, Beta::One).unwrap();
        let s = spectrum_with(n, n - 12 - 1, cs.center);
        let fv = normalize_edge(&s, &spec, Beta::One).unwrap();
        assert!(fv.x[0].abs() < 1e-12);

        let s = spectrum_with(n, n - 12 - 1, cs.center + 0.3);
        let one = normalize_edge(&s, &spec, Beta::One).unwrap();
        let four = normalize_edge(&s, &spec, Beta::Four).unwrap();
        assert!((four.x[0] / one.x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn regime_mismatch_and_range_errors() {
        let s = synthetic((0..10).map(|i| i as f64).collect());
        let bulk = IndexSpec::bulk(vec![5], vec![]).unwrap();
        let edge = IndexSpec::edge(vec![3], vec![], 0.5).unwrap();
        assert!(normalize_edge(&s, &bulk, Beta::One).is_err());
        assert!(normalize_bulk(&s, &edge, Beta::One).is_err());
        let far = IndexSpec::bulk(vec![11], vec![]).unwrap();
        assert!(normalize_bulk(&s, &far, Beta::One).is_err());
    }

    #[test]
    fn bulk_covariance_examples() {
        let c = predicted_cov_bulk(&IndexSpec::bulk(vec![1, 50], vec![1.0]).unwrap()).unwrap();
        assert_eq!(c.get(0, 1), 0.0);
        let c = predicted_cov_bulk(&IndexSpec::bulk(vec![1, 50], vec![0.5]).unwrap()).unwrap();
        assert_eq!(c.get(0, 1), 0.5);
        let c = predicted_cov_bulk(&IndexSpec::bulk(vec![1, 5, 50], vec![0.3, 0.7]).unwrap())
            .unwrap();
        assert!((c.get(0, 1) - 0.7).abs() < 1e-15);
        assert!((c.get(0, 2) - 0.3).abs() < 1e-15);
        assert!((c.get(1, 2) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn edge_covariance_examples() {
        let c = predicted_cov_edge(&IndexSpec::edge(vec![10, 20], vec![0.4], 0.8).unwrap())
            .unwrap();
        assert!((c.get(0, 1) - 0.5).abs() < 1e-15);
        let near = predicted_cov_edge(
            &IndexSpec::edge(vec![10, 20], vec![0.8 - 1e-12], 0.8).unwrap(),
        )
        .unwrap();
        assert!(near.get(0, 1) < 1e-10);
        let c = predicted_cov_edge(
            &IndexSpec::edge(vec![10, 20, 40], vec![0.3, 0.6], 0.9).unwrap(),
        )
        .unwrap();
        assert!((c.get(0, 1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.get(0, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.get(1, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert!(IndexSpec::edge(vec![10, 20], vec![0.9], 0.8).is_err());
    }

    #[test]
    fn thetas_from_indices() {
        let n = 1000;
        let s = IndexSpec::bulk_from_indices(vec![500, 531], n).unwrap();
        assert!((s.thetas[0] - 31f64.ln() / 1000f64.ln()).abs() < 1e-15);
        assert!(IndexSpec::bulk_from_indices(vec![500, 501], n).is_err());
        let e = IndexSpec::edge_from_indices(vec![63, 100], n).unwrap();
        assert!((e.gamma.unwrap() - 63f64.ln() / 1000f64.ln()).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn predicted_cov_is_valid_and_monotone(
            thetas in proptest::collection::vec(0.01f64..1.0, 1..6),
            bump in 0usize..6,
            delta in 0.0f64..0.5,
        ) {
            let m = thetas.len() + 1;
            let idx: Vec<usize> = (1..=m).map(|i| 10 * i).collect();
            let base = predicted_cov_bulk(&IndexSpec::bulk(idx.clone(), thetas.clone()).unwrap()).unwrap();
            for i in 0..m {
                proptest::prop_assert_eq!(base.get(i, i), 1.0);
                for j in 0..m {
                    proptest::prop_assert_eq!(base.get(i, j), base.get(j, i));
                    proptest::prop_assert!((0.0..=1.0).contains(&base.get(i, j)));
                }
            }
            let mut larger = thetas.clone();
            let b = bump % larger.len();
            larger[b] = (larger[b] + delta).min(1.0);
            let bigger = predicted_cov_bulk(&IndexSpec::bulk(idx, larger).unwrap()).unwrap();
            for i in 0..m {
                for j in 0..m {
                    proptest::prop_assert!(bigger.get(i, j) <= base.get(i, j));
                }
            }
        }

        #[test]
        fn normalization_is_affine(shift in -5.0f64..5.0, k in 20usize..80) {
            let n = 100;
            let spec = IndexSpec::bulk(vec![k], vec![]).unwrap();
            let cs = bulk_center_scale(k, n, Beta::Two).unwrap();
            let s = spectrum_with(n, k - 1, cs.center + shift * cs.scale);
            let fv = normalize_bulk(&s, &spec, Beta::Two).unwrap();
            proptest::prop_assert!((fv.x[0] - shift).abs() < 1e-9);
        }
    }
}

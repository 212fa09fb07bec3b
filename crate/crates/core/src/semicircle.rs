//! Semicircle density, its distribution function `G` on `[-1, 1]`, and the
//! centering/scaling constants for bulk and edge eigenvalues.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::ensembles::Beta;
use crate::error::{Error, Result};
use crate::stats::ks_one_sample;

/// Density of the semicircle law with variance parameter `sigma`, supported
/// on `[-2σ, 2σ]`.
pub fn semicircle_density(x: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let r2 = 4.0 * sigma * sigma;
    if x * x >= r2 {
        return Ok(0.0);
    }
    Ok((r2 - x * x).sqrt() / (2.0 * PI * sigma * sigma))
}

/// `G(t) = (2/π) ∫_{-1}^{t} √(1-x²) dx`, in closed form.
pub fn g_cdf(t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("G is defined on [-1, 1], got {t}")));
    }
    let v = (t * (1.0 - t * t).sqrt() + t.asin() + PI / 2.0) / PI;
    Ok(v.clamp(0.0, 1.0))
}

/// Sup-distance between the empirical distribution of `spectrum / √(2n)`
/// and `G`, with `n = spectrum.len()`.
pub fn semicircle_distance(spectrum: &[f64]) -> Result<f64> {
    if spectrum.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let r = (2.0 * spectrum.len() as f64).sqrt();
    let scaled: Vec<f64> = spectrum.iter().map(|x| x / r).collect();
    ks_one_sample(&scaled, |t| {
        if t <= -1.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            g_cdf(t).expect("t lies in (-1, 1)")
        }
    })
}

fn g_density(t: f64) -> f64 {
    2.0 / PI * (1.0 - t * t).max(0.0).sqrt()
}

/// Inverse of [`g_cdf`]: safeguarded Newton inside a shrinking bracket.
pub fn g_inv(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("G⁻¹ is defined on [0, 1], got {q}")));
    }
    if q == 0.0 {
        return Ok(-1.0);
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    // Start from the first-order inversion of the symmetric part.
    let mut t = (PI * (q - 0.5) / 2.0).clamp(-0.99, 0.99);
    for _ in 0..200 {
        let f = g_cdf(t)? - q;
        if f.abs() <= 1e-15 {
            return Ok(t);
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = g_density(t);
        let newton = t - f / d;
        t = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON {
            break;
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Bulk,
    Edge,
}

/// Affine normalization `X = (x - center) / scale` for one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterScale {
    pub center: f64,
    pub scale: f64,
    pub regime: Regime,
    pub beta: Beta,
    /// Index in the regime's own convention: the eigenvalue index `k` in the
    /// bulk, the distance `k` from the top (eigenvalue `n - k`) at the edge.
    pub k: usize,
    pub n: usize,
    /// Set at the edge when `k < 10`, far from the asymptotic regime.
    pub small_k: bool,
}

impl CenterScale {
    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.center) / self.scale
    }
}

/// Smallest and largest admissible `k/n` in the bulk.
pub const BULK_RATIO_GUARD: f64 = 1e-6;

/// Bulk eigenvalue `x_k` (1-based): center `t√(2n)` with `t = G⁻¹(k/n)`,
/// scale `√(log n / (2β(1-t²)n))`.
pub fn bulk_center_scale(k: usize, n: usize, beta: Beta) -> Result<CenterScale> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "bulk index k={k} invalid for n={n}"
        )));
    }
    let ratio = k as f64 / n as f64;
    if !(BULK_RATIO_GUARD..=1.0 - BULK_RATIO_GUARD).contains(&ratio) {
        return Err(Error::Domain(format!(
            "k/n = {ratio} too close to the spectral edge for bulk scaling"
        )));
    }
    let t = g_inv(ratio)?;
    let one_minus = 1.0 - t * t;
    if one_minus <= 1e-12 {
        return Err(Error::Domain(format!("G⁻¹(k/n) = {t} is at the edge")));
    }
    let nf = n as f64;
    Ok(CenterScale {
        center: t * (2.0 * nf).sqrt(),
        scale: (nf.ln() / (2.0 * beta.value() * one_minus * nf)).sqrt(),
        regime: Regime::Bulk,
        beta,
        k,
        n,
        small_k: false,
    })
}

/// Edge eigenvalue `x_{n-k}` (1-based): center
/// `√(2n)(1 - (3πk/(4√2 n))^{2/3})`, scale
/// `((1/12π)^{2/3} · 2 log k / (β n^{1/3} k^{2/3}))^{1/2}`.
pub fn edge_center_scale(k: usize, n: usize, beta: Beta) -> Result<CenterScale> {
    if k >= n {
        return Err(Error::InvalidArgument(format!(
            "edge index k={k} must be below n={n}"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "edge index k={k} gives a zero scale; need k >= 2"
        )));
    }
    let (kf, nf) = (k as f64, n as f64);
    let center = (2.0 * nf).sqrt() * (1.0 - (3.0 * PI * kf / (4.0 * SQRT_2 * nf)).powf(2.0 / 3.0));
    let var = (1.0 / (12.0 * PI)).powf(2.0 / 3.0) * 2.0 * kf.ln()
        / (beta.value() * nf.cbrt() * kf.powf(2.0 / 3.0));
    Ok(CenterScale {
        center,
        scale: var.sqrt(),
        regime: Regime::Edge,
        beta,
        k,
        n,
        small_k: k < 10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Gauss–Legendre oracle for the defining integral of G,
    /// after the substitution x = sin θ that removes the endpoint singularity.
    fn g_quadrature(t: f64) -> f64 {
        let (a, b) = (-PI / 2.0, t.asin());
        let panels = 200;
        let h = (b - a) / panels as f64;
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let mut s = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in nodes {
                let th = mid + 0.5 * h * x;
                s += 0.5 * h * w * th.cos().powi(2);
            }
        }
        2.0 / PI * s
    }

    #[test]
    fn semicircle_distance_of_midpoint_quantiles() {
        let n = 400;
        let r = (2.0 * n as f64).sqrt();
        let spectrum: Vec<f64> = (0..n)
            .map(|i| r * g_inv((i as f64 + 0.5) / n as f64).unwrap())
            .collect();
        let d = semicircle_distance(&spectrum).unwrap();
        assert!((d - 0.5 / n as f64).abs() < 1e-12, "{d}");
        assert!(semicircle_distance(&[]).is_err());
    }

    #[test]
    fn density_values() {
        assert!((semicircle_density(0.0, 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(semicircle_density(2.5, 1.0).unwrap(), 0.0);
        assert!(semicircle_density(0.0, 0.0).is_err());
    }

    #[test]
    fn density_integrates_to_one() {
        // ∫ρ₁ over [-2, 2] with x = 2 sin θ.
        let n = 4000;
        let h = PI / n as f64;
        let s: f64 = (0..n)
            .map(|i| {
                let th = -PI / 2.0 + (i as f64 + 0.5) * h;
                semicircle_density(2.0 * th.sin(), 1.0).unwrap() * 2.0 * th.cos() * h
            })
            .sum();
        assert!((s - 1.0).abs() < 1e-10, "{s}");
    }

    #[test]
    fn g_values() {
        assert!((g_cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(g_cdf(1.0).unwrap(), 1.0);
        assert_eq!(g_cdf(-1.0).unwrap(), 0.0);
        let oracle = g_quadrature(0.5);
        assert!((oracle - 0.804_498_5).abs() < 1e-6, "oracle {oracle}");
        assert!((g_cdf(0.5).unwrap() - oracle).abs() < 1e-12);
        assert!(matches!(g_cdf(1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn g_closed_form_matches_quadrature() {
        for t in [-0.95, -0.4, 0.1, 0.77, 0.999] {
            assert!((g_cdf(t).unwrap() - g_quadrature(t)).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn g_inv_values() {
        assert_eq!(g_inv(0.5).unwrap(), 0.0);
        assert_eq!(g_inv(1.0).unwrap(), 1.0);
        assert_eq!(g_inv(0.0).unwrap(), -1.0);
        let t = g_inv(g_cdf(0.3).unwrap()).unwrap();
        assert!((t - 0.3).abs() < 1e-12);
        assert!(matches!(g_inv(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn g_inv_residual_and_roundtrip_grid() {
        let mut prev = -1.0;
        for i in 1..10_000 {
            let t = -1.0 + 2.0 * i as f64 / 10_000.0;
            let g = g_cdf(t).unwrap();
            assert!(g > prev);
            prev = g;
            let back = g_inv(g).unwrap();
            assert!((back - t).abs() <= 1e-12, "t={t} back={back}");
            assert!((g_cdf(back).unwrap() - g).abs() <= 1e-13);
        }
    }

    #[test]
    fn upper_tail_matches_edge_expectation() {
        let n = 1000.0;
        for gap in [1e-3, 5e-4, 1e-4] {
            let t = 1.0 - gap;
            let exact = n * (1.0 - g_cdf(t).unwrap());
            let lead = 4.0 * SQRT_2 / (3.0 * PI) * n * gap.powf(1.5);
            assert!((exact / lead - 1.0).abs() < 0.02, "gap {gap}");
        }
    }

    #[test]
    fn bulk_examples() {
        let cs = bulk_center_scale(50, 100, Beta::One).unwrap();
        assert_eq!(cs.center, 0.0);
        assert!((cs.scale - (100f64.ln() / 200.0).sqrt()).abs() < 1e-15);
        assert!((cs.scale - 0.1517).abs() < 1e-4);
        for n in [10, 1000, 4096] {
            assert_eq!(bulk_center_scale(n / 2, n, Beta::Two).unwrap().center, 0.0);
        }
        let a = bulk_center_scale(30, 100, Beta::One).unwrap();
        let b = bulk_center_scale(30, 100, Beta::Four).unwrap();
        assert!((b.scale - a.scale / 2.0).abs() < 1e-15);
        assert!(bulk_center_scale(100, 100, Beta::One).is_err());
        assert!(bulk_center_scale(0, 100, Beta::One).is_err());
    }

    #[test]
    fn edge_examples() {
        let cs = edge_center_scale(10, 100, Beta::One).unwrap();
        assert!((cs.center - 9.860).abs() < 1e-3, "{}", cs.center);
        assert!((cs.scale - 0.138).abs() < 1e-3, "{}", cs.scale);
        assert!(!cs.small_k);
        assert!(edge_center_scale(5, 100, Beta::One).unwrap().small_k);
        for k in 2..100 {
            assert!(edge_center_scale(k, 100, Beta::Two).unwrap().center < 200f64.sqrt());
        }
        let a = edge_center_scale(20, 500, Beta::One).unwrap();
        let b = edge_center_scale(20, 500, Beta::Four).unwrap();
        assert!((b.scale / a.scale - 0.5).abs() < 1e-15);
        assert!(edge_center_scale(100, 100, Beta::One).is_err());
    }
}

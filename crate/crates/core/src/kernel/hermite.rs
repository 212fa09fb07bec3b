//! Orthonormal Hermite functions `ψ_i(x) = φ_i(x) e^{-x²/2}`.
//!
//! Values come from the three-term recurrence
//! `ψ_{i+1} = x √(2/(i+1)) ψ_i - √(i/(i+1)) ψ_{i-1}`, started at
//! `ψ_0 = π^{-1/4}` without the Gaussian factor. The running values are
//! rescaled whenever they grow past `2^500`, and the Gaussian factor and
//! accumulated scale are applied once at the end in log space, so neither
//! overflow nor premature underflow occurs for large `i` or `|x|`.

use crate::error::{Error, Result};

const PI_QUARTER_INV: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
const RESCALE_AT: f64 = 3.273_390_607_896_142e150; // 2^500
const RESCALE_LN: f64 = 346.573_590_279_972_65; // 500 ln 2

/// Largest degree for which [`hermite_phi`] is supported.
pub const MAX_DEGREE: usize = 10_000;

/// Runs the scaled recurrence up to degree `last` and calls `visit(i, ψ_i(x))`
/// for every `i ≥ first`.
fn run(x: f64, first: usize, last: usize, mut visit: impl FnMut(usize, f64)) {
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0f64;
    let mut cur = PI_QUARTER_INV;
    let emit = |i: usize, v: f64, ls: f64, visit: &mut dyn FnMut(usize, f64)| {
        if i >= first {
            let out = if v == 0.0 {
                0.0
            } else {
                v.signum() * (v.abs().ln() + ls).exp()
            };
            visit(i, out);
        }
    };
    emit(0, cur, log_scale, &mut visit);
    for i in 0..last {
        let fi = i as f64;
        let next = x * (2.0 / (fi + 1.0)).sqrt() * cur - (fi / (fi + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += RESCALE_LN;
        }
        emit(i + 1, cur, log_scale, &mut visit);
    }
}

/// `ψ_i(x)` for a single degree.
pub fn psi(i: usize, x: f64) -> f64 {
    let mut out = 0.0;
    run(x, i, i, |_, v| out = v);
    out
}

/// `[ψ_0(x), …, ψ_{count-1}(x)]`.
pub fn psi_all(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        run(x, 0, count - 1, |_, v| out.push(v));
    }
    out
}

/// `(ψ_{n-1}(x), ψ_n(x), ψ_{n+1}(x))` for `n ≥ 1`.
pub fn psi_triple(n: usize, x: f64) -> (f64, f64, f64) {
    debug_assert!(n >= 1);
    let mut v = [0.0; 3];
    run(x, n - 1, n + 1, |i, val| v[i + 1 - n] = val);
    (v[0], v[1], v[2])
}

/// Orthonormal Hermite polynomial `φ_i(x)`, normalized so that
/// `∫ φ_i φ_j e^{-x²} dx = δ_ij`.
pub fn hermite_phi(i: usize, x: f64) -> Result<f64> {
    if i > MAX_DEGREE {
        return Err(Error::NumericalRange(format!(
            "degree {i} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::NumericalRange(format!("non-finite argument {x}")));
    }
    let w = psi(i, x);
    let v = w * (0.5 * x * x).exp();
    let reach = (2.0 * i as f64).sqrt() + 10.0;
    if !v.is_finite() || (w == 0.0 && x.abs() > reach) {
        return Err(Error::NumericalRange(format!(
            "φ_{i}({x}) is not representable through the weighted recurrence"
        )));
    }
    Ok(v)
}

/// The first `n` Hermite functions, the basis spanned by the GUE kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    pub n: usize,
}

impl HermiteBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("basis needs at least one function".into()));
        }
        Ok(Self { n })
    }

    /// `[ψ_0(x), …, ψ_{n-1}(x)]`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        psi_all(self.n, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::quadrature::gauss_hermite;

    #[test]
    fn phi_zero_is_constant() {
        for x in [-3.0, 0.0, 0.5, 7.0] {
            assert!((hermite_phi(0, x).unwrap() - 0.751_125_544_464_942_5).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_one_at_one() {
        // H_1 = 2x, ∫H_1² e^{-x²} = 2√π, so φ_1(1) = 2/√(2√π) = √2 π^{-1/4}.
        let expected = 2.0 / (2.0 * std::f64::consts::PI.sqrt()).sqrt();
        assert!((hermite_phi(1, 1.0).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 1.0622).abs() < 1e-4);
    }

    #[test]
    fn matches_explicit_polynomials() {
        // φ_k = H_k / √(2^k k! √π) with physicists' H_k.
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for x in [-1.3f64, 0.2, 2.7] {
            let h = [
                1.0,
                2.0 * x,
                4.0 * x * x - 2.0,
                8.0 * x.powi(3) - 12.0 * x,
                16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            ];
            let mut fact = 1.0;
            for (k, hk) in h.iter().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                let norm = (2f64.powi(k as i32) * fact * sqrt_pi).sqrt();
                let got = hermite_phi(k, x).unwrap();
                assert!((got - hk / norm).abs() < 1e-13 * (1.0 + got.abs()), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn orthonormal_under_gauss_hermite() {
        let (nodes, weights) = gauss_hermite(64);
        for i in 0..30 {
            for j in 0..30 {
                let s: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&x, &w)| w * hermite_phi(i, x).unwrap() * hermite_phi(j, x).unwrap())
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((s - target).abs() < 1e-8, "({i},{j}) -> {s}");
            }
        }
        let s: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * hermite_phi(3, x).unwrap() * hermite_phi(5, x).unwrap())
            .sum();
        assert!(s.abs() < 1e-10);
    }

    #[test]
    fn no_overflow_at_high_degree() {
        let n = 10_000;
        let edge = (2.0 * n as f64).sqrt();
        for x in [0.0, 0.5 * edge, edge, edge + 10.0, 180.0] {
            let (a, b, c) = psi_triple(n, x);
            assert!(a.is_finite() && b.is_finite() && c.is_finite());
            assert!(b.abs() < 1.0);
        }
        // Deep in the oscillatory region the functions are not underflowed.
        assert!(psi(2000, 60.0).abs() > 1e-6 || psi(2001, 60.0).abs() > 1e-6);
        assert!(hermite_phi(10_001, 0.0).is_err());
        assert!(hermite_phi(0, 40.0).is_err());
    }

    #[test]
    fn triple_consistent_with_all() {
        let all = psi_all(40, 1.7);
        let (a, b, c) = psi_triple(38, 1.7);
        assert_eq!((a, b), (all[37], all[38]));
        assert_eq!(c, all[39]);
    }
}

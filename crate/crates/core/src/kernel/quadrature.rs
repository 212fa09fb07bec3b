//! Gauss–Legendre panel rules and adaptive integration.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `p`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(p: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; p];
    let mut w = vec![0.0; p];
    let m = p.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (p as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..p {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = p as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[p - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[p - 1 - i] = wi;
    }
    (x, w)
}

/// Nodes and weights of the `p`-point Gauss–Hermite rule for the weight
/// `e^{-x²}`, by Newton iteration on orthonormal Hermite functions.
pub fn gauss_hermite(p: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut x = vec![0.0; p];
    let mut w = vec![0.0; p];
    let m = p.div_ceil(2);
    let pf = p as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * pf + 1.0).sqrt() - 1.85575 * (2.0 * pf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * pf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0);
            for j in 0..p {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * pf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[p - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[p - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Composite rule: `order`-point Gauss–Legendre on equal panels of width at
/// most `max_width` covering `[a, b]`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, max_width: f64, order: usize) -> Self {
        let panels = (((b - a) / max_width).ceil() as usize).max(1);
        let h = (b - a) / panels as f64;
        let (gx, gw) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    /// Concatenation of several rules.
    pub fn concat(rules: impl IntoIterator<Item = PanelRule>) -> Self {
        let mut out = PanelRule {
            nodes: Vec::new(),
            weights: Vec::new(),
        };
        for r in rules {
            out.nodes.extend(r.nodes);
            out.weights.extend(r.weights);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Pairwise summation keeps the result independent of chunking and limits
/// rounding growth to `O(log N)`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const ADAPT_LOW: usize = 16;
const ADAPT_HIGH: usize = 24;
const MAX_DEPTH: usize = 30;

/// Adaptive integral of `f` over `[a, b]`.
///
/// The interval is first cut into panels of width at most `max_width`; each
/// panel is accepted when the 16- and 24-point rules agree to within its
/// share of `abs_tol`, and bisected otherwise.
pub fn integrate_adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    max_width: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(a < b) {
        return Ok(0.0);
    }
    let low = gauss_legendre(ADAPT_LOW);
    let high = gauss_legendre(ADAPT_HIGH);
    let panels = (((b - a) / max_width).ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let hi = if p + 1 == panels { b } else { lo + h };
        parts.push(panel(f, lo, hi, abs_tol * h / (b - a), &low, &high, 0)?);
    }
    Ok(pairwise_sum(&parts))
}

fn rule(f: &dyn Fn(f64) -> f64, a: f64, b: f64, r: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * r.0.iter().zip(&r.1).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
}

fn panel(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    low: &(Vec<f64>, Vec<f64>),
    high: &(Vec<f64>, Vec<f64>),
    depth: usize,
) -> Result<f64> {
    let ql = rule(f, a, b, low);
    let qh = rule(f, a, b, high);
    if !qh.is_finite() {
        return Err(Error::numerical(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    if (qh - ql).abs() <= tol.max(1e-15 * qh.abs()) {
        return Ok(qh);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::numerical(format!(
            "adaptive quadrature did not converge on [{a}, {b}]: 16/24-point estimates {ql} and {qh}"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(panel(f, a, m, tol * std::f64::consts::FRAC_1_SQRT_2, low, high, depth + 1)?
        + panel(f, m, b, tol * std::f64::consts::FRAC_1_SQRT_2, low, high, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Exact for degree 15.
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn hermite_rule_moments() {
        let (x, w) = gauss_hermite(40);
        let sqrt_pi = PI.sqrt();
        assert!((w.iter().sum::<f64>() - sqrt_pi).abs() < 1e-13);
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - sqrt_pi / 2.0).abs() < 1e-13);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn adaptive_gaussian() {
        let v = integrate_adaptive(&|x: f64| (-x * x).exp(), -10.0, 10.0, 2.0, 1e-12).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_refines_kinks() {
        let v = integrate_adaptive(&|x: f64| x.abs().sqrt(), -1.0, 1.0, 2.0, 1e-9).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn adaptive_reports_failure() {
        let err = integrate_adaptive(&|x: f64| 1.0 / x, 0.0, 1.0, 1.0, 1e-12).unwrap_err();
        assert!(err.is_numeric());
    }
}

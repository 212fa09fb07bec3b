//! GUE correlation kernel and counting statistics of its determinantal
//! point process.
//!
//! `K_n(x, y) = Σ_{i<n} ψ_i(x) ψ_i(y)` with orthonormal Hermite functions
//! `ψ_i`. Off the diagonal it is evaluated with the Christoffel–Darboux
//! form `√(n/2) (ψ_n(x)ψ_{n-1}(y) - ψ_{n-1}(x)ψ_n(y)) / (x - y)`, on the
//! diagonal with `n ψ_n² - √(n(n+1)) ψ_{n-1} ψ_{n+1}`.
//!
//! All integrals are truncated to `|x| ≤ √(2n) + 10`, beyond which the
//! kernel is below double precision.

mod cumulants;
mod hermite;
pub mod quadrature;

pub use cumulants::{
    counting_cumulants, cumulant_bound, cumulants_from_eigenvalues, cumulants_from_traces, recursion_coefficients,
    stirling2, CumulantReport, MAX_CUMULANT_ORDER,
};
pub use hermite::{hermite_phi, psi, psi_all, psi_triple, HermiteBasis, MAX_DEGREE};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::SymmetricMatrix;
use crate::spectra::symmetric_eigenvalues;
use quadrature::{integrate_adaptive, pairwise_sum, PanelRule};

/// Half-width of the truncated integration domain.
pub fn truncation_radius(n: usize) -> f64 {
    (2.0 * n as f64).sqrt() + 10.0
}

/// Panel width: half the local wavelength of `ψ_n`, capped at 2.
pub fn panel_width(n: usize) -> f64 {
    (std::f64::consts::PI / (2.0 * n as f64 + 1.0).sqrt()).min(2.0)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize("kernel size n must be at least 1".into()));
    }
    if n > MAX_DEGREE {
        return Err(Error::NumericalRange(format!(
            "kernel size {n} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `K_n(x, x)`.
pub fn kernel_diag(n: usize, x: f64) -> f64 {
    let (a, b, c) = psi_triple(n, x);
    let nf = n as f64;
    (nf * b * b - (nf * (nf + 1.0)).sqrt() * a * c).max(0.0)
}

/// `K_n(x, y)` by direct summation, `O(n)`.
pub fn kernel_direct(n: usize, x: f64, y: f64) -> f64 {
    let px = psi_all(n, x);
    let py = psi_all(n, y);
    pairwise_sum(&px.iter().zip(&py).map(|(a, b)| a * b).collect::<Vec<_>>())
}

// Below this separation (in units of 1/√(2n+1)) the Christoffel–Darboux
// quotient loses too many digits and the direct sum is used instead.
const CD_MIN_SEPARATION: f64 = 1e-3;

/// Precomputed `(x, ψ_{n-1}(x), ψ_n(x))`.
#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    lower: f64,
    upper: f64,
}

impl Node {
    fn new(n: usize, x: f64) -> Self {
        let (lower, upper, _) = psi_triple(n, x);
        Self { x, lower, upper }
    }
}

fn kernel_nodes(n: usize, a: &Node, b: &Node) -> f64 {
    let d = a.x - b.x;
    if d == 0.0 {
        return kernel_diag(n, a.x);
    }
    if d.abs() * (2.0 * n as f64 + 1.0).sqrt() < CD_MIN_SEPARATION {
        return kernel_direct(n, a.x, b.x);
    }
    (0.5 * n as f64).sqrt() * (a.upper * b.lower - a.lower * b.upper) / d
}

/// `K_n(x, y)`.
pub fn kernel_k(n: usize, x: f64, y: f64) -> Result<f64> {
    check_n(n)?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument("kernel arguments must be finite".into()));
    }
    // Evaluate with ordered arguments so that K(x, y) and K(y, x) are bitwise equal.
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    Ok(kernel_nodes(n, &Node::new(n, lo), &Node::new(n, hi)))
}

/// Absolute error target of [`expected_count`].
pub const EXPECTED_COUNT_TOL: f64 = 1e-9;

/// `E[#(I)] = ∫_I K_n(x, x) dx` by adaptive panel quadrature.
pub fn expected_count(n: usize, interval: Interval) -> Result<f64> {
    check_n(n)?;
    let r = truncation_radius(n);
    let Some((a, b)) = interval.clip(r) else {
        return Ok(0.0);
    };
    integrate_adaptive(
        &|x| kernel_diag(n, x),
        a,
        b,
        panel_width(n),
        EXPECTED_COUNT_TOL,
    )
}

fn rule_on(n: usize, intervals: &[Interval], width: f64, order: usize) -> PanelRule {
    let r = truncation_radius(n);
    PanelRule::concat(
        intervals
            .iter()
            .filter_map(|iv| iv.clip(r))
            .map(|(a, b)| PanelRule::new(a, b, width, order)),
    )
}

/// `Σ_a Σ_b w_a w_b K(x_a, y_b)²`, rows in parallel, summed in fixed order.
fn tensor_k2(n: usize, left: &PanelRule, right: &PanelRule) -> f64 {
    let ln: Vec<Node> = left.nodes.par_iter().map(|&x| Node::new(n, x)).collect();
    let rn: Vec<Node> = right.nodes.par_iter().map(|&x| Node::new(n, x)).collect();
    let rows: Vec<f64> = ln
        .par_iter()
        .zip(left.weights.par_iter())
        .map(|(a, wa)| {
            let terms: Vec<f64> = rn
                .iter()
                .zip(&right.weights)
                .map(|(b, wb)| {
                    let k = kernel_nodes(n, a, b);
                    wb * k * k
                })
                .collect();
            wa * pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows)
}

/// Relative error target of [`variance_count`].
pub const VARIANCE_REL_TOL: f64 = 1e-6;

/// `Var(#(I))` for the GUE, as `∫_I ∫_{ℝ∖I} K_n(x, y)² dy dx`.
///
/// This equals `∫_I K_n(x,x) dx - ∫_I∫_I K_n(x,y)² dx dy` because `K_n` is
/// the kernel of a projection; the complement form avoids cancelling two
/// terms of size `n`. Tensor 16- and 24-point panel rules are compared and
/// the panels halved until they agree.
pub fn variance_count(n: usize, interval: Interval) -> Result<f64> {
    check_n(n)?;
    let complement = interval.complement();
    let mut width = panel_width(n);
    let mut last = None;
    for _ in 0..4 {
        let low = tensor_k2(
            n,
            &rule_on(n, &[interval], width, 16),
            &rule_on(n, &complement, width, 16),
        );
        let high = tensor_k2(
            n,
            &rule_on(n, &[interval], width, 24),
            &rule_on(n, &complement, width, 24),
        );
        if (high - low).abs() <= 0.1 * VARIANCE_REL_TOL * high.abs().max(1e-12) {
            return Ok(if high <= 0.0 { 0.0 } else { high });
        }
        last = Some((low, high));
        width *= 0.5;
    }
    let (low, high) = last.unwrap_or_default();
    Err(Error::numerical(format!(
        "variance quadrature did not settle: {low} vs {high}"
    )))
}

/// `∫_I K_n(x,x) dx - ∫_I∫_I K_n(x,y)² dx dy` evaluated literally with a
/// fixed 24-point tensor rule. Independent route to [`variance_count`].
pub fn variance_count_direct(n: usize, interval: Interval) -> Result<f64> {
    check_n(n)?;
    let rule = rule_on(n, &[interval], panel_width(n), 24);
    let diag: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, w)| w * kernel_diag(n, x))
        .collect();
    Ok(pairwise_sum(&diag) - tensor_k2(n, &rule, &rule))
}

/// Band allowed around `[0, 1]` for the discretized operator's spectrum.
pub const OPERATOR_BAND: f64 = 1e-8;

/// Nyström discretization of `K_n` restricted to an interval:
/// `A_ab = √w_a K_n(x_a, x_b) √w_b` on a Gauss–Legendre panel rule.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    pub n: usize,
    pub interval: Interval,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: SymmetricMatrix,
    /// Ascending eigenvalues of `matrix`.
    pub eigenvalues: Vec<f64>,
}

impl KernelOperator {
    pub fn trace(&self) -> f64 {
        self.trace_power(1)
    }

    /// `Tr(A^l)` from the eigenvalues.
    pub fn trace_power(&self, l: u32) -> f64 {
        pairwise_sum(
            &self
                .eigenvalues
                .iter()
                .map(|m| m.powi(l as i32))
                .collect::<Vec<_>>(),
        )
    }
}

/// Builds the Nyström matrix with `order` Gauss–Legendre points per panel.
pub fn discretize_operator(n: usize, interval: Interval, order: usize) -> Result<KernelOperator> {
    check_n(n)?;
    if order < 16 {
        return Err(Error::InvalidArgument(format!(
            "quadrature order {order} below the minimum of 16"
        )));
    }
    let rule = rule_on(n, &[interval], panel_width(n), order);
    if rule.is_empty() {
        return Err(Error::InvalidArgument(
            "interval lies outside the kernel's support".into(),
        ));
    }
    let nodes: Vec<Node> = rule.nodes.par_iter().map(|&x| Node::new(n, x)).collect();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let m = nodes.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    sw[a] * kernel_nodes(n, &nodes[a], &nodes[b]) * sw[b]
                })
                .collect()
        })
        .collect();
    let matrix = SymmetricMatrix::from_row_major(m, rows.concat())?;
    let eigenvalues = symmetric_eigenvalues(&matrix)?;
    let (lo, hi) = (eigenvalues[0], eigenvalues[m - 1]);
    if lo < -OPERATOR_BAND || hi > 1.0 + OPERATOR_BAND {
        return Err(Error::Discretization(format!(
            "operator spectrum [{lo:e}, {hi}] leaves [0, 1]; raise the quadrature order"
        )));
    }
    Ok(KernelOperator {
        n,
        interval,
        nodes: rule.nodes,
        weights: rule.weights,
        matrix,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn k1_at_origin() {
        assert!((kernel_k(1, 0.0, 0.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kernel_symmetric_exactly() {
        for (x, y) in [(0.3, -1.2), (5.0, 4.9), (-2.0, 2.0)] {
            let a = kernel_k(17, x, y).unwrap();
            let b = kernel_k(17, y, x).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn christoffel_darboux_matches_direct_sum() {
        for n in [1, 2, 7, 20, 50] {
            for (x, y) in [(0.1, 0.7), (-3.0, 2.5), (1.0, 1.0 + 1e-5), (4.0, -0.2), (2.2, 2.2)] {
                let cd = kernel_k(n, x, y).unwrap();
                let direct = kernel_direct(n, x, y);
                let scale = kernel_direct(n, x, x).max(kernel_direct(n, y, y));
                assert!(
                    (cd - direct).abs() <= 1e-10 * scale,
                    "n={n} ({x},{y}): {cd} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn diagonal_integrates_to_n() {
        for n in [1, 5, 20] {
            let v = expected_count(n, Interval::whole_line()).unwrap();
            assert!((v - n as f64).abs() < 1e-8, "n={n}: {v}");
        }
    }

    #[test]
    fn expected_count_examples() {
        let v = expected_count(7, Interval::whole_line()).unwrap();
        assert!((v - 7.0).abs() < 1e-8);
        let v = expected_count(20, Interval::above(0.0).unwrap()).unwrap();
        assert!((v - 10.0).abs() < 1e-8);
    }

    #[test]
    fn expected_count_complement_sums_to_n() {
        let n = 30;
        for iv in [Interval::above(1.3).unwrap(), Interval::new(-2.0, 0.5).unwrap()] {
            let inside = expected_count(n, iv).unwrap();
            let outside: f64 = iv
                .complement()
                .into_iter()
                .map(|c| expected_count(n, c).unwrap())
                .sum();
            assert!((inside + outside - n as f64).abs() < 2e-8);
        }
    }

    #[test]
    fn variance_small_cases() {
        let v = variance_count(1, Interval::whole_line()).unwrap();
        assert!(v.abs() < 1e-8);
        let v = variance_count(1, Interval::above(0.0).unwrap()).unwrap();
        assert!((v - 0.25).abs() < 1e-6, "{v}");
    }

    #[test]
    fn variance_routes_agree() {
        for (n, iv) in [
            (10, Interval::above(0.4).unwrap()),
            (25, Interval::new(-1.0, 2.0).unwrap()),
        ] {
            let a = variance_count(n, iv).unwrap();
            let b = variance_count_direct(n, iv).unwrap();
            assert!((a - b).abs() <= 1e-8 * n as f64, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn variance_complement_symmetry() {
        let n = 40;
        let iv = Interval::above(-1.5).unwrap();
        let comp = Interval::below(-1.5).unwrap();
        let a = variance_count(n, iv).unwrap();
        let b = variance_count(n, comp).unwrap();
        assert!((a - b).abs() <= 1e-6 * a);
    }

    #[test]
    fn nystrom_single_particle() {
        let op = discretize_operator(1, Interval::new(-8.0, 8.0).unwrap(), 64).unwrap();
        assert!((op.trace() - 1.0).abs() < 1e-10);
        let exp = expected_count(1, Interval::new(-8.0, 8.0).unwrap()).unwrap();
        assert!((op.trace() - exp).abs() < 1e-6);
    }

    #[test]
    fn nystrom_spectrum_in_band() {
        for n in [1, 5, 20] {
            let iv = Interval::new(-1.0, 2.5).unwrap();
            let op = discretize_operator(n, iv, 16).unwrap();
            assert!(op.eigenvalues[0] >= -OPERATOR_BAND);
            assert!(*op.eigenvalues.last().unwrap() <= 1.0 + OPERATOR_BAND);
            let exp = expected_count(n, iv).unwrap();
            assert!((op.trace() - exp).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn nystrom_order_doubling_is_stable() {
        let iv = Interval::new(-2.0, 1.0).unwrap();
        let a = discretize_operator(10, iv, 16).unwrap();
        let b = discretize_operator(10, iv, 32).unwrap();
        let fa = a.matrix.as_slice().iter().map(|v| v * v).sum::<f64>();
        let fb = b.matrix.as_slice().iter().map(|v| v * v).sum::<f64>();
        assert!((fa - fb).abs() < 1e-8, "{fa} vs {fb}");
        assert!((a.trace_power(2) - fb).abs() < 1e-8);
    }

    #[test]
    fn nystrom_rejects_low_order() {
        assert!(discretize_operator(3, Interval::whole_line(), 8).is_err());
    }
}

//! Cumulants of a determinantal counting statistic from operator traces.
//!
//! For a trace-class `0 ≤ A ≤ 1` the count `ν` satisfies
//! `E[(1+w)^ν] = det(I + wA)`, so its factorial cumulants are
//! `T_k = (-1)^{k-1} (k-1)! Tr(A^k)`. Substituting `w = e^s - 1` and
//! expanding `(e^s - 1)^k / k! = Σ_l S(l,k) s^l / l!` gives
//!
//! `C_l = Σ_{k≤l} S(l,k) (-1)^{k-1} (k-1)! Tr(A^k)`
//!
//! with `S` the Stirling numbers of the second kind. Equivalently
//! `C_l = (-1)^l (l-1)! Tr(A - A^l) + Σ_{2≤s<l} α_{s,l} C_s`; the `α_{s,l}`
//! are obtained here by matching coefficients of `Tr(A^j)` in the two forms
//! (`α_{2,3} = 3`, `α_{2,4} = -11`, `α_{3,4} = 6`).

use serde::{Deserialize, Serialize};

use super::KernelOperator;
use crate::error::{Error, Result};

pub const MAX_CUMULANT_ORDER: usize = 4;

/// Stirling number of the second kind `S(l, k)`.
pub fn stirling2(l: usize, k: usize) -> i64 {
    let mut row = vec![0i64; l + 1];
    row[0] = 1;
    for i in 1..=l {
        for j in (1..=i).rev() {
            row[j] = j as i64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row.get(k).copied().unwrap_or(0)
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Coefficients of `C_l` in the basis `Tr(A^j)`, `j = 1..=l` (index `j-1`).
fn trace_coefficients(l: usize) -> Vec<f64> {
    (1..=l)
        .map(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            (stirling2(l, k) * sign * factorial(k - 1)) as f64
        })
        .collect()
}

/// `α_{s,l}` for `s = 2..l-1`, as `(s, α)` pairs.
pub fn recursion_coefficients(l: usize) -> Result<Vec<(usize, f64)>> {
    if !(2..=MAX_CUMULANT_ORDER).contains(&l) {
        return Err(Error::Unsupported(format!(
            "cumulant order {l}; supported orders are 2..={MAX_CUMULANT_ORDER}"
        )));
    }
    // residual = C_l - (-1)^l (l-1)! (Tr A - Tr A^l), in the trace basis.
    let mut residual = trace_coefficients(l);
    let lead = if l % 2 == 0 { 1.0 } else { -1.0 } * factorial(l - 1) as f64;
    residual[0] -= lead;
    residual[l - 1] += lead;
    let mut alphas = Vec::new();
    for s in (2..l).rev() {
        let cs = trace_coefficients(s);
        let alpha = residual[s - 1] / cs[s - 1];
        for (r, c) in residual.iter_mut().zip(&cs) {
            *r -= alpha * c;
        }
        alphas.push((s, alpha));
    }
    if residual.iter().any(|r| r.abs() > 1e-12) {
        return Err(Error::numerical(format!(
            "cumulant recursion of order {l} does not close: residual {residual:?}"
        )));
    }
    alphas.reverse();
    Ok(alphas)
}

/// Cumulants `C_1..C_{len}` from traces `Tr(A^1)..Tr(A^{len})`, by the
/// Stirling expansion.
pub fn cumulants_from_traces(traces: &[f64]) -> Vec<f64> {
    (1..=traces.len())
        .map(|l| {
            trace_coefficients(l)
                .iter()
                .zip(traces)
                .map(|(c, t)| c * t)
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantReport {
    /// `Tr(A^l)` for `l = 1..=lmax`.
    pub traces: Vec<f64>,
    /// `C_l` for `l = 1..=lmax`.
    pub cumulants: Vec<f64>,
}

impl CumulantReport {
    /// `C_l`, if computed.
    pub fn c(&self, l: usize) -> Option<f64> {
        l.checked_sub(1).and_then(|i| self.cumulants.get(i)).copied()
    }

    pub fn c2(&self) -> f64 {
        self.cumulants[1]
    }

    pub fn c3(&self) -> Option<f64> {
        self.c(3)
    }

    pub fn c4(&self) -> Option<f64> {
        self.c(4)
    }

    /// `|C_l| / C_2^{l/2}`, the `l`-th cumulant of the standardized count.
    pub fn normalized(&self, l: usize) -> Option<f64> {
        self.c(l).map(|c| c.abs() / self.c2().powf(l as f64 / 2.0))
    }
}

/// Cumulants of the count from operator eigenvalues, via the recursion
/// `C_l = (-1)^l (l-1)! Tr(A - A^l) + Σ α_{s,l} C_s`.
pub fn cumulants_from_eigenvalues(eigenvalues: &[f64], lmax: usize) -> Result<CumulantReport> {
    if !(2..=MAX_CUMULANT_ORDER).contains(&lmax) {
        return Err(Error::Unsupported(format!(
            "lmax = {lmax}; supported values are 2..={MAX_CUMULANT_ORDER}"
        )));
    }
    let traces: Vec<f64> = (1..=lmax as i32)
        .map(|l| {
            super::quadrature::pairwise_sum(
                &eigenvalues.iter().map(|m| m.powi(l)).collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut cumulants = vec![traces[0], traces[0] - traces[1]];
    for l in 3..=lmax {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let mut c = sign * factorial(l - 1) as f64 * (traces[0] - traces[l - 1]);
        for (s, alpha) in recursion_coefficients(l)? {
            c += alpha * cumulants[s - 1];
        }
        cumulants.push(c);
    }
    Ok(CumulantReport { traces, cumulants })
}

pub fn counting_cumulants(op: &KernelOperator, lmax: usize) -> Result<CumulantReport> {
    cumulants_from_eigenvalues(&op.eigenvalues, lmax)
}

/// Upper bound on `|C_l|` implied by `0 ≤ Tr(A - A^l) ≤ (l-1) C_2` and the
/// recursion: `B_2 = C_2`, `B_l = (l-1)! (l-1) C_2 + Σ |α_{s,l}| B_s`.
pub fn cumulant_bound(l: usize, c2: f64) -> Result<f64> {
    let mut bounds = vec![0.0, 0.0, c2];
    for j in 3..=l {
        let mut b = factorial(j - 1) as f64 * (j - 1) as f64 * c2;
        for (s, alpha) in recursion_coefficients(j)? {
            b += alpha.abs() * bounds[s];
        }
        bounds.push(b);
    }
    bounds
        .get(l)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("no bound for order {l}")))
}

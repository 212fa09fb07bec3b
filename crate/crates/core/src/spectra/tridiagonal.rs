//! Symmetric tridiagonal matrices: Sturm counts, bisection and implicit QL.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Symmetric tridiagonal matrix given by its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidSize("tridiagonal matrix must be non-empty".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Shape(format!(
                "diagonal of length {} needs an off-diagonal of length {}, got {}",
                diag.len(),
                diag.len() - 1,
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("tridiagonal entries must be finite".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivot_guard(&self) -> f64 {
        let emax = self.offdiag.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }
}

/// Number of eigenvalues below `x`, from the signs of the LDLᵀ pivots of
/// `T - xI`.
///
/// Pivots smaller in magnitude than a safe minimum are replaced by minus that
/// minimum (the LAPACK `dstebz` guard), so an eigenvalue exactly at `x` is
/// counted as below it.
pub fn sturm_count_below(t: &Tridiagonal, x: f64) -> usize {
    if x == f64::INFINITY {
        return t.n();
    }
    if x == f64::NEG_INFINITY {
        return 0;
    }
    let guard = t.pivot_guard();
    let mut count = 0;
    let mut q = t.diag[0] - x;
    if q.abs() <= guard {
        q = -guard;
    }
    if q < 0.0 {
        count += 1;
    }
    for (d, e) in t.diag[1..].iter().zip(&t.offdiag) {
        q = (d - x) - e * e / q;
        if q.abs() <= guard {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue count in an open interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalCount {
    pub count: usize,
    /// An eigenvalue sits within one ulp of an endpoint; the count then
    /// follows the Sturm convention and may include it.
    pub endpoint_hit: bool,
}

/// `#{λ : lo < λ < hi}` computed from two Sturm counts.
pub fn count_in_interval(t: &Tridiagonal, interval: Interval) -> IntervalCount {
    let below_hi = sturm_count_below(t, interval.hi());
    let below_lo = sturm_count_below(t, interval.lo());
    let hit = |x: f64| {
        x.is_finite() && sturm_count_below(t, x.next_down()) != sturm_count_below(t, x.next_up())
    };
    IntervalCount {
        count: below_hi - below_lo,
        endpoint_hit: hit(interval.lo()) || hit(interval.hi()),
    }
}

/// `k`-th smallest eigenvalue (0-based) by Sturm bisection.
pub fn kth_eigenvalue(t: &Tridiagonal, k: usize) -> Result<f64> {
    if k >= t.n() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue index {k} out of range for size {}",
            t.n()
        )));
    }
    let (glo, ghi) = t.gershgorin();
    let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + t.pivot_guard();
    Ok(bisect(t, k, glo - pad, ghi + pad))
}

// Invariant: count(lo) <= k < count(hi).
fn bisect(t: &Tridiagonal, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs());
        if hi - lo <= tol {
            break;
        }
        if sturm_count_below(t, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues in ascending order by bisection.
///
/// This is the reference path: each value is pinned by Sturm inertia alone.
pub fn eigenvalues_bisection(t: &Tridiagonal) -> Vec<f64> {
    let n = t.n();
    let (glo, ghi) = t.gershgorin();
    let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + t.pivot_guard();
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut out = Vec::with_capacity(n);
    let mut lo = glo;
    for k in 0..n {
        // Eigenvalues come out sorted, so the previous one is a valid lower
        // bracket once nudged below it.
        let start = if k == 0 { glo } else { lo.min(out[k - 1]) };
        let start = if sturm_count_below(t, start) <= k { start } else { glo };
        let v = bisect(t, k, start, ghi);
        out.push(v);
        lo = v.next_down();
    }
    out
}

/// All eigenvalues in ascending order by the implicit-shift QL iteration.
pub fn eigenvalues_ql(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = t.n();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    const MAX_ITER: usize = 60;
    // Absolute deflation floor: clusters of eigenvalues near zero cannot be
    // resolved below ε‖T‖, which is the backward error of QL anyway.
    let norm = d.iter().chain(&e).fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = f64::EPSILON * norm;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd + floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::numerical(format!(
                    "implicit QL did not converge for eigenvalue {l} after {MAX_ITER} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("implicit QL produced non-finite eigenvalues"));
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

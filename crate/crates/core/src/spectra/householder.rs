//! Householder reduction of a dense real symmetric matrix to tridiagonal form.

use super::Tridiagonal;
use crate::error::Result;
use crate::matrix::SymmetricMatrix;

/// Orthogonally similar tridiagonal form of `matrix`.
///
/// Works on the upper triangle of a row-major copy. Step `k` reflects
/// row `k` right of the diagonal onto `±‖x‖ e₁` and applies the two-sided
/// update `B ← B - v wᵀ - w vᵀ` to the trailing block. Columns whose tail
/// below the subdiagonal is already zero are left untouched, so a
/// tridiagonal input comes back unchanged.
pub fn tridiagonalize(matrix: &SymmetricMatrix) -> Result<Tridiagonal> {
    let n = matrix.n();
    let mut a = matrix.as_slice().to_vec();
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        diag.push(a[k * n + k]);
        let s = k + 1;
        let m = n - s;
        let x = &a[k * n + s..k * n + n];
        let tail_sq: f64 = x[1..].iter().map(|t| t * t).sum();
        if tail_sq == 0.0 {
            off.push(x[0]);
            continue;
        }
        // Scale to avoid overflow in the norm.
        let scale = x.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
        let v = &mut v[..m];
        let mut norm_sq = 0.0;
        for (vi, xi) in v.iter_mut().zip(x) {
            *vi = xi / scale;
            norm_sq += *vi * *vi;
        }
        let norm = norm_sq.sqrt();
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        off.push(alpha * scale);
        v[0] -= alpha;
        // vᵀv = 2‖x‖(‖x‖ + |x₀|) after the shift.
        let vtv = norm_sq - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
        let tau = 2.0 / vtv;

        // p = τ B v using the upper triangle of B.
        let p = &mut p[..m];
        p.fill(0.0);
        for i in 0..m {
            let r = s + i;
            let row = &a[r * n + r..r * n + n];
            let vi = v[i];
            let mut acc = row[0] * vi;
            acc += dot(&row[1..], &v[i + 1..]);
            axpy(&mut p[i + 1..], vi, &row[1..]);
            p[i] += acc;
        }
        for pi in p.iter_mut() {
            *pi *= tau;
        }
        // w = p - (τ/2)(pᵀv) v
        let kappa = 0.5 * tau * dot(p, v);
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= kappa * vi;
        }
        let w = &*p;
        for i in 0..m {
            let r = s + i;
            let row = &mut a[r * n + r..r * n + n];
            let (vi, wi) = (v[i], w[i]);
            for ((b, vj), wj) in row.iter_mut().zip(&v[i..]).zip(&w[i..]) {
                *b -= vi * wj + wi * vj;
            }
        }
    }
    if n > 0 {
        diag.push(a[(n - 1) * n + (n - 1)]);
    }
    Tridiagonal::new(diag, off)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

//! Dense symmetric and Hermitian matrices in full row-major storage.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real symmetric matrix, full row-major storage.
///
/// Constructors check that mirrored entries are bitwise equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        let m = Self { n, data };
        m.check()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows must form a square matrix".into()));
        }
        Self::from_row_major(n, rows.concat())
    }

    fn check(&self) -> Result<()> {
        let n = self.n;
        if self.data.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidData("matrix contains NaN".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.data[i * n + j] != self.data[j * n + i] {
                    return Err(Error::Shape(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Writes `value` at (i, j) and (j, i).
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Leading `m x m` principal submatrix.
    pub fn leading_principal(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::Shape(format!(
                "principal submatrix of size {m} exceeds matrix size {}",
                self.n
            )));
        }
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.data[i * m..(i + 1) * m]
                .copy_from_slice(&self.data[i * self.n..i * self.n + m]);
        }
        Ok(out)
    }

    /// The principal submatrix obtained by deleting row and column `drop`.
    pub fn without_index(&self, drop: usize) -> Result<Self> {
        if drop >= self.n {
            return Err(Error::Shape(format!(
                "index {drop} out of range for size {}",
                self.n
            )));
        }
        let m = self.n - 1;
        let data = (0..self.n)
            .filter(|&i| i != drop)
            .flat_map(|i| {
                (0..self.n)
                    .filter(|&j| j != drop)
                    .map(move |j| self.data[i * self.n + j])
            })
            .collect();
        Ok(Self { n: m, data })
    }
}

/// Complex Hermitian matrix, full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|z| z.re.is_nan() || z.im.is_nan()) {
            return Err(Error::InvalidData("matrix contains NaN".into()));
        }
        for i in 0..n {
            let d = data[i * n + i];
            if d.im != 0.0 {
                return Err(Error::Shape(format!("diagonal entry {i} is not real")));
            }
            for j in (i + 1)..n {
                let a = data[i * n + j];
                let b = data[j * n + i].conj();
                if a != b {
                    return Err(Error::Shape(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Writes `value` at (i, j) and its conjugate at (j, i).
    pub fn set_herm(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value.conj();
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    /// Real symmetric `2n x 2n` form `[[A, -B], [B, A]]` of `A + iB`.
    ///
    /// Every eigenvalue of `self` appears twice in the embedding.
    pub fn real_embedding(&self) -> SymmetricMatrix {
        let n = self.n;
        let m = 2 * n;
        let mut out = SymmetricMatrix::zeros(m);
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                out.data[i * m + j] = z.re;
                out.data[(i + n) * m + (j + n)] = z.re;
                out.data[i * m + (j + n)] = -z.im;
                out.data[(i + n) * m + j] = z.im;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        let err = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn rejects_nan() {
        let err =
            SymmetricMatrix::from_rows(&[vec![f64::NAN, 0.0], vec![0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidData(_)));
    }

    #[test]
    fn without_index_drops_row_and_column() {
        let m = SymmetricMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 5.0],
            vec![3.0, 5.0, 6.0],
        ])
        .unwrap();
        let s = m.without_index(1).unwrap();
        assert_eq!(s.as_slice(), &[1.0, 3.0, 3.0, 6.0]);
        assert!(m.without_index(3).is_err());
    }

    #[test]
    fn embedding_is_symmetric() {
        let mut h = HermitianMatrix::zeros(2);
        h.set_herm(0, 0, Complex64::new(1.0, 0.0));
        h.set_herm(1, 1, Complex64::new(-0.5, 0.0));
        h.set_herm(0, 1, Complex64::new(0.3, 0.7));
        let e = h.real_embedding();
        let again = SymmetricMatrix::from_row_major(4, e.as_slice().to_vec());
        assert!(again.is_ok());
        assert_eq!(e.trace(), 2.0 * h.trace());
    }

    #[test]
    fn leading_principal_copies_block() {
        let m = SymmetricMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 5.0],
            vec![3.0, 5.0, 6.0],
        ])
        .unwrap();
        let p = m.leading_principal(2).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 2.0, 2.0, 4.0]);
        assert!(m.leading_principal(4).is_err());
    }
}

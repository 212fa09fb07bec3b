//! Samplers for the Gaussian ensembles, matched-moment Wigner matrices and
//! the tridiagonal β-Hermite model, plus the superposition/decimation maps
//! that relate GOE spectra to GUE and GSE spectra.
//!
//! Entry conventions (density proportional to `exp(-(β/2) Tr H²)`):
//!
//! | ensemble | diagonal variance | off-diagonal variance |
//! |----------|-------------------|-----------------------|
//! | GOE      | 1                 | 1/2                   |
//! | GUE      | 1/2               | 1/4 for Re and Im     |
//! | GSE      | 1/4               | 1/8 per quaternion component |
//!
//! Random draws are consumed entry by entry in row-major upper-triangle
//! order, `(0,0), (0,1), …, (0,n-1), (1,1), …`. Within an entry the real
//! components are drawn in order (Re, Im) or (1, e₁, e₂, e₃). Gaussian
//! variates come from `rand_distr::StandardNormal` (ziggurat).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, SymmetricMatrix};
use crate::rng::{rng_from_seed, SampleRng};
use crate::spectra::Tridiagonal;

/// Dyson index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
            Beta::Four => 4.0,
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }
}

impl TryFrom<u32> for Beta {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            other => Err(Error::Unsupported(format!(
                "beta = {other}; allowed values are {{1, 2, 4}}"
            ))),
        }
    }
}

impl From<Beta> for u32 {
    fn from(b: Beta) -> u32 {
        b.as_u32()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Goe,
    Gue,
    Gse,
    WignerRealMatched,
    WignerHermitianMatched,
    TridiagBeta,
}

impl EnsembleKind {
    /// Dyson index implied by the kind; `None` for the tridiagonal model.
    pub fn implied_beta(self) -> Option<Beta> {
        match self {
            EnsembleKind::Goe | EnsembleKind::WignerRealMatched => Some(Beta::One),
            EnsembleKind::Gue | EnsembleKind::WignerHermitianMatched => Some(Beta::Two),
            EnsembleKind::Gse => Some(Beta::Four),
            EnsembleKind::TridiagBeta => None,
        }
    }
}

/// Which ensemble to sample, at what size, from which seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub beta: Beta,
    pub seed: u64,
}

impl EnsembleSpec {
    /// Spec for an ensemble whose β is implied by its kind.
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Result<Self> {
        let beta = kind.implied_beta().ok_or_else(|| {
            Error::InvalidArgument("the tridiagonal model needs an explicit beta".into())
        })?;
        Self::with_beta(kind, n, beta, seed)
    }

    pub fn tridiag(n: usize, beta: Beta, seed: u64) -> Result<Self> {
        Self::with_beta(EnsembleKind::TridiagBeta, n, beta, seed)
    }

    pub fn with_beta(kind: EnsembleKind, n: usize, beta: Beta, seed: u64) -> Result<Self> {
        let spec = Self {
            kind,
            n,
            beta,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_size(self.n)?;
        if let Some(b) = self.kind.implied_beta() {
            if b != self.beta {
                return Err(Error::InvalidArgument(format!(
                    "{:?} has beta {}, got {}",
                    self.kind,
                    b.as_u32(),
                    self.beta.as_u32()
                )));
            }
        }
        Ok(())
    }

    /// Same ensemble with a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn sample(&self) -> Result<MatrixSample> {
        self.validate()?;
        match self.kind {
            EnsembleKind::Goe => sample_goe(self.n, self.seed),
            EnsembleKind::Gue => sample_gue(self.n, self.seed),
            EnsembleKind::Gse => sample_gse(self.n, self.seed),
            EnsembleKind::WignerRealMatched => {
                sample_matched_wigner(self.n, self.seed, Symmetry::Real)
            }
            EnsembleKind::WignerHermitianMatched => {
                sample_matched_wigner(self.n, self.seed, Symmetry::Hermitian)
            }
            EnsembleKind::TridiagBeta => sample_tridiag_beta(self.n, self.beta, self.seed),
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSize("matrix size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// How a sampled matrix is stored.
#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    RealSymmetric(SymmetricMatrix),
    ComplexHermitian(HermitianMatrix),
    /// `2n x 2n` real form of a complex Hermitian matrix; eigenvalues doubled.
    RealEmbedded(SymmetricMatrix),
    /// `2n x 2n` complex form of a quaternion self-dual matrix; eigenvalues doubled.
    QuaternionEmbedded(HermitianMatrix),
    /// Symmetric tridiagonal matrix whose eigenvalues are multiplied by
    /// `eigen_scale` to land on the ensemble's own scale.
    Tridiagonal {
        matrix: Tridiagonal,
        eigen_scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub storage: Storage,
    pub spec: EnsembleSpec,
}

impl MatrixSample {
    /// Number of times each eigenvalue of the underlying ensemble matrix
    /// appears in the stored matrix.
    pub fn multiplicity(&self) -> usize {
        match self.storage {
            Storage::RealEmbedded(_) | Storage::QuaternionEmbedded(_) => 2,
            _ => 1,
        }
    }

    pub fn as_real_symmetric(&self) -> Option<&SymmetricMatrix> {
        match &self.storage {
            Storage::RealSymmetric(m) | Storage::RealEmbedded(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_hermitian(&self) -> Option<&HermitianMatrix> {
        match &self.storage {
            Storage::ComplexHermitian(m) | Storage::QuaternionEmbedded(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_tridiagonal(&self) -> Option<(&Tridiagonal, f64)> {
        match &self.storage {
            Storage::Tridiagonal {
                matrix,
                eigen_scale,
            } => Some((matrix, *eigen_scale)),
            _ => None,
        }
    }
}

/// Law of a single real matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDistribution {
    Gaussian { variance: f64 },
    /// `P(+c) = P(-c) = p`, `P(0) = 1 - 2p`.
    ThreePoint { c: f64, p: f64 },
}

/// Mean, variance, third and fourth raw moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub third: f64,
    pub fourth: f64,
}

impl EntryDistribution {
    pub fn gaussian(variance: f64) -> Self {
        EntryDistribution::Gaussian { variance }
    }

    /// Three-point law with `P(±c) = 1/6` and the requested variance.
    /// Its fourth moment is `3 variance²`, the Gaussian value.
    pub fn matched_three_point(variance: f64) -> Self {
        EntryDistribution::ThreePoint {
            c: (3.0 * variance).sqrt(),
            p: 1.0 / 6.0,
        }
    }

    pub fn moments(&self) -> Moments {
        match *self {
            EntryDistribution::Gaussian { variance } => Moments {
                mean: 0.0,
                variance,
                third: 0.0,
                fourth: 3.0 * variance * variance,
            },
            EntryDistribution::ThreePoint { c, p } => Moments {
                mean: 0.0,
                variance: 2.0 * p * c * c,
                third: 0.0,
                fourth: 2.0 * p * c.powi(4),
            },
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            EntryDistribution::Gaussian { variance } => {
                let z: f64 = StandardNormal.sample(rng);
                variance.sqrt() * z
            }
            EntryDistribution::ThreePoint { c, p } => {
                let u: f64 = rng.gen();
                if u < p {
                    c
                } else if u < 2.0 * p {
                    -c
                } else {
                    0.0
                }
            }
        }
    }
}

fn real_symmetric_wigner(
    n: usize,
    rng: &mut SampleRng,
    diag: EntryDistribution,
    off: EntryDistribution,
) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        m.set_sym(i, i, diag.sample(rng));
        for j in (i + 1)..n {
            m.set_sym(i, j, off.sample(rng));
        }
    }
    m
}

fn complex_hermitian_wigner(
    n: usize,
    rng: &mut SampleRng,
    diag: EntryDistribution,
    off_component: EntryDistribution,
) -> HermitianMatrix {
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        m.set_herm(i, i, Complex64::new(diag.sample(rng), 0.0));
        for j in (i + 1)..n {
            let re = off_component.sample(rng);
            let im = off_component.sample(rng);
            m.set_herm(i, j, Complex64::new(re, im));
        }
    }
    m
}

/// GOE: real symmetric, diagonal `N(0,1)`, off-diagonal `N(0,1/2)`.
pub fn sample_goe(n: usize, seed: u64) -> Result<MatrixSample> {
    let spec = EnsembleSpec::new(EnsembleKind::Goe, n, seed)?;
    let mut rng = rng_from_seed(seed);
    let m = real_symmetric_wigner(
        n,
        &mut rng,
        EntryDistribution::gaussian(1.0),
        EntryDistribution::gaussian(0.5),
    );
    Ok(MatrixSample {
        storage: Storage::RealSymmetric(m),
        spec,
    })
}

/// GUE: complex Hermitian, diagonal `N(0,1/2)`, Re/Im off-diagonal `N(0,1/4)`.
pub fn sample_gue(n: usize, seed: u64) -> Result<MatrixSample> {
    let spec = EnsembleSpec::new(EnsembleKind::Gue, n, seed)?;
    let mut rng = rng_from_seed(seed);
    let m = complex_hermitian_wigner(
        n,
        &mut rng,
        EntryDistribution::gaussian(0.5),
        EntryDistribution::gaussian(0.25),
    );
    Ok(MatrixSample {
        storage: Storage::ComplexHermitian(m),
        spec,
    })
}

/// Complex 2x2 block of the quaternion `a + b e₁ + c e₂ + d e₃`.
pub fn quaternion_block(a: f64, b: f64, c: f64, d: f64) -> [[Complex64; 2]; 2] {
    [
        [Complex64::new(a, b), Complex64::new(c, d)],
        [Complex64::new(-c, d), Complex64::new(a, -b)],
    ]
}

/// GSE as the `2n x 2n` complex Hermitian embedding of a quaternion
/// self-dual matrix. Diagonal quaternions are real with variance 1/4,
/// off-diagonal components have variance 1/8.
pub fn sample_gse(n: usize, seed: u64) -> Result<MatrixSample> {
    let spec = EnsembleSpec::new(EnsembleKind::Gse, n, seed)?;
    let mut rng = rng_from_seed(seed);
    let diag = EntryDistribution::gaussian(0.25);
    let off = EntryDistribution::gaussian(0.125);
    let mut m = HermitianMatrix::zeros(2 * n);
    for j in 0..n {
        let h = diag.sample(&mut rng);
        m.set_herm(2 * j, 2 * j, Complex64::new(h, 0.0));
        m.set_herm(2 * j + 1, 2 * j + 1, Complex64::new(h, 0.0));
        for k in (j + 1)..n {
            let [a, b, c, d] = [0; 4].map(|_| off.sample(&mut rng));
            let blk = quaternion_block(a, b, c, d);
            for (r, row) in blk.iter().enumerate() {
                for (s, &z) in row.iter().enumerate() {
                    m.set_herm(2 * j + r, 2 * k + s, z);
                }
            }
        }
    }
    Ok(MatrixSample {
        storage: Storage::QuaternionEmbedded(m),
        spec,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Real,
    Hermitian,
}

/// Wigner matrix with three-point off-diagonal entries whose first four
/// moments match the Gaussian ensemble of the same symmetry class.
/// Diagonal entries stay Gaussian.
pub fn sample_matched_wigner(n: usize, seed: u64, symmetry: Symmetry) -> Result<MatrixSample> {
    let mut rng = rng_from_seed(seed);
    match symmetry {
        Symmetry::Real => {
            let spec = EnsembleSpec::new(EnsembleKind::WignerRealMatched, n, seed)?;
            let m = real_symmetric_wigner(
                n,
                &mut rng,
                EntryDistribution::gaussian(1.0),
                EntryDistribution::matched_three_point(0.5),
            );
            Ok(MatrixSample {
                storage: Storage::RealSymmetric(m),
                spec,
            })
        }
        Symmetry::Hermitian => {
            let spec = EnsembleSpec::new(EnsembleKind::WignerHermitianMatched, n, seed)?;
            let m = complex_hermitian_wigner(
                n,
                &mut rng,
                EntryDistribution::gaussian(0.5),
                EntryDistribution::matched_three_point(0.25),
            );
            Ok(MatrixSample {
                storage: Storage::ComplexHermitian(m),
                spec,
            })
        }
    }
}

/// β-Hermite tridiagonal model: diagonal `N(0,1)`, entry `(k, k+1)`
/// (1-based `k`) distributed as `χ_{β(n-k)} / √2`.
///
/// The raw matrix has joint eigenvalue density proportional to
/// `∏|λᵢ-λⱼ|^β exp(-Σλᵢ²/2)`; dividing by `√β` gives the
/// `exp(-(β/2)Σxᵢ²)` convention of the dense samplers. That factor is
/// stored as `eigen_scale` and applied by [`crate::spectra::eigenvalues`].
///
/// χ variates are square roots of `rand_distr::ChiSquared`, which samples
/// `Gamma(k/2, 2)` by Marsaglia–Tsang (with the `U^{1/α}` boost for `k = 1`
/// handled by its exact-one special case). Draw order is row-major: for
/// each row, the diagonal entry and then the entry to its right.
pub fn sample_tridiag_beta(n: usize, beta: Beta, seed: u64) -> Result<MatrixSample> {
    let spec = EnsembleSpec::tridiag(n, beta, seed)?;
    let mut rng = rng_from_seed(seed);
    let b = beta.value();
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        diag.push(z);
        if i + 1 < n {
            let dof = b * (n - i - 1) as f64;
            let chi2 = ChiSquared::new(dof)
                .map_err(|e| Error::InvalidArgument(format!("chi-squared({dof}): {e}")))?
                .sample(&mut rng);
            off.push((chi2 / 2.0).sqrt());
        }
    }
    Ok(MatrixSample {
        storage: Storage::Tridiagonal {
            matrix: Tridiagonal::new(diag, off)?,
            eigen_scale: 1.0 / b.sqrt(),
        },
        spec,
    })
}

fn check_strictly_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData(format!("{what} contains non-finite values")));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be strictly increasing"
        )));
    }
    Ok(())
}

/// Merges two ordered point configurations and keeps the particles at
/// (1-based) positions 2, 4, 6, ….
pub fn superpose_decimate_even(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_strictly_increasing(a, "first spectrum")?;
    check_strictly_increasing(b, "second spectrum")?;
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i] < b[j]);
        if i < a.len() && j < b.len() && a[i] == b[j] {
            return Err(Error::Degenerate(format!(
                "tie at {} in superposed spectra",
                a[i]
            )));
        }
        if take_a {
            merged.push(a[i]);
            i += 1;
        } else {
            merged.push(b[j]);
            j += 1;
        }
    }
    Ok(merged.into_iter().skip(1).step_by(2).collect())
}

/// Even-position particles of a GOE spectrum of odd length `2n + 1`,
/// divided by `√2`. Distributed as a GSE spectrum of size `n`.
pub fn gse_from_goe(spectrum: &[f64]) -> Result<Vec<f64>> {
    if spectrum.len() % 2 == 0 {
        return Err(Error::Shape(format!(
            "expected an odd-length spectrum, got length {}",
            spectrum.len()
        )));
    }
    check_strictly_increasing(spectrum, "spectrum")?;
    Ok(spectrum
        .iter()
        .skip(1)
        .step_by(2)
        .map(|x| x / std::f64::consts::SQRT_2)
        .collect())
}

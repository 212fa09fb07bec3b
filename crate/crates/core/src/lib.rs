//! Eigenvalue fluctuations of Gaussian and Wigner random matrices.
//!
//! Samplers for GOE/GUE/GSE, matched-moment Wigner matrices and the
//! tridiagonal β-Hermite model; spectral routines (Householder reduction,
//! implicit QL, Sturm bisection); semicircle centering and the Gaussian
//! fluctuation scalings in the bulk and at the edge; the GUE kernel with
//! quadrature for counting-statistic moments and cumulants; and a
//! reproducible Monte Carlo driver with KS-based verdicts.

pub mod ensembles;
pub mod error;
pub mod fluctuations;
pub mod interval;
pub mod kernel;
pub mod matrix;
pub mod report;
pub mod rng;
pub mod semicircle;
pub mod spectra;
pub mod stats;

pub use ensembles::{Beta, EnsembleKind, EnsembleSpec, MatrixSample};
pub use error::{Error, Result};
pub use fluctuations::{CovarianceMatrix, FluctuationVector, IndexSpec};
pub use interval::Interval;
pub use semicircle::{CenterScale, Regime};
pub use spectra::SpectrumSample;
pub use stats::{ExperimentPlan, ExperimentResult};

//! Dense linear algebra used throughout the solver.
//!
//! Everything here is row-major `f64`. Matrices in this crate are at most a
//! few thousand rows, so no blocking or parallelism is attempted.

mod cholesky;
mod eigen;
mod matrix;
mod vector;

pub use cholesky::{spd_factor, SpdFactorization, SYMMETRY_TOL};
pub use eigen::{
    eig_extremes, max_eig_symmetric, min_eig_symmetric, min_eig_symmetric_with, spectral_norm,
    spectral_norm_with, EigenOptions,
};
pub use matrix::DenseMatrix;
pub use vector::DenseVector;

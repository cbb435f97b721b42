use crate::error::{Error, Result};

use super::{DenseMatrix, DenseVector};

/// Largest relative asymmetry accepted by [`spd_factor`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Lower-triangular Cholesky factor `L` with `M = L L^T`.
///
/// Factor once, then call [`SpdFactorization::solve`] as often as needed.
#[derive(Debug, Clone)]
pub struct SpdFactorization {
    dim: usize,
    // row-major, only the lower triangle is meaningful
    lower: Vec<f64>,
}

/// Cholesky-factors a symmetric positive definite matrix.
pub fn spd_factor(m: &DenseMatrix) -> Result<SpdFactorization> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "spd_factor needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let asym = m.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }

    let n = m.rows();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let row_j = j * n;
        let sum_sq: f64 = l[row_j..row_j + j].iter().map(|v| v * v).sum();
        let pivot = m.get(j, j) - sum_sq;
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::NotSpd { index: j, pivot });
        }
        let diag = pivot.sqrt();
        l[row_j + j] = diag;
        for i in j + 1..n {
            let row_i = i * n;
            let dot: f64 = l[row_i..row_i + j]
                .iter()
                .zip(&l[row_j..row_j + j])
                .map(|(a, b)| a * b)
                .sum();
            l[row_i + j] = (m.get(i, j) - dot) / diag;
        }
    }
    Ok(SpdFactorization { dim: n, lower: l })
}

impl SpdFactorization {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solves `M u = v`.
    pub fn solve(&self, v: &DenseVector) -> Result<DenseVector> {
        v.check_len(self.dim, "spd solve right-hand side")?;
        let n = self.dim;
        let l = &self.lower;

        // forward: L z = v
        let mut z = v.as_slice().to_vec();
        for i in 0..n {
            let row = &l[i * n..i * n + i];
            let dot: f64 = row.iter().zip(&z[..i]).map(|(a, b)| a * b).sum();
            z[i] = (z[i] - dot) / l[i * n + i];
        }
        // backward: L^T u = z, column-oriented so we walk rows of L
        for i in (0..n).rev() {
            z[i] /= l[i * n + i];
            let zi = z[i];
            for (k, zk) in z[..i].iter_mut().enumerate() {
                *zk -= l[i * n + k] * zi;
            }
        }
        Ok(DenseVector::from_vec_unchecked(z))
    }

    /// Rebuilds `L L^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.dim;
        let l = &self.lower;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..=j).map(|k| l[i * n + k] * l[j * n + k]).sum();
                out[i * n + j] = s;
                out[j * n + i] = s;
            }
        }
        DenseMatrix::from_vec_unchecked(n, n, out)
    }
}

//! Extremal eigenvalues of symmetric matrices.
//!
//! The matrix is reduced to tridiagonal form with Householder reflections and
//! the requested eigenvalue is then isolated by Sturm-sequence bisection. Only
//! eigenvalues are produced, never eigenvectors.

use crate::error::{Error, Result};

use super::{cholesky::SYMMETRY_TOL, DenseMatrix};

/// Iteration budget and stopping tolerance for the bisection phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub max_iters: usize,
    /// Target relative width of the final bracket.
    pub tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            tol: 1e-14,
        }
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eig_symmetric(m: &DenseMatrix) -> Result<f64> {
    min_eig_symmetric_with(m, EigenOptions::default())
}

pub fn min_eig_symmetric_with(m: &DenseMatrix, opts: EigenOptions) -> Result<f64> {
    let tri = Tridiagonal::reduce(m)?;
    tri.kth_smallest(0, opts)
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eig_symmetric(m: &DenseMatrix) -> Result<f64> {
    let tri = Tridiagonal::reduce(m)?;
    tri.kth_smallest(tri.diag.len() - 1, EigenOptions::default())
}

/// Smallest and largest eigenvalue from a single reduction.
pub fn eig_extremes(m: &DenseMatrix) -> Result<(f64, f64)> {
    let tri = Tridiagonal::reduce(m)?;
    let opts = EigenOptions::default();
    Ok((
        tri.kth_smallest(0, opts)?,
        tri.kth_smallest(tri.diag.len() - 1, opts)?,
    ))
}

/// Largest singular value.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    spectral_norm_with(m, EigenOptions::default())
}

pub fn spectral_norm_with(m: &DenseMatrix, opts: EigenOptions) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    // Work with whichever Gram matrix is smaller.
    let gram = if m.rows() <= m.cols() {
        m.outer_gram()
    } else {
        m.gram()
    };
    let tri = Tridiagonal::reduce(&gram)?;
    let top = tri.kth_smallest(tri.diag.len() - 1, opts)?;
    Ok(top.max(0.0).sqrt())
}

struct Tridiagonal {
    diag: Vec<f64>,
    // off[i] couples rows i and i + 1
    off: Vec<f64>,
}

impl Tridiagonal {
    fn reduce(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "eigenvalues need a non-empty square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let asym = m.relative_asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }

        let n = m.rows();
        let mut a = m.as_slice().to_vec();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];

        for k in 0..n.saturating_sub(1) {
            let len = n - k - 1;
            let base = k + 1;
            let col_norm = (base..n).map(|i| a[i * n + k].powi(2)).sum::<f64>().sqrt();
            diag[k] = a[k * n + k];
            if col_norm == 0.0 {
                off[k] = 0.0;
                continue;
            }
            let x0 = a[base * n + k];
            let alpha = if x0 >= 0.0 { -col_norm } else { col_norm };
            off[k] = alpha;

            for (t, i) in (base..n).enumerate() {
                v[t] = a[i * n + k];
            }
            v[0] -= alpha;
            let v_norm = v[..len].iter().map(|x| x * x).sum::<f64>().sqrt();
            if v_norm == 0.0 {
                continue;
            }
            v[..len].iter_mut().for_each(|x| *x /= v_norm);

            // p = S v where S is the trailing block
            for (t, i) in (base..n).enumerate() {
                let row = &a[i * n + base..i * n + n];
                p[t] = row.iter().zip(&v[..len]).map(|(s, w)| s * w).sum();
            }
            let vp: f64 = v[..len].iter().zip(&p[..len]).map(|(x, y)| x * y).sum();
            // w = p - (v.p) v ; S <- S - 2 v w^T - 2 w v^T
            for t in 0..len {
                p[t] -= vp * v[t];
            }
            for (t, i) in (base..n).enumerate() {
                let (vt, wt) = (v[t], p[t]);
                let row = &mut a[i * n + base..i * n + n];
                for (s, (vs, ws)) in row.iter_mut().zip(v[..len].iter().zip(&p[..len])) {
                    *s -= 2.0 * (vt * ws + wt * vs);
                }
            }
        }
        diag[n - 1] = a[(n - 1) * n + (n - 1)];
        Ok(Self { diag, off })
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1].powi(2) / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn kth_smallest(&self, k: usize, opts: EigenOptions) -> Result<f64> {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs());
        if scale == 0.0 {
            return Ok(0.0);
        }
        let pivmin = f64::MIN_POSITIVE.max(scale * f64::EPSILON * f64::EPSILON);
        let floor = 2.0 * f64::EPSILON * scale;
        // widen slightly so both ends are strict brackets
        lo -= floor;
        hi += floor;
        for _ in 0..opts.max_iters {
            let width = hi - lo;
            if width <= (opts.tol * lo.abs().max(hi.abs())).max(floor) {
                return Ok(0.5 * (lo + hi));
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(mid, pivmin) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence(opts.max_iters))
    }
}

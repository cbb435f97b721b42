//! Scalar shrinkage operators and a brute-force proximal oracle.
//!
//! The two operators use different quadratic couplings:
//!
//! * soft shrinkage minimizes `kappa * |t| + (t - v)^2 / 2`,
//! * half shrinkage minimizes `kappa * |t|^(1/2) + (t - v)^2`.
//!
//! [`prox_oracle_scalar`] is a deliberately naive grid-plus-golden-section
//! minimizer that the tests use as ground truth for both.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::DenseVector;

/// Which shrinkage rule to apply componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShrinkageKind {
    Soft,
    Half,
}

fn check_args(v: f64, kappa: f64) -> Result<()> {
    if !v.is_finite() || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shrinkage arguments must be finite (v = {v}, kappa = {kappa})"
        )));
    }
    if kappa < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "shrinkage threshold must be nonnegative, got {kappa}"
        )));
    }
    Ok(())
}

/// `sign(v) * max(|v| - kappa, 0)`.
pub fn soft_shrink_scalar(v: f64, kappa: f64) -> Result<f64> {
    check_args(v, kappa)?;
    Ok(soft(v, kappa))
}

#[inline]
fn soft(v: f64, kappa: f64) -> f64 {
    if v > kappa {
        v - kappa
    } else if v < -kappa {
        v + kappa
    } else {
        0.0
    }
}

/// Dead-zone radius of half shrinkage: `(54^(1/3) / 4) * kappa^(2/3)`.
pub fn half_threshold(kappa: f64) -> f64 {
    54f64.cbrt() / 4.0 * kappa.powf(2.0 / 3.0)
}

/// Global minimizer of `kappa * |t|^(1/2) + (t - v)^2`.
///
/// Returns 0 on the boundary `|v| == half_threshold(kappa)`, where the zero
/// and nonzero candidates tie.
pub fn half_shrink_scalar(v: f64, kappa: f64) -> Result<f64> {
    check_args(v, kappa)?;
    Ok(half(v, kappa))
}

#[inline]
fn half(v: f64, kappa: f64) -> f64 {
    if kappa == 0.0 {
        return v;
    }
    let a = v.abs();
    if a <= half_threshold(kappa) {
        return 0.0;
    }
    let phi = ((kappa / 8.0) * (a / 3.0).powf(-1.5)).acos();
    (2.0 * v / 3.0) * (1.0 + ((2.0 / 3.0) * (PI - phi)).cos())
}

/// Applies the chosen scalar operator to every component.
pub fn shrink_vector(v: &DenseVector, kappa: f64, kind: ShrinkageKind) -> Result<DenseVector> {
    check_args(0.0, kappa)?;
    let op: fn(f64, f64) -> f64 = match kind {
        ShrinkageKind::Soft => soft,
        ShrinkageKind::Half => half,
    };
    // DenseVector entries are finite by construction
    Ok(v.map(|x| op(x, kappa)))
}

/// Brute-force scalar minimizer.
///
/// Samples `objective` on `grid_points` evenly spaced points of `[lo, hi]`,
/// refines every grid-local minimum (the eight lowest, at most) by
/// golden-section search down to `refine_tol`, and returns the best refined
/// point. `t = 0` is always evaluated as a candidate.
pub fn prox_oracle_scalar(
    objective: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if grid_points < 1000 {
        return Err(Error::InvalidParameter(format!(
            "oracle needs at least 1000 grid points, got {grid_points}"
        )));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "refine_tol must be positive, got {refine_tol}"
        )));
    }

    let step = (hi - lo) / (grid_points - 1) as f64;
    let at = |i: usize| {
        if i + 1 == grid_points {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let values: Vec<f64> = (0..grid_points).map(|i| objective(at(i))).collect();

    let mut local_minima: Vec<usize> = (0..grid_points)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i + 1 == grid_points || values[i] <= values[i + 1];
            left && right
        })
        .collect();
    local_minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    local_minima.truncate(8);

    let mut best_t = 0.0;
    let mut best_f = objective(0.0);
    for i in local_minima {
        let a = at(i.saturating_sub(1));
        let b = at((i + 1).min(grid_points - 1));
        let t = golden_section(&objective, a, b, refine_tol);
        for cand in [t, at(i)] {
            let f = objective(cand);
            if f < best_f {
                best_f = f;
                best_t = cand;
            }
        }
    }
    Ok(best_t)
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_objective(v: f64, kappa: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| kappa * t.abs().sqrt() + (t - v).powi(2)
    }

    #[test]
    fn soft_examples() {
        assert_eq!(soft_shrink_scalar(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(soft_shrink_scalar(2.0, 0.5).unwrap(), 1.5);
        assert_eq!(soft_shrink_scalar(-0.3, 0.5).unwrap(), 0.0);
        assert_eq!(soft_shrink_scalar(-2.0, 0.5).unwrap(), -1.5);
    }

    #[test]
    fn half_zero_input_and_identity_limit() {
        assert_eq!(half_shrink_scalar(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(half_shrink_scalar(0.7, 0.0).unwrap(), 0.7);
        assert_eq!(soft_shrink_scalar(0.7, 0.0).unwrap(), 0.7);
    }

    #[test]
    fn half_tie_at_threshold() {
        let t_star = half_threshold(1.0);
        assert!((t_star - 54f64.cbrt() / 4.0).abs() < 1e-15);
        assert_eq!(half_shrink_scalar(t_star, 1.0).unwrap(), 0.0);
        // the nonzero candidate 2 t*/3 attains the same objective
        let obj = half_objective(t_star, 1.0);
        assert!((obj(2.0 * t_star / 3.0) - obj(0.0)).abs() < 1e-9);
        let oracle = prox_oracle_scalar(&obj, -5.0, 5.0, 20_001, 1e-10).unwrap();
        assert!(obj(0.0) <= obj(oracle) + 1e-9);
    }

    #[test]
    fn half_matches_oracle_at_two() {
        let obj = half_objective(2.0, 1.0);
        let oracle = prox_oracle_scalar(&obj, -5.0, 5.0, 20_001, 1e-10).unwrap();
        let h = half_shrink_scalar(2.0, 1.0).unwrap();
        assert!((h - oracle).abs() <= 1e-5, "{h} vs {oracle}");
        // local stationarity of the oracle point
        let eps = 1e-6;
        let deriv = (obj(oracle + eps) - obj(oracle - eps)) / (2.0 * eps);
        assert!(deriv.abs() < 1e-3);
        assert!(obj(h) <= obj(oracle) + 1e-10);
    }

    #[test]
    fn oracle_examples() {
        let t = prox_oracle_scalar(|t| (t - 3.0).powi(2), -10.0, 10.0, 1000, 1e-8).unwrap();
        assert!((t - 3.0).abs() <= 1e-8);
        let t = prox_oracle_scalar(|t| t.abs() + 0.5 * (t - 0.4).powi(2), -5.0, 5.0, 1000, 1e-8)
            .unwrap();
        assert!(t.abs() <= 1e-8);
    }

    #[test]
    fn oracle_errors() {
        assert!(matches!(
            prox_oracle_scalar(|t| t * t, 1.0, 1.0, 1000, 1e-8),
            Err(Error::InvalidBracket { .. })
        ));
        assert!(prox_oracle_scalar(|t| t * t, -1.0, 1.0, 10, 1e-8).is_err());
        assert!(prox_oracle_scalar(|t| t * t, -1.0, 1.0, 1000, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(soft_shrink_scalar(1.0, -0.1).is_err());
        assert!(half_shrink_scalar(f64::NAN, 1.0).is_err());
        assert!(half_shrink_scalar(1.0, f64::INFINITY).is_err());
        let v = DenseVector::zeros(3);
        assert!(shrink_vector(&v, -1.0, ShrinkageKind::Soft).is_err());
    }

    #[test]
    fn vector_examples() {
        let z = DenseVector::zeros(4);
        for kind in [ShrinkageKind::Soft, ShrinkageKind::Half] {
            assert_eq!(shrink_vector(&z, 0.3, kind).unwrap(), z);
        }
        let v = DenseVector::from_slice(&[2.0, -2.0]).unwrap();
        let s = shrink_vector(&v, 0.5, ShrinkageKind::Soft).unwrap();
        assert_eq!(s.as_slice(), &[1.5, -1.5]);
    }
}

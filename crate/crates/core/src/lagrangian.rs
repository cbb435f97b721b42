//! Augmented Lagrangian, the auxiliary descent function, and the constants
//! and inequality margins used to monitor a run.
//!
//! With `L(x, y, p) = f(x) + g(y) + <p, Ax - By> + (alpha/2)|Ax - By|^2` the
//! monitored quantities per step `k -> k+1` are
//!
//! * `m10 = L(x^k, y^{k+1}, p^k) - L(x^{k+1}, y^{k+1}, p^k) - (mu1/2)|dx|^2`
//! * `m11 = (2(lf + lphi)^2/mu0)|dx|^2 + (2 lphi^2/mu0)|x^k - x^{k-1}|^2 - |dp|^2`
//! * `mAux = Lhat(z^k) - Lhat(z^{k+1}) - sigma1 |dx|^2`
//!
//! where `Lhat(x, y, p, x') = L(x, y, p) + (sigma0/2)|x - x'|^2`. A
//! nonnegative margin means the inequality held for that step. None of these
//! checks ever stops a run.

use crate::bregman::BregmanGenerator;
use crate::error::{Error, Result};
use crate::numerics::DenseVector;
use crate::problems::CompositeProblem;
use crate::solver::SolverState;

/// Which standing assumption the constants are computed under: `One` needs
/// `B` injective, `Two` needs `psi` strongly convex instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    One,
    Two,
}

/// Measured problem constants, before anything is derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantInputs {
    pub ell_f: f64,
    pub ell_phi: f64,
    pub ell_psi: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu_b: f64,
    pub alpha: f64,
    pub norm_a: f64,
    pub assumption: Assumption,
}

/// Inputs plus every derived constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConstants {
    pub inputs: ConstantInputs,
    pub sigma0: f64,
    pub sigma1: f64,
    pub kappa1: f64,
    /// `None` when `B` is not injective.
    pub kappa2: Option<f64>,
    pub alpha_bound: AlphaBound,
}

/// Step-size rule `alpha > 4((lf + lphi)^2 + lphi^2) / (mu1 mu0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBound {
    pub bound: f64,
    pub satisfied: bool,
}

/// `(sigma0, sigma1)` for the chosen assumption. `sigma1` may come out
/// nonpositive; that is reported, not rejected.
pub fn sigma_constants(c: &ConstantInputs) -> (f64, f64) {
    let denom = c.alpha * c.mu0;
    let coupled = 2.0 * (c.ell_f + c.ell_phi).powi(2) / denom;
    let lagged = 2.0 * c.ell_phi.powi(2) / denom;
    let descent = c.mu1 / 2.0 - coupled - lagged;
    match c.assumption {
        Assumption::One => (lagged, descent),
        Assumption::Two => (2.0 * lagged, descent.min(c.mu2 / 2.0)),
    }
}

pub fn alpha_lower_bound(c: &ConstantInputs) -> AlphaBound {
    let numer = 4.0 * ((c.ell_f + c.ell_phi).powi(2) + c.ell_phi.powi(2));
    let bound = if numer == 0.0 {
        0.0
    } else {
        numer / (c.mu1 * c.mu0)
    };
    AlphaBound {
        bound,
        satisfied: c.alpha > bound,
    }
}

/// `kappa1 = sqrt(2)(lf + lphi)/sqrt(mu0)` and
/// `kappa2 = sqrt(2)(2 kappa1 + alpha |A|)/(alpha sqrt(mu_B))`.
pub fn kappa_constants(c: &ConstantInputs, norm_a: f64) -> Result<(f64, f64)> {
    let kappa1 = kappa1(c);
    if !(c.mu_b > 0.0) {
        return Err(Error::InvalidParameter(
            "kappa2 needs an injective B (mu_B > 0)".into(),
        ));
    }
    let kappa2 = 2f64.sqrt() * (2.0 * kappa1 + c.alpha * norm_a) / (c.alpha * c.mu_b.sqrt());
    Ok((kappa1, kappa2))
}

fn kappa1(c: &ConstantInputs) -> f64 {
    2f64.sqrt() * (c.ell_f + c.ell_phi) / c.mu0.sqrt()
}

impl AnalysisConstants {
    pub fn new(inputs: ConstantInputs) -> Result<Self> {
        if !(inputs.mu0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "analysis constants need A A^T positive definite (mu0 = {:e})",
                inputs.mu0
            )));
        }
        if !(inputs.alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {}",
                inputs.alpha
            )));
        }
        let (sigma0, sigma1) = sigma_constants(&inputs);
        let kappa2 = kappa_constants(&inputs, inputs.norm_a)
            .ok()
            .map(|(_, k2)| k2);
        Ok(Self {
            inputs,
            sigma0,
            sigma1,
            kappa1: kappa1(&inputs),
            kappa2,
            alpha_bound: alpha_lower_bound(&inputs),
        })
    }

    /// Measures the constants of `problem` for a run with penalty `alpha` and
    /// generators `phi` (x-step) and `psi` (y-step).
    ///
    /// `mu1` is the strong convexity modulus of `phi`. Assumption One is used
    /// whenever `B` is numerically injective.
    pub fn measure(
        problem: &CompositeProblem,
        alpha: f64,
        phi: &BregmanGenerator,
        psi: &BregmanGenerator,
    ) -> Result<Self> {
        let injective = problem.mu_b() > 1e-12 * problem.norm_b().powi(2).max(f64::MIN_POSITIVE);
        Self::new(ConstantInputs {
            ell_f: problem.loss().ell_f(),
            ell_phi: phi.grad_lipschitz(),
            ell_psi: psi.grad_lipschitz(),
            mu0: problem.mu0(),
            mu1: phi.strong_convexity(),
            mu2: psi.strong_convexity(),
            mu_b: problem.mu_b(),
            alpha,
            norm_a: problem.norm_a(),
            assumption: if injective {
                Assumption::One
            } else {
                Assumption::Two
            },
        })
    }
}

/// `L_alpha(x, y, p)`.
pub fn aug_lagrangian(
    problem: &CompositeProblem,
    alpha: f64,
    x: &DenseVector,
    y: &DenseVector,
    p: &DenseVector,
) -> Result<f64> {
    problem.check_point(x, y, p)?;
    let terms = XTerms::new(problem, x);
    Ok(terms.lagrangian(problem, alpha, y, &problem.apply_b(y), p))
}

/// `L_alpha(x, y, p) + (sigma0/2)|x - x_prev|^2`.
pub fn aux_function(
    problem: &CompositeProblem,
    alpha: f64,
    x: &DenseVector,
    y: &DenseVector,
    p: &DenseVector,
    x_prev: &DenseVector,
    sigma0: f64,
) -> Result<f64> {
    x_prev.check_len(problem.n1(), "x_prev")?;
    Ok(aug_lagrangian(problem, alpha, x, y, p)? + 0.5 * sigma0 * x.dist(x_prev).powi(2))
}

/// Products of `x` shared by every Lagrangian evaluation at that `x`.
#[derive(Debug, Clone)]
pub(crate) struct XTerms {
    /// `D x - b`
    pub residual: DenseVector,
    /// `A x`
    pub ax: DenseVector,
}

impl XTerms {
    pub fn new(problem: &CompositeProblem, x: &DenseVector) -> Self {
        Self {
            residual: problem.loss().residual(x),
            ax: problem.a().mul_vec(x),
        }
    }

    pub fn lagrangian(
        &self,
        problem: &CompositeProblem,
        alpha: f64,
        y: &DenseVector,
        by: &DenseVector,
        p: &DenseVector,
    ) -> f64 {
        let gap = &self.ax - by;
        self.residual.norm_sq() + problem.reg().value(y) + p.dot(&gap) + 0.5 * alpha * gap.norm_sq()
    }
}

/// Signed slack of the three monitored inequalities for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentMargins {
    pub m10: f64,
    pub m11: f64,
    pub m_aux: f64,
    /// `L(z^{k+1})`
    pub l_alpha: f64,
    /// `Lhat(z^{k+1}, x^k)`
    pub l_hat: f64,
}

/// Margins for the step `prev -> next`; `prev.x_prev` supplies `x^{k-1}`.
pub fn descent_check(
    prev: &SolverState,
    next: &SolverState,
    problem: &CompositeProblem,
    c: &AnalysisConstants,
) -> Result<DescentMargins> {
    problem.check_point(&prev.x, &prev.y, &prev.p)?;
    problem.check_point(&next.x, &next.y, &next.p)?;
    prev.x_prev.check_len(problem.n1(), "x_prev")?;
    let old = XTerms::new(problem, &prev.x);
    let new = XTerms::new(problem, &next.x);
    Ok(margins_from_terms(
        prev,
        next,
        &old,
        &new,
        &problem.apply_b(&prev.y),
        &problem.apply_b(&next.y),
        problem,
        c,
    ))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn margins_from_terms(
    prev: &SolverState,
    next: &SolverState,
    old: &XTerms,
    new: &XTerms,
    by_old: &DenseVector,
    by_new: &DenseVector,
    problem: &CompositeProblem,
    c: &AnalysisConstants,
) -> DescentMargins {
    let k = &c.inputs;
    let alpha = k.alpha;
    let dx_sq = next.x.dist(&prev.x).powi(2);
    let lag_sq = prev.x.dist(&prev.x_prev).powi(2);
    let dp_sq = next.p.dist(&prev.p).powi(2);

    let l_start = old.lagrangian(problem, alpha, &prev.y, by_old, &prev.p);
    let l_after_y = old.lagrangian(problem, alpha, &next.y, by_new, &prev.p);
    let l_after_x = new.lagrangian(problem, alpha, &next.y, by_new, &prev.p);
    let l_end = new.lagrangian(problem, alpha, &next.y, by_new, &next.p);

    let m10 = l_after_y - l_after_x - 0.5 * k.mu1 * dx_sq;
    let rhs11 = 2.0 * (k.ell_f + k.ell_phi).powi(2) / k.mu0 * dx_sq
        + 2.0 * k.ell_phi.powi(2) / k.mu0 * lag_sq;
    let m11 = rhs11 - dp_sq;
    let l_hat_start = l_start + 0.5 * c.sigma0 * lag_sq;
    let l_hat_end = l_end + 0.5 * c.sigma0 * dx_sq;
    let m_aux = l_hat_start - l_hat_end - c.sigma1 * dx_sq;

    DescentMargins {
        m10,
        m11,
        m_aux,
        l_alpha: l_end,
        l_hat: l_hat_end,
    }
}

/// Residuals of the stationarity system
/// `-A^T p = grad f(x)`, `B^T p in dg(y)`, `A x = B y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityResidual {
    pub grad_x: f64,
    pub subdiff_y: f64,
    pub primal: f64,
}

impl StationarityResidual {
    pub fn max_component(&self) -> f64 {
        self.grad_x.max(self.subdiff_y).max(self.primal)
    }
}

pub fn stationarity_residual(
    problem: &CompositeProblem,
    x: &DenseVector,
    y: &DenseVector,
    p: &DenseVector,
) -> Result<StationarityResidual> {
    problem.check_point(x, y, p)?;
    let mut grad = problem.loss().gradient(x);
    grad.axpy(1.0, &problem.a().tr_mul_vec(p));
    let subdiff_y = problem.reg().subdiff_dist(&problem.apply_bt(p), y)?;
    let primal = problem.a().mul_vec(x).dist(&problem.apply_b(y));
    Ok(StationarityResidual {
        grad_x: grad.norm(),
        subdiff_y,
        primal,
    })
}

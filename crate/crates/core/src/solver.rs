//! The BADMM loop: a y-step, then an x-step, then the dual step
//! `p+ = p + alpha (A x+ - B y+)`.
//!
//! The x-step is always solved exactly through a cached Cholesky factor of
//! `2 D^T D + alpha A^T A + H_phi`, which needs a quadratic `phi`. The y-step
//! is pluggable:
//!
//! * `ClosedFormSoft` / `ClosedFormHalf` shrink `A x^k + p^k/alpha` at
//!   `lambda/alpha` (soft) or `2 lambda/alpha` (half). They need `B = I` and
//!   ignore `psi`, exactly like the HADMM/SADMM updates.
//! * `ProxLinearY { mu }` adds the linearizing Bregman term and works for any
//!   `B` with `mu > alpha |B|^2`.

use crate::bregman::{linearizing_generator, BregmanGenerator, GeneratorKind};
use crate::error::{Error, Result};
use crate::lagrangian::{margins_from_terms, AnalysisConstants, StationarityResidual, XTerms};
use crate::numerics::{spd_factor, DenseMatrix, DenseVector, SpdFactorization};
use crate::problems::{CompositeProblem, GroundTruth, RegKind};

/// `z^k = (x^k, y^k, p^k)` plus the lagged `x^{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub x: DenseVector,
    pub y: DenseVector,
    pub p: DenseVector,
    pub x_prev: DenseVector,
    pub k: usize,
}

impl SolverState {
    /// A state at `k = 0` with `x_prev = x`.
    pub fn new(x: DenseVector, y: DenseVector, p: DenseVector) -> Self {
        Self {
            x_prev: x.clone(),
            x,
            y,
            p,
            k: 0,
        }
    }

    /// `x = 0, y = A x = 0, p = 0`.
    pub fn zeros(problem: &CompositeProblem) -> Self {
        Self::new(
            DenseVector::zeros(problem.n1()),
            DenseVector::zeros(problem.n2()),
            DenseVector::zeros(problem.mc()),
        )
    }

    /// Euclidean norm of the stacked `(x, y, p)`.
    pub fn z_norm(&self) -> f64 {
        (self.x.norm_sq() + self.y.norm_sq() + self.p.norm_sq()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YStrategy {
    /// Soft shrinkage at `lambda/alpha`; needs an l1 regularizer.
    ClosedFormSoft,
    /// Half shrinkage at `2 lambda/alpha`; needs an l1/2 regularizer.
    ClosedFormHalf,
    ProxLinearY {
        mu: f64,
    },
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub alpha: f64,
    pub max_iters: usize,
    /// Relative step tolerance.
    pub tol: f64,
    pub phi: BregmanGenerator,
    /// Only read for the analysis constants; the closed-form y-steps ignore
    /// it and `ProxLinearY` builds its own linearizing generator.
    pub psi: BregmanGenerator,
    pub strategy: YStrategy,
    pub record_diagnostics: bool,
}

impl SolverConfig {
    /// HADMM: half shrinkage, `phi = psi = (mu/2)|.|^2`.
    pub fn hadmm(alpha: f64, mu: f64) -> Result<Self> {
        Self::with_strategy(alpha, mu, YStrategy::ClosedFormHalf)
    }

    /// SADMM: soft shrinkage, `phi = psi = (mu/2)|.|^2`.
    pub fn sadmm(alpha: f64, mu: f64) -> Result<Self> {
        Self::with_strategy(alpha, mu, YStrategy::ClosedFormSoft)
    }

    /// The closed-form strategy matching `reg`.
    pub fn closed_form_for(reg: RegKind, alpha: f64, mu: f64) -> Result<Self> {
        match reg {
            RegKind::L1 => Self::sadmm(alpha, mu),
            RegKind::LHalf => Self::hadmm(alpha, mu),
        }
    }

    pub fn with_strategy(alpha: f64, mu: f64, strategy: YStrategy) -> Result<Self> {
        let config = Self {
            alpha,
            max_iters: 5000,
            tol: 1e-8,
            phi: BregmanGenerator::squared_norm(mu)?,
            psi: BregmanGenerator::squared_norm(mu)?,
            strategy,
            record_diagnostics: true,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be nonnegative, got {}",
                self.tol
            )));
        }
        if let YStrategy::ProxLinearY { mu } = self.strategy {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "prox-linear mu must be positive and finite, got {mu}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-step checks, filled in when `record_diagnostics` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// `None` when `A A^T` is singular and the constants are undefined.
    pub margins: Option<Margins>,
    pub stationarity: StationarityResidual,
    /// Gradient norm of the x-subproblem objective at `x^{k+1}`.
    pub x_step_grad_norm: f64,
    /// `|A^T p+ + grad f(x+) - grad phi(x^k) + grad phi(x+)|`
    pub x_optimality_residual: f64,
    /// `|L(z+) - L(x+, y+, p^k) - |dp|^2/alpha| / max(1, |L(z+)|)`
    pub dual_identity_gap: f64,
    /// Decrease of the y-subproblem objective (Bregman term included).
    pub y_step_decrease: f64,
    /// Decrease of the x-subproblem objective (Bregman term included).
    pub x_step_decrease: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub m10: f64,
    pub m11: f64,
    pub m_aux: f64,
}

/// One row of the trace, describing the step that produced `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub l_alpha: f64,
    /// `None` when the constants are undefined.
    pub l_hat: Option<f64>,
    pub primal_residual: f64,
    pub dx: f64,
    pub dy: f64,
    pub dp: f64,
    /// `(1/n1)|x* - x^k|`, a scaled norm rather than a squared error.
    pub mse_x: Option<f64>,
    /// `(1/n2)|y* - y^k|`
    pub mse_y: Option<f64>,
    pub diagnostics: Option<StepDiagnostics>,
}

impl IterationRecord {
    /// `|z^k - z^{k-1}|`
    pub fn dz(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dp * self.dp).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    StepTolerance,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub state: SolverState,
    pub trace: Vec<IterationRecord>,
    pub termination: Termination,
    pub constants: Option<AnalysisConstants>,
}

#[derive(Debug, Clone)]
enum Hessian {
    Scaled(f64),
    Dense(DenseMatrix),
}

impl Hessian {
    fn apply(&self, x: &DenseVector) -> DenseVector {
        match self {
            Hessian::Scaled(s) => x.scaled(*s),
            Hessian::Dense(h) => h.mul_vec(x),
        }
    }
}

/// Cached pieces of the exact x-step:
/// `x+ = M^{-1} (H_phi x^k + alpha A^T B y+ + 2 D^T b - A^T p^k)` with
/// `M = 2 D^T D + alpha A^T A + H_phi`.
#[derive(Debug, Clone)]
pub struct XStepOperator {
    factor: SpdFactorization,
    hessian: Hessian,
    two_dtb: DenseVector,
    alpha: f64,
}

impl XStepOperator {
    pub fn new(problem: &CompositeProblem, alpha: f64, phi: &BregmanGenerator) -> Result<Self> {
        let n = problem.n1();
        let hessian = match phi.kind() {
            GeneratorKind::SquaredNorm { scale } => Hessian::Scaled(*scale),
            GeneratorKind::Zero => Hessian::Scaled(0.0),
            _ => Hessian::Dense(phi.hessian(n).ok_or_else(|| {
                Error::SubproblemFailure("the exact x-step needs a quadratic phi".into())
            })?),
        };
        if let Hessian::Dense(h) = &hessian {
            if h.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "phi acts on {} variables, x has {n}",
                    h.rows()
                )));
            }
        }
        let loss = problem.loss();
        let mut m = loss.d().gram().scaled(2.0);
        m.add_scaled(alpha, &problem.a().gram());
        match &hessian {
            Hessian::Scaled(s) => m.add_diag(*s),
            Hessian::Dense(h) => m.add_scaled(1.0, h),
        }
        Ok(Self {
            factor: spd_factor(&m)?,
            hessian,
            two_dtb: loss.d().tr_mul_vec(loss.b()).scaled(2.0),
            alpha,
        })
    }
}

/// Exact y-step for the closed-form strategies.
pub fn closed_form_y_step(
    state: &SolverState,
    problem: &CompositeProblem,
    config: &SolverConfig,
) -> Result<DenseVector> {
    problem.check_point(&state.x, &state.y, &state.p)?;
    closed_form_y_from(&problem.a().mul_vec(&state.x), state, problem, config)
}

fn closed_form_y_from(
    ax: &DenseVector,
    state: &SolverState,
    problem: &CompositeProblem,
    config: &SolverConfig,
) -> Result<DenseVector> {
    let expected = match config.strategy {
        YStrategy::ClosedFormSoft => RegKind::L1,
        YStrategy::ClosedFormHalf => RegKind::LHalf,
        YStrategy::ProxLinearY { .. } => {
            return Err(Error::StrategyMismatch(
                "closed-form y-step called with a prox-linear strategy".into(),
            ))
        }
    };
    if !problem.b_is_identity() {
        return Err(Error::StrategyMismatch(
            "closed-form y-steps need B = I; use ProxLinearY".into(),
        ));
    }
    if problem.reg().kind() != expected {
        return Err(Error::StrategyMismatch(format!(
            "{:?} does not match a {:?} regularizer",
            config.strategy,
            problem.reg().kind()
        )));
    }
    let mut v = ax.clone();
    v.axpy(1.0 / config.alpha, &state.p);
    problem.reg().prox(&v, config.alpha)
}

/// Linearized y-step: with `c = A x^k + p^k/alpha`, shrink
/// `y^k - (alpha/mu) B^T (B y^k - c)` at coupling `mu`.
pub fn proxlinear_y_step(
    state: &SolverState,
    problem: &CompositeProblem,
    config: &SolverConfig,
    mu: f64,
) -> Result<DenseVector> {
    problem.check_point(&state.x, &state.y, &state.p)?;
    proxlinear_y_from(
        &problem.a().mul_vec(&state.x),
        state,
        problem,
        config.alpha,
        mu,
    )
}

fn proxlinear_y_from(
    ax: &DenseVector,
    state: &SolverState,
    problem: &CompositeProblem,
    alpha: f64,
    mu: f64,
) -> Result<DenseVector> {
    let bound = alpha * problem.norm_b().powi(2);
    if !(mu > bound) {
        return Err(Error::ConvexityViolation { mu, bound });
    }
    let mut residual = problem.apply_b(&state.y);
    residual.axpy(-1.0, ax);
    residual.axpy(-1.0 / alpha, &state.p);
    let mut v = state.y.clone();
    v.axpy(-alpha / mu, &problem.apply_bt(&residual));
    problem.reg().prox(&v, mu)
}

/// Exact x-step given `y^{k+1}`.
pub fn closed_form_x_step(
    state: &SolverState,
    y_next: &DenseVector,
    problem: &CompositeProblem,
    op: &XStepOperator,
) -> Result<DenseVector> {
    problem.check_point(&state.x, y_next, &state.p)?;
    let mut coupling = problem.apply_b(y_next).scaled(op.alpha);
    coupling.axpy(-1.0, &state.p);
    let mut w = op.hessian.apply(&state.x);
    w.axpy(1.0, &problem.a().tr_mul_vec(&coupling));
    w.axpy(1.0, &op.two_dtb);
    op.factor.solve(&w)
}

/// One full iteration. Refactors the x-step matrix on every call; [`solve`]
/// factors it once.
pub fn badmm_iterate(
    state: &SolverState,
    problem: &CompositeProblem,
    config: &SolverConfig,
) -> Result<SolverState> {
    config.validate()?;
    problem.check_point(&state.x, &state.y, &state.p)?;
    let engine = Engine::new(problem, config)?;
    let terms = XTerms::new(problem, &state.x);
    Ok(engine.step(state, &terms)?.0)
}

struct Engine<'a> {
    problem: &'a CompositeProblem,
    config: &'a SolverConfig,
    xop: XStepOperator,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a CompositeProblem, config: &'a SolverConfig) -> Result<Self> {
        Ok(Self {
            problem,
            config,
            xop: XStepOperator::new(problem, config.alpha, &config.phi)?,
        })
    }

    fn y_step(&self, ax: &DenseVector, state: &SolverState) -> Result<DenseVector> {
        match self.config.strategy {
            YStrategy::ProxLinearY { mu } => {
                proxlinear_y_from(ax, state, self.problem, self.config.alpha, mu)
            }
            _ => closed_form_y_from(ax, state, self.problem, self.config),
        }
    }

    /// Returns the next state, the products at its `x`, and `B y+`.
    fn step(
        &self,
        state: &SolverState,
        terms: &XTerms,
    ) -> Result<(SolverState, XTerms, DenseVector)> {
        let y = self.y_step(&terms.ax, state)?;
        let x = closed_form_x_step(state, &y, self.problem, &self.xop)?;
        let new_terms = XTerms::new(self.problem, &x);
        let by = self.problem.apply_b(&y);
        let mut p = state.p.clone();
        p.axpy(self.config.alpha, &(&new_terms.ax - &by));
        if !(x.is_finite() && y.is_finite() && p.is_finite()) {
            return Err(Error::NonFinite("iterate"));
        }
        let next = SolverState {
            x_prev: state.x.clone(),
            x,
            y,
            p,
            k: state.k + 1,
        };
        Ok((next, new_terms, by))
    }

    #[allow(clippy::too_many_arguments)]
    fn diagnostics(
        &self,
        prev: &SolverState,
        next: &SolverState,
        old: &XTerms,
        new: &XTerms,
        by_old: &DenseVector,
        by_new: &DenseVector,
        constants: Option<&AnalysisConstants>,
        l_end: f64,
    ) -> Result<StepDiagnostics> {
        let problem = self.problem;
        let alpha = self.config.alpha;
        let phi = &self.config.phi;
        let a = problem.a();
        let dx = &next.x - &prev.x;
        let dy = &next.y - &prev.y;

        let grad_f = problem.loss().d().tr_mul_vec(&new.residual).scaled(2.0);
        let at_p_next = a.tr_mul_vec(&next.p);

        // x-subproblem gradient, assembled term by term from p^k
        let mut g = grad_f.clone();
        g.axpy(1.0, &a.tr_mul_vec(&prev.p));
        g.axpy(alpha, &a.tr_mul_vec(&(&new.ax - by_new)));
        g.axpy(1.0, &self.xop.hessian.apply(&dx));
        let x_step_grad_norm = g.norm();

        let mut x_opt = at_p_next.clone();
        x_opt.axpy(1.0, &grad_f);
        x_opt.axpy(-1.0, &phi.gradient(&prev.x)?);
        x_opt.axpy(1.0, &phi.gradient(&next.x)?);

        let l_before_dual = new.lagrangian(problem, alpha, &next.y, by_new, &prev.p);
        let dp_sq = next.p.dist(&prev.p).powi(2);
        let dual_identity_gap =
            (l_end - l_before_dual - dp_sq / alpha).abs() / l_end.abs().max(1.0);

        let l_start = old.lagrangian(problem, alpha, &prev.y, by_old, &prev.p);
        let l_after_y = old.lagrangian(problem, alpha, &next.y, by_new, &prev.p);
        let psi_dist = match self.config.strategy {
            YStrategy::ProxLinearY { mu } => {
                0.5 * mu * dy.norm_sq() - 0.5 * alpha * problem.apply_b(&dy).norm_sq()
            }
            _ => 0.0,
        };
        let phi_dist = 0.5 * dx.dot(&self.xop.hessian.apply(&dx));

        let mut grad_x = grad_f;
        grad_x.axpy(1.0, &at_p_next);
        let stationarity = StationarityResidual {
            grad_x: grad_x.norm(),
            subdiff_y: problem
                .reg()
                .subdiff_dist(&problem.apply_bt(&next.p), &next.y)?,
            primal: new.ax.dist(by_new),
        };

        let margins = constants.map(|c| {
            let m = margins_from_terms(prev, next, old, new, by_old, by_new, problem, c);
            Margins {
                m10: m.m10,
                m11: m.m11,
                m_aux: m.m_aux,
            }
        });

        Ok(StepDiagnostics {
            margins,
            stationarity,
            x_step_grad_norm,
            x_optimality_residual: x_opt.norm(),
            dual_identity_gap,
            y_step_decrease: l_start - l_after_y - psi_dist,
            x_step_decrease: l_after_y - l_before_dual - phi_dist,
        })
    }
}

/// Constants for the diagnostics, or `None` when they are undefined.
fn run_constants(problem: &CompositeProblem, config: &SolverConfig) -> Option<AnalysisConstants> {
    let psi = match config.strategy {
        YStrategy::ProxLinearY { mu } => linearizing_generator(
            problem.b(),
            config.alpha,
            mu,
            &DenseVector::zeros(problem.mc()),
        )
        .ok()?,
        _ => config.psi.clone(),
    };
    AnalysisConstants::measure(problem, config.alpha, &config.phi, &psi).ok()
}

/// Runs BADMM from `init` until the relative step
/// `|z^{k+1} - z^k| <= tol (1 + |z^k|)` or `max_iters` steps.
pub fn solve(
    problem: &CompositeProblem,
    config: &SolverConfig,
    init: &SolverState,
    ground_truth: Option<&GroundTruth>,
) -> Result<SolveOutput> {
    config.validate()?;
    problem.check_point(&init.x, &init.y, &init.p)?;
    init.x_prev.check_len(problem.n1(), "x_prev")?;
    if let Some(gt) = ground_truth {
        gt.x_star.check_len(problem.n1(), "ground truth x")?;
        gt.y_star.check_len(problem.n2(), "ground truth y")?;
    }
    if let YStrategy::ProxLinearY { mu } = config.strategy {
        let bound = config.alpha * problem.norm_b().powi(2);
        if !(mu > bound) {
            return Err(Error::ConvexityViolation { mu, bound });
        }
    }

    let engine = Engine::new(problem, config)?;
    let constants = run_constants(problem, config);
    let alpha = config.alpha;
    let n1 = problem.n1() as f64;
    let n2 = problem.n2() as f64;

    let mut state = init.clone();
    let mut terms = XTerms::new(problem, &state.x);
    let mut by = problem.apply_b(&state.y);
    let mut trace = Vec::with_capacity(config.max_iters.min(100_000));
    let mut termination = Termination::MaxIters;

    for _ in 0..config.max_iters {
        let (next, new_terms, new_by) = engine.step(&state, &terms)?;
        let l_alpha = new_terms.lagrangian(problem, alpha, &next.y, &new_by, &next.p);
        let dx = next.x.dist(&state.x);
        let dy = next.y.dist(&state.y);
        let dp = next.p.dist(&state.p);
        let diagnostics = if config.record_diagnostics {
            Some(engine.diagnostics(
                &state,
                &next,
                &terms,
                &new_terms,
                &by,
                &new_by,
                constants.as_ref(),
                l_alpha,
            )?)
        } else {
            None
        };
        let record = IterationRecord {
            k: next.k,
            l_alpha,
            l_hat: constants.map(|c| l_alpha + 0.5 * c.sigma0 * dx * dx),
            primal_residual: new_terms.ax.dist(&new_by),
            dx,
            dy,
            dp,
            mse_x: ground_truth.map(|gt| gt.x_star.dist(&next.x) / n1),
            mse_y: ground_truth.map(|gt| gt.y_star.dist(&next.y) / n2),
            diagnostics,
        };
        let converged = record.dz() <= config.tol * (1.0 + state.z_norm());
        trace.push(record);
        state = next;
        terms = new_terms;
        by = new_by;
        if converged {
            termination = Termination::StepTolerance;
            break;
        }
    }

    Ok(SolveOutput {
        state,
        trace,
        termination,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::aug_lagrangian;
    use crate::problems::{difference_matrix, QuadraticLoss, Regularizer};

    fn v(xs: &[f64]) -> DenseVector {
        DenseVector::from_slice(xs).unwrap()
    }

    /// The 3-variable instance used for the hand trace.
    fn hand_problem() -> CompositeProblem {
        let d = DenseMatrix::from_rows(&[&[1.0, 0.0, 2.0], &[0.0, 1.0, -1.0]]).unwrap();
        let loss = QuadraticLoss::new(d, v(&[1.0, 2.0])).unwrap();
        let reg = Regularizer::new(RegKind::L1, 0.5).unwrap();
        CompositeProblem::new(
            loss,
            reg,
            difference_matrix(3).unwrap(),
            DenseMatrix::identity(2),
        )
        .unwrap()
    }

    fn hand_state() -> SolverState {
        SolverState::new(v(&[1.0, -1.0, 0.5]), v(&[0.0, 0.0]), v(&[0.25, -0.5]))
    }

    #[test]
    fn hand_traced_sadmm_iteration() {
        // Exact rational values from a symbolic evaluation:
        // y1 = (-13/8, 1), x1 = (159/110, -46/275, -73/275),
        // p1 = (151/550, -1483/550).
        let problem = hand_problem();
        let config = SolverConfig::sadmm(2.0, 1.0).unwrap();
        let next = badmm_iterate(&hand_state(), &problem, &config).unwrap();
        let close = |got: &DenseVector, want: &[f64]| {
            got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-12)
        };
        assert!(close(&next.y, &[-13.0 / 8.0, 1.0]), "{:?}", next.y);
        assert!(
            close(&next.x, &[159.0 / 110.0, -46.0 / 275.0, -73.0 / 275.0]),
            "{:?}",
            next.x
        );
        assert!(
            close(&next.p, &[151.0 / 550.0, -1483.0 / 550.0]),
            "{:?}",
            next.p
        );
        assert_eq!(next.x_prev, hand_state().x);
        assert_eq!(next.k, 1);
    }

    #[test]
    fn dual_step_is_exact() {
        let problem = hand_problem();
        let config = SolverConfig::sadmm(2.0, 1.0).unwrap();
        let s0 = hand_state();
        let s1 = badmm_iterate(&s0, &problem, &config).unwrap();
        let mut expected = s0.p.clone();
        expected.axpy(2.0, &(&problem.a().mul_vec(&s1.x) - &s1.y));
        assert!(s1.p.dist(&expected) <= 1e-15);
    }

    #[test]
    fn x_step_degenerate_scalar_algebra() {
        // D = I, A = 0, b = 0, p = 0 gives x+ = mu x / (2 + mu)
        let loss = QuadraticLoss::new(DenseMatrix::identity(3), DenseVector::zeros(3)).unwrap();
        let reg = Regularizer::new(RegKind::L1, 1.0).unwrap();
        let problem = CompositeProblem::new(
            loss,
            reg,
            DenseMatrix::zeros(2, 3),
            DenseMatrix::identity(2),
        )
        .unwrap();
        let mu = 3.0;
        let config = SolverConfig::sadmm(1.0, mu).unwrap();
        let op = XStepOperator::new(&problem, 1.0, &config.phi).unwrap();
        let state = SolverState::new(
            v(&[1.0, -2.0, 5.0]),
            DenseVector::zeros(2),
            DenseVector::zeros(2),
        );
        let x = closed_form_x_step(&state, &DenseVector::zeros(2), &problem, &op).unwrap();
        for (xi, x0) in x.iter().zip(state.x.iter()) {
            assert!((xi - mu * x0 / (2.0 + mu)).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_y_zero_input() {
        let problem = hand_problem();
        let config = SolverConfig::sadmm(2.0, 1.0).unwrap();
        let state = SolverState::new(v(&[0.7, 0.7, 0.7]), v(&[3.0, 3.0]), DenseVector::zeros(2));
        let y = closed_form_y_step(&state, &problem, &config).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn closed_form_rejects_mismatches() {
        let problem = hand_problem();
        let state = hand_state();
        let half = SolverConfig::hadmm(2.0, 1.0).unwrap();
        assert!(matches!(
            closed_form_y_step(&state, &problem, &half),
            Err(Error::StrategyMismatch(_))
        ));

        let loss = problem.loss().clone();
        let b = DenseMatrix::from_diag(&[2.0, 1.0]).unwrap();
        let skewed = CompositeProblem::new(loss, *problem.reg(), problem.a().clone(), b).unwrap();
        let soft = SolverConfig::sadmm(2.0, 1.0).unwrap();
        assert!(matches!(
            closed_form_y_step(&state, &skewed, &soft),
            Err(Error::StrategyMismatch(_))
        ));
    }

    #[test]
    fn prox_linear_precondition() {
        let problem = hand_problem();
        let config =
            SolverConfig::with_strategy(2.0, 1.0, YStrategy::ProxLinearY { mu: 2.0 }).unwrap();
        assert!(matches!(
            proxlinear_y_step(&hand_state(), &problem, &config, 2.0),
            Err(Error::ConvexityViolation { .. })
        ));
        assert!(matches!(
            solve(&problem, &config, &hand_state(), None),
            Err(Error::ConvexityViolation { .. })
        ));
    }

    #[test]
    fn prox_linear_does_not_increase_subproblem() {
        let problem = hand_problem();
        let mu = 5.0;
        let config = SolverConfig::with_strategy(2.0, 1.0, YStrategy::ProxLinearY { mu }).unwrap();
        let state = SolverState::new(v(&[1.0, -1.0, 0.5]), v(&[0.3, -2.0]), v(&[0.25, -0.5]));
        let y = proxlinear_y_step(&state, &problem, &config, mu).unwrap();
        let dy = &y - &state.y;
        let psi_dist = 0.5 * mu * dy.norm_sq() - 0.5 * 2.0 * dy.norm_sq();
        let before = aug_lagrangian(&problem, 2.0, &state.x, &state.y, &state.p).unwrap();
        let after = aug_lagrangian(&problem, 2.0, &state.x, &y, &state.p).unwrap() + psi_dist;
        assert!(after <= before + 1e-10);
    }

    #[test]
    fn max_iters_one_gives_one_record() {
        let problem = hand_problem();
        let mut config = SolverConfig::sadmm(2.0, 1.0).unwrap();
        config.max_iters = 1;
        let out = solve(&problem, &config, &SolverState::zeros(&problem), None).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].k, 1);
        assert!(out.trace[0].mse_x.is_none());
        assert_eq!(out.termination, Termination::MaxIters);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::sadmm(0.0, 1.0).is_err());
        let mut c = SolverConfig::sadmm(1.0, 1.0).unwrap();
        c.max_iters = 0;
        let problem = hand_problem();
        assert!(solve(&problem, &c, &SolverState::zeros(&problem), None).is_err());
    }
}

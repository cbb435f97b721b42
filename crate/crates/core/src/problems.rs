//! Problem instances `min f(x) + g(y) s.t. A x = B y` and the generator for
//! the difference-operator sparse recovery experiment.
//!
//! All random data comes from xoshiro256** seeded with a `u64`; normals use the
//! Box-Muller transform. Results are reproducible for a given seed within this
//! implementation.

use std::f64::consts::PI;

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::numerics::{eig_extremes, spectral_norm, DenseMatrix, DenseVector};
use crate::proximal::{shrink_vector, ShrinkageKind};

/// Regularizer family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegKind {
    /// `lambda * sum |y_i|`
    L1,
    /// `lambda * sum |y_i|^(1/2)`
    LHalf,
}

impl RegKind {
    pub fn shrinkage(self) -> ShrinkageKind {
        match self {
            RegKind::L1 => ShrinkageKind::Soft,
            RegKind::LHalf => ShrinkageKind::Half,
        }
    }
}

/// `g(y)` with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularizer {
    kind: RegKind,
    lambda: f64,
}

impl Regularizer {
    pub fn new(kind: RegKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "regularization weight must be positive, got {lambda}"
            )));
        }
        Ok(Self { kind, lambda })
    }

    pub fn kind(&self) -> RegKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn value(&self, y: &DenseVector) -> f64 {
        let sum: f64 = match self.kind {
            RegKind::L1 => y.iter().map(|v| v.abs()).sum(),
            RegKind::LHalf => y.iter().map(|v| v.abs().sqrt()).sum(),
        };
        self.lambda * sum
    }

    /// `argmin_y g(y) + (alpha/2)|y - v|^2`.
    ///
    /// Soft shrinkage at `lambda/alpha` for l1, half shrinkage at
    /// `2 lambda/alpha` for l1/2.
    pub fn prox(&self, v: &DenseVector, alpha: f64) -> Result<DenseVector> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prox coupling must be positive, got {alpha}"
            )));
        }
        let kappa = match self.kind {
            RegKind::L1 => self.lambda / alpha,
            RegKind::LHalf => 2.0 * self.lambda / alpha,
        };
        shrink_vector(v, kappa, self.kind.shrinkage())
    }

    /// Euclidean distance from `u` to the limiting subdifferential of `g`
    /// at `y`, computed componentwise.
    ///
    /// At `y_i = 0` the l1 component set is `[-lambda, lambda]` and the l1/2
    /// component set is the whole line.
    pub fn subdiff_dist(&self, u: &DenseVector, y: &DenseVector) -> Result<f64> {
        u.check_len(y.len(), "subdifferential point")?;
        let lam = self.lambda;
        let sum_sq: f64 = u
            .iter()
            .zip(y)
            .map(|(&ui, &yi)| {
                let d = match (self.kind, yi == 0.0) {
                    (RegKind::L1, false) => ui - lam * yi.signum(),
                    (RegKind::L1, true) => (ui.abs() - lam).max(0.0),
                    (RegKind::LHalf, false) => ui - lam * yi.signum() / (2.0 * yi.abs().sqrt()),
                    (RegKind::LHalf, true) => 0.0,
                };
                d * d
            })
            .sum();
        Ok(sum_sq.sqrt())
    }
}

/// `f(x) = |D x - b|^2`.
#[derive(Debug, Clone)]
pub struct QuadraticLoss {
    d: DenseMatrix,
    b: DenseVector,
    ell_f: f64,
}

impl QuadraticLoss {
    pub fn new(d: DenseMatrix, b: DenseVector) -> Result<Self> {
        b.check_len(d.rows(), "observations")?;
        let norm = spectral_norm(&d)?;
        Ok(Self {
            ell_f: 2.0 * norm * norm,
            d,
            b,
        })
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn b(&self) -> &DenseVector {
        &self.b
    }

    /// Lipschitz constant of the gradient, `2 lambda_max(D^T D)`.
    pub fn ell_f(&self) -> f64 {
        self.ell_f
    }

    pub fn dim(&self) -> usize {
        self.d.cols()
    }

    /// `D x - b`
    pub fn residual(&self, x: &DenseVector) -> DenseVector {
        let mut r = self.d.mul_vec(x);
        r.axpy(-1.0, &self.b);
        r
    }

    pub fn value(&self, x: &DenseVector) -> f64 {
        self.residual(x).norm_sq()
    }

    /// `2 D^T (D x - b)`
    pub fn gradient(&self, x: &DenseVector) -> DenseVector {
        self.d.tr_mul_vec(&self.residual(x)).scaled(2.0)
    }
}

/// The full composite problem with the spectral quantities the analysis
/// needs cached at construction.
#[derive(Debug, Clone)]
pub struct CompositeProblem {
    loss: QuadraticLoss,
    reg: Regularizer,
    a: DenseMatrix,
    b: DenseMatrix,
    mu0: f64,
    mu_b: f64,
    norm_a: f64,
    norm_b: f64,
    b_is_identity: bool,
}

impl CompositeProblem {
    pub fn new(
        loss: QuadraticLoss,
        reg: Regularizer,
        a: DenseMatrix,
        b: DenseMatrix,
    ) -> Result<Self> {
        if a.rows() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "A has {} rows but B has {}",
                a.rows(),
                b.rows()
            )));
        }
        if loss.dim() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "loss acts on {} variables but A has {} columns",
                loss.dim(),
                a.cols()
            )));
        }
        let (mu0, max_aat) = eig_extremes(&a.outer_gram())?;
        let (mu_b, max_btb) = eig_extremes(&b.gram())?;
        Ok(Self {
            b_is_identity: b.is_identity(),
            loss,
            reg,
            a,
            b,
            mu0,
            mu_b,
            norm_a: max_aat.max(0.0).sqrt(),
            norm_b: max_btb.max(0.0).sqrt(),
        })
    }

    pub fn loss(&self) -> &QuadraticLoss {
        &self.loss
    }

    pub fn reg(&self) -> &Regularizer {
        &self.reg
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    /// `lambda_min(A A^T)`; may be tiny or zero.
    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    /// `lambda_min(B^T B)`; zero when `B` is not injective.
    pub fn mu_b(&self) -> f64 {
        self.mu_b
    }

    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }

    pub fn norm_b(&self) -> f64 {
        self.norm_b
    }

    pub fn b_is_identity(&self) -> bool {
        self.b_is_identity
    }

    /// Length of `x`.
    pub fn n1(&self) -> usize {
        self.a.cols()
    }

    /// Length of `y`.
    pub fn n2(&self) -> usize {
        self.b.cols()
    }

    /// Length of the multiplier `p`.
    pub fn mc(&self) -> usize {
        self.a.rows()
    }

    /// `B y`, skipping the product when `B` is the identity.
    pub fn apply_b(&self, y: &DenseVector) -> DenseVector {
        if self.b_is_identity {
            y.clone()
        } else {
            self.b.mul_vec(y)
        }
    }

    /// `B^T p`.
    pub fn apply_bt(&self, p: &DenseVector) -> DenseVector {
        if self.b_is_identity {
            p.clone()
        } else {
            self.b.tr_mul_vec(p)
        }
    }

    pub(crate) fn check_point(
        &self,
        x: &DenseVector,
        y: &DenseVector,
        p: &DenseVector,
    ) -> Result<()> {
        x.check_len(self.n1(), "x")?;
        y.check_len(self.n2(), "y")?;
        p.check_len(self.mc(), "p")
    }
}

/// Reference signal used for the error metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub x_star: DenseVector,
    pub y_star: DenseVector,
}

/// The `(n-1) x n` first-order difference operator: `-1` on the diagonal,
/// `+1` on the superdiagonal.
pub fn difference_matrix(n: usize) -> Result<DenseMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "difference matrix needs n >= 2, got {n}"
        )));
    }
    let mut a = DenseMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        a.set(i, i, -1.0);
        a.set(i, i + 1, 1.0);
    }
    Ok(a)
}

/// Seeded xoshiro256** stream with Box-Muller normals.
pub struct SeededRng {
    inner: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.random_range(lo..=hi)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub(crate) fn inner(&mut self) -> &mut Xoshiro256StarStar {
        &mut self.inner
    }
}

/// `m x n` matrix with i.i.d. `N(0, 1/m)` entries.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian matrix needs positive dimensions, got {m}x{n}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let std = 1.0 / (m as f64).sqrt();
    let data = (0..m * n).map(|_| std * rng.standard_normal()).collect();
    DenseMatrix::new(m, n, data)
}

/// Piecewise-constant vector with exactly `jump_count` change points.
///
/// Change positions are drawn without replacement; segment levels are
/// uniform on `[-amplitude, amplitude]` and consecutive levels always differ.
pub fn piecewise_constant_signal(
    n: usize,
    jump_count: usize,
    amplitude: f64,
    seed: u64,
) -> Result<DenseVector> {
    if jump_count == 0 || jump_count >= n {
        return Err(Error::InvalidParameter(format!(
            "jump count must satisfy 1 <= jumps < n (jumps = {jump_count}, n = {n})"
        )));
    }
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    // a change at position j means x[j + 1] != x[j]
    let mut changes = index::sample(rng.inner(), n - 1, jump_count).into_vec();
    changes.sort_unstable();

    let mut level = rng.uniform_in(-amplitude, amplitude);
    let mut out = Vec::with_capacity(n);
    let mut next = changes.iter().peekable();
    for i in 0..n {
        out.push(level);
        if next.peek() == Some(&&i) {
            next.next();
            let mut fresh = rng.uniform_in(-amplitude, amplitude);
            while fresh == level {
                fresh = rng.uniform_in(-amplitude, amplitude);
            }
            level = fresh;
        }
    }
    DenseVector::new(out)
}

/// Parameters of the difference-operator recovery experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TvProblemSpec {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub reg: RegKind,
    pub seed: u64,
    pub noise_sigma: f64,
    pub jumps: usize,
    pub amplitude: f64,
}

impl Default for TvProblemSpec {
    fn default() -> Self {
        Self {
            n: 512,
            m: 256,
            lambda: 0.015,
            reg: RegKind::LHalf,
            seed: 1,
            noise_sigma: 0.0,
            jumps: 20,
            amplitude: 1.0,
        }
    }
}

/// Builds `min |D x - b|^2 + g(y) s.t. A x = y` with `A` the difference
/// operator, `D` Gaussian (seed), a piecewise-constant ground truth
/// (seed + 1), and optional Gaussian noise on `b` (seed + 2).
pub fn make_tv_problem(spec: &TvProblemSpec) -> Result<(CompositeProblem, GroundTruth)> {
    if !(spec.noise_sigma >= 0.0) || !spec.noise_sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be nonnegative, got {}",
            spec.noise_sigma
        )));
    }
    let a = difference_matrix(spec.n)?;
    let b_mat = DenseMatrix::identity(spec.n - 1);
    let d = gaussian_matrix(spec.m, spec.n, spec.seed)?;
    let x_star = piecewise_constant_signal(
        spec.n,
        spec.jumps,
        spec.amplitude,
        spec.seed.wrapping_add(1),
    )?;

    let mut obs = d.mul_vec(&x_star);
    if spec.noise_sigma > 0.0 {
        let mut rng = SeededRng::new(spec.seed.wrapping_add(2));
        for v in obs.as_mut_slice() {
            *v += spec.noise_sigma * rng.standard_normal();
        }
    }
    let y_star = a.mul_vec(&x_star);

    let loss = QuadraticLoss::new(d, obs)?;
    let reg = Regularizer::new(spec.reg, spec.lambda)?;
    let problem = CompositeProblem::new(loss, reg, a, b_mat)?;
    Ok((problem, GroundTruth { x_star, y_star }))
}

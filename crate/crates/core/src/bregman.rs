//! Bregman generators and the distance they induce,
//! `D(x, y) = phi(x) - phi(y) - <grad phi(y), x - y>`.
//!
//! Besides the textbook generators this module provides the linearizing
//! generator `psi(y) = (mu/2)|y|^2 - (alpha/2)|B y - c|^2`. Adding its
//! distance to a y-subproblem cancels the coupling through `B` and leaves a
//! plain proximal step.

use crate::error::{Error, Result};
use crate::numerics::{self, spd_factor, DenseMatrix, DenseVector};

/// Where a generator is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    AllReals,
    PositiveOrthant,
}

/// The builtin generator families.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    /// `(scale/2) |x|^2`
    SquaredNorm { scale: f64 },
    /// `<Q x, x>`, so the distance is the Mahalanobis form `|x - y|_Q^2`.
    Mahalanobis { q: DenseMatrix },
    /// `-sum log x_i`
    ItakuraSaito,
    /// `sum x_i log x_i`
    KullbackLeibler,
    /// `phi = 0`; the distance vanishes identically.
    Zero,
    /// `(mu/2)|y|^2 - (alpha/2)|B y - c|^2`, built by [`linearizing_generator`].
    Linearizing {
        b: DenseMatrix,
        alpha: f64,
        mu: f64,
        c: DenseVector,
    },
}

/// A convex differentiable function together with the constants the
/// convergence diagnostics need.
#[derive(Debug, Clone, PartialEq)]
pub struct BregmanGenerator {
    kind: GeneratorKind,
    strong_convexity: f64,
    grad_lipschitz: f64,
    domain: Domain,
}

/// Builds one of the builtin generators and computes its moduli.
///
/// Itakura-Saito and Kullback-Leibler are not strongly convex and have no
/// global gradient Lipschitz constant; they report `0` and `+inf`.
pub fn make_generator(kind: GeneratorKind) -> Result<BregmanGenerator> {
    let (strong_convexity, grad_lipschitz, domain) = match &kind {
        GeneratorKind::SquaredNorm { scale } => {
            if !(*scale >= 0.0) || !scale.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "squared-norm scale must be finite and nonnegative, got {scale}"
                )));
            }
            (*scale, *scale, Domain::AllReals)
        }
        GeneratorKind::Mahalanobis { q } => {
            spd_factor(q)?;
            let lo = numerics::min_eig_symmetric(q)?;
            let hi = numerics::max_eig_symmetric(q)?;
            (2.0 * lo, 2.0 * hi, Domain::AllReals)
        }
        GeneratorKind::ItakuraSaito | GeneratorKind::KullbackLeibler => {
            (0.0, f64::INFINITY, Domain::PositiveOrthant)
        }
        GeneratorKind::Zero => (0.0, 0.0, Domain::AllReals),
        GeneratorKind::Linearizing { b, alpha, mu, c } => {
            return linearizing_generator(b, *alpha, *mu, c);
        }
    };
    Ok(BregmanGenerator {
        kind,
        strong_convexity,
        grad_lipschitz,
        domain,
    })
}

/// `psi(y) = (mu/2)|y|^2 - (alpha/2)|B y - c|^2`, convex only when
/// `mu > alpha |B|^2`.
///
/// Its strong convexity modulus is `mu - alpha |B|^2`; `mu` is reported as
/// the gradient Lipschitz constant, which bounds the exact value from above.
pub fn linearizing_generator(
    b: &DenseMatrix,
    alpha: f64,
    mu: f64,
    c: &DenseVector,
) -> Result<BregmanGenerator> {
    if !(alpha > 0.0) || !(mu > 0.0) || !alpha.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "linearizing generator needs positive alpha and mu (alpha = {alpha}, mu = {mu})"
        )));
    }
    c.check_len(b.rows(), "linearizing generator shift")?;
    let norm_b = numerics::spectral_norm(b)?;
    let bound = alpha * norm_b * norm_b;
    if mu <= bound {
        return Err(Error::ConvexityViolation { mu, bound });
    }
    Ok(BregmanGenerator {
        kind: GeneratorKind::Linearizing {
            b: b.clone(),
            alpha,
            mu,
            c: c.clone(),
        },
        strong_convexity: mu - bound,
        grad_lipschitz: mu,
        domain: Domain::AllReals,
    })
}

/// Center of the proximal step produced by the linearizing generator:
/// `y_k - (alpha/mu) B^T (B y_k - c)`.
pub fn linearized_prox_center(
    b: &DenseMatrix,
    alpha: f64,
    mu: f64,
    y_k: &DenseVector,
    c: &DenseVector,
) -> Result<DenseVector> {
    y_k.check_len(b.cols(), "prox center anchor")?;
    c.check_len(b.rows(), "prox center shift")?;
    let mut residual = b.mul_vec(y_k);
    residual.axpy(-1.0, c);
    let mut v = y_k.clone();
    v.axpy(-alpha / mu, &b.tr_mul_vec(&residual));
    Ok(v)
}

/// `phi(x) - phi(y) - <grad phi(y), x - y>`.
pub fn bregman_distance(gen: &BregmanGenerator, x: &DenseVector, y: &DenseVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "bregman distance between lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    let diff = x - y;
    Ok(gen.value(x)? - gen.value(y)? - gen.gradient(y)?.dot(&diff))
}

impl BregmanGenerator {
    /// `phi = 0`.
    pub fn zero() -> Self {
        Self {
            kind: GeneratorKind::Zero,
            strong_convexity: 0.0,
            grad_lipschitz: 0.0,
            domain: Domain::AllReals,
        }
    }

    /// `(scale/2)|x|^2`.
    pub fn squared_norm(scale: f64) -> Result<Self> {
        make_generator(GeneratorKind::SquaredNorm { scale })
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    pub fn strong_convexity(&self) -> f64 {
        self.strong_convexity
    }

    pub fn grad_lipschitz(&self) -> f64 {
        self.grad_lipschitz
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// True for generators with a constant Hessian.
    pub fn is_quadratic(&self) -> bool {
        !matches!(
            self.kind,
            GeneratorKind::ItakuraSaito | GeneratorKind::KullbackLeibler
        )
    }

    fn check_point(&self, x: &DenseVector) -> Result<()> {
        match &self.kind {
            GeneratorKind::Mahalanobis { q } => x.check_len(q.rows(), "generator argument")?,
            GeneratorKind::Linearizing { b, .. } => x.check_len(b.cols(), "generator argument")?,
            _ => {}
        }
        if self.domain == Domain::PositiveOrthant && x.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::DomainViolation(
                "generator requires strictly positive entries".into(),
            ));
        }
        Ok(())
    }

    pub fn value(&self, x: &DenseVector) -> Result<f64> {
        self.check_point(x)?;
        Ok(match &self.kind {
            GeneratorKind::SquaredNorm { scale } => 0.5 * scale * x.norm_sq(),
            GeneratorKind::Mahalanobis { q } => q.mul_vec(x).dot(x),
            GeneratorKind::ItakuraSaito => -x.iter().map(|v| v.ln()).sum::<f64>(),
            GeneratorKind::KullbackLeibler => x.iter().map(|v| v * v.ln()).sum(),
            GeneratorKind::Zero => 0.0,
            GeneratorKind::Linearizing { b, alpha, mu, c } => {
                let mut r = b.mul_vec(x);
                r.axpy(-1.0, c);
                0.5 * mu * x.norm_sq() - 0.5 * alpha * r.norm_sq()
            }
        })
    }

    pub fn gradient(&self, x: &DenseVector) -> Result<DenseVector> {
        self.check_point(x)?;
        Ok(match &self.kind {
            GeneratorKind::SquaredNorm { scale } => x.scaled(*scale),
            GeneratorKind::Mahalanobis { q } => q.mul_vec(x).scaled(2.0),
            GeneratorKind::ItakuraSaito => x.map(|v| -1.0 / v),
            GeneratorKind::KullbackLeibler => x.map(|v| v.ln() + 1.0),
            GeneratorKind::Zero => DenseVector::zeros(x.len()),
            GeneratorKind::Linearizing { b, alpha, mu, c } => {
                let mut r = b.mul_vec(x);
                r.axpy(-1.0, c);
                let mut g = x.scaled(*mu);
                g.axpy(-alpha, &b.tr_mul_vec(&r));
                g
            }
        })
    }

    /// Hessian of a quadratic generator at dimension `dim`; `None` for the
    /// entropy-type generators.
    pub fn hessian(&self, dim: usize) -> Option<DenseMatrix> {
        match &self.kind {
            GeneratorKind::SquaredNorm { scale } => {
                let mut h = DenseMatrix::zeros(dim, dim);
                h.add_diag(*scale);
                Some(h)
            }
            GeneratorKind::Mahalanobis { q } => Some(q.scaled(2.0)),
            GeneratorKind::Zero => Some(DenseMatrix::zeros(dim, dim)),
            GeneratorKind::Linearizing { b, alpha, mu, .. } => {
                let mut h = b.gram().scaled(-alpha);
                h.add_diag(*mu);
                Some(h)
            }
            GeneratorKind::ItakuraSaito | GeneratorKind::KullbackLeibler => None,
        }
    }
}

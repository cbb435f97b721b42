//! Nonconvex Bregman ADMM for `min f(x) + g(y)` subject to `A x = B y`, with
//! closed-form steps for l1 and l1/2 regularized recovery and runtime checks
//! of the descent inequalities behind its convergence theory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bregman;
pub mod error;
pub mod lagrangian;
pub mod numerics;
pub mod problems;
pub mod proximal;
pub mod solver;

pub use bregman::{BregmanGenerator, GeneratorKind};
pub use error::{Error, Result};
pub use lagrangian::{AnalysisConstants, Assumption, StationarityResidual};
pub use numerics::{DenseMatrix, DenseVector};
pub use problems::{CompositeProblem, GroundTruth, RegKind, Regularizer, TvProblemSpec};
pub use solver::{IterationRecord, SolveOutput, SolverConfig, SolverState, Termination, YStrategy};

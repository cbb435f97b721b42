//! Shared fixtures for the benchmarks.

use badmm::problems::{make_tv_problem, CompositeProblem};
use badmm::{GroundTruth, RegKind, TvProblemSpec};

/// The recovery instance at size `n` with `n/2` measurements.
pub fn tv_instance(n: usize, reg: RegKind) -> (CompositeProblem, GroundTruth) {
    let spec = TvProblemSpec {
        n,
        m: n / 2,
        reg,
        jumps: (n / 25).max(1),
        ..TvProblemSpec::default()
    };
    make_tv_problem(&spec).expect("benchmark instance")
}

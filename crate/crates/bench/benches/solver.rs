use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use badmm::numerics::spd_factor;
use badmm::problems::SeededRng;
use badmm::proximal::{shrink_vector, ShrinkageKind};
use badmm::solver::{closed_form_x_step, solve, XStepOperator};
use badmm::{DenseVector, RegKind, SolverConfig, SolverState};
use badmm_bench::tv_instance;

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("spd_factor");
    for n in [128, 256, 512] {
        let (problem, _) = tv_instance(n, RegKind::LHalf);
        let mut m = problem.loss().d().gram().scaled(2.0);
        m.add_scaled(10.0, &problem.a().gram());
        m.add_diag(10.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| spd_factor(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn x_step(c: &mut Criterion) {
    let (problem, _) = tv_instance(512, RegKind::LHalf);
    let config = SolverConfig::hadmm(10.0, 10.0).unwrap();
    let op = XStepOperator::new(&problem, 10.0, &config.phi).unwrap();
    let state = SolverState::zeros(&problem);
    let y = DenseVector::zeros(problem.n2());
    c.bench_function("x_step/512", |b| {
        b.iter(|| closed_form_x_step(black_box(&state), &y, &problem, &op).unwrap())
    });
}

fn shrinkage(c: &mut Criterion) {
    let mut rng = SeededRng::new(3);
    let v = DenseVector::new((0..511).map(|_| rng.uniform_in(-0.05, 0.05)).collect()).unwrap();
    let mut group = c.benchmark_group("shrink/511");
    for (label, kind, kappa) in [
        ("soft", ShrinkageKind::Soft, 0.0015),
        ("half", ShrinkageKind::Half, 0.003),
    ] {
        group.bench_function(label, |b| {
            b.iter(|| shrink_vector(black_box(&v), kappa, kind).unwrap())
        });
    }
    group.finish();
}

fn short_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_100_iters/256");
    group.sample_size(10);
    for (label, reg) in [("hadmm", RegKind::LHalf), ("sadmm", RegKind::L1)] {
        let (problem, truth) = tv_instance(256, reg);
        for diagnostics in [false, true] {
            let mut config = SolverConfig::closed_form_for(reg, 10.0, 10.0).unwrap();
            config.max_iters = 100;
            config.tol = 0.0;
            config.record_diagnostics = diagnostics;
            let id = format!("{label}/diagnostics={diagnostics}");
            group.bench_function(id, |b| {
                b.iter(|| {
                    solve(
                        &problem,
                        &config,
                        &SolverState::zeros(&problem),
                        Some(&truth),
                    )
                    .unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, factorization, x_step, shrinkage, short_solve);
criterion_main!(benches);

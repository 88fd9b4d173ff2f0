use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use l1adm::harness::OperatorFamily;
use l1adm::{
    dadm_qp_step, fista_step, ist_step, padm_qp_step, solve, BaselineParams, DadmParams, DadmState,
    FistaState, ModelSpec, PadmParams, PadmState, SolverKind, SolverOptions,
};
use l1adm_bench::{race_instance, MU};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply");
    for n in [1024, 8192] {
        for (name, family) in [
            ("wht", OperatorFamily::PartialWalshHadamard),
            ("dct", OperatorFamily::PartialDct),
        ] {
            let inst = race_instance(family, n, 1);
            group.bench_with_input(BenchmarkId::new(format!("{name}-forward"), n), &inst, |bch, inst| {
                bch.iter(|| inst.op.apply(&inst.x_true).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("{name}-adjoint"), n), &inst, |bch, inst| {
                bch.iter(|| inst.op.apply_adjoint(&inst.b).unwrap())
            });
        }
    }
    group.finish();
}

fn steps(c: &mut Criterion) {
    let n = 8192;
    let inst = race_instance(OperatorFamily::PartialWalshHadamard, n, 2);
    let (op, b) = (&inst.op, &inst.b);
    let mut group = c.benchmark_group("step");

    let beta = b.norm1() / op.rows() as f64;
    let dp = DadmParams::new(beta, 1.618, MU).unwrap();
    let mut ds = DadmState::zeros(op);
    group.bench_function(BenchmarkId::new("dadm-qp", n), |bch| {
        bch.iter(|| dadm_qp_step(&mut ds, op, b, &dp).unwrap())
    });

    let pp = PadmParams::new(2.0 * op.rows() as f64 / b.norm1(), 1.199, 0.8, MU, 1.0).unwrap();
    let mut ps = PadmState::zeros(op);
    group.bench_function(BenchmarkId::new("padm-qp", n), |bch| {
        bch.iter(|| padm_qp_step(&mut ps, op, b, &pp).unwrap())
    });

    let bp = BaselineParams::new(MU, 1.0).unwrap();
    let x0 = op.apply_adjoint(b).unwrap();
    let mut fs = FistaState::new(x0.clone());
    group.bench_function(BenchmarkId::new("fista", n), |bch| {
        bch.iter(|| fista_step(&mut fs, op, b, &bp).unwrap())
    });
    let mut is = FistaState::new(x0);
    group.bench_function(BenchmarkId::new("ist", n), |bch| {
        bch.iter(|| ist_step(&mut is, op, b, &bp).unwrap())
    });
    group.finish();
}

fn solves(c: &mut Criterion) {
    let inst = race_instance(OperatorFamily::PartialWalshHadamard, 1024, 3);
    let opts = SolverOptions {
        record_history: false,
        ..SolverOptions::default()
    };
    let mut group = c.benchmark_group("solve-qp-1024");
    group.sample_size(20);
    for solver in [SolverKind::Padm, SolverKind::Dadm] {
        group.bench_function(solver.name(), |bch| {
            bch.iter(|| solve(solver, &ModelSpec::qp(MU), &inst.op, &inst.b, &opts, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, steps, solves);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use teamlogic::syntax::vars;
use teamlogic::{eval, parse, EvalOptions, Model, Registry, Signature, Team};
use teamlogic::eval::eval_with;

fn infinity(c: &mut Criterion) {
    let f = parse("exists x forall y exists z (dep(z; y) & z != x)", &Signature::default()).unwrap();
    let reg = Registry::new();
    let mut g = c.benchmark_group("infinity");
    for n in [2, 4, 6] {
        let m = Model::pure(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| eval(m, &Team::unit(), &f, &reg).unwrap())
        });
    }
    g.finish();
}

fn full_team(c: &mut Criterion) {
    let f = parse("forall z (dep(x; z) | (const(y) & x != z))", &Signature::default()).unwrap();
    let reg = Registry::new();
    let mut g = c.benchmark_group("full_team");
    for n in [3, 5] {
        let m = Model::pure(n).unwrap();
        let t = Team::full(vars(&["x", "y"]), n).unwrap();
        g.bench_with_input(BenchmarkId::new("default", n), &n, |b, _| b.iter(|| eval(&m, &t, &f, &reg).unwrap()));
        g.bench_with_input(BenchmarkId::new("rules_only", n), &n, |b, _| {
            b.iter(|| eval_with(&m, &t, &f, &reg, EvalOptions::rules_only()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, infinity, full_team);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use teamlogic::analysis::{equivalent, Sweep};
use teamlogic::syntax::vars;
use teamlogic::transforms::{dep_via_neg_const, neg_eliminate};
use teamlogic::{parse, Registry, Signature};

fn negelim(c: &mut Criterion) {
    let sig = Signature::new([("P", 1)]).unwrap();
    let f = parse("~(exists y (P(y) & ~(x = y | NE)) & forall z ~(NE & P(z)))", &sig).unwrap();
    c.bench_function("neg_eliminate", |b| b.iter(|| neg_eliminate(&f).unwrap()));
}

fn sweep(c: &mut Criterion) {
    let (x, y) = (vars(&["x"]), vars(&["y"]));
    let lhs = parse("dep(x; y)", &Signature::default()).unwrap();
    let rhs = dep_via_neg_const(&x, &y);
    let s = Sweep::new(vars(&["x", "y"])).max_model(2);
    let reg = Registry::new();
    let mut g = c.benchmark_group("equivalent");
    g.sample_size(10);
    g.bench_function("dep_via_neg_const", |b| {
        b.iter(|| assert!(equivalent(&lhs, &rhs, &s, &reg).unwrap().is_equivalent()))
    });
    g.finish();
}

criterion_group!(benches, negelim, sweep);
criterion_main!(benches);

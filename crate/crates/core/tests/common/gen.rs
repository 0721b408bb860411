//! Random formulas over the free variables `x`, `y` with `z` as the only
//! bound variable, the unary relation `P`, and the custom notions of
//! [`registry`].

use proptest::prelude::*;
use teamlogic::eval::{DependencySpec, Registry};
use teamlogic::syntax::{Atom, Formula, Signature, Var};

pub fn signature() -> Signature {
    Signature::new([("P", 1)]).unwrap()
}

pub fn registry() -> Registry {
    let con = DependencySpec::parse("con", 1, "forall a forall b (!R(a) | !R(b) | a = b)").unwrap();
    let two = DependencySpec::parse("two", 0, "exists a exists b (a != b)").unwrap();
    let some = DependencySpec::parse("some", 2, "exists a R(a, a)").unwrap();
    Registry::new().with(con).unwrap().with(two).unwrap().with(some).unwrap()
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::from("x")), Just(Var::from("y")), Just(Var::from("z"))]
}

fn literal() -> BoxedStrategy<Formula> {
    prop_oneof![
        var().prop_map(|v| Formula::Rel("P".into(), vec![v])),
        var().prop_map(|v| Formula::NegRel("P".into(), vec![v])),
        (var(), var()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::Neq(a, b)),
    ]
    .boxed()
}

/// Literals, NE, totality, `geq` and the upward-closed custom `some`.
pub fn upward_leaf() -> BoxedStrategy<Formula> {
    prop_oneof![
        3 => literal(),
        1 => Just(Formula::ne()),
        1 => var().prop_map(|v| Formula::Atom(Atom::All(vec![v]))),
        1 => (var(), var(), 0usize..4).prop_map(|(v, w, k)| Formula::Atom(Atom::Geq(vec![v, w], k))),
        1 => (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::Custom("some".into(), vec![v, w]))),
    ]
    .boxed()
}

pub fn ne_leaf() -> BoxedStrategy<Formula> {
    prop_oneof![3 => literal(), 1 => Just(Formula::ne())].boxed()
}

pub fn fo_leaf() -> BoxedStrategy<Formula> {
    literal()
}

/// Every atom and bracket, no team connectives.
pub fn leaf() -> BoxedStrategy<Formula> {
    prop_oneof![
        var().prop_map(|v| Formula::Rel("P".into(), vec![v])),
        var().prop_map(|v| Formula::NegRel("P".into(), vec![v])),
        (var(), var()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::Neq(a, b)),
        var().prop_map(|v| Formula::Atom(Atom::Const(vec![v]))),
        (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::Dep(vec![v], vec![w]))),
        (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::Inc(vec![v], vec![w]))),
        (var(), var(), var()).prop_map(|(u, v, w)| Formula::Atom(Atom::Ind(vec![u], vec![v], vec![w]))),
        var().prop_map(|v| Formula::Atom(Atom::All(vec![v]))),
        Just(Formula::ne()),
        var().prop_map(|v| Formula::Atom(Atom::NCon(vec![v]))),
        (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::NDep(vec![v], vec![w]))),
        (var(), var(), 0usize..4).prop_map(|(v, w, k)| Formula::Atom(Atom::Geq(vec![v, w], k))),
        (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::NInc(vec![v], vec![w]))),
        (var(), var(), var()).prop_map(|(u, v, w)| Formula::Atom(Atom::NInd(vec![u], vec![v], vec![w]))),
        (var(), 0usize..3).prop_map(|(v, k)| Formula::Atom(Atom::CountEq(v, k))),
        (var(), 0usize..3).prop_map(|(v, k)| Formula::Atom(Atom::CountNeq(v, k))),
        (var(), 0usize..3).prop_map(|(v, k)| Formula::Atom(Atom::CoCountEq(v, k))),
        (var(), 0usize..3).prop_map(|(v, k)| Formula::Atom(Atom::CoCountNeq(v, k))),
        var().prop_map(|v| Formula::Atom(Atom::Custom("con".into(), vec![v]))),
        (var(), var()).prop_map(|(v, w)| Formula::Atom(Atom::Custom("some".into(), vec![v, w]))),
        Just(Formula::Atom(Atom::Custom("two".into(), vec![]))),
        Just(Formula::bracket(Formula::exists("z", Formula::rel("P", &["z"]))).unwrap()),
        Just(Formula::top()),
        Just(Formula::bot()),
    ]
    .boxed()
}

/// Formulas whose connectives are drawn from `ops`.
pub fn formula(ops: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    built(leaf(), ops)
}

/// Formulas over the given leaves with connectives from `ops`.
pub fn built(leaves: BoxedStrategy<Formula>, ops: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    leaves
        .prop_recursive(3, 10, 2, move |inner| {
            let op = proptest::sample::select(ops);
            (op, inner.clone(), inner).prop_map(|(op, a, b)| match op {
                "&" => Formula::and(a, b),
                "|" => Formula::or(a, b),
                "||" => Formula::classical_or(a, b),
                "~" => Formula::contra_neg(a),
                "->" => Formula::int_impl(a, b),
                "<>" => Formula::possibly(a),
                "E" => Formula::exists("z", a),
                "A" => Formula::forall("z", a),
                other => panic!("unknown connective {other}"),
            })
        })
        .prop_map(|f| close(&f, false))
}

pub const ALL_OPS: &[&str] = &["&", "|", "||", "~", "->", "<>", "E", "A"];
pub const FO_OPS: &[&str] = &["&", "|", "E", "A"];
pub const NEG_OPS: &[&str] = &["&", "|", "||", "~", "E", "A"];
pub const DNF_OPS: &[&str] = &["&", "|", "||", "E", "A"];

/// A first-order sentence: every variable is bound by a block over `x y z`.
pub fn sentence() -> impl Strategy<Value = Formula> {
    (built(fo_leaf(), FO_OPS), any::<[bool; 2]>()).prop_map(|(f, q)| {
        let wrap = |v: &str, body: Formula, exists: bool| if exists { Formula::exists(v, body) } else { Formula::forall(v, body) };
        wrap("x", wrap("y", f, q[1]), q[0])
    })
}

/// Renames free occurrences of `z` to `x`.
pub fn close(f: &Formula, bound: bool) -> Formula {
    let r = |v: &Var| if !bound && v.as_str() == "z" { Var::from("x") } else { v.clone() };
    let rs = |vs: &[Var]| vs.iter().map(r).collect::<Vec<_>>();
    let b = |g: &Formula| Box::new(close(g, bound));
    match f {
        Formula::Rel(n, a) => Formula::Rel(n.clone(), rs(a)),
        Formula::NegRel(n, a) => Formula::NegRel(n.clone(), rs(a)),
        Formula::Eq(a, c) => Formula::Eq(r(a), r(c)),
        Formula::Neq(a, c) => Formula::Neq(r(a), r(c)),
        Formula::And(a, c) => Formula::And(b(a), b(c)),
        Formula::Or(a, c) => Formula::Or(b(a), b(c)),
        Formula::ClassicalOr(a, c) => Formula::ClassicalOr(b(a), b(c)),
        Formula::IntImpl(a, c) => Formula::IntImpl(b(a), b(c)),
        Formula::ContraNeg(a) => Formula::ContraNeg(b(a)),
        Formula::Possibly(a) => Formula::Possibly(b(a)),
        Formula::Bracket(a) => Formula::Bracket(a.clone()),
        Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(close(a, bound || v.as_str() == "z"))),
        Formula::Forall(v, a) => Formula::Forall(v.clone(), Box::new(close(a, bound || v.as_str() == "z"))),
        Formula::Atom(atom) => Formula::Atom(match atom {
            Atom::Const(v) => Atom::Const(rs(v)),
            Atom::Dep(v, w) => Atom::Dep(rs(v), rs(w)),
            Atom::Inc(v, w) => Atom::Inc(rs(v), rs(w)),
            Atom::Ind(u, v, w) => Atom::Ind(rs(u), rs(v), rs(w)),
            Atom::All(v) => Atom::All(rs(v)),
            Atom::NonEmpty => Atom::NonEmpty,
            Atom::NCon(v) => Atom::NCon(rs(v)),
            Atom::NDep(v, w) => Atom::NDep(rs(v), rs(w)),
            Atom::Geq(v, k) => Atom::Geq(rs(v), *k),
            Atom::NInc(v, w) => Atom::NInc(rs(v), rs(w)),
            Atom::NInd(u, v, w) => Atom::NInd(rs(u), rs(v), rs(w)),
            Atom::CountEq(v, k) => Atom::CountEq(r(v), *k),
            Atom::CountNeq(v, k) => Atom::CountNeq(r(v), *k),
            Atom::CoCountEq(v, k) => Atom::CoCountEq(r(v), *k),
            Atom::CoCountNeq(v, k) => Atom::CoCountNeq(r(v), *k),
            Atom::Custom(n, v) => Atom::Custom(n.clone(), rs(v)),
        }),
    }
}

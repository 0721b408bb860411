//! Fixed formula lists shared by the sweeps and the acceptance run.

use teamlogic::eval::{DependencySpec, Registry};
use teamlogic::syntax::{parse, Formula, Signature};
use teamlogic::transforms::{CountLiteral, UnaryDepDescription};

pub fn unary() -> Signature {
    Signature::new([("P", 1)]).unwrap()
}

pub fn parse_all(src: &[&str]) -> Vec<Formula> {
    src.iter().map(|s| parse(s, &unary()).unwrap_or_else(|e| panic!("{s}: {e}"))).collect()
}

/// First-order, quantifier depth at most 2, free variables among `x`, `y`.
pub const FIRST_ORDER: &[&str] = &[
    "x = y",
    "x != y",
    "P(x)",
    "!P(y)",
    "x = x",
    "x != x",
    "P(x) & x != y",
    "P(x) | P(y)",
    "x = y | !P(x)",
    "P(y) & !P(x) | x = y",
    "(x = y | P(x)) & (x != y | !P(y))",
    "exists z (z != x)",
    "forall z (z = x)",
    "forall z (x = y)",
    "exists z (P(z) & z != y)",
    "forall z (!P(z) | z = x)",
    "forall z (z != x | P(z))",
    "exists z (z = x & z = y)",
    "exists z (x != z & y != z)",
    "forall z (z = x | z = y)",
    "exists z forall w (z = w | P(w))",
    "forall z exists w (w != z)",
    "exists z exists w (z != w & P(z) & !P(w))",
    "forall z forall w (z = w | P(z) | P(w))",
    "exists z forall w (w = z | w = x)",
    "forall z exists w (P(w) | w = z & x = y)",
    "exists z (!P(z) & forall w (w = z | P(w)))",
    "P(x) & forall z (P(z) | z = y)",
    "exists z P(z) | forall z !P(z)",
    "!P(x) | exists z (P(z) & z != x)",
    "forall z (P(z) & z = z) | x = y",
    "exists z (z = x) & exists w (w != y)",
    "forall z exists w (w = x | z != w & !P(y))",
];

/// Formulas of the fragment with NE, `||` and `~`, covering every case of
/// the elimination: first-order operands, NE, `|`, `&`, both quantifiers,
/// classical disjunction under `~` and nested `~`.
pub const NEGATION: &[&str] = &[
    "~(x = y)",
    "~exists z (z != x & P(z))",
    "~NE",
    "~(NE | x = y)",
    "~(P(x) | NE & x != y)",
    "~((NE | NE) | P(y))",
    "~(NE & P(x))",
    "~exists z (NE & z = x)",
    "~exists z (P(z) | NE & z != x)",
    "~exists z exists w (NE & z != w)",
    "~forall z (P(z) | NE)",
    "~forall z exists w (NE & w != z)",
    "~~NE",
    "~~(x = y | NE)",
    "~~~(NE & x = y)",
    "~(NE || P(x))",
    "~(~NE || x = y)",
    "~(NE || ~NE)",
    "~(x = y) || NE",
    "NE & ~(P(x) | P(y))",
    "exists z ~(NE & z = x)",
    "forall z ~(z != x | NE)",
    "~(exists z (NE | z = y) & ~P(x))",
];

/// Pairs inside the same fragment, for the `||` encoding.
pub const OR_PAIRS: &[(&str, &str)] = &[
    ("NE", "x = y"),
    ("P(x)", "NE | x != y"),
    ("exists z (NE & z = x)", "P(y)"),
    ("NE || P(x)", "x = y"),
    ("forall z (P(z) | NE)", "~NE"),
    ("x != y & NE", "x != y & NE"),
];

/// Formulas with dependency atoms and brackets (no `~`).
pub const BRACKETS: &[&str] = &[
    "[exists z P(z)] & NE",
    "exists y ([forall z P(z)] | dep(x; y))",
    "forall y ([exists z !P(z)] & (P(y) | x = y))",
    "[bot] | NE",
    "[top] & const(x)",
    "exists y (const(y) & [exists z exists w (z != w)])",
    "([exists z P(z)] || all(x)) & y = y",
    "D:con(x) | [forall z !P(z)] & inc(x; y)",
    "[exists z P(z)] & [forall z (z = z)] & dep(x; y)",
    "exists y ([exists z (P(z) & !P(z))] | ncon(y))",
    "forall y exists w ([forall z (P(z) | z = z)] & w = y & D:some(x, w))",
    "([exists z !P(z)] | all(y)) || ([forall z P(z)] & const(x y))",
];

/// Sentence pairs for `||` against `|` on the unit team.
pub const SENTENCE_PAIRS: &[(&str, &str)] = &[
    ("exists z P(z)", "forall z !P(z)"),
    ("forall z P(z)", "exists z exists w (z != w)"),
    ("exists z !P(z)", "forall z forall w (z = w)"),
    ("forall z (P(z) | z != z)", "exists z (P(z) & !P(z))"),
    ("exists z forall w (w = z | P(w))", "forall z P(z)"),
    ("forall z exists w (w != z)", "exists z P(z)"),
    ("exists z exists w (z != w & P(z) & P(w))", "forall z !P(z)"),
    ("forall z forall w (z = w)", "forall z forall w (z = w)"),
    ("exists z (z != z)", "exists z (z = z)"),
    ("exists z (z != z)", "forall z (z != z)"),
    ("exists z exists w exists u (z != w & w != u & z != u)", "exists z !P(z)"),
];

/// Constancy, totality, upward-closed atoms and `||`.
pub const BOUNDED: &[&str] = &[
    "all(x)",
    "NE | NE",
    "NE",
    "const(p) & all(x)",
    "all(x y)",
    "geq(x, 2)",
    "geq(x y, 3) | NE",
    "exists y all(y)",
    "forall y (NE & geq(x, 1))",
    "all(x) || all(y)",
    "exists z (const(z) & all(x))",
    "NE & x = y",
    "all(x) | all(y)",
    "geq(x y, 2) & const(x)",
    "exists z (all(z) & z != x)",
    "forall z (NE | all(x))",
    "(NE || geq(x, 2)) & (all(y) | x = y)",
    "forall z exists w (all(z w) & const(x))",
];

pub fn dependency_registry() -> Registry {
    Registry::new()
        .with(DependencySpec::parse("con", 1, "forall a forall b (!R(a) | !R(b) | a = b)").unwrap())
        .unwrap()
        .with(DependencySpec::parse("some", 2, "exists a R(a, a)").unwrap())
        .unwrap()
}

/// Unary dependencies as counting descriptions, with a label.
pub fn unary_descriptions() -> Vec<(&'static str, UnaryDepDescription)> {
    use CountLiteral::*;
    vec![
        ("constancy", UnaryDepDescription::new(vec![vec![PosCount(1)]])),
        ("totality", UnaryDepDescription::new(vec![vec![CoCount(0)]])),
        ("nonempty", UnaryDepDescription::new(vec![vec![NegPosCount(0)]])),
        ("two-or-total", UnaryDepDescription::new(vec![vec![PosCount(2)], vec![CoCount(0)]])),
        ("partial-nonconstant", UnaryDepDescription::new(vec![vec![NegPosCount(1), NegCoCount(0)]])),
        ("one-missing", UnaryDepDescription::new(vec![vec![CoCount(1)]])),
        ("never", UnaryDepDescription::new(vec![])),
    ]
}

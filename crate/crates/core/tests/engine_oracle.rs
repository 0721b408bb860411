//! The evaluator against the literal reference evaluator on tiny structures.

mod common;

use common::{gen, naive};
use proptest::prelude::*;
use teamlogic::eval::{eval_with, EvalOptions};
use teamlogic::structures::enumerate_models;
use teamlogic::syntax::vars;
use teamlogic::{Formula, Team};

/// All teams over `x, y` with at most three assignments, `|M| <= 2`.
fn agree(f: &Formula) -> Result<(), TestCaseError> {
    let reg = gen::registry();
    for n in 1..=2 {
        for m in enumerate_models(&gen::signature(), n).unwrap() {
            for t in teamlogic::structures::enumerate_teams(n, &vars(&["x", "y"]), 16).unwrap() {
                if t.len() > 3 {
                    continue;
                }
                let expected = naive::eval(&m, &t, f, &reg);
                for opts in [EvalOptions::default(), EvalOptions::rules_only()] {
                    let got = eval_with(&m, &t, f, &reg, opts).map_err(|e| TestCaseError::fail(format!("{f}: {e}")))?;
                    prop_assert_eq!(got, expected, "{} on {} (|M| = {}, shortcut {})", f, t, n, opts.flat_shortcut);
                }
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, ..ProptestConfig::default() })]

    #[test]
    fn evaluator_matches_reference(f in gen::formula(gen::ALL_OPS)) {
        agree(&f)?;
    }

    #[test]
    fn quantifier_heavy_formulas(f in gen::formula(&["&", "|", "E", "A", "||"])) {
        agree(&f)?;
    }
}

#[test]
fn locality_ignores_extra_columns() {
    let reg = gen::registry();
    let m = teamlogic::Model::new(2, gen::signature()).unwrap().with("P", [vec![1]]).unwrap();
    let f = teamlogic::parse("exists z (dep(x; z) & (P(z) | z = y))", &gen::signature()).unwrap();
    for t in teamlogic::structures::enumerate_teams(2, &vars(&["x", "y"]), 16).unwrap() {
        let plain = eval_with(&m, &t, &f, &reg, EvalOptions::default()).unwrap();
        for value in 0..2 {
            let wide: Team = t.with_constant_column("u".into(), value).unwrap();
            assert_eq!(eval_with(&m, &wide, &f, &reg, EvalOptions::default()).unwrap(), plain);
        }
    }
}

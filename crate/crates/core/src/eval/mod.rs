//! Lax team semantics.
//!
//! The evaluator never enumerates choice functions or splits blindly. It
//! classifies every subformula as closed under subteams, superteams and/or
//! unions, and uses that to search only the teams that matter: the largest
//! satisfying subteam of a union-closed formula, one witness per assignment
//! for a downward-closed one, and so on. Searches that still blow up stop
//! with [`EvalError::LimitExceeded`] instead of running forever.

mod atoms;
mod compile;
mod engine;
mod registry;

use thiserror::Error;

use crate::structures::{Model, StructureError, Team};
use crate::syntax::{Formula, Var};

pub use engine::Evaluator;
pub use registry::{check_upward_closed, Claim, DependencySpec, Registry, UpwardClosure, CLOSURE_CHECK_LIMIT, DEFINING_RELATION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("dependency `{0}` is not registered")]
    UnregisteredCustom(String),
    #[error("dependency `{name}` has arity {expected}, applied to {found} variables")]
    CustomArity { name: String, expected: usize, found: usize },
    #[error("free variable `{0}` is not in the team's domain")]
    UnboundVariable(Var),
    #[error("element {elem} is outside the domain of size {size}")]
    ElementOutOfRange { elem: usize, size: usize },
    #[error("{what} of size {size} exceeds the limit {limit}")]
    LimitExceeded { what: &'static str, size: usize, limit: usize },
    #[error("invalid dependency: {0}")]
    InvalidSpec(String),
    #[error("dependency `{0}` is already registered")]
    DuplicateSpec(String),
    #[error("`{0}` is the name of a built-in atom")]
    ReservedName(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Evaluate first-order subformulas assignment by assignment instead of
    /// through the team rules.
    pub flat_shortcut: bool,
    /// Bound on search steps per evaluation.
    pub search_limit: u64,
    /// Bound on `|M|^k` for the widest variable frame.
    pub max_universe: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { flat_shortcut: true, search_limit: 20_000_000, max_universe: 1 << 16 }
    }
}

impl EvalOptions {
    /// Every subformula goes through the team rules.
    pub fn rules_only() -> Self {
        EvalOptions { flat_shortcut: false, ..EvalOptions::default() }
    }
}

/// `M ⊨_X f`
pub fn eval(m: &Model, t: &Team, f: &Formula, reg: &Registry) -> Result<bool, EvalError> {
    eval_with(m, t, f, reg, EvalOptions::default())
}

pub fn eval_with(m: &Model, t: &Team, f: &Formula, reg: &Registry, opts: EvalOptions) -> Result<bool, EvalError> {
    Evaluator::new(m, f, reg, opts)?.eval(t)
}

/// Largest team for which [`satisfying_subteams`] enumerates subteams.
pub const SUBTEAM_LIMIT: usize = 20;

/// Every `Y ⊆ t` with `M ⊨_Y f`, in subset rank order.
pub fn satisfying_subteams(m: &Model, t: &Team, f: &Formula, reg: &Registry) -> Result<Vec<Team>, EvalError> {
    if t.len() > SUBTEAM_LIMIT {
        return Err(EvalError::LimitExceeded { what: "team", size: t.len(), limit: SUBTEAM_LIMIT });
    }
    let ev = Evaluator::new(m, f, reg, EvalOptions::default())?;
    let mut out = Vec::new();
    for y in t.subteams() {
        if ev.eval(&y)? {
            out.push(y);
        }
    }
    Ok(out)
}

/// Registers `spec`, returning the extended registry.
pub fn register(mut reg: Registry, spec: DependencySpec) -> Result<Registry, EvalError> {
    reg.register(spec)?;
    Ok(reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{enumerate_teams, restrict};
    use crate::syntax::{parse, vars, Signature};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::new([("P", 1), ("R", 2)]).unwrap()).unwrap()
    }

    fn ev(m: &Model, t: &Team, s: &str) -> bool {
        eval(m, t, &f(s), &Registry::new()).unwrap()
    }

    fn team(vs: &[&str], rows: &[&[usize]]) -> Team {
        Team::from_rows(vars(vs), rows.iter().map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn infinity_sentence_fails_on_finite_models() {
        for n in 1..=4 {
            let m = Model::pure(n).unwrap();
            assert!(!ev(&m, &Team::unit(), "exists x forall y exists z (dep(z; y) & z != x)"));
            // dropping the requirement to avoid x makes it true
            assert!(ev(&m, &Team::unit(), "exists x forall y exists z (dep(z; y) & z = y)"));
        }
    }

    #[test]
    fn bottom_and_top() {
        let m = Model::pure(2).unwrap();
        assert!(ev(&m, &Team::empty(), "bot"));
        assert!(!ev(&m, &Team::unit(), "bot"));
        assert!(!ev(&m, &team(&["x"], &[&[0]]), "bot"));
        assert!(ev(&m, &team(&["x"], &[&[0], &[1]]), "top"));
    }

    #[test]
    fn dependence_atoms() {
        let m = Model::pure(2).unwrap();
        let t = team(&["x", "y"], &[&[0, 0], &[0, 1]]);
        assert!(!ev(&m, &t, "dep(x; y)"));
        assert!(ev(&m, &t, "dep(y; x)"));
        assert!(ev(&m, &t, "const(x)"));
        assert!(ev(&m, &t, "all(y)"));
        assert!(!ev(&m, &t, "all(x)"));
        assert!(ev(&m, &t, "ncon(y)"));
        assert!(ev(&m, &t, "ndep(x; y)"));
        assert!(ev(&m, &t, "inc(x; y)"));
        assert!(!ev(&m, &t, "inc(y; x)"));
        assert!(ev(&m, &t, "ninc(y; x)"));
        assert!(ev(&m, &t, "geq(x y, 2)"));
        assert!(!ev(&m, &t, "geq(x y, 3)"));
        assert!(ev(&m, &t, "count_eq(y, 2)"));
        assert!(ev(&m, &t, "cocount_eq(x, 1)"));
        assert!(ev(&m, &t, "cocount_neq(y, 1)"));
        assert!(ev(&m, &t, "ind(; x; y)"));
        let diag = team(&["x", "y"], &[&[0, 0], &[1, 1]]);
        assert!(!ev(&m, &diag, "ind(; x; y)"));
        assert!(ev(&m, &diag, "nind(; x; y)"));
        assert!(ev(&m, &diag, "ind(x; y; y)"));
    }

    #[test]
    fn lax_disjunction_and_quantifiers() {
        let m = Model::pure(2).unwrap();
        let t = team(&["x", "y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        // each half is constant in y
        assert!(ev(&m, &t, "const(y) | const(y)"));
        assert!(!ev(&m, &t, "const(x y) | const(x y)"));
        assert!(ev(&m, &t, "(const(x y) | const(x y)) | (const(x y) | const(x y))"));
        assert!(ev(&m, &t, "exists z (dep(x; z) & z = x)"));
        assert!(!ev(&m, &t, "exists z (const(z) & z = x)"));
        assert!(ev(&m, &t, "forall z (z = z)"));
        assert!(!ev(&m, &t, "forall z const(z)"));
    }

    #[test]
    fn team_operators() {
        let m = Model::pure(2).unwrap();
        let t = team(&["x"], &[&[0], &[1]]);
        assert!(ev(&m, &t, "~const(x)"));
        assert!(ev(&m, &t, "const(x) || all(x)"));
        assert!(!ev(&m, &t, "const(x) || x = x & NE & const(x)"));
        assert!(ev(&m, &t, "<>const(x)"));
        assert!(!ev(&m, &Team::new(vars(&["x"])).unwrap(), "<>top"));
        // every subteam on which x is constant has at most one element
        assert!(ev(&m, &t, "const(x) -> ~geq(x, 2)"));
        assert!(!ev(&m, &t, "NE -> all(x)"));
        assert!(ev(&m, &Team::empty(), "[exists x exists y (x != y)]"));
        assert!(!ev(&Model::pure(1).unwrap(), &Team::unit(), "[exists x exists y (x != y)]"));
    }

    #[test]
    fn custom_atoms() {
        let m = Model::pure(3).unwrap();
        let con = DependencySpec::parse("con", 1, "forall x forall y (!R(x) | !R(y) | x = y)").unwrap();
        let two = DependencySpec::parse("two", 0, "exists x exists y (x != y)").unwrap();
        let sub = DependencySpec::parse("sub", 2, "forall x forall y (!R(x, y) | x = y)").unwrap();
        let reg = Registry::new().with(con).unwrap().with(two).unwrap().with(sub).unwrap();
        let fc = f("D:con(x)");
        let fk = f("const(x)");
        for t in enumerate_teams(3, &vars(&["x"]), 16).unwrap() {
            assert_eq!(eval(&m, &t, &fc, &reg).unwrap(), eval(&m, &t, &fk, &reg).unwrap());
        }
        assert!(eval(&m, &Team::empty(), &f("D:two()"), &reg).unwrap());
        assert!(!eval(&Model::pure(1).unwrap(), &Team::unit(), &f("D:two()"), &reg).unwrap());
        assert!(eval(&m, &team(&["x", "y"], &[&[1, 1]]), &f("D:sub(x, y)"), &reg).unwrap());
        assert!(matches!(eval(&m, &Team::unit(), &f("D:nope()"), &reg), Err(EvalError::UnregisteredCustom(_))));
    }

    #[test]
    fn flat_formulas_have_flat_satisfying_subteams() {
        let m = Model::pure(2).unwrap().clone();
        let t = team(&["x", "y"], &[&[0, 0], &[0, 1], &[1, 1]]);
        let g = f("x = y");
        let subs = satisfying_subteams(&m, &t, &g, &Registry::new()).unwrap();
        let allowed = restrict(&m, &t, &g).unwrap();
        assert_eq!(subs.len(), 1 << allowed.len());
        assert!(subs.iter().all(|y| y.is_subteam_of(&allowed)));
        assert_eq!(satisfying_subteams(&m, &t, &f("bot"), &Registry::new()).unwrap().len(), 1);
        assert_eq!(satisfying_subteams(&m, &t, &f("NE"), &Registry::new()).unwrap().len(), 7);
    }

    #[test]
    fn missing_variable_is_an_error() {
        let m = Model::pure(2).unwrap();
        let r = eval(&m, &team(&["x"], &[&[0]]), &f("x = y"), &Registry::new());
        assert!(matches!(r, Err(EvalError::UnboundVariable(_))));
    }
}

use crate::syntax::{Atom, Formula, FreshVars, Var};

use super::basic::{dual_negate, flatten, restrict_formula};
use super::dnf::to_classical_dnf;
use super::{not_fo, unsupported, TransformError};

/// Removes every `~` from a formula built from first-order parts, NE, `||`
/// and `~`, innermost first.
pub fn neg_eliminate(f: &Formula) -> Result<Formula, TransformError> {
    let b = |g: &Formula| neg_eliminate(g).map(Box::new);
    Ok(match f {
        Formula::ContraNeg(g) => {
            let inner = neg_eliminate(g)?;
            let parts = to_classical_dnf(&inner)?;
            Formula::big_and(parts.iter().map(negate_ne).collect::<Result<Vec<_>, _>>()?)
        }
        Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..) | Formula::Atom(Atom::NonEmpty) => f.clone(),
        Formula::And(a, c) => Formula::And(b(a)?, b(c)?),
        Formula::Or(a, c) => Formula::Or(b(a)?, b(c)?),
        Formula::ClassicalOr(a, c) => Formula::ClassicalOr(b(a)?, b(c)?),
        Formula::Exists(v, a) => Formula::Exists(v.clone(), b(a)?),
        Formula::Forall(v, a) => Formula::Forall(v.clone(), b(a)?),
        _ => return Err(unsupported("neg_eliminate", f)),
    })
}

/// `~g` without `~`, for `g` built from first-order parts, NE, `&`, `|` and quantifiers.
fn negate_ne(g: &Formula) -> Result<Formula, TransformError> {
    if g.is_first_order() {
        return restrict_formula(&Formula::ne(), &dual_negate(g)?);
    }
    Ok(match g {
        Formula::Atom(Atom::NonEmpty) => Formula::bot(),
        Formula::Or(a, c) => {
            let (af, cf) = (flatten(a)?, flatten(c)?);
            let left = restrict_formula(&negate_ne(a)?, &af)?;
            let right = restrict_formula(&negate_ne(c)?, &cf)?;
            let rest = negate_ne(&Formula::or(af, cf))?;
            Formula::classical_or(Formula::classical_or(left, right), rest)
        }
        Formula::And(a, c) => Formula::classical_or(negate_ne(a)?, negate_ne(c)?),
        Formula::Exists(v, a) => {
            let af = flatten(a)?;
            let none = negate_ne(&Formula::exists(v.clone(), af.clone()))?;
            Formula::classical_or(none, Formula::forall(v.clone(), restrict_formula(&negate_ne(a)?, &af)?))
        }
        Formula::Forall(v, a) => Formula::forall(v.clone(), negate_ne(a)?),
        _ => return Err(unsupported("neg_eliminate", g)),
    })
}

/// `~(psi ↾ theta)` rewritten as `(~psi) ↾ theta`.
pub fn neg_restrict_commute(psi: &Formula, theta: &Formula) -> Result<Formula, TransformError> {
    if !theta.is_first_order() {
        return Err(not_fo("neg_restrict_commute", theta));
    }
    restrict_formula(&Formula::contra_neg(psi.clone()), theta)
}

/// `~((~a) & (~b))`
pub fn classical_or_via_neg(a: &Formula, b: &Formula) -> Formula {
    Formula::contra_neg(Formula::and(Formula::contra_neg(a.clone()), Formula::contra_neg(b.clone())))
}

/// `~bot`
pub fn ne_via_neg() -> Formula {
    Formula::contra_neg(Formula::bot())
}

/// `dep(v; w)` from constancy and `~`: no two constant choices of `w` for
/// one constant `v` are both realised in the team.
pub fn dep_via_neg_const(v: &[Var], w: &[Var]) -> Formula {
    let mut fresh = FreshVars::new(v.iter().chain(w).cloned());
    let p = fresh.indexed_many("p", v.len());
    let q1 = fresh.indexed_many("q", w.len());
    let q2 = fresh.indexed_many("q", w.len());
    let row = |q: &[Var]| {
        let lhs: Vec<Var> = v.iter().chain(w).cloned().collect();
        let rhs: Vec<Var> = p.iter().chain(q).cloned().collect();
        Formula::contra_neg(Formula::tuple_neq(&lhs, &rhs))
    };
    let body = Formula::big_and([
        Formula::atom(Atom::Const(p.clone())),
        Formula::atom(Atom::Const(q1.clone())),
        Formula::atom(Atom::Const(q2.clone())),
        Formula::tuple_neq(&q1, &q2),
        row(&q1),
        row(&q2),
    ]);
    let block: Vec<Var> = p.iter().chain(&q1).chain(&q2).cloned().collect();
    Formula::contra_neg(Formula::exists_many(&block, body))
}

/// `forall q all(q)`
pub fn ne_via_totality() -> Formula {
    Formula::forall("q", Formula::atom(Atom::All(vec![Var::from("q")])))
}

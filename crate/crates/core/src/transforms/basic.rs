use crate::syntax::Formula;

use super::{not_fo, unsupported, TransformError};

/// Replaces every dependency atom (NE included) by `top`.
pub fn flatten(f: &Formula) -> Result<Formula, TransformError> {
    let b = |g: &Formula| flatten(g).map(Box::new);
    Ok(match f {
        Formula::Atom(_) => Formula::top(),
        Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..) => f.clone(),
        Formula::And(a, c) => Formula::And(b(a)?, b(c)?),
        Formula::Or(a, c) => Formula::Or(b(a)?, b(c)?),
        Formula::Exists(v, a) => Formula::Exists(v.clone(), b(a)?),
        Formula::Forall(v, a) => Formula::Forall(v.clone(), b(a)?),
        Formula::ClassicalOr(..) | Formula::ContraNeg(_) | Formula::IntImpl(..) | Formula::Possibly(_) | Formula::Bracket(_) => {
            return Err(unsupported("flatten", f))
        }
    })
}

/// Negation pushed to the literals of a first-order formula.
pub fn dual_negate(f: &Formula) -> Result<Formula, TransformError> {
    let b = |g: &Formula| dual_negate(g).map(Box::new);
    Ok(match f {
        Formula::Rel(r, a) => Formula::NegRel(r.clone(), a.clone()),
        Formula::NegRel(r, a) => Formula::Rel(r.clone(), a.clone()),
        Formula::Eq(a, c) => Formula::Neq(a.clone(), c.clone()),
        Formula::Neq(a, c) => Formula::Eq(a.clone(), c.clone()),
        Formula::Or(a, c) => Formula::And(b(a)?, b(c)?),
        Formula::And(a, c) => Formula::Or(b(a)?, b(c)?),
        Formula::Exists(v, a) => Formula::Forall(v.clone(), b(a)?),
        Formula::Forall(v, a) => Formula::Exists(v.clone(), b(a)?),
        _ => return Err(not_fo("dual_negate", f)),
    })
}

/// `(¬θ) | (θ & f)`: holds on a team iff `f` holds on the part satisfying `θ`.
pub fn restrict_formula(f: &Formula, theta: &Formula) -> Result<Formula, TransformError> {
    if !theta.is_first_order() {
        return Err(not_fo("restrict_formula", theta));
    }
    Ok(Formula::or(dual_negate(theta)?, Formula::and(theta.clone(), f.clone())))
}

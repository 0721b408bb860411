use crate::syntax::Formula;

use super::{unsupported, TransformError};

/// Pushes `||` outward: returns formulas without `||` whose classical
/// disjunction is equivalent to `f`. Brackets are kept as leaves.
pub fn to_classical_dnf(f: &Formula) -> Result<Vec<Formula>, TransformError> {
    Ok(match f {
        Formula::ClassicalOr(a, b) => {
            let mut out = to_classical_dnf(a)?;
            out.extend(to_classical_dnf(b)?);
            out
        }
        Formula::And(a, b) => product(a, b, Formula::and)?,
        Formula::Or(a, b) => product(a, b, Formula::or)?,
        Formula::Exists(v, a) => to_classical_dnf(a)?.into_iter().map(|g| Formula::exists(v.clone(), g)).collect(),
        Formula::Forall(v, a) => to_classical_dnf(a)?.into_iter().map(|g| Formula::forall(v.clone(), g)).collect(),
        Formula::ContraNeg(_) | Formula::IntImpl(..) | Formula::Possibly(_) => return Err(unsupported("to_classical_dnf", f)),
        _ => vec![f.clone()],
    })
}

fn product(a: &Formula, b: &Formula, join: fn(Formula, Formula) -> Formula) -> Result<Vec<Formula>, TransformError> {
    let (left, right) = (to_classical_dnf(a)?, to_classical_dnf(b)?);
    Ok(left.iter().flat_map(|l| right.iter().map(move |r| join(l.clone(), r.clone()))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::new([("P", 1), ("Q", 1)]).unwrap()).unwrap()
    }

    #[test]
    fn distributes_over_conjunction() {
        assert_eq!(to_classical_dnf(&f("(P(x) || Q(x)) & NE")).unwrap(), vec![f("P(x) & NE"), f("Q(x) & NE")]);
    }

    #[test]
    fn free_input_is_kept() {
        let g = f("exists y (dep(x; y) | P(y))");
        assert_eq!(to_classical_dnf(&g).unwrap(), vec![g]);
    }

    #[test]
    fn through_quantifiers_and_products() {
        assert_eq!(to_classical_dnf(&f("exists v (P(v) || Q(v))")).unwrap(), vec![f("exists v P(v)"), f("exists v Q(v)")]);
        assert_eq!(to_classical_dnf(&f("(P(x) || Q(x)) | (NE || x = x)")).unwrap().len(), 4);
        assert!(to_classical_dnf(&f("~NE")).is_err());
    }
}

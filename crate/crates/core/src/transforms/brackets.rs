use crate::syntax::Formula;

use super::dnf::to_classical_dnf;
use super::{unsupported, TransformError};

/// `[θ_1] & .. & [θ_n] & core` with a bracket-free core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketForm {
    pub sentences: Vec<Formula>,
    pub core: Formula,
}

impl BracketForm {
    pub fn to_formula(&self) -> Formula {
        let brackets = self.sentences.iter().map(|s| Formula::Bracket(Box::new(s.clone())));
        Formula::big_and(brackets.chain([self.core.clone()]))
    }
}

/// Hoists every bracket to the top. The result is a `||`-list of forms, one
/// per disjunct of the classical normal form of `f`.
pub fn extract_brackets(f: &Formula) -> Result<Vec<BracketForm>, TransformError> {
    to_classical_dnf(f)?.iter().map(hoist).collect()
}

fn hoist(f: &Formula) -> Result<BracketForm, TransformError> {
    let join = |a: &Formula, b: &Formula, op: fn(Formula, Formula) -> Formula| -> Result<BracketForm, TransformError> {
        let (mut l, r) = (hoist(a)?, hoist(b)?);
        l.sentences.extend(r.sentences);
        Ok(BracketForm { sentences: l.sentences, core: op(l.core, r.core) })
    };
    Ok(match f {
        Formula::Bracket(s) => BracketForm { sentences: vec![(**s).clone()], core: Formula::top() },
        Formula::And(a, b) => join(a, b, Formula::and)?,
        Formula::Or(a, b) => join(a, b, Formula::or)?,
        Formula::Exists(v, a) => {
            let inner = hoist(a)?;
            BracketForm { sentences: inner.sentences, core: Formula::exists(v.clone(), inner.core) }
        }
        Formula::Forall(v, a) => {
            let inner = hoist(a)?;
            BracketForm { sentences: inner.sentences, core: Formula::forall(v.clone(), inner.core) }
        }
        Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..) | Formula::Atom(_) => {
            BracketForm { sentences: Vec::new(), core: f.clone() }
        }
        _ => return Err(unsupported("extract_brackets", f)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::new([("P", 1)]).unwrap()).unwrap()
    }

    #[test]
    fn already_in_form() {
        let out = extract_brackets(&f("[exists x (x = x)] & NE")).unwrap();
        assert_eq!(out, vec![BracketForm { sentences: vec![f("exists x (x = x)")], core: Formula::and(Formula::top(), Formula::ne()) }]);
    }

    #[test]
    fn bracket_free_input() {
        let g = f("exists y (dep(x; y) | P(y))");
        assert_eq!(extract_brackets(&g).unwrap(), vec![BracketForm { sentences: vec![], core: g }]);
    }

    #[test]
    fn hoists_through_quantifiers() {
        let out = extract_brackets(&f("exists y ([forall z P(z)] | y = x) || [bot]")).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].sentences, vec![f("forall z P(z)")]);
        assert!(!out[0].core.contains(|h| matches!(h, Formula::Bracket(_))));
        assert!(extract_brackets(&f("~[bot]")).is_err());
    }
}

use crate::syntax::{Formula, Var};

use super::model::{Elem, Interpretation};
use super::team::Assignment;
use super::StructureError;

/// Classical satisfaction of a first-order formula by a single assignment.
pub fn tarski_eval<I: Interpretation + ?Sized>(m: &I, s: &Assignment, f: &Formula) -> Result<bool, StructureError> {
    let mut env: Vec<(Var, Elem)> = s.iter().map(|(v, e)| (v.clone(), e)).collect();
    eval(m, &mut env, f)
}

fn lookup(env: &[(Var, Elem)], v: &Var) -> Result<Elem, StructureError> {
    env.iter()
        .rev()
        .find(|(w, _)| w == v)
        .map(|(_, e)| *e)
        .ok_or_else(|| StructureError::UnboundVariable(v.clone()))
}

fn relation<I: Interpretation + ?Sized>(m: &I, env: &[(Var, Elem)], r: &str, args: &[Var]) -> Result<bool, StructureError> {
    let tuple = args.iter().map(|v| lookup(env, v)).collect::<Result<Vec<_>, _>>()?;
    m.holds(r, &tuple).ok_or_else(|| StructureError::UnknownRelation(r.to_string()))
}

// The environment is a stack; inner bindings shadow outer ones.
fn eval<I: Interpretation + ?Sized>(m: &I, env: &mut Vec<(Var, Elem)>, f: &Formula) -> Result<bool, StructureError> {
    Ok(match f {
        Formula::Rel(r, args) => relation(m, env, r, args)?,
        Formula::NegRel(r, args) => !relation(m, env, r, args)?,
        Formula::Eq(a, b) => lookup(env, a)? == lookup(env, b)?,
        Formula::Neq(a, b) => lookup(env, a)? != lookup(env, b)?,
        Formula::And(a, b) => eval(m, env, a)? && eval(m, env, b)?,
        Formula::Or(a, b) => eval(m, env, a)? || eval(m, env, b)?,
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for e in 0..m.domain_size() {
                env.push((v.clone(), e));
                let r = eval(m, env, body);
                env.pop();
                if r? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
        other => return Err(StructureError::NotFirstOrder(other.to_string())),
    })
}

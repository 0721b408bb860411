//! Reference evaluator that follows the satisfaction clauses literally:
//! splits are all pairs of covering subteams and existential witnesses are
//! all choice functions into non-empty value sets. Only usable on tiny teams.

use std::collections::{BTreeMap, BTreeSet};

use teamlogic::eval::Registry;
use teamlogic::syntax::{Atom, Formula, Var};
use teamlogic::{Elem, Model, Team};

type Asg = BTreeMap<Var, Elem>;
type T = BTreeSet<Asg>;

pub fn eval(m: &Model, t: &Team, f: &Formula, reg: &Registry) -> bool {
    let x: T = t.assignments().map(|s| s.iter().map(|(v, e)| (v.clone(), e)).collect()).collect();
    Naive { m, reg }.sat(&x, f)
}

struct Naive<'a> {
    m: &'a Model,
    reg: &'a Registry,
}

fn subsets(x: &T) -> Vec<T> {
    let rows: Vec<&Asg> = x.iter().collect();
    (0u32..1 << rows.len())
        .map(|mask| (0..rows.len()).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect())
        .collect()
}

fn tuple(s: &Asg, vs: &[Var]) -> Vec<Elem> {
    vs.iter().map(|v| s[v]).collect()
}

fn values(x: &T, vs: &[Var]) -> BTreeSet<Vec<Elem>> {
    x.iter().map(|s| tuple(s, vs)).collect()
}

/// Classical truth with relations looked up through `rel`.
fn tarski(size: usize, rel: &dyn Fn(&str, &[Elem]) -> bool, s: &Asg, f: &Formula) -> bool {
    match f {
        Formula::Rel(r, a) => rel(r, &tuple(s, a)),
        Formula::NegRel(r, a) => !rel(r, &tuple(s, a)),
        Formula::Eq(a, b) => s[a] == s[b],
        Formula::Neq(a, b) => s[a] != s[b],
        Formula::And(a, b) => tarski(size, rel, s, a) && tarski(size, rel, s, b),
        Formula::Or(a, b) => tarski(size, rel, s, a) || tarski(size, rel, s, b),
        Formula::Exists(v, b) => (0..size).any(|e| tarski(size, rel, &with(s, v, e), b)),
        Formula::Forall(v, b) => (0..size).all(|e| tarski(size, rel, &with(s, v, e), b)),
        other => panic!("not first-order: {other}"),
    }
}

fn with(s: &Asg, v: &Var, e: Elem) -> Asg {
    let mut s = s.clone();
    s.insert(v.clone(), e);
    s
}

impl Naive<'_> {
    fn n(&self) -> usize {
        self.m.size()
    }

    fn model_truth(&self, s: &Asg, f: &Formula) -> bool {
        tarski(self.n(), &|r, t| self.m.holds(r, t).expect("declared relation"), s, f)
    }

    fn sat(&self, x: &T, f: &Formula) -> bool {
        match f {
            Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..) => {
                x.iter().all(|s| self.model_truth(s, f))
            }
            Formula::And(a, b) => self.sat(x, a) && self.sat(x, b),
            Formula::Or(a, b) => subsets(x).iter().any(|y| {
                if !self.sat(y, a) {
                    return false;
                }
                let rest: T = x.difference(y).cloned().collect();
                subsets(y).into_iter().any(|extra| self.sat(&rest.union(&extra).cloned().collect(), b))
            }),
            Formula::Exists(v, b) => {
                let rows: Vec<&Asg> = x.iter().collect();
                let choices = (1usize << self.n()) - 1;
                let total = choices.pow(rows.len() as u32);
                (0..total).any(|mut code| {
                    let mut y = T::new();
                    for s in &rows {
                        let set = code % choices + 1;
                        code /= choices;
                        for e in (0..self.n()).filter(|e| set >> e & 1 == 1) {
                            y.insert(with(s, v, e));
                        }
                    }
                    self.sat(&y, b)
                })
            }
            Formula::Forall(v, b) => {
                let y: T = x.iter().flat_map(|s| (0..self.n()).map(move |e| with(s, v, e))).collect();
                self.sat(&y, b)
            }
            Formula::ClassicalOr(a, b) => self.sat(x, a) || self.sat(x, b),
            Formula::ContraNeg(a) => !self.sat(x, a),
            Formula::IntImpl(a, b) => subsets(x).iter().all(|y| !self.sat(y, a) || self.sat(y, b)),
            Formula::Possibly(a) => subsets(x).iter().any(|y| !y.is_empty() && self.sat(y, a)),
            Formula::Bracket(a) => self.model_truth(&Asg::new(), a),
            Formula::Atom(atom) => self.atom(x, atom),
        }
    }

    fn atom(&self, x: &T, atom: &Atom) -> bool {
        let n = self.n();
        let pairs = || x.iter().flat_map(|s| x.iter().map(move |t| (s, t)));
        match atom {
            Atom::Const(v) => pairs().all(|(s, t)| tuple(s, v) == tuple(t, v)),
            Atom::NCon(v) => pairs().any(|(s, t)| tuple(s, v) != tuple(t, v)),
            Atom::Dep(v, w) => pairs().all(|(s, t)| tuple(s, v) != tuple(t, v) || tuple(s, w) == tuple(t, w)),
            Atom::NDep(v, w) => pairs().any(|(s, t)| tuple(s, v) == tuple(t, v) && tuple(s, w) != tuple(t, w)),
            Atom::Inc(v, w) => x.iter().all(|s| x.iter().any(|t| tuple(s, v) == tuple(t, w))),
            Atom::NInc(v, w) => x.iter().any(|s| x.iter().all(|t| tuple(s, v) != tuple(t, w))),
            Atom::Ind(u, v, w) => pairs().all(|(s, t)| tuple(s, u) != tuple(t, u) || x.iter().any(|r| realises(r, s, t, u, v, w))),
            Atom::NInd(u, v, w) => pairs().any(|(s, t)| tuple(s, u) == tuple(t, u) && !x.iter().any(|r| realises(r, s, t, u, v, w))),
            Atom::All(v) => values(x, v).len() == n.pow(v.len() as u32),
            Atom::NonEmpty => !x.is_empty(),
            Atom::Geq(v, k) => values(x, v).len() >= *k,
            Atom::CountEq(v, k) => values(x, std::slice::from_ref(v)).len() == *k,
            Atom::CountNeq(v, k) => values(x, std::slice::from_ref(v)).len() != *k,
            Atom::CoCountEq(v, k) => n - values(x, std::slice::from_ref(v)).len() == *k,
            Atom::CoCountNeq(v, k) => n - values(x, std::slice::from_ref(v)).len() != *k,
            Atom::Custom(name, v) => {
                let spec = self.reg.get(name).expect("registered");
                if spec.arity == 0 {
                    return tarski(n, &|_, _| panic!("0-ary notions use no relations"), &Asg::new(), &spec.definition);
                }
                let rel = values(x, v);
                tarski(n, &|_, t| rel.contains(t), &Asg::new(), &spec.definition)
            }
        }
    }
}

fn realises(r: &Asg, s: &Asg, t: &Asg, u: &[Var], v: &[Var], w: &[Var]) -> bool {
    tuple(r, u) == tuple(s, u) && tuple(r, v) == tuple(s, v) && tuple(r, w) == tuple(t, w)
}

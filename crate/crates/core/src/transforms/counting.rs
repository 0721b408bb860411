use crate::syntax::{Atom, Formula, FreshVars, Var};

use super::basic::restrict_formula;

/// The four counting formulas in one free variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountBound {
    /// `|X(v)| <= k`
    Le,
    /// `|X(v)| >= k`
    Ge,
    /// `|M \ X(v)| <= k`
    CoLe,
    /// `|M \ X(v)| >= k`
    CoGe,
}

/// The four counting atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountAtom {
    Eq,
    Neq,
    CoEq,
    CoNeq,
}

/// `exists x0 .. xk` pairwise equal somewhere: at most `k` elements.
pub fn at_most_sentence(k: usize) -> Formula {
    let xs: Vec<Var> = (0..=k).map(|i| Var::new(format!("x{i}"))).collect();
    let clash = Formula::big_or(pairs(&xs).map(|(a, b)| Formula::eq(a.clone(), b.clone())));
    Formula::forall_many(&xs, clash)
}

/// At least `k` distinct elements.
pub fn at_least_sentence(k: usize) -> Formula {
    let xs: Vec<Var> = (1..=k).map(|i| Var::new(format!("x{i}"))).collect();
    Formula::exists_many(&xs, Formula::big_and(pairs(&xs).map(|(a, b)| Formula::neq(a.clone(), b.clone()))))
}

fn pairs(xs: &[Var]) -> impl Iterator<Item = (&Var, &Var)> {
    xs.iter().enumerate().flat_map(move |(i, a)| xs[i + 1..].iter().map(move |b| (a, b)))
}

fn bracket(s: Formula) -> Formula {
    Formula::bracket(s).expect("counting sentences are closed and first-order")
}

pub fn counting_formula(kind: CountBound, k: usize, v: &Var) -> Formula {
    let mut fresh = FreshVars::new([v.clone()]);
    let p = fresh.indexed_many("p", k);
    let consts = || p.iter().map(|x| Formula::atom(Atom::Const(vec![x.clone()])));
    let distinct = || pairs(&p).map(|(a, b)| Formula::neq(a.clone(), b.clone())).collect::<Vec<_>>();
    match kind {
        CountBound::Le => {
            let hit = Formula::big_or(p.iter().map(|x| Formula::eq(v.clone(), x.clone())));
            Formula::exists_many(&p, Formula::big_and(consts().chain([hit])))
        }
        CountBound::Ge => {
            let seen = p.iter().map(|x| restrict_formula(&Formula::ne(), &Formula::eq(v.clone(), x.clone())).expect("equality is first-order"));
            Formula::exists_many(&p, Formula::big_and(consts().chain(distinct()).chain(seen)))
        }
        CountBound::CoLe => {
            let q = fresh.named("q");
            let cover = Formula::big_or(p.iter().chain([v]).map(|x| Formula::eq(q.clone(), x.clone())));
            let total = Formula::exists(q.clone(), Formula::and(Formula::atom(Atom::All(vec![q])), cover));
            let witness = Formula::exists_many(&p, Formula::big_and(consts().chain([total])));
            Formula::classical_or(bracket(at_most_sentence(k)), witness)
        }
        CountBound::CoGe => {
            let avoided = p.iter().map(|x| Formula::neq(v.clone(), x.clone()));
            let witness = Formula::exists_many(&p, Formula::big_and(consts().chain(distinct()).chain(avoided)));
            Formula::classical_or(Formula::and(Formula::bot(), bracket(at_least_sentence(k))), Formula::and(Formula::ne(), witness))
        }
    }
}

/// The counting atoms from the counting formulas; a bound of `<= -1` is `bot`.
pub fn counting_atom_definition(kind: CountAtom, k: usize, v: &Var) -> Formula {
    let below = |b: CountBound| if k == 0 { Formula::bot() } else { counting_formula(b, k - 1, v) };
    match kind {
        CountAtom::Eq => Formula::and(counting_formula(CountBound::Le, k, v), counting_formula(CountBound::Ge, k, v)),
        CountAtom::Neq => Formula::classical_or(below(CountBound::Le), counting_formula(CountBound::Ge, k + 1, v)),
        CountAtom::CoEq => Formula::and(counting_formula(CountBound::CoLe, k, v), counting_formula(CountBound::CoGe, k, v)),
        CountAtom::CoNeq => Formula::classical_or(below(CountBound::CoLe), counting_formula(CountBound::CoGe, k + 1, v)),
    }
}

/// `∃^{=k} x P x`, its negation, `∃^{=k} x ¬P x`, its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountLiteral {
    PosCount(usize),
    NegPosCount(usize),
    CoCount(usize),
    NegCoCount(usize),
}

impl CountLiteral {
    /// Truth on a domain of size `n` where `P` has `size` elements.
    pub fn holds(self, n: usize, size: usize) -> bool {
        match self {
            CountLiteral::PosCount(k) => size == k,
            CountLiteral::NegPosCount(k) => size != k,
            CountLiteral::CoCount(k) => n - size == k,
            CountLiteral::NegCoCount(k) => n - size != k,
        }
    }

    fn atom(self) -> (CountAtom, usize) {
        match self {
            CountLiteral::PosCount(k) => (CountAtom::Eq, k),
            CountLiteral::NegPosCount(k) => (CountAtom::Neq, k),
            CountLiteral::CoCount(k) => (CountAtom::CoEq, k),
            CountLiteral::NegCoCount(k) => (CountAtom::CoNeq, k),
        }
    }

    /// The literal as a first-order sentence about `rel`.
    pub fn sentence(self, rel: &str) -> Formula {
        let (positive, k) = match self {
            CountLiteral::PosCount(k) | CountLiteral::NegPosCount(k) => (true, k),
            CountLiteral::CoCount(k) | CountLiteral::NegCoCount(k) => (false, k),
        };
        let exact = exactly(rel, positive, k);
        match self {
            CountLiteral::PosCount(_) | CountLiteral::CoCount(_) => exact,
            _ => crate::transforms::dual_negate(&exact).expect("counting sentences are first-order"),
        }
    }
}

/// `exists^{=k} x (±rel(x))` as a plain sentence.
fn exactly(rel: &str, positive: bool, k: usize) -> Formula {
    let lit = |x: &Var| if positive { Formula::Rel(rel.into(), vec![x.clone()]) } else { Formula::NegRel(rel.into(), vec![x.clone()]) };
    let xs: Vec<Var> = (1..=k).map(|i| Var::new(format!("x{i}"))).collect();
    let y = Var::from("y");
    let only = Formula::forall(
        y.clone(),
        Formula::or(crate::transforms::dual_negate(&lit(&y)).unwrap(), Formula::big_or(xs.iter().map(|x| Formula::eq(y.clone(), x.clone())))),
    );
    let distinct = pairs(&xs).map(|(a, b)| Formula::neq(a.clone(), b.clone()));
    Formula::exists_many(&xs, Formula::big_and(xs.iter().map(lit).chain(distinct).chain([only])))
}

/// A unary dependency as `⋁_i ⋀_j θ_ij` over counting literals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UnaryDepDescription {
    pub disjuncts: Vec<Vec<CountLiteral>>,
}

impl UnaryDepDescription {
    pub fn new(disjuncts: Vec<Vec<CountLiteral>>) -> Self {
        UnaryDepDescription { disjuncts }
    }

    pub fn holds(&self, n: usize, size: usize) -> bool {
        self.disjuncts.iter().any(|d| d.iter().all(|l| l.holds(n, size)))
    }

    /// The defining sentence over a unary relation `rel`.
    pub fn sentence(&self, rel: &str) -> Formula {
        Formula::big_or(self.disjuncts.iter().map(|d| Formula::big_and(d.iter().map(|l| l.sentence(rel)))))
    }
}

/// `⨆_i ⋀_j θ'_ij` with each literal replaced by its counting atom definition.
pub fn compile_unary_dependency(d: &UnaryDepDescription, v: &Var) -> Formula {
    Formula::big_classical_or(d.disjuncts.iter().map(|conj| {
        Formula::big_and(conj.iter().map(|l| {
            let (kind, k) = l.atom();
            counting_atom_definition(kind, k, v)
        }))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{tarski_eval, Assignment, Model};
    use crate::syntax::{print, Signature};

    #[test]
    fn cardinality_sentences() {
        for n in 1..=4 {
            let m = Model::pure(n).unwrap();
            for k in 0..=4 {
                assert_eq!(tarski_eval(&m, &Assignment::new(), &at_most_sentence(k)).unwrap(), n <= k);
                assert_eq!(tarski_eval(&m, &Assignment::new(), &at_least_sentence(k)).unwrap(), n >= k);
            }
        }
    }

    #[test]
    fn literal_sentences_count() {
        let sig = Signature::new([("P", 1)]).unwrap();
        for n in 1..=3 {
            for size in 0..=n {
                let m = Model::new(n, sig.clone()).unwrap().with("P", (0..size).map(|e| vec![e])).unwrap();
                for k in 0..=3 {
                    for l in [CountLiteral::PosCount(k), CountLiteral::NegPosCount(k), CountLiteral::CoCount(k), CountLiteral::NegCoCount(k)] {
                        assert_eq!(tarski_eval(&m, &Assignment::new(), &l.sentence("P")).unwrap(), l.holds(n, size), "{l:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn le_zero_is_bot_shaped() {
        let v = Var::from("v");
        assert_eq!(print(&counting_formula(CountBound::Le, 2, &v)), "exists p1 exists p2 (const(p1) & (const(p2) & (v = p1 | v = p2)))");
        assert_eq!(counting_atom_definition(CountAtom::Neq, 0, &v).to_string().matches("||").count(), 1);
    }
}

use std::collections::BTreeSet;
use std::fmt;

use super::SyntaxError;

/// A first-order variable. Variables are lowercase identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_string())
    }
}

/// Convenience: `vars(&["x", "y"])`.
pub fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| Var::from(*n)).collect()
}

/// Dependency atoms and the other team-level atomic formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `=(v)`: the tuple takes a single value.
    Const(Vec<Var>),
    /// `=(v, w)`: `v` functionally determines `w`.
    Dep(Vec<Var>, Vec<Var>),
    /// `v ⊆ w`. Both tuples have the same length.
    Inc(Vec<Var>, Vec<Var>),
    /// `v ⊥_u w`, stored as `(u, v, w)`.
    Ind(Vec<Var>, Vec<Var>, Vec<Var>),
    /// Totality: the projection on `v` is the full power of the domain.
    All(Vec<Var>),
    /// The team is non-empty.
    NonEmpty,
    /// Negated constancy.
    NCon(Vec<Var>),
    /// Negated functional dependence.
    NDep(Vec<Var>, Vec<Var>),
    /// `|v| >= n`.
    Geq(Vec<Var>, usize),
    /// Negated inclusion.
    NInc(Vec<Var>, Vec<Var>),
    /// Negated conditional independence, stored as `(u, v, w)`.
    NInd(Vec<Var>, Vec<Var>, Vec<Var>),
    /// `|v| = k`
    CountEq(Var, usize),
    /// `|v| != k`
    CountNeq(Var, usize),
    /// `|M - v| = k`
    CoCountEq(Var, usize),
    /// `|M - v| != k`
    CoCountNeq(Var, usize),
    /// A registered first-order dependency, `D:name(v)`.
    Custom(String, Vec<Var>),
}

impl Atom {
    /// Every variable occurring in the atom, in argument order (with repeats).
    pub fn arguments(&self) -> Vec<&Var> {
        match self {
            Atom::NonEmpty => vec![],
            Atom::Const(v) | Atom::All(v) | Atom::NCon(v) | Atom::Geq(v, _) | Atom::Custom(_, v) => {
                v.iter().collect()
            }
            Atom::Dep(v, w) | Atom::Inc(v, w) | Atom::NDep(v, w) | Atom::NInc(v, w) => {
                v.iter().chain(w).collect()
            }
            Atom::Ind(u, v, w) | Atom::NInd(u, v, w) => u.iter().chain(v).chain(w).collect(),
            Atom::CountEq(v, _) | Atom::CountNeq(v, _) | Atom::CoCountEq(v, _) | Atom::CoCountNeq(v, _) => {
                vec![v]
            }
        }
    }

    /// The keyword used by the concrete syntax (custom atoms report `D:name`).
    pub fn keyword(&self) -> String {
        match self {
            Atom::Const(_) => "const".into(),
            Atom::Dep(..) => "dep".into(),
            Atom::Inc(..) => "inc".into(),
            Atom::Ind(..) => "ind".into(),
            Atom::All(_) => "all".into(),
            Atom::NonEmpty => "NE".into(),
            Atom::NCon(_) => "ncon".into(),
            Atom::NDep(..) => "ndep".into(),
            Atom::Geq(..) => "geq".into(),
            Atom::NInc(..) => "ninc".into(),
            Atom::NInd(..) => "nind".into(),
            Atom::CountEq(..) => "count_eq".into(),
            Atom::CountNeq(..) => "count_neq".into(),
            Atom::CoCountEq(..) => "cocount_eq".into(),
            Atom::CoCountNeq(..) => "cocount_neq".into(),
            Atom::Custom(name, _) => format!("D:{name}"),
        }
    }
}

/// Formulas of first-order logic with team semantics, kept in negation
/// normal form: `!` only ever appears on relational literals and equalities.
/// Contradictory negation `~` is a separate connective.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<Var>),
    NegRel(String, Vec<Var>),
    Eq(Var, Var),
    Neq(Var, Var),
    /// Lax (splitting) disjunction `|`.
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    /// Classical disjunction `||`.
    ClassicalOr(Box<Formula>, Box<Formula>),
    /// Contradictory negation `~`.
    ContraNeg(Box<Formula>),
    /// Intuitionistic implication `->`.
    IntImpl(Box<Formula>, Box<Formula>),
    /// Possibility `<>`.
    Possibly(Box<Formula>),
    /// `[phi]`, truth of a first-order sentence in the model.
    Bracket(Box<Formula>),
    Atom(Atom),
}

impl Formula {
    pub fn rel(name: &str, args: &[&str]) -> Self {
        Formula::Rel(name.to_string(), vars(args))
    }

    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Neq(a.into(), b.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn classical_or(a: Formula, b: Formula) -> Self {
        Formula::ClassicalOr(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn contra_neg(a: Formula) -> Self {
        Formula::ContraNeg(Box::new(a))
    }

    pub fn int_impl(a: Formula, b: Formula) -> Self {
        Formula::IntImpl(Box::new(a), Box::new(b))
    }

    pub fn possibly(a: Formula) -> Self {
        Formula::Possibly(Box::new(a))
    }

    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn ne() -> Self {
        Formula::Atom(Atom::NonEmpty)
    }

    /// `[body]`; the body must be a first-order sentence.
    pub fn bracket(body: Formula) -> Result<Self, SyntaxError> {
        if !body.is_first_order() {
            return Err(SyntaxError::BracketNotFirstOrder);
        }
        let free = body.free_variables();
        if let Some(v) = free.into_iter().next() {
            return Err(SyntaxError::FreeVariableInBracket(v.to_string()));
        }
        Ok(Formula::Bracket(Box::new(body)))
    }

    /// `forall v (v = v)`
    pub fn top() -> Self {
        Formula::forall("v", Formula::eq("v", "v"))
    }

    /// `exists v (v != v)`
    pub fn bot() -> Self {
        Formula::exists("v", Formula::neq("v", "v"))
    }

    /// Right-nested conjunction; the empty conjunction is `top`.
    pub fn big_and(parts: impl IntoIterator<Item = Formula>) -> Self {
        fold_right(parts.into_iter().collect(), Formula::and).unwrap_or_else(Formula::top)
    }

    /// Right-nested lax disjunction; the empty disjunction is `bot`.
    pub fn big_or(parts: impl IntoIterator<Item = Formula>) -> Self {
        fold_right(parts.into_iter().collect(), Formula::or).unwrap_or_else(Formula::bot)
    }

    /// Right-nested classical disjunction; the empty one is `bot`.
    pub fn big_classical_or(parts: impl IntoIterator<Item = Formula>) -> Self {
        fold_right(parts.into_iter().collect(), Formula::classical_or).unwrap_or_else(Formula::bot)
    }

    /// Existential block `exists v1 ... vn body`.
    pub fn exists_many(vs: &[Var], body: Formula) -> Self {
        vs.iter().rev().fold(body, |acc, v| Formula::Exists(v.clone(), Box::new(acc)))
    }

    pub fn forall_many(vs: &[Var], body: Formula) -> Self {
        vs.iter().rev().fold(body, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }

    /// Componentwise tuple equality, a conjunction of equalities.
    pub fn tuple_eq(a: &[Var], b: &[Var]) -> Self {
        assert_eq!(a.len(), b.len(), "tuple equality needs tuples of equal length");
        Formula::big_and(a.iter().zip(b).map(|(x, y)| Formula::Eq(x.clone(), y.clone())))
    }

    /// Tuple inequality, a (lax) disjunction of componentwise inequalities.
    pub fn tuple_neq(a: &[Var], b: &[Var]) -> Self {
        assert_eq!(a.len(), b.len(), "tuple inequality needs tuples of equal length");
        Formula::big_or(a.iter().zip(b).map(|(x, y)| Formula::Neq(x.clone(), y.clone())))
    }

    /// True for plain first-order formulas: literals, `&`, `|`, quantifiers.
    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_first_order() && b.is_first_order(),
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.is_first_order(),
            _ => false,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Rel(..) | Formula::NegRel(..) | Formula::Eq(..) | Formula::Neq(..))
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Rel(_, a) | Formula::NegRel(_, a) => out.extend(a.iter().cloned()),
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::Atom(atom) => out.extend(atom.arguments().into_iter().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::ClassicalOr(a, b)
            | Formula::IntImpl(a, b) => vec![a, b],
            Formula::Exists(_, a)
            | Formula::Forall(_, a)
            | Formula::ContraNeg(a)
            | Formula::Possibly(a)
            | Formula::Bracket(a) => vec![a],
            _ => vec![],
        }
    }

    /// Does any subformula satisfy `pred`?
    pub fn contains(&self, pred: impl Fn(&Formula) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= pred(f));
        found
    }

    /// Relation symbols together with the arity of each use.
    pub fn relation_uses(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Rel(r, a) | Formula::NegRel(r, a) = f {
                out.push((r.clone(), a.len()));
            }
        });
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

fn fold_right(mut parts: Vec<Formula>, join: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    let mut acc = parts.pop()?;
    while let Some(p) = parts.pop() {
        acc = join(p, acc);
    }
    Some(acc)
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let mut add = |v: &Var, bound: &Vec<Var>| {
        if !bound.contains(v) {
            out.insert(v.clone());
        }
    };
    match f {
        Formula::Rel(_, a) | Formula::NegRel(_, a) => a.iter().for_each(|v| add(v, bound)),
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            add(a, bound);
            add(b, bound);
        }
        Formula::Atom(atom) => atom.arguments().into_iter().for_each(|v| add(v, bound)),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Formula::Bracket(_) => {}
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Returns a variable not in `avoid`: `v` if free, else `v1`, `v2`, ...
pub fn fresh_variable(avoid: &BTreeSet<Var>) -> Var {
    fresh_named("v", avoid)
}

/// `base` itself if unused, otherwise `base1`, `base2`, ...
pub fn fresh_named(base: &str, avoid: &BTreeSet<Var>) -> Var {
    let plain = Var::new(base);
    if !avoid.contains(&plain) {
        return plain;
    }
    (1..)
        .map(|i| Var::new(format!("{base}{i}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded search")
}

/// Generates deterministic fresh names and remembers what it handed out.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    avoid: BTreeSet<Var>,
}

impl FreshVars {
    pub fn new(avoid: impl IntoIterator<Item = Var>) -> Self {
        FreshVars { avoid: avoid.into_iter().collect() }
    }

    /// Seeds the avoid-set with every variable of the given formulas.
    pub fn for_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut avoid = BTreeSet::new();
        for f in fs {
            avoid.extend(f.all_variables());
        }
        FreshVars { avoid }
    }

    pub fn reserve(&mut self, v: &Var) {
        self.avoid.insert(v.clone());
    }

    /// `base` if unused, else `base1`, `base2`, ...
    pub fn named(&mut self, base: &str) -> Var {
        let v = fresh_named(base, &self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    /// Always numbered: `base1`, `base2`, ...
    pub fn indexed(&mut self, base: &str) -> Var {
        let v = (1..)
            .map(|i| Var::new(format!("{base}{i}")))
            .find(|v| !self.avoid.contains(v))
            .expect("unbounded search");
        self.avoid.insert(v.clone());
        v
    }

    pub fn indexed_many(&mut self, base: &str, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.indexed(base)).collect()
    }
}

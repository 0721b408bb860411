use std::collections::{BTreeMap, BTreeSet};

use crate::structures::{decode_lex, tarski_eval, Assignment, Domain, Elem, SingleRelation};
use crate::syntax::{parse, Formula, Signature};

use super::EvalError;

/// The relation symbol a defining sentence talks about.
pub const DEFINING_RELATION: &str = "R";

/// Largest `|M|^k` for which [`check_upward_closed`] enumerates all relations.
pub const CLOSURE_CHECK_LIMIT: usize = 16;

const BUILTIN: &[&str] = &[
    "const", "dep", "inc", "ind", "all", "ne", "ncon", "ndep", "geq", "ninc", "nind", "count_eq", "count_neq", "cocount_eq",
    "cocount_neq", "exists", "forall", "top", "bot",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Yes,
    No,
    Unknown,
}

/// A first-order dependency notion: `D v` holds in a team `X` when the
/// defining sentence is true in `(M, R := X(v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencySpec {
    pub name: String,
    pub arity: usize,
    pub definition: Formula,
    pub claimed_upward_closed: Claim,
}

impl DependencySpec {
    pub fn new(name: impl Into<String>, arity: usize, definition: Formula) -> Self {
        DependencySpec { name: name.into(), arity, definition, claimed_upward_closed: Claim::Unknown }
    }

    /// Parses the defining sentence over the signature `{R}` with `R` of the given arity.
    pub fn parse(name: impl Into<String>, arity: usize, text: &str) -> Result<Self, EvalError> {
        let sig = Signature::new([(DEFINING_RELATION, arity)]).expect("valid name");
        let definition = parse(text, &sig).map_err(|e| EvalError::InvalidSpec(e.to_string()))?;
        Ok(DependencySpec::new(name, arity, definition))
    }

    /// Like [`DependencySpec::parse`] but the sentence may also use the
    /// relations of `sig`; only meaningful for 0-ary notions in a registry
    /// that allows model symbols.
    pub fn parse_over(name: impl Into<String>, arity: usize, text: &str, sig: &Signature) -> Result<Self, EvalError> {
        let mut sig = sig.clone();
        if arity > 0 {
            sig.add(DEFINING_RELATION, arity).map_err(|e| EvalError::InvalidSpec(e.to_string()))?;
        }
        let definition = parse(text, &sig).map_err(|e| EvalError::InvalidSpec(e.to_string()))?;
        Ok(DependencySpec::new(name, arity, definition))
    }

    pub fn claim_upward_closed(mut self, claim: Claim) -> Self {
        self.claimed_upward_closed = claim;
        self
    }

    /// Truth of the defining sentence with `R` interpreted as `rel` over `0..size`.
    pub fn holds(&self, size: usize, rel: &BTreeSet<Vec<Elem>>) -> Result<bool, EvalError> {
        let m = SingleRelation { size, name: DEFINING_RELATION, tuples: rel };
        Ok(tarski_eval(&m, &Assignment::new(), &self.definition)?)
    }

    /// Truth of a 0-ary notion over a bare domain.
    pub fn holds_nullary(&self, size: usize) -> Result<bool, EvalError> {
        Ok(tarski_eval(&Domain(size), &Assignment::new(), &self.definition)?)
    }
}

/// Registered dependency notions, by name.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    specs: BTreeMap<String, DependencySpec>,
    allow_model_symbols: bool,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Lets 0-ary notions mention the model's relation symbols. Off by default.
    pub fn allowing_model_symbols(mut self) -> Self {
        self.allow_model_symbols = true;
        self
    }

    pub fn allows_model_symbols(&self) -> bool {
        self.allow_model_symbols
    }

    pub fn register(&mut self, spec: DependencySpec) -> Result<(), EvalError> {
        let valid_name = spec.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && spec.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_name {
            return Err(EvalError::InvalidSpec(format!("bad dependency name `{}`", spec.name)));
        }
        if BUILTIN.contains(&spec.name.to_ascii_lowercase().as_str()) {
            return Err(EvalError::ReservedName(spec.name));
        }
        if self.specs.contains_key(&spec.name) {
            return Err(EvalError::DuplicateSpec(spec.name));
        }
        let d = &spec.definition;
        if !d.is_first_order() {
            return Err(EvalError::InvalidSpec(format!("definition of `{}` is not first-order", spec.name)));
        }
        if let Some(v) = d.free_variables().into_iter().next() {
            return Err(EvalError::InvalidSpec(format!("definition of `{}` has free variable `{v}`", spec.name)));
        }
        for (rel, k) in d.relation_uses() {
            let own = spec.arity > 0 && rel == DEFINING_RELATION && k == spec.arity;
            let model = spec.arity == 0 && self.allow_model_symbols;
            if !own && !model {
                return Err(EvalError::InvalidSpec(format!(
                    "definition of `{}` uses `{rel}` with {k} arguments; only {DEFINING_RELATION} of arity {} is allowed",
                    spec.name, spec.arity
                )));
            }
        }
        self.specs.insert(spec.name.clone(), spec);
        Ok(())
    }

    pub fn with(mut self, spec: DependencySpec) -> Result<Self, EvalError> {
        self.register(spec)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&DependencySpec> {
        self.specs.get(name)
    }

    pub fn specs(&self) -> impl Iterator<Item = &DependencySpec> {
        self.specs.values()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpwardClosure {
    Holds { max_size: usize },
    /// `smaller ⊆ larger`, the notion holds of `smaller` but not of `larger`.
    Counterexample { size: usize, smaller: BTreeSet<Vec<Elem>>, larger: BTreeSet<Vec<Elem>> },
}

/// Tests `(M,R) ∈ D, R ⊆ S ⇒ (M,S) ∈ D` for every `R ⊆ S ⊆ M^k`, `|M| <= max_size`.
pub fn check_upward_closed(spec: &DependencySpec, max_size: usize) -> Result<UpwardClosure, EvalError> {
    if spec.arity == 0 {
        return Err(EvalError::InvalidSpec("upward closure is checked for notions of arity at least 1".into()));
    }
    for size in 1..=max_size {
        let table = relation_table(spec, size)?;
        let slots = size.pow(spec.arity as u32);
        for mask in 0..table.len() {
            if !table[mask] {
                continue;
            }
            // a failing superset implies a failing single-tuple extension
            if let Some(bit) = (0..slots).find(|&b| mask >> b & 1 == 0 && !table[mask | 1 << b]) {
                return Ok(UpwardClosure::Counterexample {
                    size,
                    smaller: relation_of(mask, spec.arity, size),
                    larger: relation_of(mask | 1 << bit, spec.arity, size),
                });
            }
        }
    }
    Ok(UpwardClosure::Holds { max_size })
}

/// Truth of `spec` on every relation over `0..size`, indexed by the
/// bitmask whose bit `i` selects the `i`-th tuple in lexicographic order.
pub(crate) fn relation_table(spec: &DependencySpec, size: usize) -> Result<Vec<bool>, EvalError> {
    let slots = size.checked_pow(spec.arity as u32).filter(|&s| s <= CLOSURE_CHECK_LIMIT).ok_or(
        EvalError::LimitExceeded { what: "relation space", size: size.saturating_pow(spec.arity as u32), limit: CLOSURE_CHECK_LIMIT },
    )?;
    (0..1usize << slots).map(|mask| spec.holds(size, &relation_of(mask, spec.arity, size))).collect()
}

pub(crate) fn relation_of(mask: usize, arity: usize, size: usize) -> BTreeSet<Vec<Elem>> {
    let slots = size.pow(arity as u32);
    (0..slots).filter(|b| mask >> b & 1 == 1).map(|b| decode_lex(b, arity, size)).collect()
}

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::Signature;

use super::StructureError;

/// Domain elements are the integers `0..size`.
pub type Elem = usize;

/// A finite relational structure over the domain `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    size: usize,
    sig: Signature,
    relations: BTreeMap<String, BTreeSet<Vec<Elem>>>,
}

impl Model {
    /// A model over the empty signature; it is determined by its size.
    pub fn pure(size: usize) -> Result<Self, StructureError> {
        Model::new(size, Signature::empty())
    }

    /// A model with every relation of `sig` interpreted as empty.
    pub fn new(size: usize, sig: Signature) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let relations = sig.relations().map(|(n, _)| (n.to_string(), BTreeSet::new())).collect();
        Ok(Model { size, sig, relations })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn insert(&mut self, rel: &str, tuple: Vec<Elem>) -> Result<(), StructureError> {
        let arity = self.sig.arity(rel).ok_or_else(|| StructureError::UnknownRelation(rel.to_string()))?;
        if tuple.len() != arity {
            return Err(StructureError::ArityMismatch { rel: rel.to_string(), expected: arity, found: tuple.len() });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(StructureError::ElementOutOfRange { elem: e, size: self.size });
        }
        self.relations.get_mut(rel).expect("declared").insert(tuple);
        Ok(())
    }

    pub fn with(mut self, rel: &str, tuples: impl IntoIterator<Item = Vec<Elem>>) -> Result<Self, StructureError> {
        for t in tuples {
            self.insert(rel, t)?;
        }
        Ok(self)
    }

    pub fn relation(&self, rel: &str) -> Option<&BTreeSet<Vec<Elem>>> {
        self.relations.get(rel)
    }

    pub fn holds(&self, rel: &str, tuple: &[Elem]) -> Option<bool> {
        self.relations.get(rel).map(|r| r.contains(tuple))
    }
}

/// Anything that can interpret relation symbols over `0..domain_size()`.
pub trait Interpretation {
    fn domain_size(&self) -> usize;
    /// `None` when the symbol is not interpreted.
    fn holds(&self, rel: &str, tuple: &[Elem]) -> Option<bool>;
}

impl Interpretation for Model {
    fn domain_size(&self) -> usize {
        self.size
    }

    fn holds(&self, rel: &str, tuple: &[Elem]) -> Option<bool> {
        Model::holds(self, rel, tuple)
    }
}

/// A domain together with a single named relation, e.g. `(M, X(v))` when a
/// dependency's defining sentence is checked against a team's projection.
#[derive(Clone, Debug)]
pub struct SingleRelation<'a> {
    pub size: usize,
    pub name: &'a str,
    pub tuples: &'a BTreeSet<Vec<Elem>>,
}

impl Interpretation for SingleRelation<'_> {
    fn domain_size(&self) -> usize {
        self.size
    }

    fn holds(&self, rel: &str, tuple: &[Elem]) -> Option<bool> {
        (rel == self.name).then(|| self.tuples.contains(tuple))
    }
}

/// A bare domain, interpreting nothing.
#[derive(Clone, Copy, Debug)]
pub struct Domain(pub usize);

impl Interpretation for Domain {
    fn domain_size(&self) -> usize {
        self.0
    }

    fn holds(&self, _: &str, _: &[Elem]) -> Option<bool> {
        None
    }
}

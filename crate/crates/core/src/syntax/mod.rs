//! Formula syntax: the AST, a parser for the text grammar and a printer
//! whose output parses back to the same tree.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula := cor ('->' formula)?            intuitionistic implication, right-assoc
//! cor     := tor ('||' tor)*                classical disjunction
//! tor     := and ('|' and)*                 lax disjunction
//! and     := unary ('&' unary)*
//! unary   := '~' unary | '<>' unary | ('exists' | 'forall') var unary | primary
//! primary := '(' formula ')' | '[' formula ']' | 'top' | 'bot' | 'NE'
//!          | R(x, ..) | !R(x, ..) | x = y | x != y
//!          | atom(args) | D:name(x, ..)
//! ```

mod ast;
mod parse;
mod print;

use std::collections::BTreeMap;

use thiserror::Error;

pub use ast::{fresh_named, fresh_variable, vars, Atom, Formula, FreshVars, Var};
pub use parse::parse;
pub use print::print;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: expected {expected}, found {found}")]
    Unexpected { pos: usize, found: String, expected: String },
    #[error("unknown relation `{name}` at byte {pos}")]
    UnknownRelation { name: String, pos: usize },
    #[error("relation `{name}` has arity {expected} but is applied to {found} arguments at byte {pos}")]
    ArityMismatch { name: String, expected: usize, found: usize, pos: usize },
    #[error("unknown atom `{name}` at byte {pos}")]
    UnknownAtom { name: String, pos: usize },
    #[error("malformed atom at byte {pos}: {detail}")]
    AtomShape { pos: usize, detail: String },
    #[error("`!` at byte {pos} applies only to relational literals; use `~` for contradictory negation")]
    NegationOnNonLiteral { pos: usize },
    #[error("free variable `{0}` inside a bracket")]
    FreeVariableInBracket(String),
    #[error("free variable `{var}` inside the bracket at byte {pos}")]
    FreeVariableInBracketAt { var: String, pos: usize },
    #[error("bracket bodies must be first-order")]
    BracketNotFirstOrder,
    #[error("invalid relation name `{0}`")]
    BadRelationName(String),
}

impl SyntaxError {
    fn at(self, pos: usize) -> SyntaxError {
        match self {
            SyntaxError::FreeVariableInBracket(var) => SyntaxError::FreeVariableInBracketAt { var, pos },
            other => other,
        }
    }
}

/// Relation symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

/// Names taken by the syntax itself.
const RESERVED: &[&str] = &["NE", "D"];

impl Signature {
    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn new<S: Into<String>>(rels: impl IntoIterator<Item = (S, usize)>) -> Result<Self, SyntaxError> {
        let mut sig = Signature::default();
        for (name, arity) in rels {
            sig.add(name, arity)?;
        }
        Ok(sig)
    }

    /// Adds a relation; redeclaring with the same arity is a no-op.
    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> Result<(), SyntaxError> {
        let name = name.into();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !RESERVED.contains(&name.as_str());
        if !valid {
            return Err(SyntaxError::BadRelationName(name));
        }
        match self.arities.get(&name) {
            Some(&k) if k != arity => Err(SyntaxError::BadRelationName(format!("{name} (redeclared with arity {arity}, was {k})"))),
            _ => {
                self.arities.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(n, k)| (n.as_str(), *k))
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }
}

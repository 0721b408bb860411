//! Formula rewriters. Every output is meant to be equivalent to its input
//! (or to the atom it defines); the test suites check this by sweeping
//! small models with the evaluator.

mod basic;
mod brackets;
mod counting;
mod dnf;
mod negation;

use thiserror::Error;

pub use basic::{dual_negate, flatten, restrict_formula};
pub use brackets::{extract_brackets, BracketForm};
pub use counting::{
    at_least_sentence, at_most_sentence, compile_unary_dependency, counting_atom_definition, counting_formula, CountAtom,
    CountBound, CountLiteral, UnaryDepDescription,
};
pub use dnf::to_classical_dnf;
pub use negation::{classical_or_via_neg, dep_via_neg_const, ne_via_neg, ne_via_totality, neg_eliminate, neg_restrict_commute};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{transform}: expected a first-order formula, found `{found}`")]
    NotFirstOrder { transform: &'static str, found: String },
    #[error("{transform}: `{found}` is outside the supported fragment")]
    Unsupported { transform: &'static str, found: String },
}

fn not_fo(transform: &'static str, f: &crate::syntax::Formula) -> TransformError {
    TransformError::NotFirstOrder { transform, found: crate::syntax::print(f) }
}

fn unsupported(transform: &'static str, f: &crate::syntax::Formula) -> TransformError {
    TransformError::Unsupported { transform, found: crate::syntax::print(f) }
}

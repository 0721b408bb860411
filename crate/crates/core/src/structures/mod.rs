//! Finite models, assignments and teams, classical satisfaction, and
//! exhaustive enumeration of teams and models.

mod enumerate;
mod io;
mod model;
mod tarski;
mod team;

use thiserror::Error;

use crate::syntax::Var;

pub use enumerate::{
    enumerate_models, enumerate_models_with, enumerate_nonempty_teams, enumerate_teams, team_universe, ModelEnumeration,
    TeamIter, DEFAULT_TEAM_UNIVERSE_LIMIT, MODEL_BITS_LIMIT,
};
pub use io::{parse_model, parse_team, write_model, write_team};
pub use model::{Domain, Elem, Interpretation, Model, SingleRelation};
pub use tarski::tarski_eval;
pub use team::{project, restrict, universal_extend, Assignment, Team};

pub(crate) use team::decode_lex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("models must have a non-empty domain")]
    EmptyDomain,
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{rel}` has arity {expected}, got a tuple of length {found}")]
    ArityMismatch { rel: String, expected: usize, found: usize },
    #[error("element {elem} is outside the domain of size {size}")]
    ElementOutOfRange { elem: usize, size: usize },
    #[error("a team's variables must be distinct")]
    DuplicateVariable,
    #[error("row has {found} values for {expected} variables")]
    RowWidth { expected: usize, found: usize },
    #[error("variable `{0}` is not in the domain")]
    UnboundVariable(Var),
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("{what} of size {size} exceeds the limit {limit}")]
    LimitExceeded { what: &'static str, size: usize, limit: usize },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

//! Boundedness sweeps, minimal witnesses and the exhaustive equivalence check.

mod equiv;
mod gamma;
mod witness;

use thiserror::Error;

use crate::eval::EvalError;
use crate::structures::StructureError;
use crate::syntax::Var;

pub use equiv::{equivalent, Counterexample, EquivReport, Sweep, TeamFilter, Verdict};
pub use gamma::{nu_bound, Bound, GammaTable};
pub use witness::{
    check_boundedness, hierarchy_witness, minimal_satisfying_subteam, BoundReport, HierarchyReport, HIERARCHY_TEAM_LIMIT,
    WITNESS_TEAM_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("no bound is known for `{0}`")]
    MissingGamma(String),
    #[error("cannot read bound `{0}`: expected `c`, `cn`, `n^k`, `const:c`, `lin:c` or `pow:k`")]
    BadBound(String),
    #[error("outside the bounded fragment: {0}")]
    Fragment(String),
    #[error("free variable `{0}` is not among the swept variables")]
    FreeVariable(Var),
    #[error("{what} of size {size} exceeds the limit {limit}")]
    LimitExceeded { what: &'static str, size: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

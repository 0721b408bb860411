//! First-order logic under lax team semantics with dependency atoms.
//!
//! Formulas are parsed with [`syntax::parse`], evaluated on a [`Model`] and a
//! [`Team`] with [`eval::eval`], rewritten by the functions in [`transforms`],
//! and checked by exhaustive sweeps in [`analysis`].

pub mod syntax;
pub mod structures;
pub mod eval;
pub mod transforms;
pub mod analysis;

pub use eval::{eval, DependencySpec, EvalOptions, Evaluator, Registry};
pub use structures::{Assignment, Elem, Model, Team};
pub use syntax::{parse, print, Atom, Formula, Signature, Var};

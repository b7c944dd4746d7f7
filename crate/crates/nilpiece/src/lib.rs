//! Exact computations with nilpotent elements in duals of odd orthogonal
//! Lie algebras over small finite fields.

pub mod census;
pub mod classifier;
pub mod error;
pub mod field;
pub mod grading;
pub mod linalg;
pub mod group;
pub mod nilcone;
pub mod quadspace;

pub use error::{Error, Result};
pub use field::{Elt, Field, FieldSpec};

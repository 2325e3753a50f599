//! Variational bicomplex calculus on jet spaces with exact rational arithmetic.

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod euler;
pub mod expr;
pub mod form;
pub mod jet;
pub mod json;
pub mod linf;
pub mod linsolve;
pub mod noether;
pub mod parse;
pub mod random;
pub mod variational;

pub use error::Error;
pub use expr::{CoordSystem, Expr, MultiIndex, Rational};
pub use form::{LocalForm, MixedForm};
pub use jet::{EvolutionaryVF, InsularVF, TotalVF};

//! Exact computational toolkit for orthosymplectic supergroup invariants.

pub mod brauercat;
pub mod error;
pub mod grassmann;
pub mod invariantsolver;
pub mod linalg;
pub mod ospgeom;
pub mod scalar;
pub mod superlinalg;
pub mod superpoly;
pub mod tensorfunctor;

pub use error::{Error, Result};

//! Elimination theory for plane algebraic curves with determinantal
//! representations, and transformations of commuting operator systems under
//! rational maps.

pub mod classical;
pub mod cli;
pub mod curve;
pub mod error;
pub mod json;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod vessel;

pub use error::{Error, Result};
pub use matrix::{Matrix, Subspace};
pub use poly::{MultiPoly, UniPoly};
pub use scalar::Scalar;

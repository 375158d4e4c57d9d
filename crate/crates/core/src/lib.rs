//! Exact computations in the Hopf algebra of rooted trees: coproduct and
//! antipode, characters valued in truncated Laurent series, Birkhoff
//! decomposition, and the triangular matrix picture of the same objects.

pub mod birkhoff;
pub mod characters;
pub mod coeff_series;
pub mod error;
pub mod forests;
pub mod hopf;
pub mod matrix_rep;
pub mod rational;
pub mod registry;
pub mod verify;

pub use error::{Error, Result};

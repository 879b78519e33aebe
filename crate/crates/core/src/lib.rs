//! Discrete logarithms in finite fields of small characteristic through an
//! elliptic-curve model of the field and a descent built from degree 4-to-3
//! and 3-to-2 eliminations.

pub mod algebra;
pub mod certificate;
pub mod curve;
pub mod descent;
pub mod divisor;
pub mod dlp;
pub mod elim32;
pub mod elim43;
pub mod error;
pub mod leveled;
pub mod model;
pub mod policy;
pub mod relation;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

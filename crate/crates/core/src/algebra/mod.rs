//! Exact arithmetic: prime and extension fields, univariate polynomials over
//! them, factorization, dense linear algebra and machine-integer number
//! theory.

pub mod factor;
pub mod field;
pub mod fpoly;
pub mod int;
pub mod linalg;
pub mod poly;

pub use field::{Fe, Field, Tower};
pub use poly::Poly;

//! Computational arithmetic topology: Milnor and Alexander invariants of
//! links, their arithmetic analogues for sets of primes, and a form-class
//! oracle for narrow class groups of quadratic fields.

pub mod arith;
pub mod chainring;
pub mod classgroup;
pub mod covering;
pub mod error;
pub mod fixtures;
pub mod linkinv;
pub mod magnus;
pub mod primeinv;
pub mod words;

pub use error::{Error, Result};

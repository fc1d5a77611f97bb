//! Exact tractor calculus for almost Grassmannian structures of type (2,n).

pub mod algebra;
pub mod bgg;
pub mod chart;
pub mod error;
pub mod examples;
pub mod linalg;
pub mod loci;
pub mod rational;
pub mod report;
pub mod suite;
pub mod tensor;
pub mod weyl;

pub use error::{Error, Result};
pub use rational::Q;
pub use tensor::{IndexedTensor, Monomial, Poly, Slot};

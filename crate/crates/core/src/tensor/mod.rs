//! Exact polynomial scalars and the abstract-index tensor engine.

pub mod decompose;
pub mod indexed;
pub mod poly;
pub mod serial;

pub use decompose::{
    mixed_parts, sym2_decompose, trace_free_decompose, MixedParts, Sym2Parts, TraceDecomposition, TraceShape,
    TWO_FORM_SLOTS,
};
pub use indexed::{IndexedTensor, Slot, SymMode};
pub use poly::{Monomial, Poly, DEFAULT_DEGREE_CAP, MAX_VARS};

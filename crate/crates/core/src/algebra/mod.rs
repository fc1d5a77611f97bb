//! The graded Lie algebra `sl(n+2, Q)`, its fiber representations and the
//! Kostant codifferential.

pub mod codiff;
pub mod graded;
pub mod mat;
pub mod rep;

pub use codiff::{block_codifferential, check_block_codifferential, codifferential, BlockCodifferential, Cochain};
pub use graded::{build_graded_algebra, g0_basis, x_matrix, z_matrix, Grade, GradedAlgebra};
pub use mat::QMat;
pub use rep::{act, Rep, RepVector};

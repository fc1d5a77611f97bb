//! Chart-level almost Grassmannian structures: soldering, Weyl connections,
//! Rho, torsion, curvature blocks, normalization and changes of Weyl
//! structure.

pub mod blocks;
pub mod connection;
pub mod curvature;
pub mod data;
pub mod pmat;
pub mod sections;
pub mod torsion;
pub mod upsilon;

pub use blocks::{CurvatureBlocks, TAU_SLOTS, WP_SLOTS, W_SLOTS, Y_SLOTS};
pub use connection::{adjoint_derivative, cotractor_derivative, covariant_derivative, frame_omega, tractor_derivative};
pub use curvature::{
    check_normality, contractions, curvature_blocks, curvature_matrices, curvature_via_sections, itau_tau,
    normalize_rho, verify_bianchi, verify_bianchi_with, verify_weyl_tensor_relations, Contractions, NormalityDefects,
};
pub use data::{check_n, pair, unpair, validate, ChartWeylData, Shear, Soldering, MAX_N};
pub use pmat::PMat;
pub use sections::{AdjointSection, SplitCotractor, SplitTractor, UpsilonForm};
pub use torsion::{spencer_rank, torsion, weylize, HarmonicDefects, Torsion};
pub use upsilon::{apply_upsilon, resplit_cotractor, resplit_tractor, upsilon_from_fn};

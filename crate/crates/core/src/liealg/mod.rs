//! Abstract Lie algebras, their invariant vector fields and the catalog of
//! algebras of dimension at most three.

mod catalog;
mod expm;
mod fields;
mod structure;

use thiserror::Error;

pub use catalog::{catalog_names, custom_entry, lookup, param_names, random_params, CatalogEntry, Chart};
pub use expm::{char_poly, eigenvalues, exp_matrix, GRat};
pub use fields::{
    build_invariant_fields, det_check, invert_matrix, verify_realization, z_coords, BracketCheck, InvariantFields,
    RealizationReport,
};
pub use structure::StructureConstants;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("Jacobi identity fails for (i,j,k,l) = ({i},{j},{k},{l})")]
    JacobiViolation { i: usize, j: usize, k: usize, l: usize },
    #[error("unsupported eigenvalues of ad: {0}")]
    EigenvalueUnsupported(String),
    #[error("realization failed verification: {0}")]
    VerificationFailed(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("invalid algebra input: {0}")]
    Input(String),
}

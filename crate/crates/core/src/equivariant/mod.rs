//! `Z_p`-equivariant persistence: eigen-splitting, spectral spread and the
//! Floer-style spread `w` of a chain automorphism.

mod complex;
mod graded;
mod module;
mod spread;

pub use complex::{spread_lower_bound_from_gaps, EquivariantComplex};
pub use graded::{kunneth_stabilize, GradedBarcodeFamily};
pub use module::{
    construct_full_power, cyclic_permutation, cyclic_tuple_module, eigenspace_module,
    quotient_fix_module, ZpPersistenceModule,
};
pub use spread::{
    beta_of_quotient, candidate_intervals, divisibility_verdict, eigen_barcodes, full_power_check,
    kappa_lower_bound, mu_from_barcode, mu_p, mu_p_zeta, perturb_and_check_lipschitz, report,
    shift_spectrum, w_hat, witness_value, EquivariantReport, FullPowerVerdict,
};

use crate::field::FieldError;
use crate::persistence::PersistenceError;

#[derive(Debug, thiserror::Error)]
pub enum EquivariantError {
    #[error("{0}")]
    Invalid(String),
    #[error("action on region {region} does not satisfy A^{p} = id")]
    NotOrderP { region: usize, p: u32 },
    #[error("action does not commute with the structure map out of region {region}")]
    NotEquivariant { region: usize },
    #[error("not a {0}-th root of unity")]
    NotRootOfUnity(u32),
    #[error("not a primitive {0}-th root of unity")]
    NotPrimitive(u32),
    #[error("field has no primitive {0}-th roots of unity")]
    NoRoots(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

//! Exact integer linear algebra: Smith normal form, lattices, presented
//! abelian groups and the homology of complexes built from them.
//!
//! Nothing here touches floating point. Entries are `BigInt` throughout.

mod group;
mod lattice;
mod matrix;
mod snf;

pub use group::{bigint_json, homology, AbelianInvariants, GroupHom, PresentedAbelianGroup};
pub use lattice::{kernel_basis, solve, Lattice};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, smith_normal_form, Smith};

#[doc(hidden)]
pub use group::homology_via_preimage;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{context}: expected shape {expected:?}, found {found:?}")]
    ShapeMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix does not send source relations to target relations")]
    NotWellDefined,
    #[error("composite of consecutive maps is not zero")]
    CompositionNotZero,
    #[error("maps are not composable: intermediate groups differ")]
    IncompatibleComplex,
}

//! The group ring `O[G]` over a truncated coefficient ring, class functions `O[C_G]`,
//! the Frobenius-twisted operators Ψ and Φ, and the transfer along `O_R ⊂ O_S`.

mod element;
mod sample;
mod transfer;

pub use element::{ClassFunction, GroupRingElement};
pub use sample::{sample_element, sample_unit, UnitKind};
pub(crate) use sample::{random_coeff, random_element_with, random_unit_with};
pub use transfer::{default_basis, i_star, transfer_matrix, transfer_matrix_with_basis, GroupRingMatrix};

use crate::coeff::CoeffError;
use crate::groups::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupRingError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("not a unit")]
    NotAUnit,
    #[error("operands live over different rings or groups")]
    Mismatch,
    #[error("{0}")]
    Domain(String),
}

#[cfg(test)]
mod tests;

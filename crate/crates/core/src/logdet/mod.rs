//! Group-ring logarithms, the integral logarithm Γ, character tables and Det.

mod characters;
mod gamma;
mod hom;
mod series;

pub use characters::{character_table, Character, CharacterTable};
pub use gamma::{gamma_full, gamma_i, gamma_r, gamma_with_working_precision};
pub use hom::{
    commutation_check, det_character, det_eval, det_hom, det_hom_matrix, gamma_hom, gamma_hom_loss,
    torsion_det_injective, torsion_representatives, tr_class_function, tr_eval, tr_hom, value_ring, HomElement,
    HomKind,
};
pub use series::{gr_exp, gr_log};

use crate::coeff::arith::floor_log;
use crate::coeff::CoeffError;
use crate::groupring::GroupRingError;
use crate::groups::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogDetError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a unit")]
    NotAUnit,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Newton identities need division by {0}")]
    NewtonDivisionFailure(u64),
}

/// The precision at which Γ-level identities are asserted for inputs known mod `p^n`.
pub fn assertion_precision(p: u64, n: u32) -> u32 {
    n.saturating_sub(1 + floor_log(n as u64, p))
}

#[cfg(test)]
mod tests;

//! Finite-precision models of K1 of p-adic group rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeff`]: finite fields with lazily grown Artin–Schreier towers and truncated
//!   unramified rings `W(F_q)/p^N` with their Frobenius lift.
//! * [`groups`]: finite groups from tables or presentations, conjugacy data, the Schur
//!   multiplier and the abelian-subgroup part used for SK1 of p-groups.
//! * [`groupring`]: arithmetic in `O[G]`.
//! * [`logdet`]: the group logarithm, the integral logarithm Γ, characters and Det.
//! * [`descent`]: verification reports for the descent statements.

pub mod budget;
pub mod coeff;
pub mod descent;
pub mod groupring;
pub mod groups;
pub mod linalg;
pub mod logdet;

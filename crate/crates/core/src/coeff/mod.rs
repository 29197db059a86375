//! Finite fields with lazily grown Artin–Schreier towers, and truncated Witt rings
//! `W(F_q)/p^N` together with their canonical Frobenius lift.

pub mod arith;
mod cyclotomic;
mod field;
pub(crate) mod level;
pub mod poly;
mod ring;
mod series;

pub use cyclotomic::{cyclotomic_extend, CyclotomicRing};
pub use field::{make_extension, solve_artin_schreier, FieldElement, FiniteField};
pub use ring::{solve_one_minus_frobenius, teichmuller, CoeffRing, RingElement, UnramifiedRing};
pub(crate) use ring::ring_frobenius_raw;
pub use series::{scalar_exp, scalar_log};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("modulus is reducible over F_p")]
    Reducible,
    #[error("zero has no Teichmüller representative")]
    ZeroInput,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a unit")]
    NotAUnit,
    #[error("no embedding: {0}")]
    NoEmbedding(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("operands live in different rings")]
    RingMismatch,
}

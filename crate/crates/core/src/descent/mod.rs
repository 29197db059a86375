//! Verification reports for the descent statements along `O_R ⊂ O_S`.

mod gamma_seq;
mod report;
mod residue;
mod scalar;
mod sweep;

pub use gamma_seq::{check_commutation, check_gamma_sequence, check_trf_istar};
pub use residue::{brute_force_k1, gl2_elementary_crosscheck, residue_sequence_check, BruteK1, ResidueGroupRing};
pub use report::{Scenario, Status, VerificationReport};
pub use scalar::{check_one_minus_phi_exact, cyclic_galois_cokernel_check, sk1_descent_case, sk1_descent_data, Sk1Descent};
pub use sweep::{default_sweep, DescentError, full_descent_report, run_claim, run_claim_on, ReportBundle, CLAIMS, SUMMARY_CLAIM};

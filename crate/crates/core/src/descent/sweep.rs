use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    check_commutation, check_gamma_sequence, check_one_minus_phi_exact, check_trf_istar, cyclic_galois_cokernel_check,
    residue_sequence_check, sk1_descent_case, sk1_descent_data, Scenario, Status, VerificationReport,
};
use crate::groups::{catalog_p_groups, group_by_name, Group, GroupError};

/// Claim ids accepted by [`run_claim`], in sweep order.
pub const CLAIMS: &[&str] =
    &["one-minus-phi", "gamma-seq", "commutation", "trf-istar", "sk1-descent", "residue-seq", "cyclic-galois"];

/// Id of the per-group conjunction appended by [`full_descent_report`].
pub const SUMMARY_CLAIM: &str = "descent-summary";

pub fn run_claim_on(claim: &str, g: &Arc<Group>, sc: &Scenario) -> Option<VerificationReport> {
    let rep = match claim {
        "one-minus-phi" => check_one_minus_phi_exact(sc),
        "gamma-seq" => check_gamma_sequence(g, sc),
        "commutation" => check_commutation(g, sc),
        "trf-istar" => check_trf_istar(g, sc),
        "sk1-descent" => sk1_descent_case(g, sc),
        "residue-seq" => residue_sequence_check(g, sc),
        "cyclic-galois" => cyclic_galois_cokernel_check(g, sc),
        _ => return None,
    };
    Some(rep)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Runs one claim on a catalog group.
pub fn run_claim(claim: &str, sc: &Scenario) -> Result<VerificationReport, DescentError> {
    if !CLAIMS.contains(&claim) {
        return Err(DescentError::UnknownClaim(claim.to_string()));
    }
    let g = Arc::new(group_by_name(&sc.group)?);
    run_claim_on(claim, &g, sc).ok_or_else(|| DescentError::UnknownClaim(claim.to_string()))
}

/// Every applicable `(claim, scenario)` for the catalog p-groups at `p`.
pub fn default_sweep(p: u64, precision: u32, seed: u64, samples: usize) -> Vec<(String, Scenario)> {
    let mut jobs = Vec::new();
    let mut push = |claim: &str, group: &str, n_r: usize, n_s: usize| {
        let k = jobs.len() as u64;
        let s = seed.wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        jobs.push((claim.to_string(), Scenario::new(group, p, n_r, n_s, precision, s, samples)));
    };
    push("one-minus-phi", "C1", 1, 1);
    push("one-minus-phi", "C1", 2, 2);
    let pn = p as usize;
    for g in catalog_p_groups(p) {
        let name = g.name().to_string();
        push("gamma-seq", &name, 1, 1);
        push("commutation", &name, 1, 1);
        push("trf-istar", &name, 1, 2);
        for n in [1, pn, 2 * pn, pn * pn] {
            push("sk1-descent", &name, 1, n);
        }
        push("residue-seq", &name, 1, 1);
        push("cyclic-galois", &name, 1, 2);
    }
    jobs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub reports: Vec<VerificationReport>,
}

impl ReportBundle {
    pub fn failed(&self) -> bool {
        self.reports.iter().any(|r| r.failed())
    }

    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }
}

/// Runs the jobs on up to `threads` workers; the bundle keeps job order, then the per-group
/// conjunction of the Γ sequence with the SK1 case data for an infinite p-part.
///
/// `runtime_ms` is only filled when `timings` is set, so untimed bundles are reproducible byte for byte.
pub fn full_descent_report(jobs: &[(String, Scenario)], threads: usize, timings: bool) -> ReportBundle {
    let threads = threads.clamp(1, jobs.len().max(1));
    let mut slots: Vec<Option<VerificationReport>> = vec![None; jobs.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let (claim, sc) = &jobs[i];
                let start = std::time::Instant::now();
                let mut rep = run_claim(claim, sc).unwrap_or_else(|e| {
                    let mut r = VerificationReport::new(claim, sc.clone());
                    r.error(e);
                    r
                });
                if timings {
                    rep.runtime_ms = Some(start.elapsed().as_millis() as u64);
                }
                results.lock().unwrap()[i] = Some(rep);
            });
        }
    });
    let mut reports: Vec<VerificationReport> = slots.into_iter().map(|r| r.expect("every job ran")).collect();
    let mut groups: Vec<(String, Scenario)> = Vec::new();
    for r in &reports {
        if r.claim == "gamma-seq" && !groups.iter().any(|(g, _)| *g == r.scenario.group) {
            groups.push((r.scenario.group.clone(), r.scenario.clone()));
        }
    }
    for (name, sc) in groups {
        let gamma = reports.iter().find(|r| r.claim == "gamma-seq" && r.scenario.group == name).unwrap();
        let mut s = VerificationReport::new(SUMMARY_CLAIM, sc.clone());
        s.finite_level = true;
        match gamma.status {
            Status::Pass => s.note("Γ sequence: pass"),
            Status::Skipped => {
                s.status = Status::Skipped;
                s.reason = Some(format!("Γ sequence skipped: {}", gamma.reason.clone().unwrap_or_default()));
            }
            Status::Fail => s.fail("Γ sequence failed"),
        }
        match group_by_name(&name).map_err(|e| e.to_string()).and_then(|g| sk1_descent_data(&g, sc.p, 1).map_err(|e| e.to_string())) {
            Ok(d) => {
                s.note(format!("kernel K ≅ SK1(O_R[G]) = {}", d.sk1));
                s.note("cokernel C = 1");
            }
            Err(e) => s.fail(format!("SK1 case data unavailable: {e}")),
        }
        reports.push(s);
    }
    ReportBundle { reports }
}

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub group: String,
    pub p: u64,
    #[serde(rename = "nR")]
    pub n_r: usize,
    #[serde(rename = "nS")]
    pub n_s: usize,
    #[serde(rename = "N")]
    pub precision: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Scenario {
    pub fn new(group: &str, p: u64, n_r: usize, n_s: usize, precision: u32, seed: u64, samples: usize) -> Self {
        Scenario { group: group.to_string(), p, n_r, n_s, precision, seed, samples }
    }

    /// `n = n_S / n_R`
    pub fn relative_degree(&self) -> usize {
        self.n_s / self.n_r.max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-with-reason")]
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped-with-reason",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub scenario: Scenario,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub precision_used: Option<u32>,
    pub witnesses: Vec<String>,
    /// Log lines (tower extensions, counts) that do not affect the verdict.
    #[serde(default)]
    pub notes: Vec<String>,
    /// True when the check can only confirm a finite-level shadow of the statement.
    #[serde(default)]
    pub finite_level: bool,
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(claim: &str, scenario: Scenario) -> Self {
        VerificationReport {
            claim: claim.to_string(),
            scenario,
            status: Status::Pass,
            reason: None,
            precision_used: None,
            witnesses: Vec::new(),
            notes: Vec::new(),
            finite_level: false,
            runtime_ms: None,
        }
    }

    pub fn skipped(claim: &str, scenario: Scenario, reason: impl Into<String>) -> Self {
        let mut r = Self::new(claim, scenario);
        r.status = Status::Skipped;
        r.reason = Some(reason.into());
        r
    }

    /// Records a counterexample and marks the report failed.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        self.witnesses.push(witness.into());
    }

    /// A failure caused by an error rather than a counterexample.
    pub fn error(&mut self, err: impl std::fmt::Display) {
        self.fail(format!("error: {err}"));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

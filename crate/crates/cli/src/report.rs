use std::collections::BTreeMap;

use cfproof::dsl::render_judgment;
use cfproof::engine::{EngineError, Verdict};
use cfproof::kernel::{Proof, ProofFile, RuleId};
use serde::Serialize;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Fair = 0,
    Unfair = 1,
    NotCounterfactual = 2,
    Config = 3,
    Oracle = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_engine_error(e: &EngineError) -> Exit {
        match e {
            EngineError::NotCounterfactual(_) => Exit::NotCounterfactual,
            EngineError::Oracle(_) | EngineError::Inconsistent { .. } => Exit::Oracle,
            EngineError::Case(_) | EngineError::Model(_) => Exit::Config,
        }
    }
}

#[derive(Serialize)]
pub struct VerdictReport {
    pub case: String,
    pub verdict: &'static str,
    pub fair: bool,
    pub p: String,
    pub q: String,
    pub difference: String,
    pub epsilon: String,
    pub counterfactual_judgment: String,
    pub rule_counts: BTreeMap<RuleId, usize>,
    pub proof: ProofFile,
}

impl VerdictReport {
    pub fn new(case: &str, v: &Verdict) -> Self {
        VerdictReport {
            case: case.to_string(),
            verdict: if v.fair { "FAIR" } else { "UNFAIR" },
            fair: v.fair,
            p: v.p.to_string(),
            q: v.q.to_string(),
            difference: v.difference.to_string(),
            epsilon: v.epsilon.to_string(),
            counterfactual_judgment: render_judgment(&v.counterfactual_judgment),
            rule_counts: v.proof.rule_counts(),
            proof: ProofFile::from(&v.proof),
        }
    }
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub case: String,
    pub error: String,
    pub exit_code: i32,
}

pub fn proof_summary(p: &Proof) -> String {
    let parts: Vec<String> =
        p.rule_counts().into_iter().map(|(rule, n)| format!("{n} {}", rule.name())).collect();
    format!("{} steps ({})", p.steps.len(), parts.join(", "))
}

pub fn human_verdict(v: &Verdict) -> String {
    format!(
        "{} p={} q={} Δ={} ε={}\n  proof: {}",
        if v.fair { "FAIR" } else { "UNFAIR" },
        v.p,
        v.q,
        v.difference,
        v.epsilon,
        proof_summary(&v.proof)
    )
}

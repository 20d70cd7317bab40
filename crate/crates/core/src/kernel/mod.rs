//! The proof kernel.
//!
//! Four context-shrinking rules turn a counterfactual candidate into the
//! hypersequent `[▷, σ] I(a_j:α) ⊢ t:β`:
//!
//! * C-Weakening adds the intervention expression `[▷, σ] I(a_j:α)`.
//! * I-Cut erases the loose `a_j:α`.
//! * ▷-Cut erases an edge not entering `a_j` (condition (*)).
//! * v-Cut erases a factual attribution whose variable is not an effect of
//!   `a_j` in the factual graph (condition (**)).
//!
//! The bracketed graph and data point are always the factual ones. A generic
//! Cut against the probability-1 intervention axiom is provided as well; I-Cut
//! is its contraction.
//!
//! [`check_proof`] replays a [`Proof`] step by step and is the only judge of
//! whether a derivation is valid.

mod rules;
mod serial;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ContextItem, Judgment};

pub use rules::{
    apply_c_weakening, apply_i_cut, apply_i_cut_on, apply_tri_cut, apply_v_cut, generic_cut,
    intervention_axiom,
};
pub use serial::{ProofFile, ProofFormatError, StepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleId {
    CWeakening,
    ICut,
    TriCut,
    VCut,
    GenericCut,
    InterventionAxiom,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::CWeakening => "C-Weakening",
            RuleId::ICut => "I-Cut",
            RuleId::TriCut => "▷-Cut",
            RuleId::VCut => "v-Cut",
            RuleId::GenericCut => "Cut",
            RuleId::InterventionAxiom => "Intervention axiom",
        }
    }

    fn arity(self) -> usize {
        match self {
            RuleId::InterventionAxiom => 0,
            RuleId::GenericCut => 2,
            _ => 1,
        }
    }
}

/// How ▷-Cut treats edges missing from the factual graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeMode {
    /// The erased edge must also be an edge of the bracketed factual graph.
    #[default]
    Strict,
    /// Only condition (*) is checked.
    Lenient,
}

/// Why a rule application or a proof step was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no intervention expression in context")]
    NoIntervention,
    #[error("context already carries an intervention expression")]
    InterventionPresent,
    #[error("loose attribution for the intervened variable is absent")]
    LooseAttributionMissing,
    #[error("intervention value mismatch")]
    InterventionValueMismatch,
    #[error("attribution is not on the intervened variable")]
    NotInterventionVariable,
    #[error("condition (*): edge enters the intervened variable")]
    ConditionStar,
    #[error("edge not in factual graph")]
    EdgeNotFactual,
    #[error("edge absent from context")]
    EdgeAbsent,
    #[error("condition (**): variable is an effect of the intervened variable")]
    ConditionDoubleStar,
    #[error("attribution not in factual data point")]
    NotFactual,
    #[error("attribution absent from context")]
    AttributionAbsent,
    #[error("left premise is not certain (probability must be 1)")]
    NotCertain,
    #[error("item kind does not fit rule {0}")]
    WrongItem(&'static str),
    #[error("malformed judgment: {0}")]
    Malformed(String),
    #[error("premise order: step cites a premise that is not earlier in the proof")]
    PremiseOrder,
    #[error("premise arity: rule expects {expected} premises, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("conclusion mismatch")]
    ConclusionMismatch,
}

impl Violation {
    /// Short stable label, used in reports and tests.
    pub fn label(&self) -> &'static str {
        match self {
            Violation::NoIntervention => "no intervention",
            Violation::InterventionPresent => "intervention present",
            Violation::LooseAttributionMissing => "loose attribution absent",
            Violation::InterventionValueMismatch => "intervention value mismatch",
            Violation::NotInterventionVariable => "not the intervened variable",
            Violation::ConditionStar => "condition (*)",
            Violation::EdgeNotFactual => "edge not factual",
            Violation::EdgeAbsent => "edge absent",
            Violation::ConditionDoubleStar => "condition (**)",
            Violation::NotFactual => "not factual",
            Violation::AttributionAbsent => "attribution absent",
            Violation::NotCertain => "not certain",
            Violation::WrongItem(_) => "wrong item",
            Violation::Malformed(_) => "malformed",
            Violation::PremiseOrder => "premise order",
            Violation::Arity { .. } => "premise arity",
            Violation::ConclusionMismatch => "conclusion mismatch",
        }
    }
}

/// One rule application. `premises` index the proof's lines: assumptions
/// first, then steps in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: RuleId,
    pub item: ContextItem,
    pub premises: Vec<usize>,
    pub conclusion: Judgment,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub assumptions: Vec<Judgment>,
    pub steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {violation}")]
pub struct ProofFailure {
    /// Zero-based index into `Proof::steps`.
    pub step: usize,
    pub violation: Violation,
}

impl Proof {
    pub fn new(assumptions: Vec<Judgment>) -> Self {
        Proof { assumptions, steps: Vec::new() }
    }

    /// Judgment on line `i` (assumptions first).
    pub fn line(&self, i: usize) -> Option<&Judgment> {
        if i < self.assumptions.len() {
            self.assumptions.get(i)
        } else {
            self.steps.get(i - self.assumptions.len()).map(|s| &s.conclusion)
        }
    }

    pub fn last_line(&self) -> Option<usize> {
        (self.assumptions.len() + self.steps.len()).checked_sub(1)
    }

    /// The last step's conclusion, or the last assumption for an empty proof.
    pub fn conclusion(&self) -> Option<&Judgment> {
        self.last_line().and_then(|i| self.line(i))
    }

    /// Applies `rule` to the given premise lines and appends the step.
    pub fn push(
        &mut self,
        rule: RuleId,
        item: ContextItem,
        premises: Vec<usize>,
        mode: EdgeMode,
    ) -> Result<&Judgment, Violation> {
        let premise_refs: Vec<&Judgment> = premises
            .iter()
            .map(|&i| self.line(i).ok_or(Violation::PremiseOrder))
            .collect::<Result<_, _>>()?;
        let conclusion = apply_rule(rule, &item, &premise_refs, mode)?;
        self.steps.push(ProofStep { rule, item, premises, conclusion });
        Ok(&self.steps.last().unwrap().conclusion)
    }

    pub fn rule_counts(&self) -> BTreeMap<RuleId, usize> {
        let mut out = BTreeMap::new();
        for s in &self.steps {
            *out.entry(s.rule).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }
}

/// Applies one rule with its recorded item to concrete premises.
pub fn apply_rule(
    rule: RuleId,
    item: &ContextItem,
    premises: &[&Judgment],
    mode: EdgeMode,
) -> Result<Judgment, Violation> {
    if premises.len() != rule.arity() {
        return Err(Violation::Arity { expected: rule.arity(), found: premises.len() });
    }
    match (rule, item) {
        (RuleId::CWeakening, ContextItem::Intervention(e)) => apply_c_weakening(premises[0], e),
        (RuleId::ICut, ContextItem::Attr(a)) => apply_i_cut_on(premises[0], a),
        (RuleId::TriCut, ContextItem::Edge(e)) => apply_tri_cut(premises[0], e, mode),
        (RuleId::VCut, ContextItem::Attr(a)) => apply_v_cut(premises[0], a),
        (RuleId::InterventionAxiom, ContextItem::Intervention(e)) => Ok(intervention_axiom(e)),
        (RuleId::GenericCut, ContextItem::Attr(a)) => {
            let left = premises[0];
            if left.target() != &a.var || left.value() != &a.value {
                return Err(Violation::AttributionAbsent);
            }
            generic_cut(left, premises[1])
        }
        (rule, _) => Err(Violation::WrongItem(rule.name())),
    }
}

/// Replays every step; reports the first one that does not check.
pub fn check_proof(p: &Proof, mode: EdgeMode) -> Result<(), ProofFailure> {
    let n = p.assumptions.len();
    for (k, step) in p.steps.iter().enumerate() {
        let fail = |violation| ProofFailure { step: k, violation };
        if step.premises.iter().any(|&i| i >= n + k) {
            return Err(fail(Violation::PremiseOrder));
        }
        let premises: Vec<&Judgment> = step.premises.iter().map(|&i| p.line(i).unwrap()).collect();
        let derived = apply_rule(step.rule, &step.item, &premises, mode).map_err(fail)?;
        if derived != step.conclusion {
            return Err(fail(Violation::ConclusionMismatch));
        }
    }
    Ok(())
}

//! Proof files: JSON with judgments and items stored as DSL strings.
//!
//! ```json
//! {
//!   "assumptions": ["A -> B, A = x |- t = y @ 0.60"],
//!   "steps": [
//!     {"rule": "C_WEAKENING", "item": "[...] I(A=x)", "premise": [0], "conclusion": "..."}
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Proof, ProofStep, RuleId};
use crate::dsl::{parse_item, parse_judgment, render_item, render_judgment, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofFile {
    pub assumptions: Vec<String>,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: RuleId,
    pub item: String,
    pub premise: Vec<usize>,
    pub conclusion: String,
}

#[derive(Debug, Error)]
pub enum ProofFormatError {
    #[error("proof file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {err}")]
    Syntax { field: String, err: ParseError },
}

impl From<&Proof> for ProofFile {
    fn from(p: &Proof) -> Self {
        ProofFile {
            assumptions: p.assumptions.iter().map(render_judgment).collect(),
            steps: p
                .steps
                .iter()
                .map(|s| StepRecord {
                    rule: s.rule,
                    item: render_item(&s.item),
                    premise: s.premises.clone(),
                    conclusion: render_judgment(&s.conclusion),
                })
                .collect(),
        }
    }
}

impl ProofFile {
    pub fn into_proof(self) -> Result<Proof, ProofFormatError> {
        let syntax = |field: String| move |err| ProofFormatError::Syntax { field, err };
        let assumptions = self
            .assumptions
            .iter()
            .enumerate()
            .map(|(i, a)| parse_judgment(a).map_err(syntax(format!("assumptions[{i}]"))))
            .collect::<Result<_, _>>()?;
        let steps = self
            .steps
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(ProofStep {
                    rule: s.rule,
                    item: parse_item(&s.item).map_err(syntax(format!("steps[{i}].item")))?,
                    premises: s.premise,
                    conclusion: parse_judgment(&s.conclusion)
                        .map_err(syntax(format!("steps[{i}].conclusion")))?,
                })
            })
            .collect::<Result<_, ProofFormatError>>()?;
        Ok(Proof { assumptions, steps })
    }
}

impl Proof {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProofFile::from(self)).expect("proof file serializes")
    }

    pub fn from_json(text: &str) -> Result<Proof, ProofFormatError> {
        serde_json::from_str::<ProofFile>(text)?.into_proof()
    }
}

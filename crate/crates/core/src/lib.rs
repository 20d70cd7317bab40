//! Counterfactual fairness checking for probabilistic classifiers.
//!
//! Causal graphs and interventions are internalized into a labeled judgment
//! calculus. A counterfactual candidate is accepted when the kernel's cut
//! rules erase all of its context down to the bare intervention expression;
//! the classifier is then counterfactually fair on the case when the factual
//! and counterfactual probabilities agree (up to a threshold).
//!
//! * [`model`]: variables, value terms, data points, graphs, judgments.
//! * [`closure`]: acyclicity, mediate causes, descendants, graph intervention.
//! * [`kernel`]: the rules, proof objects and the replay checker.
//! * [`engine`]: candidate construction, derivation and verdicts.
//! * [`oracle`]: CSV frequencies, judgment databases, external commands.
//! * [`dsl`]: parsing and printing of cases, judgments and proof items.

#![allow(clippy::result_large_err)]

pub mod closure;
pub mod dsl;
pub mod engine;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod par;

#[cfg(test)]
pub(crate) mod testutil;

pub use engine::{Case, Verdict};
pub use kernel::{check_proof, EdgeMode, Proof};
pub use model::{Judgment, Probability};

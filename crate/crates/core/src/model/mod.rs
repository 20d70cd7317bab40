//! Vocabulary of the calculus: variables, value terms, data points, causal
//! graphs, interventions and judgments.
//!
//! Everything here is immutable once built and every constructor enforces the
//! structural invariants, so downstream code never sees a cyclic graph, a data
//! point with a repeated variable, or a context with two interventions.

mod graph;
mod judgment;
mod prob;
mod value;

pub use graph::{CausalGraph, Edge};
pub use judgment::{
    variables_of, Context, ContextItem, DataPoint, Intervention, InterventionExpr, Judgment,
};
pub use prob::{Probability, MAX_FRACTION_DIGITS};
pub use value::{is_token_char, value_matches, Attribution, ValueTerm, VariableId};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("a sum needs at least two members")]
    ShortSum,
    #[error("duplicate sum member `{0}`")]
    DuplicateSumMember(String),
    #[error("variable `{0}` assigned twice")]
    DuplicateVariable(VariableId),
    #[error("unknown node `{0}`")]
    UnknownNode(VariableId),
    #[error("self edge on `{0}`")]
    SelfEdge(VariableId),
    #[error("cycle: {}", join(.0))]
    Cycle(Vec<VariableId>),
    #[error("intervention value must be atomic, got `{0}`")]
    NonAtomicIntervention(String),
    #[error("context already carries an intervention expression")]
    SecondIntervention,
    #[error("target `{0}` also occurs as a context attribution")]
    TargetInContext(VariableId),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(String),
    #[error("malformed probability `{0}`")]
    BadProbability(String),
    #[error("probability literal `{0}` has more than 6 fractional digits")]
    TooManyDigits(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

pub(crate) fn join(vs: &[VariableId]) -> String {
    vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VariableId {
        VariableId::new(s).unwrap()
    }

    fn attr(var: &str, val: &str) -> Attribution {
        Attribution::new(v(var), ValueTerm::atom(val).unwrap())
    }

    #[test]
    fn variables_of_factual_context() {
        let dp = DataPoint::new(vec![
            attr("G", "m"),
            attr("MS", "mar"),
            attr("SAT", "1100"),
            attr("GAI", "65K"),
            attr("Deg", "PhD"),
            attr("Exp", "5y"),
        ])
        .unwrap();
        let expected: std::collections::BTreeSet<_> =
            ["G", "MS", "SAT", "GAI", "Deg", "Exp"].into_iter().map(v).collect();
        assert_eq!(variables_of(&dp), expected);
        assert!(variables_of(&DataPoint::default()).is_empty());
    }

    #[test]
    fn variables_of_with_sum_value() {
        let sum = ValueTerm::sum(vec![ValueTerm::atom("y").unwrap(), ValueTerm::atom("z").unwrap()])
            .unwrap();
        let dp = DataPoint::new(vec![attr("A", "x"), Attribution::new(v("B"), sum)]).unwrap();
        assert_eq!(dp.variables(), [v("A"), v("B")].into_iter().collect());
    }

    #[test]
    fn duplicate_variable_rejected() {
        let err = DataPoint::new(vec![attr("A", "x"), attr("A", "y")]).unwrap_err();
        assert_eq!(err, ModelError::DuplicateVariable(v("A")));
    }

    #[test]
    fn cycle_rejected_with_witness() {
        let err = CausalGraph::from_edges(
            [Edge::new(v("A"), v("B")), Edge::new(v("B"), v("A"))],
            [],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::Cycle(vec![v("A"), v("B"), v("A")]));
        assert_eq!(err.to_string(), "cycle: A, B, A");
    }

    #[test]
    fn graph_rejects_self_edges_and_dangling_endpoints() {
        assert!(matches!(
            CausalGraph::new([v("A")], [Edge::new(v("A"), v("A"))]),
            Err(ModelError::SelfEdge(_))
        ));
        assert!(matches!(
            CausalGraph::new([v("A")], [Edge::new(v("A"), v("B"))]),
            Err(ModelError::UnknownNode(_))
        ));
    }

    #[test]
    fn intervention_must_be_atomic() {
        let sum = ValueTerm::sum(vec![ValueTerm::atom("a").unwrap(), ValueTerm::atom("b").unwrap()])
            .unwrap();
        assert!(Intervention::new(v("MS"), sum).is_err());
        assert!(Intervention::new(v("MS"), ValueTerm::atom("div").unwrap()).is_ok());
    }

    #[test]
    fn context_multiset_equality_ignores_attr_order() {
        let a = Context::from_items([attr("A", "x").into(), attr("B", "y").into()]).unwrap();
        let b = Context::from_items([attr("B", "y").into(), attr("A", "x").into()]).unwrap();
        assert_eq!(a, b);
        let c = Context::from_items([attr("A", "x").into(), attr("A", "x").into()]).unwrap();
        let d = Context::from_items([attr("A", "x").into()]).unwrap();
        assert_ne!(c, d);
    }

    #[test]
    fn context_admits_one_intervention() {
        let g = CausalGraph::from_edges([Edge::new(v("A"), v("B"))], []).unwrap();
        let e = InterventionExpr::new(
            g,
            DataPoint::default(),
            Intervention::new(v("A"), ValueTerm::atom("x").unwrap()).unwrap(),
        )
        .unwrap();
        let mut ctx = Context::new();
        ctx.insert(e.clone().into()).unwrap();
        assert_eq!(ctx.insert(e.into()), Err(ModelError::SecondIntervention));
    }

    #[test]
    fn judgment_target_not_in_context() {
        let ctx = Context::from_items([attr("t", "x").into()]).unwrap();
        let err = Judgment::new(ctx, v("t"), ValueTerm::atom("y").unwrap(), Probability::one());
        assert!(matches!(err, Err(ModelError::TargetInContext(_))));
    }
}

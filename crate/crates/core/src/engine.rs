//! Counterfactual-fairness checking end to end.
//!
//! From a factual case the engine builds the counterfactual candidate (the
//! intervened graph plus the imposed value and every factual attribution that
//! is not an effect of the intervened variable), asks the oracle for its
//! probability, and derives the hypersequent `[▷, σ] I(a_j:α) ⊢ t:β_q` with an
//! explicit proof. The verdict compares `q` against the factual `p`.

use std::fmt;

use thiserror::Error;

use crate::closure::{descendants, intervene_graph};
use crate::kernel::{
    apply_i_cut_on, apply_tri_cut, apply_v_cut, EdgeMode, Proof, RuleId, Violation,
};
use crate::model::{
    Attribution, CausalGraph, Context, ContextItem, DataPoint, Edge, Intervention,
    InterventionExpr, Judgment, ModelError, Probability, ValueTerm, VariableId,
};
use crate::oracle::{ClassifierOracle, OracleError, OracleQuery};
use crate::par::{self, Exec};

/// A factual situation plus the intervention to test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub graph: CausalGraph,
    pub factual: DataPoint,
    /// The factual judgment's probability when it is given as an assumption.
    pub factual_prob: Option<Probability>,
    pub intervention: Intervention,
    pub target: VariableId,
    pub target_value: ValueTerm,
    /// A user-supplied candidate data point to verify instead of building one.
    pub candidate_override: Option<DataPoint>,
    /// Edges of the user-supplied candidate; defaults to the intervened graph.
    pub candidate_edges: Option<Vec<Edge>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("target `{0}` is not a graph node")]
    TargetNotNode(VariableId),
    #[error("intervened variable `{0}` is not a graph node")]
    InterventionNotNode(VariableId),
    #[error("factual variable `{0}` is not a graph node")]
    FactualNotNode(VariableId),
    #[error("target `{0}` occurs in the data point")]
    TargetInDataPoint(VariableId),
    #[error("target `{0}` is also the intervened variable")]
    TargetIntervened(VariableId),
    #[error("candidate edges given without candidate attributions")]
    EdgesWithoutCandidate,
}

impl Case {
    pub fn validate(&self) -> Result<(), CaseError> {
        let iv = self.intervention.var();
        if !self.graph.contains_node(&self.target) {
            return Err(CaseError::TargetNotNode(self.target.clone()));
        }
        if !self.graph.contains_node(iv) {
            return Err(CaseError::InterventionNotNode(iv.clone()));
        }
        if let Some(a) = self.factual.attributions().iter().find(|a| !self.graph.contains_node(&a.var)) {
            return Err(CaseError::FactualNotNode(a.var.clone()));
        }
        if self.factual.get(&self.target).is_some() {
            return Err(CaseError::TargetInDataPoint(self.target.clone()));
        }
        if iv == &self.target {
            return Err(CaseError::TargetIntervened(self.target.clone()));
        }
        if let Some(c) = &self.candidate_override {
            if c.get(&self.target).is_some() {
                return Err(CaseError::TargetInDataPoint(self.target.clone()));
            }
        } else if self.candidate_edges.is_some() {
            return Err(CaseError::EdgesWithoutCandidate);
        }
        Ok(())
    }

    /// `[graph, factual] I(a_j:α)`.
    pub fn intervention_expr(&self) -> InterventionExpr {
        InterventionExpr::new(self.graph.clone(), self.factual.clone(), self.intervention.clone())
            .expect("validated case")
    }

    fn query(&self, dp: DataPoint) -> Result<OracleQuery, EngineError> {
        OracleQuery::new(dp, self.target.clone(), self.target_value.clone()).map_err(EngineError::Model)
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid case: {0}")]
    Case(#[from] CaseError),
    #[error(transparent)]
    Model(ModelError),
    #[error("oracle error: {0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    NotCounterfactual(#[from] CandidateFailure),
    #[error("factual probability {supplied} in the case disagrees with the oracle's {oracle}")]
    Inconsistent { supplied: Probability, oracle: Probability },
}

/// Items of a candidate that no rule can erase, with the blocking condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFailure {
    pub intervened: VariableId,
    pub residual: Vec<(ContextItem, Violation)>,
}

impl fmt::Display for CandidateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidate is not a counterfactual; non-erasable items:")?;
        for (item, why) in &self.residual {
            let reason = match why {
                Violation::ConditionStar => "condition (*) k = j".to_string(),
                Violation::ConditionDoubleStar => format!("effect of {} via (**)", self.intervened),
                other => other.to_string(),
            };
            writeln!(f, "  {item}: {reason}")?;
        }
        Ok(())
    }
}

impl std::error::Error for CandidateFailure {}

/// The intervened graph and the reduced data point `{a_j:α}` followed by the
/// factual attributions on non-effects of `a_j`, in factual order.
pub fn build_candidate(case: &Case) -> Result<(CausalGraph, DataPoint), EngineError> {
    case.validate()?;
    let iv = case.intervention.var();
    let graph = intervene_graph(&case.graph, iv).expect("validated case");
    let effects = descendants(&case.graph, iv).expect("validated case");
    let mut attrs = vec![case.intervention.as_attribution()];
    attrs.extend(case.factual.attributions().iter().filter(|a| !effects.contains(&a.var)).cloned());
    let dp = DataPoint::new(attrs).map_err(EngineError::Model)?;
    Ok((graph, dp))
}

/// The candidate's edges and data point, honouring a user override.
pub fn candidate_parts(case: &Case) -> Result<(Vec<Edge>, DataPoint), EngineError> {
    let (graph, built) = build_candidate(case)?;
    match &case.candidate_override {
        Some(dp) => {
            let edges = case
                .candidate_edges
                .clone()
                .unwrap_or_else(|| graph.edges().iter().cloned().collect());
            Ok((edges, dp.clone()))
        }
        None => Ok((graph.edges().iter().cloned().collect(), built)),
    }
}

/// `▷', σ' ⊢ t:β_q`.
pub fn candidate_judgment(
    case: &Case,
    edges: &[Edge],
    dp: &DataPoint,
    q: Probability,
) -> Result<Judgment, EngineError> {
    let items = edges
        .iter()
        .cloned()
        .map(ContextItem::Edge)
        .chain(dp.attributions().iter().cloned().map(ContextItem::Attr));
    let ctx = Context::from_items(items).map_err(EngineError::Model)?;
    Judgment::new(ctx, case.target.clone(), case.target_value.clone(), q).map_err(EngineError::Model)
}

/// Weakens the candidate with the case's intervention expression and erases
/// everything erasable: I-Cut first, then ▷-Cuts in edge order, then v-Cuts
/// in context order. Succeeds iff only the intervention expression is left.
pub fn verify_candidate(
    case: &Case,
    candidate: &Judgment,
    mode: EdgeMode,
) -> Result<Proof, CandidateFailure> {
    let expr = case.intervention_expr();
    let intervened = case.intervention.var().clone();
    let imposed = case.intervention.as_attribution();
    let mut proof = Proof::new(vec![candidate.clone()]);
    let mut residual = Vec::new();

    if let Some(e) = candidate.context().intervention() {
        residual.push((ContextItem::from(e.clone()), Violation::InterventionPresent));
        return Err(CandidateFailure { intervened, residual });
    }
    let last = |p: &Proof| vec![p.last_line().expect("non-empty proof")];
    proof
        .push(RuleId::CWeakening, expr.into(), vec![0], mode)
        .expect("C-Weakening applies to an intervention-free context");

    while proof.conclusion().unwrap().context().contains(&ContextItem::Attr(imposed.clone())) {
        let prem = last(&proof);
        proof.push(RuleId::ICut, imposed.clone().into(), prem, mode).expect("I-Cut applies");
    }

    let edges: Vec<Edge> = proof.conclusion().unwrap().context().edges().to_vec();
    for e in edges {
        let current = proof.conclusion().unwrap();
        match apply_tri_cut(current, &e, mode) {
            Ok(_) => {
                let prem = last(&proof);
                proof.push(RuleId::TriCut, e.into(), prem, mode).expect("checked above");
            }
            Err(v) => residual.push((e.into(), v)),
        }
    }

    let attrs: Vec<Attribution> = proof.conclusion().unwrap().context().attributions().to_vec();
    for a in attrs {
        let current = proof.conclusion().unwrap();
        if a.var == intervened {
            let v = apply_i_cut_on(current, &a).err().unwrap_or(Violation::InterventionValueMismatch);
            residual.push((a.into(), v));
            continue;
        }
        match apply_v_cut(current, &a) {
            Ok(_) => {
                let prem = last(&proof);
                proof.push(RuleId::VCut, a.into(), prem, mode).expect("checked above");
            }
            Err(v) => residual.push((a.into(), v)),
        }
    }

    if residual.is_empty() {
        debug_assert_eq!(proof.conclusion().unwrap().context().len(), 1);
        Ok(proof)
    } else {
        Err(CandidateFailure { intervened, residual })
    }
}

/// Builds (or takes the overridden) candidate, queries `q`, and derives the
/// counterfactual hypersequent with its proof.
pub fn derive_counterfactual(
    case: &Case,
    oracle: &dyn ClassifierOracle,
    mode: EdgeMode,
) -> Result<(Judgment, Proof), EngineError> {
    let (edges, dp) = candidate_parts(case)?;
    let q = oracle.query(&case.query(dp.clone())?)?;
    let candidate = candidate_judgment(case, &edges, &dp, q)?;
    let proof = verify_candidate(case, &candidate, mode)?;
    let judgment = proof.conclusion().expect("non-empty proof").clone();
    Ok((judgment, proof))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub fair: bool,
    pub p: Probability,
    pub q: Probability,
    pub difference: Probability,
    pub epsilon: Probability,
    pub counterfactual_judgment: Judgment,
    pub proof: Proof,
}

/// Fair iff `|p - q| <= epsilon`.
pub fn cf_verdict(
    p: Probability,
    q: Probability,
    epsilon: Probability,
    cf_judgment: Judgment,
    proof: Proof,
) -> Verdict {
    let difference = p.abs_diff(&q);
    Verdict {
        fair: difference <= epsilon,
        p,
        q,
        difference,
        epsilon,
        counterfactual_judgment: cf_judgment,
        proof,
    }
}

/// The factual probability: the case's assumption, cross-checked against the
/// oracle when the oracle can answer.
pub fn factual_probability(
    case: &Case,
    oracle: &dyn ClassifierOracle,
) -> Result<Probability, EngineError> {
    case.validate()?;
    let asked = oracle.query(&case.query(case.factual.clone())?);
    match (&case.factual_prob, asked) {
        (Some(p), Ok(o)) if p != &o => {
            Err(EngineError::Inconsistent { supplied: p.clone(), oracle: o })
        }
        (Some(p), _) => Ok(p.clone()),
        (None, Ok(o)) => Ok(o),
        (None, Err(e)) => Err(e.into()),
    }
}

/// Derivation plus verdict for one case.
pub fn check_case(
    case: &Case,
    oracle: &dyn ClassifierOracle,
    epsilon: &Probability,
    mode: EdgeMode,
) -> Result<Verdict, EngineError> {
    let p = factual_probability(case, oracle)?;
    let (judgment, proof) = derive_counterfactual(case, oracle, mode)?;
    let q = judgment.prob().clone();
    Ok(cf_verdict(p, q, epsilon.clone(), judgment, proof))
}

/// [`check_case`] over many cases; results keep input order.
pub fn check_batch(
    cases: &[Case],
    oracle: &dyn ClassifierOracle,
    epsilon: &Probability,
    mode: EdgeMode,
    exec: Exec,
) -> Vec<Result<Verdict, EngineError>> {
    par::map(exec, cases, |c| check_case(c, oracle, epsilon, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_proof;
    use crate::oracle::JudgmentDb;
    use crate::testutil::*;

    fn db(q: &str) -> JudgmentDb {
        JudgmentDb::new(vec![divorced_db_entry().with_prob(Probability::parse(q).unwrap())]).unwrap()
    }

    #[test]
    fn candidate_drops_effects_of_ms() {
        let (g, dp) = build_candidate(&loan_case()).unwrap();
        assert_eq!(g.edges().len(), 9);
        let expected = DataPoint::new(vec![
            attr("MS", "div"),
            attr("Gender", "m"),
            attr("SAT", "1100"),
            attr("Degree", "PhD"),
        ])
        .unwrap();
        assert_eq!(dp, expected);
    }

    #[test]
    fn candidate_for_gender_keeps_sat() {
        let mut case = loan_case();
        case.intervention = Intervention::new(v("Gender"), ValueTerm::atom("f").unwrap()).unwrap();
        let (_, dp) = build_candidate(&case).unwrap();
        let vars: Vec<_> = dp.attributions().iter().map(|a| a.var.as_str().to_string()).collect();
        assert_eq!(vars, vec!["Gender", "SAT"]);
    }

    #[test]
    fn candidate_for_sink_replaces_only_its_value() {
        let g = CausalGraph::from_edges([edge("A", "B")], [v("t")]).unwrap();
        let case = Case {
            graph: g,
            factual: DataPoint::new(vec![attr("A", "x"), attr("B", "y")]).unwrap(),
            factual_prob: None,
            intervention: Intervention::new(v("B"), ValueTerm::atom("z").unwrap()).unwrap(),
            target: v("t"),
            target_value: ValueTerm::atom("yes").unwrap(),
            candidate_override: None,
            candidate_edges: None,
        };
        let (_, dp) = build_candidate(&case).unwrap();
        assert!(dp.set_eq(&DataPoint::new(vec![attr("B", "z"), attr("A", "x")]).unwrap()));
    }

    #[test]
    fn marital_derivation() {
        let (j, proof) = derive_counterfactual(&loan_case(), &db("0.60"), EdgeMode::Strict).unwrap();
        assert_eq!(j, intervened_judgment());
        assert_eq!(check_proof(&proof, EdgeMode::Strict), Ok(()));
        assert_eq!(proof.count(RuleId::CWeakening), 1);
        assert_eq!(proof.count(RuleId::ICut), 1);
        assert_eq!(proof.count(RuleId::TriCut), 9);
        assert_eq!(proof.count(RuleId::VCut), 3);
        assert_eq!(proof.assumptions, vec![divorced_judgment()]);
    }

    #[test]
    fn zero_probability_is_valid() {
        let (j, _) = derive_counterfactual(&loan_case(), &db("0"), EdgeMode::Strict).unwrap();
        assert_eq!(j.prob(), &Probability::zero());
    }

    #[test]
    fn target_cannot_be_intervened() {
        let g = CausalGraph::new([v("t")], []).unwrap();
        let case = Case {
            graph: g,
            factual: DataPoint::default(),
            factual_prob: None,
            intervention: Intervention::new(v("t"), ValueTerm::atom("x").unwrap()).unwrap(),
            target: v("t"),
            target_value: ValueTerm::atom("b").unwrap(),
            candidate_override: None,
            candidate_edges: None,
        };
        assert!(matches!(build_candidate(&case), Err(EngineError::Case(CaseError::TargetIntervened(_)))));
    }

    #[test]
    fn verify_rejects_descendant_attribution() {
        let case = loan_case();
        let ctx = Context::from_items([attr("MS", "div").into(), attr("GAI", "65K").into()]).unwrap();
        let cand = judgment(ctx, "Loan", "yes", "0.6");
        let fail = verify_candidate(&case, &cand, EdgeMode::Strict).unwrap_err();
        assert_eq!(fail.residual, vec![(attr("GAI", "65K").into(), Violation::ConditionDoubleStar)]);
        assert!(fail.to_string().contains("GAI = 65K: effect of MS via (**)"), "{fail}");
    }

    #[test]
    fn verify_rejects_edge_into_intervened() {
        let case = loan_case();
        let ctx = Context::from_items([edge("Gender", "MS").into(), attr("MS", "div").into()]).unwrap();
        let cand = judgment(ctx, "Loan", "yes", "0.6");
        let fail = verify_candidate(&case, &cand, EdgeMode::Strict).unwrap_err();
        assert_eq!(fail.residual, vec![(edge("Gender", "MS").into(), Violation::ConditionStar)]);
        assert!(fail.to_string().contains("condition (*) k = j"));
    }

    #[test]
    fn verify_rejects_other_value_for_intervened() {
        let ctx = Context::from_items([attr("MS", "sing").into()]).unwrap();
        let cand = judgment(ctx, "Loan", "yes", "0.6");
        let fail = verify_candidate(&loan_case(), &cand, EdgeMode::Strict).unwrap_err();
        assert_eq!(fail.residual[0].1, Violation::InterventionValueMismatch);
    }

    #[test]
    fn verify_lists_every_residual_item() {
        let ctx = Context::from_items([
            edge("Gender", "MS").into(),
            edge("SAT", "Loan").into(),
            attr("GAI", "65K").into(),
            attr("SAT", "900").into(),
        ])
        .unwrap();
        let cand = judgment(ctx, "Loan", "yes", "0.6");
        let fail = verify_candidate(&loan_case(), &cand, EdgeMode::Strict).unwrap_err();
        let why: Vec<_> = fail.residual.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(
            why,
            vec![
                Violation::ConditionStar,
                Violation::EdgeNotFactual,
                Violation::ConditionDoubleStar,
                Violation::NotFactual
            ]
        );
        // lenient mode lets the spurious edge through
        let fail = verify_candidate(&loan_case(), &cand, EdgeMode::Lenient).unwrap_err();
        assert_eq!(fail.residual.len(), 3);
    }

    #[test]
    fn override_is_verified_not_built() {
        let mut case = loan_case();
        case.candidate_override = Some(
            DataPoint::new(vec![attr("Gender", "m"), attr("MS", "div"), attr("GAI", "65K")]).unwrap(),
        );
        let err = derive_counterfactual(&case, &crate::testutil::ConstOracle("0.6"), EdgeMode::Strict)
            .unwrap_err();
        assert!(matches!(err, EngineError::NotCounterfactual(_)));
    }

    #[test]
    fn verdicts() {
        let (j, proof) = derive_counterfactual(&loan_case(), &db("0.60"), EdgeMode::Strict).unwrap();
        let p = |s: &str| Probability::parse(s).unwrap();
        assert!(cf_verdict(p("0.60"), p("0.60"), p("0"), j.clone(), proof.clone()).fair);
        let unfair = cf_verdict(p("0.60"), p("0.50"), p("0"), j.clone(), proof.clone());
        assert!(!unfair.fair);
        assert_eq!(unfair.difference, p("0.10"));
        assert!(cf_verdict(p("0.60"), p("0.55"), p("0.05"), j, proof).fair);
    }

    #[test]
    fn factual_probability_consistency() {
        let case = loan_case();
        // oracle cannot answer the factual query: the assumption stands
        assert_eq!(factual_probability(&case, &db("0.5")).unwrap(), Probability::parse("0.6").unwrap());
        // oracle answers with a different value: abort
        let both = JudgmentDb::new(vec![factual_judgment().with_prob(Probability::parse("0.7").unwrap())])
            .unwrap();
        assert!(matches!(factual_probability(&case, &both), Err(EngineError::Inconsistent { .. })));
        // no assumption: ask the oracle
        let mut bare = case.clone();
        bare.factual_prob = None;
        assert_eq!(factual_probability(&bare, &both).unwrap(), Probability::parse("0.7").unwrap());
        assert!(matches!(factual_probability(&bare, &db("0.5")), Err(EngineError::Oracle(_))));
    }

    #[test]
    fn batch_preserves_order() {
        let mut other = loan_case();
        other.intervention = Intervention::new(v("Gender"), ValueTerm::atom("f").unwrap()).unwrap();
        let cases = vec![loan_case(), other, loan_case()];
        let eps = Probability::zero();
        let oracle = db("0.60");
        let seq = check_batch(&cases, &oracle, &eps, EdgeMode::Strict, Exec::Sequential);
        let par = check_batch(&cases, &oracle, &eps, EdgeMode::Strict, Exec::Parallel);
        assert!(seq[0].as_ref().unwrap().fair);
        assert!(matches!(seq[1], Err(EngineError::Oracle(_))));
        assert_eq!(seq[0].as_ref().unwrap(), par[0].as_ref().unwrap());
        assert_eq!(seq[2].as_ref().unwrap(), par[2].as_ref().unwrap());
    }
}

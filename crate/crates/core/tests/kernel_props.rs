mod common;

use cfproof::closure::descendants;
use cfproof::engine::{build_candidate, candidate_judgment, verify_candidate, Case};
use cfproof::kernel::*;
use cfproof::model::*;
use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn candidate_for(case: &Case) -> Judgment {
    let (g, dp) = build_candidate(case).unwrap();
    let edges: Vec<Edge> = g.edges().iter().cloned().collect();
    candidate_judgment(case, &edges, &dp, Probability::from_ratio(3, 5).unwrap()).unwrap()
}

/// Weakened and I-Cut candidate: everything left but the expression is erasable.
fn reduced(case: &Case) -> Judgment {
    let w = apply_c_weakening(&candidate_for(case), &case.intervention_expr()).unwrap();
    apply_i_cut(&w).unwrap()
}

fn erasable(j: &Judgment) -> Vec<ContextItem> {
    j.context().items().into_iter().filter(|i| !matches!(i, ContextItem::Intervention(_))).collect()
}

fn erase(j: &Judgment, item: &ContextItem) -> Result<Judgment, Violation> {
    match item {
        ContextItem::Edge(e) => apply_tri_cut(j, e, EdgeMode::Strict),
        ContextItem::Attr(a) => apply_v_cut(j, a),
        ContextItem::Intervention(_) => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn i_cut_is_cut_against_the_axiom(seed in any::<u64>(), extra in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, false);
        let expr = case.intervention_expr();
        let mut rest = Context::new();
        rest.insert(case.intervention.as_attribution().into()).unwrap();
        for e in case.graph.edges() {
            if extra && rng.gen_bool(0.5) {
                rest.insert(e.clone().into()).unwrap();
            }
        }
        for a in case.factual.attributions() {
            if rng.gen_bool(0.5) && &a.var != case.intervention.var() {
                rest.insert(a.clone().into()).unwrap();
            }
        }
        let q = Probability::from_ratio(rng.gen_range(0..=9), 9).unwrap();
        let right = Judgment::new(rest.clone(), case.target.clone(), atom("yes"), q).unwrap();
        let mut full = rest;
        full.insert(expr.clone().into()).unwrap();
        let with_expr = right.with_context(full).unwrap();

        let by_rule = apply_i_cut(&with_expr).unwrap();
        let by_cut = generic_cut(&intervention_axiom(&expr), &right).unwrap();
        prop_assert_eq!(&by_rule, &by_cut);
        prop_assert_eq!(by_rule.prob(), right.prob());
    }

    #[test]
    fn erasure_order_commutes(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, false);
        let j = reduced(&case);
        let items = erasable(&j);
        prop_assume!(items.len() >= 2);
        let picked: Vec<_> = items.choose_multiple(&mut rng, 2).cloned().collect();
        let ab = erase(&erase(&j, &picked[0]).unwrap(), &picked[1]).unwrap();
        let ba = erase(&erase(&j, &picked[1]).unwrap(), &picked[0]).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn rules_preserve_conclusion_and_shrink_context(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, false);
        let j = reduced(&case);
        for item in erasable(&j) {
            let out = erase(&j, &item).unwrap();
            prop_assert!(out.same_conclusion(&j));
            prop_assert_eq!(out.prob(), j.prob());
            prop_assert_eq!(out.context().len() + 1, j.context().len());
            prop_assert!(!out.context().contains(&item));
        }
    }

    #[test]
    fn side_conditions_block_effects_and_entering_edges(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, false);
        let iv = case.intervention.var();
        let effects = descendants(&case.graph, iv).unwrap();
        let base = reduced(&case);
        for a in case.factual.attributions() {
            if effects.contains(&a.var) && &a.var != iv {
                let mut ctx = base.context().clone();
                ctx.insert(a.clone().into()).unwrap();
                let j = base.with_context(ctx).unwrap();
                prop_assert_eq!(apply_v_cut(&j, a), Err(Violation::ConditionDoubleStar));
            }
        }
        for e in case.graph.edges().iter().filter(|e| &e.to == iv) {
            let mut ctx = base.context().clone();
            ctx.insert(e.clone().into()).unwrap();
            let j = base.with_context(ctx).unwrap();
            prop_assert_eq!(apply_tri_cut(&j, e, EdgeMode::Lenient), Err(Violation::ConditionStar));
        }
    }

    #[test]
    fn derived_proofs_check_and_single_mutations_fail(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = random_case(&mut rng, false);
        let cand = candidate_for(&case);
        let proof = verify_candidate(&case, &cand, EdgeMode::Strict).unwrap();
        prop_assert_eq!(check_proof(&proof, EdgeMode::Strict), Ok(()));
        prop_assert_eq!(check_proof(&Proof::from_json(&proof.to_json()).unwrap(), EdgeMode::Strict), Ok(()));

        let k = rng.gen_range(0..proof.steps.len());
        let n = proof.assumptions.len();

        let mut bumped = proof.clone();
        let p = bumped.steps[k].conclusion.prob().clone();
        let other = if p.is_one() { Probability::zero() } else { Probability::one() };
        bumped.steps[k].conclusion = bumped.steps[k].conclusion.with_prob(other);
        let err = check_proof(&bumped, EdgeMode::Strict).unwrap_err();
        prop_assert_eq!(err.step, k);
        prop_assert_eq!(err.violation.label(), "conclusion mismatch");

        let mut forward = proof.clone();
        forward.steps[k].premises = vec![n + k];
        let err = check_proof(&forward, EdgeMode::Strict).unwrap_err();
        prop_assert_eq!(err.step, k);
        prop_assert_eq!(err.violation.label(), "premise order");

        let mut dropped = proof.clone();
        dropped.steps.remove(k);
        prop_assert!(check_proof(&dropped, EdgeMode::Strict).is_err() || k + 1 == proof.steps.len());
    }
}

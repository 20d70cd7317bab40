use crate::closure::descendants;
use crate::model::{Attribution, Context, ContextItem, Edge, InterventionExpr, Judgment, ModelError};

use super::{EdgeMode, Violation};

fn malformed(e: ModelError) -> Violation {
    Violation::Malformed(e.to_string())
}

fn intervention_of(j: &Judgment) -> Result<&InterventionExpr, Violation> {
    j.context().intervention().ok_or(Violation::NoIntervention)
}

fn erase(j: &Judgment, item: &ContextItem, missing: Violation) -> Result<Judgment, Violation> {
    let mut ctx: Context = j.context().clone();
    if !ctx.remove(item) {
        return Err(missing);
    }
    j.with_context(ctx).map_err(malformed)
}

/// C-Weakening: adds the intervention expression to an intervention-free context.
pub fn apply_c_weakening(j: &Judgment, e: &InterventionExpr) -> Result<Judgment, Violation> {
    if j.context().intervention().is_some() {
        return Err(Violation::InterventionPresent);
    }
    let mut ctx = j.context().clone();
    ctx.insert(e.clone().into()).map_err(malformed)?;
    j.with_context(ctx).map_err(malformed)
}

/// I-Cut: erases the loose copy of the imposed attribution `a_j:α`.
pub fn apply_i_cut(j: &Judgment) -> Result<Judgment, Violation> {
    let imposed = intervention_of(j)?.intervention().as_attribution();
    apply_i_cut_on(j, &imposed)
}

/// I-Cut with the erased attribution named explicitly, as recorded in proofs.
pub fn apply_i_cut_on(j: &Judgment, attr: &Attribution) -> Result<Judgment, Violation> {
    let imposed = intervention_of(j)?.intervention().as_attribution();
    if attr.var != imposed.var {
        return Err(Violation::NotInterventionVariable);
    }
    if attr.value != imposed.value {
        return Err(Violation::InterventionValueMismatch);
    }
    let missing = if j.context().attributions().iter().any(|a| a.var == imposed.var) {
        Violation::InterventionValueMismatch
    } else {
        Violation::LooseAttributionMissing
    };
    erase(j, &ContextItem::Attr(imposed), missing)
}

/// ▷-Cut: erases an edge that does not enter the intervened variable.
pub fn apply_tri_cut(j: &Judgment, edge: &Edge, mode: EdgeMode) -> Result<Judgment, Violation> {
    let e = intervention_of(j)?;
    if &edge.to == e.intervention().var() {
        return Err(Violation::ConditionStar);
    }
    if mode == EdgeMode::Strict && !e.graph().contains_edge(edge) {
        return Err(Violation::EdgeNotFactual);
    }
    erase(j, &ContextItem::Edge(edge.clone()), Violation::EdgeAbsent)
}

/// v-Cut: erases a factual attribution whose variable is not an effect of
/// the intervened variable in the factual graph.
pub fn apply_v_cut(j: &Judgment, attr: &Attribution) -> Result<Judgment, Violation> {
    let e = intervention_of(j)?;
    let effects = descendants(e.graph(), e.intervention().var())
        .map_err(|err| Violation::Malformed(err.to_string()))?;
    if effects.contains(&attr.var) {
        return Err(Violation::ConditionDoubleStar);
    }
    if !e.datapoint().contains(attr) {
        return Err(Violation::NotFactual);
    }
    erase(j, &ContextItem::Attr(attr.clone()), Violation::AttributionAbsent)
}

/// `[▷, σ] I(a_j:α) ⊢ a_j:α` with probability 1.
pub fn intervention_axiom(e: &InterventionExpr) -> Judgment {
    let i = e.intervention();
    let ctx = Context::from_items([e.clone().into()]).expect("single intervention");
    Judgment::new(ctx, i.var().clone(), i.value().clone(), crate::model::Probability::one())
        .expect("intervention variable is not an attribution of its own context")
}

/// Cut a certain conclusion `a:α` (left) against an occurrence of `a:α` in
/// the right premise's context.
pub fn generic_cut(left: &Judgment, right: &Judgment) -> Result<Judgment, Violation> {
    if !left.prob().is_one() {
        return Err(Violation::NotCertain);
    }
    let cut = Attribution::new(left.target().clone(), left.value().clone());
    let mut rest = right.context().clone();
    if !rest.remove(&ContextItem::Attr(cut)) {
        return Err(Violation::AttributionAbsent);
    }
    let ctx = left.context().union(&rest).map_err(malformed)?;
    right.with_context(ctx).map_err(malformed)
}

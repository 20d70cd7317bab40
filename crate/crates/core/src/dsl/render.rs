use std::fmt::Write;

use crate::engine::Case;
use crate::model::{ContextItem, InterventionExpr, Judgment};

pub fn render_intervention_expr(e: &InterventionExpr) -> String {
    let mut parts: Vec<String> = e.graph().edges().iter().map(|e| e.to_string()).collect();
    parts.extend(e.graph().isolated_nodes().map(|n| n.to_string()));
    parts.extend(e.datapoint().attributions().iter().map(|a| a.to_string()));
    let i = e.intervention();
    format!("[{}] I({}={})", parts.join(", "), i.var(), i.value())
}

pub fn render_item(item: &ContextItem) -> String {
    match item {
        ContextItem::Edge(e) => e.to_string(),
        ContextItem::Attr(a) => a.to_string(),
        ContextItem::Intervention(e) => render_intervention_expr(e),
    }
}

/// Canonical text of a judgment: intervention first, then edges in
/// lexicographic order, then attributions in stored order.
pub fn render_judgment(j: &Judgment) -> String {
    let items: Vec<String> = j.context().items().iter().map(render_item).collect();
    let lhs = if items.is_empty() { String::new() } else { format!("{} ", items.join(", ")) };
    format!("{lhs}|- {} = {} @ {}", j.target(), j.value(), j.prob())
}

pub fn render_case(case: &Case) -> String {
    let mut out = String::from("graph {\n");
    for e in case.graph.edges() {
        let _ = writeln!(out, "  {e};");
    }
    for n in case.graph.isolated_nodes() {
        let _ = writeln!(out, "  {n};");
    }
    out.push_str("}\nfactual {\n");
    for a in case.factual.attributions() {
        let _ = writeln!(out, "  {a};");
    }
    out.push_str("}\n");
    let i = &case.intervention;
    let _ = writeln!(out, "intervene {} = {};", i.var(), i.value());
    let _ = writeln!(out, "target {} = {};", case.target, case.target_value);
    if let Some(dp) = &case.candidate_override {
        out.push_str("candidate {\n");
        for e in case.candidate_edges.iter().flatten() {
            let _ = writeln!(out, "  {e};");
        }
        for a in dp.attributions() {
            let _ = writeln!(out, "  {a};");
        }
        out.push_str("}\n");
    }
    if let Some(p) = &case.factual_prob {
        let _ = writeln!(out, "factual_prob {p};");
    }
    out
}

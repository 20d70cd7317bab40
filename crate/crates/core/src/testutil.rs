//! Loan-example fixtures shared by unit tests.

use crate::engine::Case;
use crate::model::*;
use crate::oracle::{ClassifierOracle, OracleError, OracleQuery};

pub fn v(s: &str) -> VariableId {
    VariableId::new(s).unwrap()
}

pub fn attr(var: &str, val: &str) -> Attribution {
    Attribution::new(v(var), ValueTerm::atom(val).unwrap())
}

pub fn edge(a: &str, b: &str) -> Edge {
    Edge::new(v(a), v(b))
}

pub fn judgment(ctx: Context, target: &str, value: &str, prob: &str) -> Judgment {
    Judgment::new(ctx, v(target), ValueTerm::atom(value).unwrap(), Probability::parse(prob).unwrap())
        .unwrap()
}

pub const LOAN_EDGES: [(&str, &str); 10] = [
    ("Gender", "MS"),
    ("Gender", "Degree"),
    ("Gender", "Experience"),
    ("Degree", "Experience"),
    ("Degree", "GAI"),
    ("Experience", "GAI"),
    ("MS", "Loan"),
    ("GAI", "Loan"),
    ("SAT", "Degree"),
    ("MS", "Experience"),
];

pub fn loan_graph() -> CausalGraph {
    CausalGraph::from_edges(LOAN_EDGES.iter().map(|(a, b)| edge(a, b)), []).unwrap()
}

pub fn intervened_loan_graph() -> CausalGraph {
    CausalGraph::from_edges(
        LOAN_EDGES.iter().filter(|(_, b)| *b != "MS").map(|(a, b)| edge(a, b)),
        [],
    )
    .unwrap()
}

pub fn factual_datapoint() -> DataPoint {
    DataPoint::new(vec![
        attr("Gender", "m"),
        attr("MS", "mar"),
        attr("SAT", "1100"),
        attr("GAI", "65K"),
        attr("Degree", "PhD"),
        attr("Experience", "5y"),
    ])
    .unwrap()
}

pub fn loan_expr() -> InterventionExpr {
    InterventionExpr::new(
        loan_graph(),
        factual_datapoint(),
        Intervention::new(v("MS"), ValueTerm::atom("div").unwrap()).unwrap(),
    )
    .unwrap()
}

pub fn loan_case() -> Case {
    Case {
        graph: loan_graph(),
        factual: factual_datapoint(),
        factual_prob: Some(Probability::parse("0.60").unwrap()),
        intervention: Intervention::new(v("MS"), ValueTerm::atom("div").unwrap()).unwrap(),
        target: v("Loan"),
        target_value: ValueTerm::atom("yes").unwrap(),
        candidate_override: None,
        candidate_edges: None,
    }
}

/// The factual judgment over attributions only (as a classifier database holds it).
pub fn factual_judgment() -> Judgment {
    let ctx = Context::from_items(factual_datapoint().attributions().iter().cloned().map(ContextItem::Attr))
        .unwrap();
    judgment(ctx, "Loan", "yes", "0.60")
}

/// `▷_Clas', G:m, MS:div, SAT:1100, Deg:PhD ⊢ Loan:yes_0.60`.
pub fn divorced_judgment() -> Judgment {
    let graph = intervened_loan_graph();
    let items = graph
        .edges()
        .iter()
        .cloned()
        .map(ContextItem::Edge)
        .chain(
            [attr("Gender", "m"), attr("MS", "div"), attr("SAT", "1100"), attr("Degree", "PhD")]
                .into_iter()
                .map(ContextItem::Attr),
        );
    judgment(Context::from_items(items).unwrap(), "Loan", "yes", "0.60")
}

/// The divorced candidate as a database entry: attributions only.
pub fn divorced_db_entry() -> Judgment {
    let items = [attr("Gender", "m"), attr("MS", "div"), attr("SAT", "1100"), attr("Degree", "PhD")]
        .into_iter()
        .map(ContextItem::Attr);
    judgment(Context::from_items(items).unwrap(), "Loan", "yes", "0.60")
}

/// `[▷_Clas, σ] I(MS:div) ⊢ Loan:yes_0.60`.
pub fn intervened_judgment() -> Judgment {
    judgment(Context::from_items([loan_expr().into()]).unwrap(), "Loan", "yes", "0.60")
}

/// Answers every query with the same probability.
pub struct ConstOracle(pub &'static str);

impl ClassifierOracle for ConstOracle {
    fn query(&self, _: &OracleQuery) -> Result<Probability, OracleError> {
        Ok(Probability::parse(self.0).unwrap())
    }
}

use std::collections::BTreeSet;
use std::fmt;

use super::{Attribution, CausalGraph, Edge, ModelError, Probability, ValueTerm, VariableId};

/// The attributions describing one individual; each variable occurs once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DataPoint {
    attributions: Vec<Attribution>,
}

impl DataPoint {
    pub fn new(attributions: Vec<Attribution>) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for a in &attributions {
            if !seen.insert(&a.var) {
                return Err(ModelError::DuplicateVariable(a.var.clone()));
            }
        }
        Ok(DataPoint { attributions })
    }

    pub fn attributions(&self) -> &[Attribution] {
        &self.attributions
    }

    pub fn get(&self, var: &VariableId) -> Option<&ValueTerm> {
        self.attributions.iter().find(|a| &a.var == var).map(|a| &a.value)
    }

    pub fn contains(&self, attr: &Attribution) -> bool {
        self.attributions.contains(attr)
    }

    pub fn variables(&self) -> BTreeSet<VariableId> {
        variables_of(self)
    }

    pub fn len(&self) -> usize {
        self.attributions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributions.is_empty()
    }

    /// Same attributions regardless of order.
    pub fn set_eq(&self, other: &DataPoint) -> bool {
        self.len() == other.len() && self.attributions.iter().all(|a| other.contains(a))
    }
}

/// The set of variables a data point assigns.
pub fn variables_of(dp: &DataPoint) -> BTreeSet<VariableId> {
    dp.attributions.iter().map(|a| a.var.clone()).collect()
}

/// `I(var:value)`; only atomic values may be imposed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Intervention {
    var: VariableId,
    value: ValueTerm,
}

impl Intervention {
    pub fn new(var: VariableId, value: ValueTerm) -> Result<Self, ModelError> {
        if !value.is_atom() {
            return Err(ModelError::NonAtomicIntervention(value.to_string()));
        }
        Ok(Intervention { var, value })
    }

    pub fn var(&self) -> &VariableId {
        &self.var
    }

    pub fn value(&self) -> &ValueTerm {
        &self.value
    }

    pub fn as_attribution(&self) -> Attribution {
        Attribution::new(self.var.clone(), self.value.clone())
    }
}

/// `[graph, σ] I(a_j:α)`: the factual graph and data point under an intervention.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InterventionExpr {
    graph: CausalGraph,
    datapoint: DataPoint,
    intervention: Intervention,
}

impl InterventionExpr {
    pub fn new(
        graph: CausalGraph,
        datapoint: DataPoint,
        intervention: Intervention,
    ) -> Result<Self, ModelError> {
        if !graph.contains_node(intervention.var()) {
            return Err(ModelError::UnknownNode(intervention.var().clone()));
        }
        for a in datapoint.attributions() {
            if !graph.contains_node(&a.var) {
                return Err(ModelError::UnknownNode(a.var.clone()));
            }
        }
        Ok(InterventionExpr { graph, datapoint, intervention })
    }

    pub fn graph(&self) -> &CausalGraph {
        &self.graph
    }

    pub fn datapoint(&self) -> &DataPoint {
        &self.datapoint
    }

    pub fn intervention(&self) -> &Intervention {
        &self.intervention
    }
}

/// One formula on the left of a judgment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContextItem {
    Edge(Edge),
    Attr(Attribution),
    Intervention(Box<InterventionExpr>),
}

impl From<Edge> for ContextItem {
    fn from(e: Edge) -> Self {
        ContextItem::Edge(e)
    }
}

impl From<Attribution> for ContextItem {
    fn from(a: Attribution) -> Self {
        ContextItem::Attr(a)
    }
}

impl From<InterventionExpr> for ContextItem {
    fn from(e: InterventionExpr) -> Self {
        ContextItem::Intervention(Box::new(e))
    }
}

/// A judgment context: a multiset of items holding at most one intervention.
///
/// Edges are kept sorted; attributions keep insertion order for printing but
/// compare as a multiset.
#[derive(Debug, Clone, Default)]
pub struct Context {
    intervention: Option<Box<InterventionExpr>>,
    edges: Vec<Edge>,
    attrs: Vec<Attribution>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_items(items: impl IntoIterator<Item = ContextItem>) -> Result<Self, ModelError> {
        let mut ctx = Context::new();
        for item in items {
            ctx.insert(item)?;
        }
        Ok(ctx)
    }

    pub fn insert(&mut self, item: ContextItem) -> Result<(), ModelError> {
        match item {
            ContextItem::Edge(e) => {
                let pos = self.edges.partition_point(|x| x <= &e);
                self.edges.insert(pos, e);
            }
            ContextItem::Attr(a) => self.attrs.push(a),
            ContextItem::Intervention(e) => {
                if self.intervention.is_some() {
                    return Err(ModelError::SecondIntervention);
                }
                self.intervention = Some(e);
            }
        }
        Ok(())
    }

    pub fn intervention(&self) -> Option<&InterventionExpr> {
        self.intervention.as_deref()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn attributions(&self) -> &[Attribution] {
        &self.attrs
    }

    pub fn contains(&self, item: &ContextItem) -> bool {
        match item {
            ContextItem::Edge(e) => self.edges.binary_search(e).is_ok(),
            ContextItem::Attr(a) => self.attrs.contains(a),
            ContextItem::Intervention(e) => self.intervention.as_ref() == Some(e),
        }
    }

    /// Removes one occurrence; returns whether anything was removed.
    pub fn remove(&mut self, item: &ContextItem) -> bool {
        match item {
            ContextItem::Edge(e) => match self.edges.binary_search(e) {
                Ok(i) => {
                    self.edges.remove(i);
                    true
                }
                Err(_) => false,
            },
            ContextItem::Attr(a) => match self.attrs.iter().position(|x| x == a) {
                Some(i) => {
                    self.attrs.remove(i);
                    true
                }
                None => false,
            },
            ContextItem::Intervention(e) => {
                if self.intervention.as_ref() == Some(e) {
                    self.intervention = None;
                    true
                } else {
                    false
                }
            }
        }
    }

    pub fn take_intervention(&mut self) -> Option<InterventionExpr> {
        self.intervention.take().map(|b| *b)
    }

    /// Items in canonical order: intervention, edges, attributions.
    pub fn items(&self) -> Vec<ContextItem> {
        let mut out = Vec::with_capacity(self.len());
        if let Some(e) = &self.intervention {
            out.push(ContextItem::Intervention(e.clone()));
        }
        out.extend(self.edges.iter().cloned().map(ContextItem::Edge));
        out.extend(self.attrs.iter().cloned().map(ContextItem::Attr));
        out
    }

    pub fn len(&self) -> usize {
        self.intervention.is_some() as usize + self.edges.len() + self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Union of two multisets; fails if both carry an intervention.
    pub fn union(&self, other: &Context) -> Result<Context, ModelError> {
        let mut out = self.clone();
        for item in other.items() {
            out.insert(item)?;
        }
        Ok(out)
    }

    fn sorted_attrs(&self) -> Vec<&Attribution> {
        let mut v: Vec<_> = self.attrs.iter().collect();
        v.sort();
        v
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.intervention == other.intervention
            && self.edges == other.edges
            && self.sorted_attrs() == other.sorted_attrs()
    }
}

impl Eq for Context {}

/// `Γ ⊢ t:β` with probability `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    context: Context,
    target: VariableId,
    value: ValueTerm,
    prob: Probability,
}

impl Judgment {
    pub fn new(
        context: Context,
        target: VariableId,
        value: ValueTerm,
        prob: Probability,
    ) -> Result<Self, ModelError> {
        if context.attrs.iter().any(|a| a.var == target) {
            return Err(ModelError::TargetInContext(target));
        }
        Ok(Judgment { context, target, value, prob })
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn target(&self) -> &VariableId {
        &self.target
    }

    pub fn value(&self) -> &ValueTerm {
        &self.value
    }

    pub fn prob(&self) -> &Probability {
        &self.prob
    }

    /// Same conclusion over a new context.
    pub fn with_context(&self, context: Context) -> Result<Judgment, ModelError> {
        Judgment::new(context, self.target.clone(), self.value.clone(), self.prob.clone())
    }

    pub fn with_prob(&self, prob: Probability) -> Judgment {
        Judgment { prob, ..self.clone() }
    }

    pub fn same_conclusion(&self, other: &Judgment) -> bool {
        self.target == other.target && self.value == other.value && self.prob == other.prob
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_judgment(self))
    }
}

impl fmt::Display for ContextItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_item(self))
    }
}

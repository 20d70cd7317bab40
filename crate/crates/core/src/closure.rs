//! Graph algorithms over causal graphs: cycle detection, the reflexive and
//! transitive closure with intermediate-cause witnesses, descendants, and the
//! graph side of an intervention.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::{CausalGraph, Edge, VariableId};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(VariableId),
}

/// `Ok` if the edge relation has no directed cycle, otherwise one cycle as a
/// closed node sequence (first node repeated at the end).
pub fn check_acyclic(
    nodes: &BTreeSet<VariableId>,
    edges: &BTreeSet<Edge>,
) -> Result<(), Vec<VariableId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }

    let mut succ: BTreeMap<&VariableId, Vec<&VariableId>> = BTreeMap::new();
    for e in edges {
        succ.entry(&e.from).or_default().push(&e.to);
    }
    let mut mark: BTreeMap<&VariableId, Mark> = nodes.iter().map(|n| (n, Mark::White)).collect();
    for e in edges {
        mark.entry(&e.from).or_insert(Mark::White);
        mark.entry(&e.to).or_insert(Mark::White);
    }
    let roots: Vec<&VariableId> = mark.keys().copied().collect();

    for root in roots {
        if mark[root] != Mark::White {
            continue;
        }
        // iterative DFS: (node, next successor index)
        let mut stack: Vec<(&VariableId, usize)> = vec![(root, 0)];
        mark.insert(root, Mark::Grey);
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            let next = succ.get(node).and_then(|s| s.get(*idx)).copied();
            *idx += 1;
            match next {
                Some(child) => match mark[child] {
                    Mark::White => {
                        mark.insert(child, Mark::Grey);
                        stack.push((child, 0));
                    }
                    Mark::Grey => {
                        let start = stack.iter().position(|(n, _)| *n == child).unwrap();
                        let mut cycle: Vec<VariableId> =
                            stack[start..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(child.clone());
                        return Err(cycle);
                    }
                    Mark::Black => {}
                },
                None => {
                    mark.insert(node, Mark::Black);
                    stack.pop();
                }
            }
        }
    }
    Ok(())
}

/// The mediate-cause relation `a ▷^M b`, closed under reflexivity.
///
/// For a non-reflexive pair the witness set `M` is the union of the nodes of
/// every `a → b` path, excluding `a` and including `b`. Reflexive entries carry
/// `{a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediateRelation {
    entries: BTreeMap<(VariableId, VariableId), BTreeSet<VariableId>>,
}

impl MediateRelation {
    pub fn witnesses(&self, from: &VariableId, to: &VariableId) -> Option<&BTreeSet<VariableId>> {
        self.entries.get(&(from.clone(), to.clone()))
    }

    pub fn contains(&self, from: &VariableId, to: &VariableId) -> bool {
        self.witnesses(from, to).is_some()
    }

    /// Entries sorted by `(from, to)`.
    pub fn entries(
        &self,
    ) -> impl Iterator<Item = (&VariableId, &VariableId, &BTreeSet<VariableId>)> {
        self.entries.iter().map(|((a, b), m)| (a, b, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every `v` with `(from, v, M)` in the relation.
    pub fn effects_of(&self, from: &VariableId) -> BTreeSet<VariableId> {
        self.entries
            .keys()
            .filter(|(a, _)| a == from)
            .map(|(_, b)| b.clone())
            .collect()
    }
}

fn reach(succ: &BTreeMap<&VariableId, Vec<&VariableId>>, start: &VariableId) -> BTreeSet<VariableId> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(n) = queue.pop_front() {
        for &m in succ.get(n).map(Vec::as_slice).unwrap_or_default() {
            if seen.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    seen
}

pub fn mediate_closure(g: &CausalGraph) -> MediateRelation {
    mediate_closure_with(g, Exec::default())
}

/// [`mediate_closure`] with an explicit execution strategy.
pub fn mediate_closure_with(g: &CausalGraph, exec: Exec) -> MediateRelation {
    let succ = g.successors();
    let mut pred: BTreeMap<&VariableId, Vec<&VariableId>> =
        g.nodes().iter().map(|n| (n, Vec::new())).collect();
    for e in g.edges() {
        pred.entry(&e.to).or_default().push(&e.from);
    }
    let nodes: Vec<&VariableId> = g.nodes().iter().collect();
    let ancestors: BTreeMap<&VariableId, BTreeSet<VariableId>> =
        nodes.iter().map(|n| (*n, reach(&pred, n))).collect();

    // per source: M(a, b) = (desc(a) \ {a}) ∩ anc(b)
    let rows = par::map(exec, &nodes, |a| {
        let desc = reach(&succ, a);
        desc.iter()
            .map(|b| {
                let m: BTreeSet<VariableId> = if b == *a {
                    BTreeSet::from([b.clone()])
                } else {
                    desc.iter()
                        .filter(|v| *v != *a && ancestors[b].contains(*v))
                        .cloned()
                        .collect()
                };
                (((*a).clone(), b.clone()), m)
            })
            .collect::<Vec<_>>()
    });
    MediateRelation { entries: rows.into_iter().flatten().collect() }
}

/// All effects of `a` (direct or mediate), including `a` itself.
pub fn descendants(g: &CausalGraph, a: &VariableId) -> Result<BTreeSet<VariableId>, ClosureError> {
    if !g.contains_node(a) {
        return Err(ClosureError::UnknownVariable(a.clone()));
    }
    Ok(reach(&g.successors(), a))
}

/// Removes every edge entering `a`.
pub fn intervene_graph(g: &CausalGraph, a: &VariableId) -> Result<CausalGraph, ClosureError> {
    if !g.contains_node(a) {
        return Err(ClosureError::UnknownVariable(a.clone()));
    }
    let edges = g.edges().iter().filter(|e| &e.to != a).cloned().collect();
    Ok(CausalGraph::from_parts_unchecked(g.nodes().clone(), edges))
}

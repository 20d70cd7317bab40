#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use cfproof::engine::Case;
use cfproof::model::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn fixture(name: &str) -> PathBuf {
    // resolves from either crate of the workspace
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn v(s: &str) -> VariableId {
    VariableId::new(s).unwrap()
}

pub fn atom(s: &str) -> ValueTerm {
    ValueTerm::atom(s).unwrap()
}

pub fn attr(var: &str, val: &str) -> Attribution {
    Attribution::new(v(var), atom(val))
}

/// Random DAG over `n` nodes named `N0..`; each forward pair (in a random
/// topological order) becomes an edge with probability `density`.
pub fn random_dag(n: usize, density: f64, rng: &mut StdRng) -> CausalGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push(Edge::new(v(&format!("N{}", order[i])), v(&format!("N{}", order[j]))));
            }
        }
    }
    CausalGraph::new((0..n).map(|i| v(&format!("N{i}"))), edges).unwrap()
}

pub fn dag_strategy() -> impl Strategy<Value = CausalGraph> {
    (1usize..=10, 0.0f64..=0.5, any::<u64>())
        .prop_map(|(n, d, seed)| random_dag(n, d, &mut StdRng::seed_from_u64(seed)))
}

/// Independent closure oracle: enumerate every simple path by DFS.
pub fn brute_force_closure(
    g: &CausalGraph,
) -> BTreeMap<(VariableId, VariableId), BTreeSet<VariableId>> {
    let mut succ: BTreeMap<&VariableId, Vec<&VariableId>> = BTreeMap::new();
    for e in g.edges() {
        succ.entry(&e.from).or_default().push(&e.to);
    }
    let mut out = BTreeMap::new();
    for a in g.nodes() {
        out.insert((a.clone(), a.clone()), BTreeSet::from([a.clone()]));
        let mut path = vec![a];
        walk(a, &succ, &mut path, &mut out);
    }
    out
}

fn walk<'g>(
    a: &'g VariableId,
    succ: &BTreeMap<&'g VariableId, Vec<&'g VariableId>>,
    path: &mut Vec<&'g VariableId>,
    out: &mut BTreeMap<(VariableId, VariableId), BTreeSet<VariableId>>,
) {
    let last = *path.last().unwrap();
    for &next in succ.get(last).into_iter().flatten() {
        if path.contains(&next) {
            continue;
        }
        path.push(next);
        let m = out.entry((a.clone(), next.clone())).or_default();
        m.extend(path[1..].iter().map(|x| (*x).clone()));
        walk(a, succ, path, out);
        path.pop();
    }
}

pub fn value_strategy() -> impl Strategy<Value = ValueTerm> {
    let leaf = prop::sample::select(vec!["a", "b", "c", "div", "65K", "x.y", "_z"]).prop_map(atom);
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(ValueTerm::complement),
            prop::collection::vec(inner, 2..4).prop_filter_map("distinct", |ms| ValueTerm::sum(ms).ok()),
        ]
    })
}

pub fn prob_strategy() -> impl Strategy<Value = Probability> {
    prop_oneof![
        (1u64..=40).prop_flat_map(|d| (0..=d, Just(d)))
            .prop_map(|(n, d)| Probability::from_ratio(n, d).unwrap()),
        (0u64..=1_000_000).prop_map(|n| Probability::from_ratio(n, 1_000_000).unwrap()),
    ]
}

/// A random well-formed case over a random DAG with at least two nodes.
pub fn random_case(rng: &mut StdRng, with_extras: bool) -> Case {
    let n = rng.gen_range(2..=10);
    let density = rng.gen_range(0.0..=0.5);
    let graph = random_dag(n, density, rng);
    let nodes: Vec<VariableId> = graph.nodes().iter().cloned().collect();
    let target = nodes.choose(rng).unwrap().clone();
    let others: Vec<_> = nodes.iter().filter(|x| **x != target).cloned().collect();
    let iv = others.choose(rng).unwrap().clone();
    let values = ["a", "b", "c", "1100", "65K"];
    let mut factual = Vec::new();
    for x in &others {
        if rng.gen_bool(0.7) {
            factual.push(Attribution::new(x.clone(), atom(values.choose(rng).unwrap())));
        }
    }
    let factual = DataPoint::new(factual).unwrap();
    let factual_prob = if with_extras && rng.gen_bool(0.5) {
        Some(Probability::from_ratio(rng.gen_range(0..=7), 7).unwrap())
    } else {
        None
    };
    let candidate_override = if with_extras && rng.gen_bool(0.3) {
        Some(DataPoint::new(vec![Attribution::new(iv.clone(), atom("z"))]).unwrap())
    } else {
        None
    };
    Case {
        graph,
        factual,
        factual_prob,
        intervention: Intervention::new(iv, atom(values.choose(rng).unwrap())).unwrap(),
        target,
        target_value: atom("yes"),
        candidate_override,
        candidate_edges: None,
    }
}

/// Answers every query with a fixed probability.
pub struct ConstOracle(pub Probability);

impl cfproof::oracle::ClassifierOracle for ConstOracle {
    fn query(
        &self,
        _: &cfproof::oracle::OracleQuery,
    ) -> Result<Probability, cfproof::oracle::OracleError> {
        Ok(self.0.clone())
    }
}

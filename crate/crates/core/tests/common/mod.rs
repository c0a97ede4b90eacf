//! Test-only helpers: a naive transcription of the local rule over
//! `BTreeSet`s and random small connected graphs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use naming_automata::dynamics::{AgentState, Configuration, Word};
use naming_automata::scheduling::{Sampling, SchemeSpec, SequentialOrder, SweepPlan};
use naming_automata::Graph;
use rand::Rng;

/// Plain population state: explicit sets, no caches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveState {
    pub memory: Vec<BTreeSet<u32>>,
    pub conveyed: Vec<u32>,
    pub adjacency: Vec<BTreeSet<usize>>,
}

impl NaiveState {
    pub fn from_configuration(cfg: &Configuration, graph: &Graph) -> Self {
        let mut adjacency = vec![BTreeSet::new(); graph.vertex_count()];
        for (u, v) in graph.edges() {
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        NaiveState {
            memory: cfg
                .states()
                .iter()
                .map(|s| s.memory().iter().map(|w| w.0).collect())
                .collect(),
            conveyed: cfg.states().iter().map(|s| s.conveyed().0).collect(),
            adjacency,
        }
    }

    /// `f_u` written out with explicit set operations.
    pub fn rule(&self, u: usize) -> (BTreeSet<u32>, u32) {
        let heard: BTreeSet<u32> = self.adjacency[u]
            .iter()
            .map(|&v| self.conveyed[v])
            .collect();
        let known: BTreeSet<u32> = heard.intersection(&self.memory[u]).copied().collect();
        let unknown: BTreeSet<u32> = heard.difference(&self.memory[u]).copied().collect();
        if !unknown.is_empty() {
            (
                self.memory[u].union(&unknown).copied().collect(),
                self.conveyed[u],
            )
        } else {
            let m = *known.iter().next().expect("nonempty neighborhood");
            (BTreeSet::from([m]), m)
        }
    }

    pub fn execute(&mut self, plan: &SweepPlan) {
        for batch in plan.batches() {
            let updates: Vec<_> = batch.iter().map(|&u| (u, self.rule(u))).collect();
            for (u, (m, x)) in updates {
                self.memory[u] = m;
                self.conveyed[u] = x;
            }
        }
    }

    pub fn matches(&self, cfg: &Configuration) -> bool {
        cfg.states().iter().enumerate().all(|(u, s)| {
            s.conveyed().0 == self.conveyed[u]
                && s.memory()
                    .iter()
                    .map(|w| w.0)
                    .eq(self.memory[u].iter().copied())
        })
    }
}

/// Random connected simple graph: a random tree plus extra random edges.
pub fn random_connected_graph(n: usize, extra_edges: usize, rng: &mut impl Rng) -> Graph {
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..extra_edges {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::from_edges(n, &edges).expect("tree plus edges is connected and simple")
}

/// Random configuration over `inventory` words with random memories.
pub fn random_configuration(n: usize, inventory: usize, rng: &mut impl Rng) -> Configuration {
    let states = (0..n)
        .map(|_| {
            let conveyed = Word(rng.gen_range(0..inventory as u32));
            let extra = (0..inventory as u32)
                .filter(|_| rng.gen_bool(0.3))
                .map(Word);
            AgentState::new(extra.chain([conveyed]), conveyed).unwrap()
        })
        .collect();
    Configuration::from_states(states, inventory).unwrap()
}

/// Every state `(M, x)` with `M ⊆ {0..inventory}` nonempty and `x ∈ M`.
pub fn all_states(inventory: u32) -> Vec<AgentState> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << inventory) {
        let memory: Vec<Word> = (0..inventory)
            .filter(|w| mask & (1 << w) != 0)
            .map(Word)
            .collect();
        for &x in &memory {
            out.push(AgentState::new(memory.iter().copied(), x).unwrap());
        }
    }
    out
}

/// Every scheme variant exercised by the property suites.
pub fn all_schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::Sequential(SequentialOrder::Raster),
        SchemeSpec::Sequential(SequentialOrder::Random),
        SchemeSpec::FullyAsync(Sampling::WithReplacement),
        SchemeSpec::FullyAsync(Sampling::Permutation),
        SchemeSpec::Synchronous,
        SchemeSpec::AlphaAsync(0.1),
        SchemeSpec::AlphaAsync(0.5),
        SchemeSpec::AlphaAsync(1.0),
    ]
}

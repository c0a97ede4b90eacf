//! Sweep execution, observables and run orchestration.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dynamics::{self, apply_local_rule, AgentState, Configuration, Word};
use crate::error::{Error, Result};
use crate::scheduling::{self, plan_sweep, SchemeSpec, SweepPlan, UpdateScheme};
use crate::topology::Graph;

/// Simultaneous batches at least this large are evaluated in parallel.
const PARALLEL_BATCH: usize = 4096;

/// Applies `plan` to `cfg`.
///
/// Each batch is evaluated against the configuration as it stood before the
/// batch and committed as a whole before the next batch starts.
pub fn execute_sweep(cfg: &mut Configuration, graph: &Graph, plan: &SweepPlan) {
    if plan.is_one_by_one() {
        for &u in plan.vertices() {
            let next = apply_local_rule(cfg, graph, u);
            cfg.commit(u, next);
        }
        return;
    }
    for batch in plan.batches() {
        let frozen = &*cfg;
        let next: Vec<AgentState> = if batch.len() >= PARALLEL_BATCH {
            batch
                .par_iter()
                .map(|&u| apply_local_rule(frozen, graph, u))
                .collect()
        } else {
            batch
                .iter()
                .map(|&u| apply_local_rule(frozen, graph, u))
                .collect()
        };
        for (&u, s) in batch.iter().zip(next) {
            cfg.commit(u, s);
        }
    }
}

/// `n_w(t)`, the total number of words in all memories.
pub fn n_words(cfg: &Configuration) -> usize {
    cfg.word_total()
}

/// `n_d(t)`, the number of distinct words in the union of all memories.
pub fn n_different(cfg: &Configuration) -> usize {
    cfg.distinct_words()
}

/// Finds the first repeated fingerprint in `history`.
///
/// Returns `(start, period)` where `history[start] == history[start + period]`
/// and `start + period` is the earliest index equal to some earlier entry.
/// Fingerprints only nominate candidates; callers confirm them on full state.
pub fn detect_cycle(history: &[u64]) -> Option<(usize, usize)> {
    let mut detector = CycleDetector::default();
    history
        .iter()
        .enumerate()
        .find_map(|(t, &fp)| detector.observe(t as u64, fp).first().map(|&s| (s, t)))
        .map(|(start, t)| (start as usize, t - start as usize))
}

/// Incremental fingerprint map for cycle detection.
#[derive(Debug, Default, Clone)]
pub struct CycleDetector {
    seen: HashMap<u64, Vec<u64>>,
}

impl CycleDetector {
    /// Records the fingerprint of sweep `t` and returns earlier sweeps with
    /// the same fingerprint, oldest first.
    pub fn observe(&mut self, t: u64, fingerprint: u64) -> Vec<u64> {
        let entry = self.seen.entry(fingerprint).or_default();
        let earlier = entry.clone();
        entry.push(t);
        earlier
    }
}

/// Where the initial words go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Seed-derived uniformly random permutation of `0..n`.
    #[default]
    Random,
    /// Vertex `u` starts with word `u`.
    Identity,
    /// Every vertex starts with the same word (already at consensus).
    Uniform(Word),
}

impl Placement {
    pub fn initial_configuration(&self, graph: &Graph, seed: u64) -> Result<Configuration> {
        let n = graph.vertex_count();
        match self {
            Placement::Random => {
                let mut rng = scheduling::stream_rng(seed, scheduling::PLACEMENT_STREAM);
                dynamics::init_configuration(graph, &scheduling::random_permutation(n, &mut rng))
            }
            Placement::Identity => dynamics::init_configuration(graph, &(0..n).collect::<Vec<_>>()),
            Placement::Uniform(w) => Ok(Configuration::uniform(n, *w)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub scheme: SchemeSpec,
    pub seed: u64,
    pub max_sweeps: u64,
    pub stop_on_consensus: bool,
    pub record_every: u64,
    pub placement: Placement,
    /// Recompute observables from scratch after every sweep and panic on mismatch.
    pub verify_caches: bool,
}

impl RunParams {
    pub fn new(scheme: SchemeSpec) -> Self {
        RunParams {
            scheme,
            seed: 0,
            max_sweeps: 1000,
            stop_on_consensus: true,
            record_every: 1,
            placement: Placement::Random,
            verify_caches: false,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_sweeps(mut self, max_sweeps: u64) -> Self {
        self.max_sweeps = max_sweeps;
        self
    }

    pub fn stop_on_consensus(mut self, stop: bool) -> Self {
        self.stop_on_consensus = stop;
        self
    }

    pub fn record_every(mut self, every: u64) -> Self {
        self.record_every = every;
        self
    }

    pub fn placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    pub fn verify_caches(mut self, verify: bool) -> Self {
        self.verify_caches = verify;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::InvalidParameter(
                "max_sweeps must be at least 1".into(),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter(
                "record_every must be at least 1".into(),
            ));
        }
        if let Some(a) = self.scheme.alpha() {
            SchemeSpec::alpha_async(a)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sample {
    pub t: u64,
    pub n_w: usize,
    pub n_d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimeSeries {
    pub n: usize,
    pub rows: Vec<Sample>,
}

impl TimeSeries {
    /// Row with the largest `n_w` (earliest on ties).
    pub fn peak(&self) -> Option<Sample> {
        self.rows
            .iter()
            .copied()
            .reduce(|best, s| if s.n_w > best.n_w { s } else { best })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Every vertex holds the same single word.
    Consensus,
    /// The configuration at `start + period` equals the one at `start`.
    CycleDetected {
        start: u64,
        period: u64,
    },
    SweepBudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminationReport {
    pub reason: Termination,
    pub final_sweep: u64,
    pub consensus_word: Option<Word>,
}

/// A single run in progress.
///
/// Owns the configuration and advances it one sweep at a time; [`run`] drives
/// it to termination.
#[derive(Debug, Clone)]
pub struct Simulation<'g> {
    graph: &'g Graph,
    scheme: UpdateScheme,
    seed: u64,
    sweep: u64,
    cfg: Configuration,
}

impl<'g> Simulation<'g> {
    pub fn new(graph: &'g Graph, params: &RunParams) -> Result<Self> {
        params.validate()?;
        let cfg = params.placement.initial_configuration(graph, params.seed)?;
        let scheme = params.scheme.resolve(graph.vertex_count(), params.seed);
        Simulation::from_configuration(graph, scheme, params.seed, cfg)
    }

    pub fn from_configuration(
        graph: &'g Graph,
        scheme: UpdateScheme,
        seed: u64,
        cfg: Configuration,
    ) -> Result<Self> {
        if cfg.len() != graph.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "configuration has {} states but the graph has {} vertices",
                cfg.len(),
                graph.vertex_count()
            )));
        }
        scheme.validate(graph.vertex_count())?;
        Ok(Simulation {
            graph,
            scheme,
            seed,
            sweep: 0,
            cfg,
        })
    }

    pub fn configuration(&self) -> &Configuration {
        &self.cfg
    }

    pub fn scheme(&self) -> &UpdateScheme {
        &self.scheme
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    /// Number of completed sweeps.
    pub fn sweep(&self) -> u64 {
        self.sweep
    }

    /// Plan for the next sweep.
    pub fn next_plan(&self) -> SweepPlan {
        let mut rng = scheduling::sweep_rng(self.seed, self.sweep);
        plan_sweep(&self.scheme, self.graph.vertex_count(), &mut rng)
    }

    pub fn step(&mut self) {
        let plan = self.next_plan();
        execute_sweep(&mut self.cfg, self.graph, &plan);
        self.sweep += 1;
    }

    pub fn sample(&self) -> Sample {
        Sample {
            t: self.sweep,
            n_w: n_words(&self.cfg),
            n_d: n_different(&self.cfg),
        }
    }
}

/// Runs one simulation to consensus, an exact cycle, or the sweep budget.
pub fn run(graph: &Graph, params: &RunParams) -> Result<(TimeSeries, TerminationReport)> {
    let mut sim = Simulation::new(graph, params)?;
    let initial = sim.cfg.clone();
    let detect_cycles = sim.scheme.is_deterministic();
    let mut detector = CycleDetector::default();
    let mut series = TimeSeries {
        n: graph.vertex_count(),
        rows: vec![sim.sample()],
    };

    loop {
        let t = sim.sweep;
        let mut reason = None;
        let mut consensus_word = None;

        if params.verify_caches {
            assert!(
                sim.cfg.caches_coherent(),
                "observable caches diverged at sweep {t}"
            );
        }
        if params.stop_on_consensus {
            consensus_word = sim.cfg.consensus_word();
            if consensus_word.is_some() {
                debug_assert!(dynamics::is_fixed_point(&sim.cfg, graph));
                reason = Some(Termination::Consensus);
            }
        }
        if reason.is_none() && detect_cycles {
            let candidates = detector.observe(t, sim.cfg.fingerprint());
            for start in candidates {
                if replay(graph, &sim.scheme, params.seed, &initial, start) == sim.cfg {
                    reason = Some(Termination::CycleDetected {
                        start,
                        period: t - start,
                    });
                    break;
                }
                log::debug!("fingerprint collision between sweeps {start} and {t}");
            }
        }
        if reason.is_none() && t >= params.max_sweeps {
            reason = Some(Termination::SweepBudgetExhausted);
        }

        if let Some(reason) = reason {
            if series.rows.last().map(|r| r.t) != Some(t) {
                series.rows.push(sim.sample());
            }
            return Ok((
                series,
                TerminationReport {
                    reason,
                    final_sweep: t,
                    consensus_word,
                },
            ));
        }

        sim.step();
        if sim.sweep % params.record_every == 0 {
            series.rows.push(sim.sample());
        }
    }
}

/// Configuration after `sweeps` sweeps from `initial`.
fn replay(
    graph: &Graph,
    scheme: &UpdateScheme,
    seed: u64,
    initial: &Configuration,
    sweeps: u64,
) -> Configuration {
    let mut sim = Simulation {
        graph,
        scheme: scheme.clone(),
        seed,
        sweep: 0,
        cfg: initial.clone(),
    };
    for _ in 0..sweeps {
        sim.step();
    }
    sim.cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduling::SequentialOrder;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn synchronous_sweep_on_path() {
        let g = path(4);
        let mut cfg = dynamics::init_configuration(&g, &[0, 1, 2, 3]).unwrap();
        execute_sweep(&mut cfg, &g, &SweepPlan::simultaneous(vec![0, 1, 2, 3]));
        assert_eq!(n_words(&cfg), 10);
        let conveyed: Vec<u32> = cfg.states().iter().map(|s| s.conveyed().0).collect();
        assert_eq!(conveyed, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sequential_sweep_sees_earlier_commits() {
        let g = path(2);
        let mut cfg = dynamics::init_configuration(&g, &[0, 1]).unwrap();
        execute_sweep(&mut cfg, &g, &SweepPlan::one_by_one(vec![0, 1]));
        assert_eq!(
            cfg.state(0),
            &AgentState::new([Word(0), Word(1)], Word(0)).unwrap()
        );
        assert_eq!(
            cfg.state(1),
            &AgentState::new([Word(0), Word(1)], Word(1)).unwrap()
        );
        assert_eq!(n_words(&cfg), 4);
    }

    #[test]
    fn sweeps_leave_consensus_alone() {
        let g = Graph::periodic_lattice(5).unwrap();
        let mut cfg = Configuration::uniform(25, Word(3));
        let before = cfg.clone();
        execute_sweep(&mut cfg, &g, &SweepPlan::simultaneous((0..25).collect()));
        execute_sweep(
            &mut cfg,
            &g,
            &SweepPlan::one_by_one((0..25).rev().collect()),
        );
        assert_eq!(cfg, before);
        assert_eq!(n_words(&cfg), 25);
        assert_eq!(n_different(&cfg), 1);
    }

    #[test]
    fn two_mixed_words() {
        let g = path(3);
        let cfg = Configuration::from_states(
            vec![
                AgentState::singleton(Word(0)),
                AgentState::new([Word(0), Word(1)], Word(1)).unwrap(),
                AgentState::singleton(Word(1)),
            ],
            2,
        )
        .unwrap();
        assert_eq!(n_different(&cfg), 2);
        assert!(!dynamics::is_fixed_point(&cfg, &g));
    }

    #[test]
    fn two_vertex_sequential_run() {
        let g = path(2);
        // The survivor is the word vertex 1 started with, not necessarily the
        // smaller one: in sweep 2 both vertices collapse onto what vertex 1 conveys.
        for seed in 0..20 {
            let params = RunParams::new(SchemeSpec::Sequential(SequentialOrder::Raster)).seed(seed);
            let initial = params.placement.initial_configuration(&g, seed).unwrap();
            let (series, report) = run(&g, &params).unwrap();
            assert_eq!(report.reason, Termination::Consensus);
            assert_eq!(report.consensus_word, Some(initial.state(1).conveyed()));
            assert_eq!(report.final_sweep, 2);
            assert_eq!(series.rows[0].n_w, 2);
            assert_eq!(series.rows.last().unwrap().n_d, 1);
        }
    }

    #[test]
    fn already_at_consensus() {
        let g = Graph::periodic_lattice(4).unwrap();
        for scheme in [
            "sequential",
            "fully-async",
            "synchronous",
            "alpha-async:0.5",
        ] {
            let params =
                RunParams::new(scheme.parse().unwrap()).placement(Placement::Uniform(Word(0)));
            let (series, report) = run(&g, &params).unwrap();
            assert_eq!(report.reason, Termination::Consensus);
            assert_eq!(report.final_sweep, 0);
            assert_eq!(series.rows.len(), 1);
        }
    }

    #[test]
    fn budget_exhaustion_is_a_report() {
        let g = Graph::periodic_lattice(16).unwrap();
        let params = RunParams::new(SchemeSpec::FullyAsync(Default::default())).max_sweeps(3);
        let (series, report) = run(&g, &params).unwrap();
        assert_eq!(report.reason, Termination::SweepBudgetExhausted);
        assert_eq!(report.final_sweep, 3);
        assert_eq!(
            series.rows.iter().map(|r| r.t).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn record_every_keeps_the_final_row() {
        let g = Graph::periodic_lattice(8).unwrap();
        let params = RunParams::new(SchemeSpec::FullyAsync(Default::default()))
            .max_sweeps(7)
            .record_every(3);
        let (series, _) = run(&g, &params).unwrap();
        assert_eq!(
            series.rows.iter().map(|r| r.t).collect::<Vec<_>>(),
            vec![0, 3, 6, 7]
        );
    }

    #[test]
    fn invalid_params() {
        let g = path(2);
        assert!(run(&g, &RunParams::new(SchemeSpec::Synchronous).max_sweeps(0)).is_err());
        assert!(run(&g, &RunParams::new(SchemeSpec::Synchronous).record_every(0)).is_err());
        assert!(run(&g, &RunParams::new(SchemeSpec::AlphaAsync(2.0))).is_err());
    }

    #[test]
    fn detect_cycle_on_fingerprints() {
        assert_eq!(detect_cycle(&[7, 7, 7]), Some((0, 1)));
        assert_eq!(detect_cycle(&[1, 2, 1, 2]), Some((0, 2)));
        assert_eq!(detect_cycle(&[5, 1, 2, 3, 1]), Some((1, 3)));
        assert_eq!(detect_cycle(&[1, 2, 3]), None);
        assert_eq!(detect_cycle(&[]), None);
    }
}

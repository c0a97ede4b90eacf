//! Agent states and the addition/collapse local rule.
//!
//! A vertex `u` hears the words `W_u` conveyed by its neighbors and splits
//! them into the known ones `B_u` (already in its memory) and the unknown ones
//! `N_u`. If `N_u` is nonempty the vertex adds them to its memory and keeps
//! conveying the same word. Otherwise it collapses its memory onto the
//! smallest heard word and starts conveying it. All agents share the integer
//! order on word ids.
//!
//! Evaluation ([`apply_local_rule`]) never mutates the configuration; the
//! result is written back with [`Configuration::commit`]. The two-step shape
//! lets one kernel serve read-after-commit (one-by-one) and
//! read-before-commit (synchronous) schemes.

use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub u32);

impl Word {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sorted, duplicate-free set of words.
///
/// Memories stay close to degree + 1 on lattices, so a sorted inline vector
/// beats both hashing and a dense bitmap over the whole inventory.
pub type WordSet = SmallVec<[Word; 6]>;

/// State `(M_u, x_u)` of one agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentState {
    memory: WordSet,
    conveyed: Word,
}

impl AgentState {
    pub fn singleton(word: Word) -> Self {
        let mut memory = WordSet::new();
        memory.push(word);
        AgentState {
            memory,
            conveyed: word,
        }
    }

    /// Builds a state from any collection of words; fails if the conveyed
    /// word is not part of the memory.
    pub fn new(memory: impl IntoIterator<Item = Word>, conveyed: Word) -> Result<Self> {
        let mut memory: WordSet = memory.into_iter().collect();
        memory.sort_unstable();
        memory.dedup();
        if memory.binary_search(&conveyed).is_err() {
            return Err(Error::ConveyedNotInMemory(conveyed.0));
        }
        Ok(AgentState { memory, conveyed })
    }

    #[inline]
    pub fn memory(&self) -> &[Word] {
        &self.memory
    }

    #[inline]
    pub fn conveyed(&self) -> Word {
        self.conveyed
    }

    #[inline]
    pub fn knows(&self, word: Word) -> bool {
        self.memory.binary_search(&word).is_ok()
    }

    pub fn is_singleton(&self) -> bool {
        self.memory.len() == 1
    }
}

/// Population state `X(t)` with cached aggregate observables.
#[derive(Debug, Clone)]
pub struct Configuration {
    states: Vec<AgentState>,
    inventory: usize,
    word_total: usize,
    union_counts: Vec<u32>,
    distinct: usize,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
    }
}

impl Eq for Configuration {}

impl Configuration {
    /// Builds a configuration over an inventory of `inventory` words
    /// (ids `0..inventory`), validating every state.
    pub fn from_states(states: Vec<AgentState>, inventory: usize) -> Result<Self> {
        let mut union_counts = vec![0u32; inventory];
        let mut word_total = 0;
        for (vertex, s) in states.iter().enumerate() {
            if s.memory.is_empty() {
                return Err(Error::InvalidState {
                    vertex,
                    reason: "empty memory".into(),
                });
            }
            for w in &s.memory {
                if w.index() >= inventory {
                    return Err(Error::InvalidState {
                        vertex,
                        reason: format!("word {w} outside inventory of {inventory} words"),
                    });
                }
                union_counts[w.index()] += 1;
            }
            word_total += s.memory.len();
        }
        let distinct = union_counts.iter().filter(|&&c| c > 0).count();
        Ok(Configuration {
            states,
            inventory,
            word_total,
            union_counts,
            distinct,
        })
    }

    /// Every vertex holds the same single word.
    pub fn uniform(n: usize, word: Word) -> Self {
        let states = vec![AgentState::singleton(word); n];
        Configuration::from_states(states, word.index() + 1)
            .expect("uniform configuration is valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Size `p` of the word inventory.
    pub fn inventory(&self) -> usize {
        self.inventory
    }

    #[inline]
    pub fn state(&self, u: usize) -> &AgentState {
        &self.states[u]
    }

    pub fn states(&self) -> &[AgentState] {
        &self.states
    }

    /// `n_w`: total number of words over all memories.
    #[inline]
    pub fn word_total(&self) -> usize {
        self.word_total
    }

    /// `n_d`: number of distinct words in the union of all memories.
    #[inline]
    pub fn distinct_words(&self) -> usize {
        self.distinct
    }

    /// Number of memories containing `word`.
    pub fn support(&self, word: Word) -> u32 {
        self.union_counts.get(word.index()).copied().unwrap_or(0)
    }

    /// Replaces the state of `u`, updating the cached counters by the exact delta.
    pub fn commit(&mut self, u: usize, state: AgentState) {
        debug_assert!(state.knows(state.conveyed));
        let old = std::mem::replace(&mut self.states[u], state);
        let new = &self.states[u].memory;
        self.word_total = self.word_total + new.len() - old.memory.len();

        // merge-diff of two sorted sets
        let (mut i, mut j) = (0, 0);
        while i < old.memory.len() || j < new.len() {
            match (old.memory.get(i), new.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    Self::decrement(&mut self.union_counts, &mut self.distinct, *a);
                    i += 1;
                }
                (Some(a), None) => {
                    Self::decrement(&mut self.union_counts, &mut self.distinct, *a);
                    i += 1;
                }
                (_, Some(b)) => {
                    let c = &mut self.union_counts[b.index()];
                    if *c == 0 {
                        self.distinct += 1;
                    }
                    *c += 1;
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }

    fn decrement(counts: &mut [u32], distinct: &mut usize, w: Word) {
        let c = &mut counts[w.index()];
        *c -= 1;
        if *c == 0 {
            *distinct -= 1;
        }
    }

    /// Recomputes the cached observables from scratch and compares them with
    /// the incrementally maintained ones.
    pub fn caches_coherent(&self) -> bool {
        match Configuration::from_states(self.states.clone(), self.inventory) {
            Ok(fresh) => {
                fresh.word_total == self.word_total
                    && fresh.union_counts == self.union_counts
                    && fresh.distinct == self.distinct
            }
            Err(_) => false,
        }
    }

    /// The common word if every vertex is in state `({w}, w)`.
    pub fn consensus_word(&self) -> Option<Word> {
        if self.distinct != 1 || self.word_total != self.states.len() {
            return None;
        }
        let w = self.states.first()?.conveyed;
        self.states
            .iter()
            .all(|s| s.conveyed == w && s.is_singleton())
            .then_some(w)
    }

    /// Set of words currently conveyed by at least one vertex, sorted.
    pub fn conveyed_words(&self) -> Vec<Word> {
        let mut words: Vec<Word> = self.states.iter().map(|s| s.conveyed).collect();
        words.sort_unstable();
        words.dedup();
        words
    }

    /// 64-bit hash of all (memory, conveyed) pairs in vertex order.
    pub fn fingerprint(&self) -> u64 {
        // SipHash with fixed zero keys: stable across runs of one build.
        #[allow(deprecated)]
        let mut hasher = std::hash::SipHasher::new();
        self.states.len().hash(&mut hasher);
        for s in &self.states {
            s.hash(&mut hasher);
        }
        hasher.finish()
    }
}

/// Initial condition where vertex `u` is `({assignment[u]}, assignment[u])`.
///
/// `assignment` must be a permutation of `0..n`, so the inventory has exactly
/// `n` words and `n_w(0) = n_d(0) = n`.
pub fn init_configuration(graph: &Graph, assignment: &[usize]) -> Result<Configuration> {
    let n = graph.vertex_count();
    if assignment.len() != n {
        return Err(Error::NotAPermutation {
            n,
            reason: format!("expected {n} entries, got {}", assignment.len()),
        });
    }
    let mut seen = vec![false; n];
    for (u, &w) in assignment.iter().enumerate() {
        if w >= n {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("vertex {u} is assigned word {w}"),
            });
        }
        if std::mem::replace(&mut seen[w], true) {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("word {w} is assigned twice"),
            });
        }
    }
    let states = assignment
        .iter()
        .map(|&w| AgentState::singleton(Word(w as u32)))
        .collect();
    Configuration::from_states(states, n)
}

/// Splits the heard words `W_u` into known `B_u` and unknown `N_u`, both sorted.
pub fn split_conveyed(cfg: &Configuration, graph: &Graph, u: usize) -> Result<(WordSet, WordSet)> {
    let neighbors = graph.neighborhood(u)?;
    let state = cfg.state(u);
    let mut known = WordSet::new();
    let mut unknown = WordSet::new();
    for &v in neighbors {
        let w = cfg.state(v).conveyed;
        let bucket = if state.knows(w) {
            &mut known
        } else {
            &mut unknown
        };
        if let Err(pos) = bucket.binary_search(&w) {
            bucket.insert(pos, w);
        }
    }
    Ok((known, unknown))
}

/// Evaluates the local rule at `u` against the current configuration.
///
/// Returns `(M_u ∪ N_u, x_u)` when some heard word is unknown and
/// `({min B_u}, min B_u)` otherwise. `u` must be a valid vertex.
#[inline]
pub fn apply_local_rule(cfg: &Configuration, graph: &Graph, u: usize) -> AgentState {
    let state = cfg.state(u);
    let mut unknown: SmallVec<[Word; 8]> = SmallVec::new();
    let mut min_heard = Word(u32::MAX);
    for &v in graph.neighbors(u) {
        let w = cfg.state(v).conveyed;
        min_heard = min_heard.min(w);
        if !state.knows(w) && !unknown.contains(&w) {
            unknown.push(w);
        }
    }
    if unknown.is_empty() {
        return AgentState::singleton(min_heard);
    }
    unknown.sort_unstable();
    let mut memory = WordSet::with_capacity(state.memory.len() + unknown.len());
    let (mut i, mut j) = (0, 0);
    while i < state.memory.len() && j < unknown.len() {
        if state.memory[i] < unknown[j] {
            memory.push(state.memory[i]);
            i += 1;
        } else {
            memory.push(unknown[j]);
            j += 1;
        }
    }
    memory.extend_from_slice(&state.memory[i..]);
    memory.extend_from_slice(&unknown[j..]);
    AgentState {
        memory,
        conveyed: state.conveyed,
    }
}

/// True iff no vertex would change state under its local rule.
pub fn is_fixed_point(cfg: &Configuration, graph: &Graph) -> bool {
    (0..cfg.len()).all(|u| apply_local_rule(cfg, graph, u) == *cfg.state(u))
}

//! Updating schemes and sweep plans.
//!
//! A sweep is the unit of simulated time. For the one-by-one schemes
//! (sequential, fully asynchronous) it is `n` single-vertex updates, each
//! seeing every earlier commit. For the synchronous and α-asynchronous
//! schemes it is one batch whose members all read the configuration as it
//! was before the batch.
//!
//! Randomness comes from ChaCha8 streams keyed by `(seed, stream)`, so the
//! plan of sweep `k` depends only on the run seed and `k`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Stream used for the initial word placement.
pub const PLACEMENT_STREAM: u64 = 0;
/// Stream used for the fixed permutation of a random-order sequential run.
pub const ORDER_STREAM: u64 = 1;
const FIRST_SWEEP_STREAM: u64 = 2;

/// Random stream `stream` of run `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random stream dedicated to sweep `sweep` of run `seed`.
pub fn sweep_rng(seed: u64, sweep: u64) -> ChaCha8Rng {
    stream_rng(seed, FIRST_SWEEP_STREAM + sweep)
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SequentialOrder {
    /// Ascending vertex id (row-major on lattices).
    #[default]
    Raster,
    /// A permutation drawn once per run from the run seed.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// `n` independent uniform picks per sweep.
    #[default]
    WithReplacement,
    /// A fresh random permutation of all vertices per sweep.
    Permutation,
}

/// Scheme as chosen by the user, before it is bound to a graph and a seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    Sequential(SequentialOrder),
    FullyAsync(Sampling),
    Synchronous,
    AlphaAsync(f64),
}

impl SchemeSpec {
    pub fn alpha_async(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(SchemeSpec::AlphaAsync(alpha))
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            SchemeSpec::AlphaAsync(a) => Some(*a),
            _ => None,
        }
    }

    /// Binds the scheme to `n` vertices; a random sequential order is drawn
    /// from the run seed.
    pub fn resolve(&self, n: usize, seed: u64) -> UpdateScheme {
        match *self {
            SchemeSpec::Sequential(SequentialOrder::Raster) => {
                UpdateScheme::Sequential((0..n).collect())
            }
            SchemeSpec::Sequential(SequentialOrder::Random) => {
                let mut rng = stream_rng(seed, ORDER_STREAM);
                UpdateScheme::Sequential(random_permutation(n, &mut rng))
            }
            SchemeSpec::FullyAsync(sampling) => UpdateScheme::FullyAsynchronous(sampling),
            SchemeSpec::Synchronous => UpdateScheme::Synchronous,
            SchemeSpec::AlphaAsync(alpha) => UpdateScheme::AlphaAsynchronous(alpha),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(SchemeSpec::Sequential(SequentialOrder::Raster)),
            "fully-async" => Ok(SchemeSpec::FullyAsync(Sampling::WithReplacement)),
            "synchronous" => Ok(SchemeSpec::Synchronous),
            _ => {
                let alpha = s
                    .strip_prefix("alpha-async:")
                    .ok_or_else(|| Error::UnknownScheme(s.to_string()))?;
                let alpha: f64 = alpha
                    .parse()
                    .map_err(|_| Error::UnknownScheme(s.to_string()))?;
                SchemeSpec::alpha_async(alpha)
            }
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeSpec::Sequential(_) => write!(f, "sequential"),
            SchemeSpec::FullyAsync(_) => write!(f, "fully-async"),
            SchemeSpec::Synchronous => write!(f, "synchronous"),
            SchemeSpec::AlphaAsync(a) => write!(f, "alpha-async:{a}"),
        }
    }
}

/// Updating scheme bound to a vertex count.
#[derive(Debug, Clone, PartialEq)]
pub enum UpdateScheme {
    /// One by one, following a permutation fixed for the whole run.
    Sequential(Vec<usize>),
    FullyAsynchronous(Sampling),
    Synchronous,
    /// Each vertex joins the sweep's batch independently with probability α.
    AlphaAsynchronous(f64),
}

impl UpdateScheme {
    /// Whether successive sweeps apply the same deterministic map.
    /// α-asynchronous with α = 1 is the synchronous scheme.
    pub fn is_deterministic(&self) -> bool {
        match self {
            UpdateScheme::Sequential(_) | UpdateScheme::Synchronous => true,
            UpdateScheme::AlphaAsynchronous(a) => *a >= 1.0,
            UpdateScheme::FullyAsynchronous(_) => false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            UpdateScheme::Sequential(order) => {
                let mut seen = vec![false; n];
                let ok = order.len() == n
                    && order
                        .iter()
                        .all(|&u| u < n && !std::mem::replace(&mut seen[u], true));
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(
                        "sequential order is not a permutation of the vertices".into(),
                    ))
                }
            }
            UpdateScheme::AlphaAsynchronous(a) => check_alpha(*a),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// Every vertex is its own batch.
    OneByOne,
    /// All vertices form a single batch.
    Simultaneous,
}

/// Ordered vertex batches for one sweep.
///
/// Vertices within a batch read the configuration as it was before the
/// batch; commits from earlier batches are visible to later ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPlan {
    vertices: Vec<usize>,
    layout: Layout,
}

impl SweepPlan {
    pub fn one_by_one(vertices: Vec<usize>) -> Self {
        SweepPlan {
            vertices,
            layout: Layout::OneByOne,
        }
    }

    pub fn simultaneous(vertices: Vec<usize>) -> Self {
        SweepPlan {
            vertices,
            layout: Layout::Simultaneous,
        }
    }

    pub fn batches(&self) -> Box<dyn Iterator<Item = &[usize]> + '_> {
        match self.layout {
            Layout::OneByOne => Box::new(self.vertices.chunks(1)),
            Layout::Simultaneous if self.vertices.is_empty() => Box::new(std::iter::empty()),
            Layout::Simultaneous => Box::new(std::iter::once(self.vertices.as_slice())),
        }
    }

    pub fn to_batches(&self) -> Vec<Vec<usize>> {
        self.batches().map(<[usize]>::to_vec).collect()
    }

    pub fn is_one_by_one(&self) -> bool {
        self.layout == Layout::OneByOne
    }

    /// All scheduled vertex updates in order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn update_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Plans one sweep of `scheme` over `n` vertices.
///
/// Sequential and synchronous plans never touch `rng`.
pub fn plan_sweep(scheme: &UpdateScheme, n: usize, rng: &mut impl Rng) -> SweepPlan {
    match scheme {
        UpdateScheme::Sequential(order) => SweepPlan::one_by_one(order.clone()),
        UpdateScheme::FullyAsynchronous(Sampling::WithReplacement) => {
            SweepPlan::one_by_one((0..n).map(|_| rng.gen_range(0..n)).collect())
        }
        UpdateScheme::FullyAsynchronous(Sampling::Permutation) => {
            SweepPlan::one_by_one(random_permutation(n, rng))
        }
        UpdateScheme::Synchronous => SweepPlan::simultaneous((0..n).collect()),
        UpdateScheme::AlphaAsynchronous(alpha) => {
            let alpha = *alpha;
            SweepPlan::simultaneous((0..n).filter(|_| rng.gen::<f64>() < alpha).collect())
        }
    }
}

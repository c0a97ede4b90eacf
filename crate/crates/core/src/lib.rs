//! Automata-network model of vocabulary consensus.
//!
//! Agents sit on the vertices of a connected simple graph. Each agent holds a
//! memory of words and conveys one of them to its neighbors. When an agent is
//! updated it either adds every unknown word it hears (addition) or, if it
//! already knows all of them, collapses its memory onto the smallest heard
//! word (collapse). The order in which agents update is chosen by one of four
//! schemes: sequential, fully asynchronous, synchronous and α-asynchronous.
//!
//! The crate is organised bottom-up:
//!
//! - [`topology`]: interaction graphs (periodic Von Neumann lattices, edge lists).
//! - [`dynamics`]: agent states, configurations and the local rule.
//! - [`scheduling`]: update schemes and per-sweep batch plans.
//! - [`engine`]: sweep execution, observables, termination and cycle detection.
//! - [`experiment`]: multi-run experiments, aggregation, CSV and SVG output, CLI parsing.

pub mod dynamics;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod scheduling;
pub mod topology;

pub use dynamics::{AgentState, Configuration, Word};
pub use engine::{run, RunParams, Termination, TerminationReport, TimeSeries};
pub use error::{Error, Result};
pub use scheduling::{SchemeSpec, SweepPlan, UpdateScheme};
pub use topology::Graph;

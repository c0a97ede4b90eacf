//! Synchronous updating never reaches consensus on an even periodic lattice:
//! the population ends up with two words on the two sublattices, swapping
//! them at every collapse. n_w alternates between n and 2n.

use naming_automata::engine::{run, RunParams, Termination};
use naming_automata::{Graph, SchemeSpec};

fn main() -> naming_automata::Result<()> {
    let side = std::env::args()
        .nth(1)
        .map_or(64, |s| s.parse().expect("side"));
    let graph = Graph::periodic_lattice(side)?;
    let n = graph.vertex_count();

    let (series, report) = run(
        &graph,
        &RunParams::new(SchemeSpec::Synchronous).max_sweeps(1000),
    )?;
    if let Termination::CycleDetected { start, period } = report.reason {
        println!("exact cycle from sweep {start} with period {period}");
        for s in series.rows.iter().filter(|s| s.t + 4 >= start) {
            println!(
                "t = {:>4}  n_w/n = {:.3}  n_d = {}",
                s.t,
                s.n_w as f64 / n as f64,
                s.n_d
            );
        }
    } else {
        println!("no cycle: {report:?}");
    }
    Ok(())
}

//! Running the dynamics on an arbitrary graph read from the edge-list format.

use naming_automata::engine::{run, RunParams};
use naming_automata::{Graph, SchemeSpec};

// Two triangles joined by a bridge.
const EDGES: &str = "\
# vertex count, then one edge per line
6
0 1
1 2
2 0
2 3   # bridge
3 4
4 5
5 3
";

fn main() -> naming_automata::Result<()> {
    let graph = match std::env::args().nth(1) {
        Some(path) => Graph::read_edge_list(path)?,
        None => Graph::parse_edge_list(EDGES)?,
    };
    println!(
        "{} vertices, {} edges",
        graph.vertex_count(),
        graph.edge_count()
    );

    for scheme in [
        "sequential",
        "fully-async",
        "synchronous",
        "alpha-async:0.5",
    ] {
        let scheme: SchemeSpec = scheme.parse()?;
        let (series, report) = run(&graph, &RunParams::new(scheme).seed(7).max_sweeps(500))?;
        let peak = series.peak().unwrap();
        println!(
            "{scheme:<16} peak n_w = {} at t = {}, {:?} at sweep {}",
            peak.n_w, peak.t, report.reason, report.final_sweep
        );
    }
    Ok(())
}

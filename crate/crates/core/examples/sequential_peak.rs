//! Sequential (raster order) sweeps: every vertex hears four unknown words
//! in the first sweep, so n_w reaches 5n at t = 1, followed by a secondary
//! local maximum around t = 3.
//!
//!     cargo run --release --example sequential_peak -- [side] [random]

use naming_automata::engine::{run, RunParams};
use naming_automata::scheduling::{SchemeSpec, SequentialOrder};
use naming_automata::Graph;

fn main() -> naming_automata::Result<()> {
    let mut args = std::env::args().skip(1);
    let side = args.next().map_or(128, |s| s.parse().expect("side"));
    let order = match args.next().as_deref() {
        Some("random") => SequentialOrder::Random,
        _ => SequentialOrder::Raster,
    };
    let graph = Graph::periodic_lattice(side)?;
    let n = graph.vertex_count() as f64;

    let params = RunParams::new(SchemeSpec::Sequential(order))
        .seed(1)
        .max_sweeps(5000);
    let (series, report) = run(&graph, &params)?;
    for s in series.rows.iter().take(9) {
        println!(
            "t = {}  n_w/n = {:.3}  n_d/n = {:.4}",
            s.t,
            s.n_w as f64 / n,
            s.n_d as f64 / n
        );
    }
    println!("{:?} at sweep {}", report.reason, report.final_sweep);
    Ok(())
}

//! Fully-asynchronous dynamics on a periodic lattice.
//!
//! Runs a handful of seeds to consensus and prints the averaged normalized
//! curves every few sweeps.
//!
//!     cargo run --release --example fully_async -- [side] [runs]

use naming_automata::experiment::{run_experiment_detailed, ExperimentSpec, GraphSource};

fn main() -> naming_automata::Result<()> {
    let mut args = std::env::args().skip(1);
    let side = args.next().map_or(64, |s| s.parse().expect("side"));
    let runs = args.next().map_or(10, |s| s.parse().expect("runs"));

    let mut spec = ExperimentSpec::new(GraphSource::Lattice(side), "fully-async".parse()?);
    spec.runs = runs;
    spec.max_sweeps = 5000;
    spec.stop_on_consensus = true;
    let out = run_experiment_detailed(&spec)?;

    println!("{:>5} {:>9} {:>9} {:>5}", "t", "n_w/n", "n_d/n", "alive");
    for r in out
        .series
        .rows
        .iter()
        .filter(|r| r.t <= 10 || r.t % 25 == 0)
    {
        println!(
            "{:>5} {:>9.4} {:>9.5} {:>5}",
            r.t, r.nw_mean, r.nd_mean, r.runs_alive
        );
    }
    let sweeps: Vec<u64> = out.runs.iter().map(|(_, r)| r.final_sweep).collect();
    let mean = sweeps.iter().sum::<u64>() as f64 / sweeps.len() as f64;
    println!("consensus after {mean:.1} sweeps on average ({sweeps:?})");
    Ok(())
}

//! Fully-asynchronous against sequential updating on the same lattice, as
//! one two-panel SVG (`scheme_comparison.svg`, black = fully-async,
//! red = sequential).

use naming_automata::experiment::{emit_svg, run_experiment, ExperimentSpec, GraphSource};
use naming_automata::scheduling::{Sampling, SchemeSpec, SequentialOrder};

fn main() -> naming_automata::Result<()> {
    let side = std::env::args()
        .nth(1)
        .map_or(64, |s| s.parse().expect("side"));
    let schemes = [
        (
            "fully asynchronous",
            SchemeSpec::FullyAsync(Sampling::WithReplacement),
        ),
        (
            "sequential",
            SchemeSpec::Sequential(SequentialOrder::Raster),
        ),
    ];
    let mut curves = Vec::new();
    for (label, scheme) in schemes {
        let mut spec = ExperimentSpec::new(GraphSource::Lattice(side), scheme);
        spec.runs = 10;
        spec.max_sweeps = 3000;
        spec.stop_on_consensus = true;
        curves.push((label, run_experiment(&spec)?));
    }
    let labelled: Vec<_> = curves.iter().map(|(l, s)| (*l, s)).collect();
    emit_svg(&labelled, "scheme_comparison.svg")?;
    println!("wrote scheme_comparison.svg");
    Ok(())
}

//! α-asynchronous updating at α = 0.1 and α = 0.9, plotted together.
//!
//! Small α behaves like fully-asynchronous updating; α close to 1 shows
//! damped oscillations before consensus. Writes `alpha_async.svg` and
//! `alpha_async_0.1.csv` / `alpha_async_0.9.csv` into the working directory.

use naming_automata::experiment::{
    emit_svg, run_experiment, write_csv, ExperimentSpec, GraphSource,
};
use naming_automata::SchemeSpec;

fn main() -> naming_automata::Result<()> {
    let mut curves = Vec::new();
    for alpha in [0.1, 0.9] {
        let mut spec =
            ExperimentSpec::new(GraphSource::Lattice(64), SchemeSpec::alpha_async(alpha)?);
        spec.runs = 20;
        spec.max_sweeps = 3000;
        spec.stop_on_consensus = true;
        let series = run_experiment(&spec)?;
        write_csv(&series, format!("alpha_async_{alpha}.csv"))?;
        let peak = series.rows.iter().map(|r| r.nw_mean).fold(0.0, f64::max);
        println!(
            "alpha = {alpha}: peak n_w/n = {peak:.3}, last sweep {}",
            series.rows.last().unwrap().t
        );
        curves.push((format!("alpha = {alpha}"), series));
    }
    let labelled: Vec<_> = curves.iter().map(|(l, s)| (l.as_str(), s)).collect();
    emit_svg(&labelled, "alpha_async.svg")?;
    println!("wrote alpha_async.svg");
    Ok(())
}

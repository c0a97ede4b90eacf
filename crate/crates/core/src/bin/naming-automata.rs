use std::process::ExitCode;

use naming_automata::engine::Termination;
use naming_automata::experiment::{self, parse_experiment};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let args: Vec<String> = std::env::args().collect();
    let spec = match parse_experiment(&args) {
        Ok(spec) => spec,
        Err(e) => e.exit(),
    };

    let outcome = match experiment::run_experiment_detailed(&spec) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let (mut consensus, mut cycles, mut budget) = (0, 0, 0);
    for (_, report) in &outcome.runs {
        match report.reason {
            Termination::Consensus => consensus += 1,
            Termination::CycleDetected { .. } => cycles += 1,
            Termination::SweepBudgetExhausted => budget += 1,
        }
    }
    eprintln!(
        "{} runs on n = {}: {consensus} consensus, {cycles} cycles, {budget} budget exhausted",
        outcome.runs.len(),
        outcome.series.n
    );

    let Some(prefix) = &spec.out else {
        print!("{}", experiment::csv_string(&outcome.series, None));
        return ExitCode::SUCCESS;
    };
    let command = args
        .iter()
        .map(|a| a.rsplit('/').next().unwrap_or(a).to_string())
        .take(1)
        .chain(args.iter().skip(1).cloned())
        .collect::<Vec<_>>()
        .join(" ");
    let csv = prefix.with_extension("csv");
    if let Err(e) = experiment::write_csv_annotated(&outcome.series, &csv, Some(&command)) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if spec.svg {
        let label = spec.scheme.to_string();
        if let Err(e) =
            experiment::emit_svg(&[(&label, &outcome.series)], prefix.with_extension("svg"))
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

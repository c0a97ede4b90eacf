//! Multi-run experiments: command-line parsing, seeded fan-out, per-sweep
//! aggregation, CSV output and static SVG plots.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, ValueEnum};
use rayon::prelude::*;

use crate::engine::{self, Placement, RunParams, TerminationReport, TimeSeries};
use crate::error::{Error, Result};
use crate::scheduling::{Sampling, SchemeSpec, SequentialOrder};
use crate::topology::Graph;

pub const CSV_HEADER: &str = "t,nw_mean,nw_std,nd_mean,nd_std,runs_alive";

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Lattice(usize),
    EdgeList(PathBuf),
}

impl GraphSource {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSource::Lattice(side) => Graph::periodic_lattice(*side),
            GraphSource::EdgeList(path) => Graph::read_edge_list(path),
        }
    }
}

/// One experiment: `runs` independent runs with seeds `base_seed + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub scheme: SchemeSpec,
    pub runs: u64,
    pub base_seed: u64,
    pub max_sweeps: u64,
    pub stop_on_consensus: bool,
    pub record_every: u64,
    pub placement: Placement,
    pub normalize_x_by_alpha: bool,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

impl ExperimentSpec {
    pub fn new(graph: GraphSource, scheme: SchemeSpec) -> Self {
        ExperimentSpec {
            graph,
            scheme,
            runs: 100,
            base_seed: 0,
            max_sweeps: 1000,
            stop_on_consensus: false,
            record_every: 1,
            placement: Placement::Random,
            normalize_x_by_alpha: false,
            out: None,
            svg: false,
        }
    }

    pub fn run_params(&self, index: u64) -> RunParams {
        RunParams::new(self.scheme)
            .seed(self.base_seed.wrapping_add(index))
            .max_sweeps(self.max_sweeps)
            .stop_on_consensus(self.stop_on_consensus)
            .record_every(self.record_every)
            .placement(self.placement)
    }

    /// Divisor applied to the sweep index in the CSV `t` column.
    pub fn x_scale(&self) -> Option<f64> {
        if self.normalize_x_by_alpha {
            self.scheme.alpha()
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        self.run_params(0).validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Raster,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplingArg {
    Replacement,
    Permutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlacementArg {
    Random,
    Identity,
}

#[derive(Debug, Parser)]
#[command(
    name = "naming-automata",
    version,
    about = "Simulate vocabulary consensus on an automata network and write averaged n_w/n_d curves",
    group(ArgGroup::new("topology").required(true).args(["lattice", "graph"]))
)]
struct Cli {
    /// Side L of a periodic L x L Von Neumann lattice
    #[arg(long, value_name = "L")]
    lattice: Option<usize>,
    /// Edge-list file (first line n, then `u v` per line)
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// sequential | fully-async | synchronous | alpha-async:<p>
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeSpec,
    #[arg(long, default_value_t = 100)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_sweeps: u64,
    #[arg(long)]
    stop_on_consensus: bool,
    #[arg(long, default_value_t = 1)]
    record_every: u64,
    #[arg(long, value_enum, default_value = "raster")]
    sequential_order: OrderArg,
    #[arg(long, value_enum, default_value = "replacement")]
    fully_async_sampling: SamplingArg,
    /// Initial word placement
    #[arg(long, value_enum, default_value = "random")]
    placement: PlacementArg,
    /// Divide the t column by alpha (alpha-async only)
    #[arg(long)]
    normalize_x_by_alpha: bool,
    /// Output prefix; writes <prefix>.csv (and <prefix>.svg with --svg)
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    #[arg(long, requires = "out")]
    svg: bool,
}

fn parse_scheme(s: &str) -> std::result::Result<SchemeSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses command-line tokens (including the program name) into a spec.
pub fn parse_experiment<I, T>(args: I) -> std::result::Result<ExperimentSpec, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let graph = match (cli.lattice, cli.graph) {
        (Some(side), None) => GraphSource::Lattice(side),
        (None, Some(path)) => GraphSource::EdgeList(path),
        _ => unreachable!("clap enforces exactly one topology"),
    };
    let scheme = match cli.scheme {
        SchemeSpec::Sequential(_) => SchemeSpec::Sequential(match cli.sequential_order {
            OrderArg::Raster => SequentialOrder::Raster,
            OrderArg::Random => SequentialOrder::Random,
        }),
        SchemeSpec::FullyAsync(_) => SchemeSpec::FullyAsync(match cli.fully_async_sampling {
            SamplingArg::Replacement => Sampling::WithReplacement,
            SamplingArg::Permutation => Sampling::Permutation,
        }),
        other => other,
    };
    let spec = ExperimentSpec {
        graph,
        scheme,
        runs: cli.runs,
        base_seed: cli.seed,
        max_sweeps: cli.max_sweeps,
        stop_on_consensus: cli.stop_on_consensus,
        record_every: cli.record_every,
        placement: match cli.placement {
            PlacementArg::Random => Placement::Random,
            PlacementArg::Identity => Placement::Identity,
        },
        normalize_x_by_alpha: cli.normalize_x_by_alpha,
        out: cli.out,
        svg: cli.svg,
    };
    spec.validate()
        .map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n")))?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub t: u64,
    pub nw_mean: f64,
    pub nw_std: f64,
    pub nd_mean: f64,
    pub nd_std: f64,
    pub runs_alive: usize,
}

/// Per-sweep statistics of `n_w / n` and `n_d / n` across runs.
///
/// At each sweep only the runs that recorded that sweep (had not yet
/// terminated) contribute; `runs_alive` counts them. Standard deviations are
/// population deviations, so a single run has std 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateSeries {
    pub n: usize,
    /// When set, the CSV `t` column holds `t / x_scale`.
    pub x_scale: Option<f64>,
    pub rows: Vec<AggregateRow>,
}

impl AggregateSeries {
    pub fn from_runs<'a>(
        runs: impl IntoIterator<Item = &'a TimeSeries>,
        x_scale: Option<f64>,
    ) -> Self {
        let mut n = 0;
        let mut by_t: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        for series in runs {
            n = series.n;
            let norm = series.n as f64;
            for s in &series.rows {
                by_t.entry(s.t)
                    .or_default()
                    .push((s.n_w as f64 / norm, s.n_d as f64 / norm));
            }
        }
        let rows = by_t
            .into_iter()
            .map(|(t, values)| {
                let (nw_mean, nw_std) = mean_std(values.iter().map(|v| v.0));
                let (nd_mean, nd_std) = mean_std(values.iter().map(|v| v.1));
                AggregateRow {
                    t,
                    nw_mean,
                    nw_std,
                    nd_mean,
                    nd_std,
                    runs_alive: values.len(),
                }
            })
            .collect();
        AggregateSeries { n, x_scale, rows }
    }

    pub fn x(&self, t: u64) -> f64 {
        match self.x_scale {
            Some(scale) => t as f64 / scale,
            None => t as f64,
        }
    }

    /// Rows as they appear in the CSV.
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.rows
            .iter()
            .map(|r| CsvRow {
                x: self.x(r.t),
                nw_mean: r.nw_mean,
                nw_std: r.nw_std,
                nd_mean: r.nd_mean,
                nd_std: r.nd_std,
                runs_alive: r.runs_alive,
            })
            .collect()
    }
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let k = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / k;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
    (mean, var.sqrt())
}

/// Result of every run of an experiment, in seed order.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub runs: Vec<(TimeSeries, TerminationReport)>,
    pub series: AggregateSeries,
}

/// Executes all runs of `spec` (in parallel) and aggregates them.
pub fn run_experiment_detailed(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let graph = spec.graph.build()?;
    let runs = (0..spec.runs)
        .into_par_iter()
        .map(|i| engine::run(&graph, &spec.run_params(i)))
        .collect::<Result<Vec<_>>>()?;
    let series = AggregateSeries::from_runs(runs.iter().map(|(s, _)| s), spec.x_scale());
    Ok(ExperimentOutcome { runs, series })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<AggregateSeries> {
    run_experiment_detailed(spec).map(|o| o.series)
}

/// Full-precision decimal rendering that always carries a decimal point.
fn fmt_float(v: f64) -> String {
    let s = format!("{v}");
    if v.is_finite() && !s.contains('.') {
        s + ".0"
    } else {
        s
    }
}

/// Integral x values print without a fractional part.
fn fmt_x(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

pub fn csv_string(series: &AggregateSeries, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}").unwrap();
        }
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in series.csv_rows() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_x(r.x),
            fmt_float(r.nw_mean),
            fmt_float(r.nw_std),
            fmt_float(r.nd_mean),
            fmt_float(r.nd_std),
            r.runs_alive
        )
        .unwrap();
    }
    out
}

pub fn write_csv(series: &AggregateSeries, path: impl AsRef<Path>) -> Result<()> {
    write_csv_annotated(series, path, None)
}

/// Writes the CSV preceded by `comment` as `#` lines.
pub fn write_csv_annotated(
    series: &AggregateSeries,
    path: impl AsRef<Path>,
    comment: Option<&str>,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, csv_string(series, comment)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub nw_mean: f64,
    pub nw_std: f64,
    pub nd_mean: f64,
    pub nd_std: f64,
    pub runs_alive: usize,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (idx, line) in text.lines().enumerate() {
        let bad = |reason: String| Error::CsvFormat {
            line: idx + 1,
            reason,
        };
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err(bad(format!("unexpected header {line:?}")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(bad(format!("expected 6 fields, got {}", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
        rows.push(CsvRow {
            x: num(f[0])?,
            nw_mean: num(f[1])?,
            nw_std: num(f[2])?,
            nd_mean: num(f[3])?,
            nd_std: num(f[4])?,
            runs_alive: f[5].parse().map_err(|e| bad(format!("{:?}: {e}", f[5])))?,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

const PALETTE: [&str; 6] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
];
const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 20.0;
const PANEL_GAP: f64 = 50.0;

/// Default number of sweeps shown in plots.
pub const DEFAULT_PLOT_SWEEPS: u64 = 50;

/// Renders `n_w/n` (top) and `n_d/n` (bottom) against `t` for each labelled
/// series, restricted to sweeps `t <= max_sweep`.
pub fn svg_string(series: &[(&str, &AggregateSeries)], max_sweep: u64) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidParameter("no series to plot".into()));
    }
    let visible = |s: &AggregateSeries| -> Vec<(f64, f64, f64)> {
        s.rows
            .iter()
            .filter(|r| r.t <= max_sweep)
            .map(|r| (s.x(r.t), r.nw_mean, r.nd_mean))
            .collect()
    };
    let points: Vec<Vec<(f64, f64, f64)>> = series.iter().map(|(_, s)| visible(s)).collect();
    let all = points.iter().flatten();
    let x_max = (all.clone().map(|p| p.0).fold(0.0, f64::max) / 5.0)
        .ceil()
        .max(1.0)
        * 5.0;
    let nw_max = all.clone().map(|p| p.1).fold(0.0, f64::max).max(1.0) * 1.05;
    let nd_max = all.map(|p| p.2).fold(0.0, f64::max).max(1e-9) * 1.05;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let height = MARGIN_TOP + 2.0 * PANEL_HEIGHT + PANEL_GAP + 40.0;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    svg.push('\n');

    let panels = [("n_w / n", nw_max, 1usize), ("n_d / n", nd_max, 2usize)];
    for (p, (label, y_max, column)) in panels.iter().enumerate() {
        let top = MARGIN_TOP + p as f64 * (PANEL_HEIGHT + PANEL_GAP);
        let bottom = top + PANEL_HEIGHT;
        let sx = |x: f64| MARGIN_LEFT + x / x_max * plot_w;
        let sy = |y: f64| bottom - y / y_max * PANEL_HEIGHT;

        writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="gray"/>"#
        )
        .unwrap();
        for i in 0..=5 {
            let fx = x_max * i as f64 / 5.0;
            let fy = y_max * i as f64 / 5.0;
            writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(fx),
                bottom + 14.0,
                tick_label(fx)
            )
            .unwrap();
            writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 4.0,
                sy(fy) + 4.0,
                tick_label(fy)
            )
            .unwrap();
        }
        writeln!(
            svg,
            r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">{label}</text>"#,
            top + PANEL_HEIGHT / 2.0,
            top + PANEL_HEIGHT / 2.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">t</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            bottom + 30.0
        )
        .unwrap();

        for (k, pts) in points.iter().enumerate() {
            let coords: Vec<String> = pts
                .iter()
                .map(|p| {
                    let y = if *column == 1 { p.1 } else { p.2 };
                    format!("{:.2},{:.2}", sx(p.0), sy(y))
                })
                .collect();
            writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                PALETTE[k % PALETTE.len()],
                coords.join(" ")
            )
            .unwrap();
        }
    }

    for (k, (label, _)) in series.iter().enumerate() {
        let y = MARGIN_TOP + 12.0 + 16.0 * k as f64;
        let x = WIDTH - MARGIN_RIGHT + 10.0;
        writeln!(
            svg,
            r#"<line x1="{x}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            y - 4.0,
            x + 20.0,
            y - 4.0,
            PALETTE[k % PALETTE.len()],
            x + 26.0,
            y,
            escape(label)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(series: &[(&str, &AggregateSeries)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = svg_string(series, DEFAULT_PLOT_SWEEPS)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

fn tick_label(v: f64) -> String {
    if v >= 10.0 || v == 0.0 {
        format!("{v:.0}")
    } else if v >= 0.1 {
        format!("{v:.2}")
    } else {
        format!("{v:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

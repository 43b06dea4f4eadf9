//! `bnverify`: batch front end for the spectral toolkit.
//!
//! Exit status is 0 when no violation of the inequality was found, 1 when at
//! least one was, and 2 on usage or input errors.

mod input;
mod output;

use anyhow::{bail, Context, Result};
use bn_core::conjecture::{bn_report_multipartite, bn_report_with, BnReport, Tolerances};
use bn_core::multipartite::multipartite_spectrum;
use bn_core::search::{
    exhaustive_builtin, exhaustive_graph6, hill_climb, random_k4_free, sweep_multipartite, zykov_trajectory_oriented,
    K4FreeMethod, MoveWeights, Objective, SearchConfig, Summary, ZykovOrientation,
};
use bn_core::spectral::{eigenvalues, trace_check};
use bn_core::stability::{dense_case_check, stability_experiment, StabilityRow, DEFAULT_DELTA};
use clap::{Args, Parser, Subcommand, ValueEnum};
use input::{load_graphs, parse_parts, InputError, Labeled};
use output::{sibling, timestamp, RunManifest, Sink};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "bnverify", version, about = "Check λ1² + λ2² <= 2(1 - 1/ω)m on graph families")]
struct Cli {
    /// Worker threads for parallel subcommands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output to this file plus `<FILE>.manifest.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct GraphInput {
    /// graph6 record, a file of records, or `-` for standard input.
    #[arg(long)]
    graph6: Option<String>,
    /// Edge-list file (`n m` header, then `u v` per line), or `-`.
    #[arg(long)]
    edges: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adjacency spectrum; `--parts` uses the exact multipartite solver.
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        /// Part sizes of a complete multipartite graph, e.g. `2,2,2`.
        #[arg(long, conflicts_with_all = ["graph6", "edges"])]
        parts: Option<String>,
    },
    /// Inequality report for each input graph.
    Report {
        #[command(flatten)]
        input: GraphInput,
        /// Part sizes of a complete multipartite graph.
        #[arg(long, conflicts_with_all = ["graph6", "edges"])]
        parts: Option<String>,
    },
    /// Every complete multipartite graph with n <= n-max and 2 <= r <= r-max.
    Sweep {
        /// Largest vertex count.
        #[arg(long)]
        n_max: usize,
        /// Largest number of parts.
        #[arg(long, default_value_t = 6)]
        r_max: usize,
    },
    /// All labeled graphs on `--n` vertices, or every record of `--graph6`.
    Exhaustive {
        /// Vertex count, at most 6.
        #[arg(long, conflicts_with = "graph6")]
        n: Option<usize>,
        /// graph6 file, or `-` for standard input.
        #[arg(long)]
        graph6: Option<String>,
    },
    /// Hill climbing for a negative gap.
    Search {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Iterations per restart.
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        /// Edge density of the random starting graphs.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::BnGap)]
        objective: ObjectiveArg,
        /// Allow K4 (the default keeps every state K4-free).
        #[arg(long)]
        unconstrained: bool,
        /// Move weights `add,delete,zykov`.
        #[arg(long, default_value = "1,1,1")]
        weights: String,
    },
    /// Random Zykov symmetrization trajectory.
    Zykov {
        #[command(flatten)]
        input: GraphInput,
        /// Start from a random K4-free graph on this many vertices instead.
        #[arg(long, conflicts_with_all = ["graph6", "edges"])]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OrientationArg::Uniform)]
        method: OrientationArg,
    },
    /// Edit distance of edge-deleted T(n,3) samples; CSV output.
    Stability {
        /// Vertex count of the base Turán graph T(n,3).
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Deletion counts: comma-separated values or inclusive ranges `lo-hi`.
        #[arg(long, default_value = "0-10")]
        grid: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dense-case diagnostics for K4-free graphs with m >= c·n².
    DenseCheck {
        #[command(flatten)]
        input: GraphInput,
        /// Density constant; graphs with fewer than c·n² edges are skipped.
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    BnGap,
    Lambda1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientationArg {
    Uniform,
    PerronAscending,
}

/// Violations and skipped malformed records from one run.
struct Outcome {
    violations: Vec<BnReport>,
    input_errors: usize,
}

impl Outcome {
    fn clean() -> Self {
        Self { violations: Vec::new(), input_errors: 0 }
    }

    fn from_reports<'a>(reports: impl IntoIterator<Item = &'a BnReport>) -> Self {
        Self { violations: reports.into_iter().filter(|r| r.is_violation()).cloned().collect(), input_errors: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            if let Some(line) = violation_line(&outcome) {
                eprintln!("{line}");
            }
            ExitCode::from(exit_status(&outcome))
        }
        Err(e) => {
            eprintln!("bnverify: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn exit_status(outcome: &Outcome) -> u8 {
    if !outcome.violations.is_empty() {
        1
    } else if outcome.input_errors > 0 {
        2
    } else {
        0
    }
}

fn violation_line(outcome: &Outcome) -> Option<String> {
    let worst = outcome.violations.iter().min_by(|a, b| a.gap.total_cmp(&b.gap))?;
    Some(format!(
        "bnverify: VIOLATION: {} graph(s) with negative gap; smallest gap {} at {}",
        outcome.violations.len(),
        worst.gap,
        worst.source
    ))
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring thread pool")?;
    }
    let started = timestamp();
    let mut sink = Sink::open(cli.out.as_deref()).with_context(|| format!("opening {:?}", cli.out))?;
    let (name, seed) = describe(&cli.command);
    let mut manifest = RunManifest::new(name, seed, started);
    let outcome = dispatch(cli.command, &mut sink, &mut manifest)?;
    if let Some(path) = sink.finish()? {
        manifest.outputs.insert(0, path.display().to_string());
        manifest.write_beside(&path)?;
    }
    Ok(outcome)
}

fn describe(cmd: &Command) -> (&'static str, Option<u64>) {
    match cmd {
        Command::Spectrum { .. } => ("spectrum", None),
        Command::Report { .. } => ("report", None),
        Command::Sweep { .. } => ("sweep", None),
        Command::Exhaustive { .. } => ("exhaustive", None),
        Command::Search { seed, .. } => ("search", Some(*seed)),
        Command::Zykov { seed, .. } => ("zykov", Some(*seed)),
        Command::Stability { seed, .. } => ("stability", Some(*seed)),
        Command::DenseCheck { .. } => ("dense-check", None),
    }
}

fn graphs(input: &GraphInput, manifest: &mut RunManifest) -> Result<Vec<Labeled>, InputError> {
    let (graphs, raws) = load_graphs(input.graph6.as_deref(), input.edges.as_deref())?;
    manifest.add_inputs(&raws);
    Ok(graphs)
}

#[derive(Serialize)]
struct SpectrumRecord<'a> {
    source: &'a str,
    n: usize,
    m: usize,
    method: &'static str,
    spectrum: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secular_roots: Option<Vec<f64>>,
    trace_pass: bool,
}

/// Writes the summary CSV beside `--out`, or to standard error.
fn emit_summary(sink: &Sink, manifest: &mut RunManifest, summary: &Summary) -> Result<()> {
    let text = format!("{}\n{}\n", Summary::CSV_HEADER, summary.csv_row());
    match sink.path() {
        Some(path) => {
            let csv = sibling(path, "summary.csv");
            std::fs::write(&csv, text).with_context(|| format!("writing {}", csv.display()))?;
            manifest.outputs.push(csv.display().to_string());
        }
        None => std::io::stderr().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: Command, sink: &mut Sink, manifest: &mut RunManifest) -> Result<Outcome> {
    let tol = Tolerances::default();
    match cmd {
        Command::Spectrum { input, parts } => {
            if let Some(parts) = parts {
                let parts = parse_parts(&parts)?;
                let s = multipartite_spectrum(&parts);
                let spectrum = s.to_spectrum();
                sink.json(&SpectrumRecord {
                    source: &parts.to_string(),
                    n: parts.n(),
                    m: parts.edge_count(),
                    method: "secular",
                    trace_pass: trace_check(&spectrum).pass,
                    spectrum: spectrum.values,
                    secular_roots: Some(s.secular_roots),
                })?;
            } else {
                for g in graphs(&input, manifest)? {
                    let spectrum = eigenvalues(&g.graph);
                    sink.json(&SpectrumRecord {
                        source: &g.label,
                        n: g.graph.n(),
                        m: g.graph.m(),
                        method: "dense",
                        trace_pass: trace_check(&spectrum).pass,
                        spectrum: spectrum.values,
                        secular_roots: None,
                    })?;
                }
            }
            Ok(Outcome::clean())
        }
        Command::Report { input, parts } => {
            let reports: Vec<BnReport> = if let Some(parts) = parts {
                vec![bn_report_multipartite(&parse_parts(&parts)?)]
            } else {
                let mut out = Vec::new();
                for g in graphs(&input, manifest)? {
                    match bn_report_with(&g.graph, g.label.clone(), tol) {
                        Ok(r) => out.push(r),
                        Err(e) => eprintln!("bnverify: {}: {e}", g.label),
                    }
                }
                out
            };
            for r in &reports {
                sink.json(r)?;
            }
            Ok(Outcome::from_reports(&reports))
        }
        Command::Sweep { n_max, r_max } => {
            if r_max < 2 {
                bail!("--r-max must be at least 2");
            }
            let sweep = sweep_multipartite(n_max, r_max);
            for r in &sweep.reports {
                sink.json(r)?;
            }
            emit_summary(sink, manifest, &sweep.summary)?;
            Ok(Outcome::from_reports(&sweep.reports))
        }
        Command::Exhaustive { n, graph6 } => {
            let result = match (n, graph6) {
                (Some(n), None) => exhaustive_builtin(n)?,
                (None, Some(spec)) => {
                    let raw = input::read_source(&spec)?;
                    let r = exhaustive_graph6(raw.text.as_bytes(), &raw.name)?;
                    manifest.add_inputs(std::slice::from_ref(&raw));
                    r
                }
                _ => bail!("exhaustive needs exactly one of --n or --graph6"),
            };
            for bad in &result.malformed {
                eprintln!("bnverify: line {}: {}", bad.line, bad.error);
            }
            for r in &result.violations {
                sink.json(r)?;
            }
            emit_summary(sink, manifest, &result.summary)?;
            Ok(Outcome { violations: result.violations, input_errors: result.malformed.len() })
        }
        Command::Search { n, seed, restarts, iters, density, objective, unconstrained, weights } => {
            let w: Vec<f64> = weights
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .context("--weights expects three numbers")?;
            let [edge_add, edge_delete, zykov] = w[..] else {
                bail!("--weights expects three numbers add,delete,zykov");
            };
            let cfg = SearchConfig {
                seed,
                n,
                max_iters: iters,
                restarts,
                weights: MoveWeights { edge_add, edge_delete, zykov },
                k4_constrained: !unconstrained,
                objective: match objective {
                    ObjectiveArg::BnGap => Objective::BnGapNegated,
                    ObjectiveArg::Lambda1 => Objective::Lambda1,
                },
                initial_density: density,
            };
            let result = hill_climb(&cfg)?;
            #[derive(Serialize)]
            struct Record<'a> {
                config: &'a SearchConfig,
                #[serde(flatten)]
                result: &'a bn_core::search::HillClimbResult,
            }
            sink.json(&Record { config: &cfg, result: &result })?;
            Ok(Outcome::from_reports([&result.best_report]))
        }
        Command::Zykov { input, n, density, steps, seed, method } => {
            let starts = match n {
                Some(n) => {
                    let generated = random_k4_free(n, density, seed, K4FreeMethod::GreedyInsertion)?;
                    vec![Labeled { label: format!("random_k4_free(n={n},density={density},seed={seed})"), graph: generated.graph }]
                }
                None => graphs(&input, manifest)?,
            };
            let orientation = match method {
                OrientationArg::Uniform => ZykovOrientation::Uniform,
                OrientationArg::PerronAscending => ZykovOrientation::PerronAscending,
            };
            #[derive(Serialize)]
            struct Record<'a> {
                source: &'a str,
                orientation: ZykovOrientation,
                #[serde(flatten)]
                trajectory: bn_core::search::ZykovTrajectory,
            }
            for g in &starts {
                let trajectory = zykov_trajectory_oriented(&g.graph, steps, seed, orientation);
                for f in &trajectory.findings {
                    eprintln!("bnverify: finding: {}: {f}", g.label);
                }
                sink.json(&Record { source: &g.label, orientation, trajectory })?;
            }
            Ok(Outcome::clean())
        }
        Command::Stability { n, grid, samples, seed } => {
            let grid = parse_grid(&grid)?;
            let rows = stability_experiment(n, &grid, samples, seed)?;
            sink.line(StabilityRow::CSV_HEADER)?;
            for row in &rows {
                sink.line(&row.csv_row())?;
            }
            Ok(Outcome::clean())
        }
        Command::DenseCheck { input, c, delta } => {
            let mut reports = Vec::new();
            #[derive(Serialize)]
            struct Record<'a, T: Serialize> {
                source: &'a str,
                #[serde(flatten)]
                check: T,
            }
            for g in graphs(&input, manifest)? {
                let check = dense_case_check(&g.graph, c, delta);
                if let Some(r) = check.checked() {
                    reports.push(r.bn.clone());
                }
                sink.json(&Record { source: &g.label, check })?;
            }
            Ok(Outcome::from_reports(&reports))
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let parse = |s: &str| s.trim().parse::<usize>().with_context(|| format!("--grid: '{s}' is not a count"));
        match item.split_once('-') {
            Some((lo, hi)) => out.extend(parse(lo)?..=parse(hi)?),
            None => out.push(parse(item)?),
        }
    }
    Ok(out)
}

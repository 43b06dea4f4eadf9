//! Family sweeps, exhaustive checks, seeded K4-free generators, Zykov
//! trajectories, and hill climbing for counterexamples.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`.
//! Independent units (restarts, samples) use the same seed with a distinct
//! ChaCha stream id, so results do not depend on scheduling or thread count.

use crate::conjecture::{bn_report, bn_report_multipartite, bn_report_with, BnReport, ConjectureError, Tolerances};
use crate::graph::{clique_number, is_k4_free, parse_graph6, to_graph6, Graph, Graph6Error, GraphError, PartSizes};
use crate::spectral::eigenvalues;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::BufRead;
use thiserror::Error;

/// Largest `n` for the built-in labeled enumerator (`2^15` graphs).
pub const MAX_ENUMERATION_N: usize = 6;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("built-in enumeration supports n <= {MAX_ENUMERATION_N}, got {0}")]
    EnumerationTooLarge(usize),
    #[error("density must lie in [0, 1], got {0}")]
    BadDensity(f64),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("reading graph6 input: {0}")]
    Io(#[from] std::io::Error),
}

/// RNG for unit `stream` of a seeded run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Aggregate counts over a batch of reports; one CSV row per family or run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub family: String,
    pub total: usize,
    pub holds: usize,
    pub violations: usize,
    pub equality: usize,
    pub excluded: usize,
    pub out_of_domain: usize,
    /// Smallest gap over non-excluded reports.
    pub min_gap: Option<f64>,
    pub argmin_source: Option<String>,
}

impl Summary {
    pub const CSV_HEADER: &'static str =
        "family,total,holds,violations,equality,excluded,out_of_domain,min_gap,argmin_source";

    pub fn new(family: impl Into<String>) -> Self {
        Self { family: family.into(), ..Self::default() }
    }

    pub fn record(&mut self, r: &BnReport) {
        self.total += 1;
        if r.excluded {
            self.excluded += 1;
            return;
        }
        self.holds += r.holds as usize;
        self.violations += r.is_violation() as usize;
        self.equality += r.equality as usize;
        if self.min_gap.is_none_or(|g| r.gap < g) {
            self.min_gap = Some(r.gap);
            self.argmin_source = Some(r.source.clone());
        }
    }

    pub fn record_out_of_domain(&mut self) {
        self.total += 1;
        self.out_of_domain += 1;
    }

    pub fn csv_row(&self) -> String {
        let gap = self.min_gap.map(|g| format!("{g:?}")).unwrap_or_default();
        let src = self.argmin_source.as_deref().unwrap_or("").replace('"', "\"\"");
        format!(
            "{},{},{},{},{},{},{},{},\"{}\"",
            self.family, self.total, self.holds, self.violations, self.equality, self.excluded, self.out_of_domain, gap, src
        )
    }
}

/// Partitions of `n` into exactly `r` positive parts, each non-increasing,
/// in lexicographic order.
pub fn partitions_into(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // each remaining slot needs at least 1, and no slot may exceed `max`
        let lo = remaining.saturating_sub((slots - 1) * max).max(1).max(remaining.div_ceil(slots));
        let hi = max.min(remaining - (slots - 1));
        for first in lo..=hi {
            prefix.push(first);
            rec(remaining - first, slots - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r >= 1 && n >= r {
        rec(n, r, n, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Every `PartSizes` with `2 <= n <= n_max` and `2 <= r <= min(r_max, n)`,
/// ordered by `n`, then `r`, then lexicographically.
pub fn multipartite_family(n_max: usize, r_max: usize) -> Vec<PartSizes> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for r in 2..=r_max.min(n) {
            out.extend(partitions_into(n, r).into_iter().map(|p| PartSizes::new(p).expect("valid partition")));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub reports: Vec<BnReport>,
    pub summary: Summary,
}

/// Exact-spectrum report for every complete multipartite graph in
/// [`multipartite_family`].
pub fn sweep_multipartite(n_max: usize, r_max: usize) -> SweepResult {
    let family = multipartite_family(n_max, r_max);
    let reports: Vec<BnReport> = family.par_iter().map(bn_report_multipartite).collect();
    let mut summary = Summary::new(format!("multipartite(n_max={n_max},r_max={r_max})"));
    reports.iter().for_each(|r| summary.record(r));
    SweepResult { reports, summary }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MalformedLine {
    pub line: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExhaustiveResult {
    pub summary: Summary,
    pub violations: Vec<BnReport>,
    pub malformed: Vec<MalformedLine>,
}

/// All `2^C(n,2)` labeled graphs on `n` vertices; bit `k` of the index is the
/// `k`-th upper-triangle pair in graph6 order. No isomorphism reduction.
pub fn labeled_graphs(n: usize) -> Result<impl ParallelIterator<Item = Graph>, SearchError> {
    if n > MAX_ENUMERATION_N {
        return Err(SearchError::EnumerationTooLarge(n));
    }
    Graph::empty(n)?;
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let count = 1u64 << pairs.len();
    Ok((0..count).into_par_iter().map(move |mask| {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        Graph::from_edge_list(n, &edges).expect("pairs are in range")
    }))
}

fn tally(family: String, outcomes: Vec<Result<BnReport, ConjectureError>>, malformed: Vec<MalformedLine>) -> ExhaustiveResult {
    let mut summary = Summary::new(family);
    let mut violations = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => {
                summary.record(&r);
                if r.is_violation() {
                    violations.push(r);
                }
            }
            Err(ConjectureError::OutOfDomain { .. }) => summary.record_out_of_domain(),
        }
    }
    ExhaustiveResult { summary, violations, malformed }
}

/// Reports on every labeled graph with `n` vertices.
pub fn exhaustive_builtin(n: usize) -> Result<ExhaustiveResult, SearchError> {
    let outcomes: Vec<_> = labeled_graphs(n)?.map(|g| bn_report(&g)).collect();
    Ok(tally(format!("labeled(n={n})"), outcomes, Vec::new()))
}

/// Reports on every record of a graph6 stream. Malformed lines are collected
/// with their 1-based line numbers and skipped; blank lines are ignored.
pub fn exhaustive_graph6<R: BufRead>(reader: R, family: &str) -> Result<ExhaustiveResult, SearchError> {
    let (graphs, bad) = read_graph6(reader)?;
    let malformed = bad.into_iter().map(|(line, e)| MalformedLine { line, error: e.to_string() }).collect();
    let outcomes: Vec<_> = graphs.par_iter().map(bn_report).collect();
    Ok(tally(family.to_string(), outcomes, malformed))
}

/// Records that failed to parse, with 1-based line numbers.
pub type LineErrors = Vec<(usize, Graph6Error)>;

/// Parses a graph6 stream, returning good graphs and line-numbered failures.
pub fn read_graph6<R: BufRead>(reader: R) -> std::io::Result<(Vec<Graph>, LineErrors)> {
    let mut graphs = Vec::new();
    let mut bad = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_graph6(&line) {
            Ok(g) => graphs.push(g),
            Err(e) => bad.push((idx + 1, e)),
        }
    }
    Ok((graphs, bad))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum K4FreeMethod {
    /// Random 3-partition, each cross pair kept independently. `balanced`
    /// forces Turán part sizes on a shuffled vertex order.
    TripartiteSubgraph { balanced: bool },
    /// Shuffled pair order; insert a pair unless it would close a K4.
    GreedyInsertion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub graph: Graph,
    pub target_edges: usize,
    /// False when the method cannot reach the target density; `graph` is then
    /// the best effort.
    pub reached: bool,
}

/// Seeded K4-free graph with roughly `density · C(n,2)` edges.
pub fn random_k4_free(n: usize, density: f64, seed: u64, method: K4FreeMethod) -> Result<Generated, SearchError> {
    random_k4_free_with(n, density, &mut stream_rng(seed, 0), method)
}

pub fn random_k4_free_with<R: Rng>(
    n: usize,
    density: f64,
    rng: &mut R,
    method: K4FreeMethod,
) -> Result<Generated, SearchError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(SearchError::BadDensity(density));
    }
    let mut g = Graph::empty(n)?;
    let target_edges = (density * (n * (n - 1) / 2) as f64).round() as usize;
    match method {
        K4FreeMethod::TripartiteSubgraph { balanced } => {
            let part = if balanced {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                let mut part = vec![0usize; n];
                let (q, rem) = (n / 3, n % 3);
                let mut pos = 0;
                for (p, size) in (0..3).map(|p| (p, q + (p < rem) as usize)) {
                    for &v in &order[pos..pos + size] {
                        part[v] = p;
                    }
                    pos += size;
                }
                part
            } else {
                (0..n).map(|_| rng.gen_range(0..3)).collect()
            };
            let cross: Vec<(usize, usize)> =
                (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).filter(|&(u, v)| part[u] != part[v]).collect();
            let reached = target_edges <= cross.len();
            let keep = if cross.is_empty() { 0.0 } else { (target_edges as f64 / cross.len() as f64).min(1.0) };
            for (u, v) in cross {
                if rng.gen_bool(keep) {
                    g.set_edge(u, v, true);
                }
            }
            Ok(Generated { graph: g, target_edges, reached })
        }
        K4FreeMethod::GreedyInsertion => {
            let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
            pairs.shuffle(rng);
            let mut m = 0;
            for (u, v) in pairs {
                if m == target_edges {
                    break;
                }
                if !closes_k4(&g, u, v) {
                    g.set_edge(u, v, true);
                    m += 1;
                }
            }
            Ok(Generated { graph: g, target_edges, reached: m == target_edges })
        }
    }
}

/// Would adding `{u, v}` create a K4? True iff the common neighbourhood has an edge.
pub fn closes_k4(g: &Graph, u: usize, v: usize) -> bool {
    let common: Vec<u64> = g.row(u).iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
    let closes = crate::bits::iter_ones(&common).any(|w| crate::bits::and_count(g.row(w), &common) > 0);
    closes
}

/// How a random Zykov step picks `(u, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZykovOrientation {
    /// Uniform over ordered non-adjacent pairs.
    #[default]
    Uniform,
    /// Uniform unordered pair, then `u` is the endpoint with the smaller
    /// Perron weight. With `x_u <= x_v` the Rayleigh quotient of the Perron
    /// vector cannot drop, so `λ_1` is non-decreasing.
    PerronAscending,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryStep {
    /// `None` for the starting graph.
    pub pair: Option<(usize, usize)>,
    pub lambda1: f64,
    pub omega: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZykovTrajectory {
    pub steps: Vec<TrajectoryStep>,
    pub lambda1_monotone: bool,
    pub omega_monotone: bool,
    /// Steps where `λ_1` fell by more than the tolerance or `ω` grew.
    pub findings: Vec<String>,
    pub final_graph6: String,
}

/// Tolerance on `λ_1` decreases along a trajectory.
pub const TRAJECTORY_TOL: f64 = 1e-9;

/// `steps` random Zykov operations from `g`. Complete graphs give an empty trajectory.
pub fn zykov_trajectory(g: &Graph, steps: usize, seed: u64) -> ZykovTrajectory {
    zykov_trajectory_oriented(g, steps, seed, ZykovOrientation::Uniform)
}

pub fn zykov_trajectory_oriented(g: &Graph, steps: usize, seed: u64, orientation: ZykovOrientation) -> ZykovTrajectory {
    let mut rng = stream_rng(seed, 0);
    let record = |g: &Graph, pair| TrajectoryStep { pair, lambda1: eigenvalues(g).lambda1(), omega: clique_number(g), m: g.m() };
    let mut out = ZykovTrajectory {
        steps: Vec::new(),
        lambda1_monotone: true,
        omega_monotone: true,
        findings: Vec::new(),
        final_graph6: to_graph6(g),
    };
    if g.is_complete() {
        return out;
    }
    let mut current = g.clone();
    out.steps.push(record(&current, None));
    for step in 1..=steps {
        let pairs = current.non_adjacent_pairs();
        let (mut u, mut v) = pairs[rng.gen_range(0..pairs.len())];
        if orientation == ZykovOrientation::PerronAscending {
            let x = perron_weights(&current);
            if x[u] > x[v] {
                std::mem::swap(&mut u, &mut v);
            }
        }
        let before = current.clone();
        current = current.zykov(u, v).expect("pair is non-adjacent");
        let rec = record(&current, Some((u, v)));
        let prev = out.steps.last().expect("initial record");
        if rec.lambda1 < prev.lambda1 - TRAJECTORY_TOL {
            out.lambda1_monotone = false;
            out.findings.push(format!(
                "step {step}: λ1 fell from {} to {} under Z({u},{v}) on {}",
                prev.lambda1,
                rec.lambda1,
                to_graph6(&before)
            ));
        }
        if rec.omega > prev.omega {
            out.omega_monotone = false;
            out.findings.push(format!("step {step}: ω rose from {} to {} under Z({u},{v})", prev.omega, rec.omega));
        }
        out.steps.push(rec);
    }
    out.final_graph6 = to_graph6(&current);
    out
}

/// Non-negative eigenvector for `λ_1` by power iteration on `A + I`.
fn perron_weights(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..100_000 {
        let mut y: Vec<f64> = (0..n).map(|u| x[u] + g.neighbors(u).map(|v| x[v]).sum::<f64>()).collect();
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        y.iter_mut().for_each(|a| *a /= norm);
        let delta = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        if delta < 1e-14 {
            break;
        }
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Maximize `-gap`; a positive score is a counterexample.
    BnGapNegated,
    Lambda1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MoveWeights {
    pub edge_add: f64,
    pub edge_delete: f64,
    pub zykov: f64,
}

impl Default for MoveWeights {
    fn default() -> Self {
        Self { edge_add: 1.0, edge_delete: 1.0, zykov: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub n: usize,
    /// Iterations per restart.
    pub max_iters: usize,
    pub restarts: usize,
    pub weights: MoveWeights,
    pub k4_constrained: bool,
    pub objective: Objective,
    /// Edge density of each restart's random starting graph.
    pub initial_density: f64,
}

impl SearchConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            seed,
            n,
            max_iters: 2000,
            restarts: 10,
            weights: MoveWeights::default(),
            k4_constrained: true,
            objective: Objective::BnGapNegated,
            initial_density: 0.5,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let w = self.weights;
        if [w.edge_add, w.edge_delete, w.zykov].iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(SearchError::BadConfig("move weights must be finite and non-negative".into()));
        }
        if w.edge_add + w.edge_delete + w.zykov <= 0.0 {
            return Err(SearchError::BadConfig("at least one move weight must be positive".into()));
        }
        if self.n < 3 {
            return Err(SearchError::BadConfig("n must be at least 3".into()));
        }
        if self.restarts == 0 {
            return Err(SearchError::BadConfig("restarts must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.initial_density) {
            return Err(SearchError::BadDensity(self.initial_density));
        }
        Graph::empty(self.n)?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub iterations: usize,
    pub improvements: usize,
    pub sideways: usize,
    pub rejected: usize,
    pub restarts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HillClimbResult {
    pub best_graph6: String,
    pub best_score: f64,
    pub best_report: BnReport,
    pub stats: SearchStats,
    #[serde(skip)]
    pub best_graph: Graph,
}

const SCORE_EPS: f64 = 1e-12;

struct Scored {
    graph: Graph,
    score: f64,
    report: BnReport,
}

/// Scores a candidate. Complete and edgeless graphs are never states of the
/// search, so an excluded graph cannot be reported as a violation.
fn evaluate(g: &Graph, cfg: &SearchConfig, restart: usize) -> Option<Scored> {
    if g.m() == 0 || g.is_complete() {
        return None;
    }
    let report = bn_report_with(g, format!("hill_climb(seed={},restart={restart})", cfg.seed), Tolerances::default()).ok()?;
    let score = match cfg.objective {
        Objective::BnGapNegated => -report.gap,
        Objective::Lambda1 => report.lambda1,
    };
    Some(Scored { graph: g.clone(), score, report })
}

fn better(a: &Scored, b: &Scored) -> bool {
    if a.score > b.score + SCORE_EPS {
        return true;
    }
    (a.score - b.score).abs() <= SCORE_EPS && a.graph.edge_key() < b.graph.edge_key()
}

fn starting_graph(cfg: &SearchConfig, rng: &mut ChaCha8Rng) -> Graph {
    let n = cfg.n;
    for _ in 0..64 {
        let g = if cfg.k4_constrained {
            random_k4_free_with(n, cfg.initial_density, rng, K4FreeMethod::GreedyInsertion).expect("validated").graph
        } else {
            let mut g = Graph::empty(n).expect("validated");
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(cfg.initial_density) {
                        g.set_edge(u, v, true);
                    }
                }
            }
            g
        };
        if g.m() > 0 && !g.is_complete() {
            return g;
        }
    }
    Graph::path(n).expect("validated")
}

fn propose(current: &Graph, cfg: &SearchConfig, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let n = current.n();
    let w = cfg.weights;
    let pick = rng.gen_range(0.0..w.edge_add + w.edge_delete + w.zykov);
    if pick < w.edge_add {
        let non_edges: Vec<(usize, usize)> =
            current.non_adjacent_pairs().into_iter().filter(|(u, v)| u < v).collect();
        let &(u, v) = non_edges.get(rng.gen_range(0..non_edges.len().max(1)))?;
        if cfg.k4_constrained && closes_k4(current, u, v) {
            return None;
        }
        current.with_edge_toggled(u, v).ok()
    } else if pick < w.edge_add + w.edge_delete {
        let edges: Vec<(usize, usize)> = current.edges().collect();
        let &(u, v) = edges.get(rng.gen_range(0..edges.len().max(1)))?;
        current.with_edge_toggled(u, v).ok()
    } else {
        let pairs = current.non_adjacent_pairs();
        let &(u, v) = pairs.get(rng.gen_range(0..pairs.len().max(1)))?;
        debug_assert!(u < n && v < n);
        current.zykov(u, v).ok()
    }
}

fn climb(cfg: &SearchConfig, restart: usize) -> (Scored, SearchStats) {
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let mut stats = SearchStats { restarts: 1, ..SearchStats::default() };
    let start = starting_graph(cfg, &mut rng);
    let mut current = evaluate(&start, cfg, restart).expect("starting graph is in domain");
    let mut best = Scored { graph: current.graph.clone(), score: current.score, report: current.report.clone() };
    let patience = cfg.n * cfg.n;
    let mut stale = 0;
    for _ in 0..cfg.max_iters {
        stats.iterations += 1;
        let Some(candidate) = propose(&current.graph, cfg, &mut rng).and_then(|g| evaluate(&g, cfg, restart)) else {
            stats.rejected += 1;
            stale += 1;
            if stale > patience {
                break;
            }
            continue;
        };
        if candidate.score > current.score + SCORE_EPS {
            stats.improvements += 1;
            stale = 0;
            current = candidate;
        } else if (candidate.score - current.score).abs() <= SCORE_EPS {
            stats.sideways += 1;
            stale += 1;
            current = candidate;
        } else {
            stats.rejected += 1;
            stale += 1;
        }
        if better(&current, &best) {
            best = Scored { graph: current.graph.clone(), score: current.score, report: current.report.clone() };
        }
        if stale > patience {
            break;
        }
    }
    (best, stats)
}

/// First-improvement local search with sideways moves; each restart runs on
/// its own RNG stream and stops after `n²` consecutive non-improving moves.
pub fn hill_climb(cfg: &SearchConfig) -> Result<HillClimbResult, SearchError> {
    cfg.validate()?;
    if cfg.k4_constrained && cfg.n >= 4 && !is_k4_free(&Graph::path(cfg.n)?) {
        unreachable!("paths are K4-free");
    }
    let runs: Vec<(Scored, SearchStats)> = (0..cfg.restarts).into_par_iter().map(|r| climb(cfg, r)).collect();
    let mut stats = SearchStats::default();
    let mut best: Option<Scored> = None;
    for (scored, s) in runs {
        stats.iterations += s.iterations;
        stats.improvements += s.improvements;
        stats.sideways += s.sideways;
        stats.rejected += s.rejected;
        stats.restarts += s.restarts;
        if best.as_ref().is_none_or(|b| better(&scored, b)) {
            best = Some(scored);
        }
    }
    let best = best.expect("restarts >= 1");
    Ok(HillClimbResult {
        best_graph6: to_graph6(&best.graph),
        best_score: best.score,
        best_report: best.report,
        stats,
        best_graph: best.graph,
    })
}

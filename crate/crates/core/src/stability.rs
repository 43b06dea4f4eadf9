//! Edit distance to the complete tripartite family, the seeded stability
//! experiment on damaged Turán graphs, and dense-case diagnostics.
//!
//! Parts may be empty, so complete bipartite and edgeless graphs have
//! distance zero.

use crate::conjecture::{bn_report, BnReport, Check};
use crate::graph::{is_k4_free, Graph, GraphError};
use crate::search::stream_rng;
use crate::spectral::{eigenvalues, weyl_check, SpectralError};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest `n` accepted by [`edit_distance_exact`].
pub const MAX_EXACT_N: usize = 12;
/// Default case-split margin for [`dense_case_check`].
pub const DEFAULT_DELTA: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum StabilityError {
    #[error("exact edit distance supports n <= {MAX_EXACT_N}, got {0}")]
    TooLargeForExact(usize),
    #[error("cannot delete {k} edges from a graph with {m}")]
    TooManyDeletions { k: usize, m: usize },
    #[error("restarts must be at least 1")]
    NoRestarts,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EditMethod {
    Exact,
    LocalSearch,
}

impl EditMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EditMethod::Exact => "exact",
            EditMethod::LocalSearch => "local_search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EditResult {
    /// Part index in `{0, 1, 2}` per vertex, relabelled by first occurrence.
    pub assignment: Vec<u8>,
    pub edits: usize,
    /// `edits / n²`
    pub normalized: f64,
    pub method: EditMethod,
}

impl EditResult {
    fn new(assignment: Vec<u8>, edits: usize, method: EditMethod) -> Self {
        let n = assignment.len() as f64;
        Self { assignment: canonical(&assignment), edits, normalized: edits as f64 / (n * n), method }
    }
}

/// Relabels parts in order of first appearance.
fn canonical(assignment: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 3];
    let mut next = 0;
    assignment
        .iter()
        .map(|&p| {
            if map[p as usize] == u8::MAX {
                map[p as usize] = next;
                next += 1;
            }
            map[p as usize]
        })
        .collect()
}

/// Edges inside parts plus non-edges across parts.
pub fn edit_cost(g: &Graph, assignment: &[u8]) -> usize {
    assert_eq!(assignment.len(), g.n());
    let n = g.n();
    let mut cost = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            cost += (g.has_edge(u, v) == (assignment[u] == assignment[v])) as usize;
        }
    }
    cost
}

/// The complete tripartite graph with the given part labels.
pub fn tripartite_from_assignment(assignment: &[u8]) -> Result<Graph, GraphError> {
    let n = assignment.len();
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).filter(|&(u, v)| assignment[u] != assignment[v]).collect();
    Graph::from_edge_list(n, &edges)
}

/// Minimum edit cost over all `3^n` assignments, by depth-first branch and
/// bound over first-occurrence-labelled assignments in lexicographic order.
/// The first optimum found is the lexicographically smallest.
pub fn edit_distance_exact(g: &Graph) -> Result<EditResult, StabilityError> {
    let n = g.n();
    if n > MAX_EXACT_N {
        return Err(StabilityError::TooLargeForExact(n));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.row(v)[0]).collect();
    let mut search = Exact { n, adj, best_cost: usize::MAX, best: Vec::new(), current: Vec::with_capacity(n), parts: [0; 3] };
    search.dfs(0, 0, 0);
    Ok(EditResult::new(search.best, search.best_cost, EditMethod::Exact))
}

struct Exact {
    n: usize,
    adj: Vec<u64>,
    best_cost: usize,
    best: Vec<u8>,
    current: Vec<u8>,
    /// Assigned vertices per part.
    parts: [u64; 3],
}

impl Exact {
    /// Cost of the pairs between `v` and the assigned vertices if `v` joins `p`.
    fn join_cost(&self, v: usize, p: usize) -> usize {
        let nb = self.adj[v];
        (0..3)
            .map(|q| {
                let s = self.parts[q];
                if q == p { (nb & s).count_ones() } else { (s & !nb).count_ones() }
            })
            .sum::<u32>() as usize
    }

    fn dfs(&mut self, v: usize, cost: usize, used: usize) {
        if v == self.n {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = self.current.clone();
            }
            return;
        }
        // each pair between an unassigned and an assigned vertex is charged once
        let bound: usize = (v..self.n).map(|w| (0..3).map(|p| self.join_cost(w, p)).min().unwrap()).sum();
        if cost + bound >= self.best_cost {
            return;
        }
        for p in 0..(used + 1).min(3) {
            let c = cost + self.join_cost(v, p);
            self.current.push(p as u8);
            self.parts[p] |= 1 << v;
            self.dfs(v + 1, c, used.max(p + 1));
            self.parts[p] &= !(1 << v);
            self.current.pop();
        }
    }
}

/// Neighbour counts per part, kept in step with single-vertex moves.
struct LocalState<'a> {
    g: &'a Graph,
    assignment: Vec<u8>,
    sizes: [usize; 3],
    nb: Vec<[usize; 3]>,
}

impl<'a> LocalState<'a> {
    fn new(g: &'a Graph, assignment: Vec<u8>) -> Self {
        let mut sizes = [0; 3];
        let mut nb = vec![[0; 3]; g.n()];
        for (v, &p) in assignment.iter().enumerate() {
            sizes[p as usize] += 1;
            for w in g.neighbors(v) {
                nb[w][p as usize] += 1;
            }
        }
        Self { g, assignment, sizes, nb }
    }

    /// Cost of the pairs at `v` if it sat in part `p`.
    fn vertex_cost(&self, v: usize, p: usize) -> usize {
        let cur = self.assignment[v] as usize;
        (0..3)
            .map(|q| {
                let size = self.sizes[q] - (q == cur) as usize;
                if q == p { self.nb[v][q] } else { size - self.nb[v][q] }
            })
            .sum()
    }

    fn shift(&mut self, v: usize, p: usize) {
        let old = self.assignment[v] as usize;
        self.sizes[old] -= 1;
        self.sizes[p] += 1;
        for w in self.g.neighbors(v) {
            self.nb[w][old] -= 1;
            self.nb[w][p] += 1;
        }
        self.assignment[v] = p as u8;
    }

    /// Sweeps vertices in order, moving each to its cheapest part, until stable.
    fn descend(&mut self) {
        loop {
            let mut moved = false;
            for v in 0..self.g.n() {
                let cur = self.assignment[v] as usize;
                let here = self.vertex_cost(v, cur);
                let (p, c) = (0..3).map(|p| (p, self.vertex_cost(v, p))).min_by_key(|&(p, c)| (c, p)).unwrap();
                if c < here {
                    self.shift(v, p);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }
}

/// Each vertex in turn joins the part that is cheapest against the vertices before it.
fn greedy_assignment(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut assignment: Vec<u8> = Vec::with_capacity(n);
    for v in 0..n {
        let cost = |p: u8| -> usize {
            (0..v).map(|w| (g.has_edge(v, w) == (assignment[w] == p)) as usize).sum()
        };
        let p = (0..3u8).min_by_key(|&p| (cost(p), p)).unwrap();
        assignment.push(p);
    }
    assignment
}

/// Single-vertex-move descent, best of `restarts`. Restart 0 starts from a
/// greedy assignment; the others start from uniform random assignments on
/// their own RNG streams.
pub fn edit_distance_local(g: &Graph, restarts: usize, seed: u64) -> Result<EditResult, StabilityError> {
    if restarts == 0 {
        return Err(StabilityError::NoRestarts);
    }
    let runs: Vec<(usize, Vec<u8>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                greedy_assignment(g)
            } else {
                let mut rng = stream_rng(seed, r as u64);
                (0..g.n()).map(|_| rng.gen_range(0..3u8)).collect()
            };
            let mut state = LocalState::new(g, start);
            state.descend();
            let a = canonical(&state.assignment);
            (edit_cost(g, &a), a)
        })
        .collect();
    let (edits, assignment) = runs.into_iter().min().expect("restarts >= 1");
    Ok(EditResult::new(assignment, edits, EditMethod::LocalSearch))
}

/// Exact up to [`MAX_EXACT_N`] vertices, local search above.
pub fn edit_distance(g: &Graph, restarts: usize, seed: u64) -> Result<EditResult, StabilityError> {
    if g.n() <= MAX_EXACT_N {
        edit_distance_exact(g)
    } else {
        edit_distance_local(g, restarts, seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub n: usize,
    pub k: usize,
    pub sample: usize,
    pub m: usize,
    pub lambda1_sq_over_m: f64,
    pub edits: usize,
    pub edits_normalized: f64,
    pub method: EditMethod,
}

impl StabilityRow {
    pub const CSV_HEADER: &'static str = "n,k,sample,m,lambda1_sq_over_m,edits,edits_normalized,method";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:?},{},{:?},{}",
            self.n,
            self.k,
            self.sample,
            self.m,
            self.lambda1_sq_over_m,
            self.edits,
            self.edits_normalized,
            self.method.as_str()
        )
    }
}

/// Restarts used by the experiment when `n` is too large for the exact method.
pub const EXPERIMENT_RESTARTS: usize = 16;

/// For each `k` in `grid`, `samples` copies of `T(n,3)` with `k` distinct
/// edges deleted uniformly at random. Sample `s` of grid entry `i` draws from
/// stream `i·samples + s`; rows come out in grid order, then sample order.
pub fn stability_experiment(n: usize, grid: &[usize], samples: usize, seed: u64) -> Result<Vec<StabilityRow>, StabilityError> {
    let base = Graph::turan(n, 3)?;
    let base_edges: Vec<(usize, usize)> = base.edges().collect();
    if let Some(&k) = grid.iter().find(|&&k| k > base_edges.len()) {
        return Err(StabilityError::TooManyDeletions { k, m: base_edges.len() });
    }
    let units: Vec<(usize, usize, usize)> =
        grid.iter().enumerate().flat_map(|(i, &k)| (0..samples).map(move |s| (i, k, s))).collect();
    units
        .into_par_iter()
        .map(|(i, k, sample)| {
            let stream = (i * samples + sample) as u64;
            let mut rng = stream_rng(seed, stream);
            let mut g = base.clone();
            for &(u, v) in base_edges.choose_multiple(&mut rng, k) {
                g = g.with_edge_toggled(u, v)?;
            }
            let m = g.m();
            let l1 = eigenvalues(&g).lambda1();
            let edit = edit_distance(&g, EXPERIMENT_RESTARTS, seed ^ stream.rotate_left(32))?;
            Ok(StabilityRow {
                n,
                k,
                sample,
                m,
                lambda1_sq_over_m: if m == 0 { f64::NAN } else { l1 * l1 / m as f64 },
                edits: edit.edits,
                edits_normalized: edit.normalized,
                method: edit.method,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripartiteWeyl {
    /// `|E(g) Δ E(h)|`
    pub edits: usize,
    pub abs_lambda2: f64,
    pub spectral_norm: f64,
    pub sqrt_two_k: f64,
    pub holds: bool,
}

/// `|λ_2(g)| <= ‖A(g) - A(h)‖_2 <= sqrt(2k)` for a complete tripartite `h`
/// with `λ_2(h) = 0` (that is, `h` has more vertices than non-empty parts).
pub fn tripartite_weyl(g: &Graph, h: &Graph, tol: f64) -> Result<TripartiteWeyl, StabilityError> {
    let w = weyl_check(g, h, tol)?;
    let abs_lambda2 = eigenvalues(g).lambda2().unwrap_or(0.0).abs();
    let sqrt_two_k = (2.0 * w.symmetric_difference as f64).sqrt();
    Ok(TripartiteWeyl {
        edits: w.symmetric_difference,
        abs_lambda2,
        spectral_norm: w.spectral_norm,
        sqrt_two_k,
        holds: abs_lambda2 <= w.spectral_norm + tol && w.spectral_norm <= sqrt_two_k + tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseCase {
    /// `λ_1² > (4/3 - δ)m`: the stability branch.
    NearExtremal,
    /// `λ_1² <= (4/3 - δ)m`: the triangle-count branch.
    FarFromExtremal,
}

/// Evaluation of the dense-case argument at one graph. The triangle and
/// `λ_2³` comparisons are observations; only `bn` is a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseCaseReport {
    pub n: usize,
    pub m: usize,
    pub c: f64,
    pub delta: f64,
    pub lambda1_sq: f64,
    /// `(4/3 - δ)m`
    pub threshold: f64,
    pub case: DenseCase,
    pub triangles: u64,
    /// `n·d²/12` with `d = 2m/n`
    pub triangle_bound: f64,
    pub triangles_within_bound: bool,
    pub lambda2_cubed: f64,
    /// `2m²/n`
    pub lambda2_cube_bound: f64,
    pub lambda2_cube_within_bound: bool,
    /// `λ_2² <= δm/3`, the step that closes the second case.
    pub lambda2_sq_within_delta_m_over_3: bool,
    pub bn: BnReport,
}

pub fn dense_case_check(g: &Graph, c: f64, delta: f64) -> Check<DenseCaseReport> {
    let (n, m) = (g.n(), g.m());
    if !is_k4_free(g) {
        return Check::not_applicable("graph contains K4");
    }
    if n == 3 && g.is_complete() {
        return Check::not_applicable("graph is K3");
    }
    if m == 0 {
        return Check::not_applicable("graph has no edges");
    }
    if (m as f64) < c * (n * n) as f64 {
        return Check::not_applicable("fewer than c·n² edges");
    }
    let bn = match bn_report(g) {
        Ok(r) => r,
        Err(e) => return Check::not_applicable(&e.to_string()),
    };
    let (nf, mf) = (n as f64, m as f64);
    let lambda1_sq = bn.lambda1 * bn.lambda1;
    let threshold = (4.0 / 3.0 - delta) * mf;
    let d = 2.0 * mf / nf;
    let triangles = g.triangle_count();
    let triangle_bound = nf * d * d / 12.0;
    let lambda2_cubed = bn.lambda2.powi(3);
    let lambda2_cube_bound = 2.0 * mf * mf / nf;
    Check::Checked(DenseCaseReport {
        n,
        m,
        c,
        delta,
        lambda1_sq,
        threshold,
        case: if lambda1_sq > threshold { DenseCase::NearExtremal } else { DenseCase::FarFromExtremal },
        triangles,
        triangle_bound,
        triangles_within_bound: triangles as f64 <= triangle_bound,
        lambda2_cubed,
        lambda2_cube_bound,
        lambda2_cube_within_bound: lambda2_cubed <= lambda2_cube_bound,
        lambda2_sq_within_delta_m_over_3: bn.lambda2 * bn.lambda2 <= delta * mf / 3.0,
        bn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartSizes;

    fn brute_force(g: &Graph) -> usize {
        let n = g.n();
        (0..3usize.pow(n as u32))
            .map(|mut code| {
                let a: Vec<u8> = (0..n)
                    .map(|_| {
                        let p = (code % 3) as u8;
                        code /= 3;
                        p
                    })
                    .collect();
                edit_cost(g, &a)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(edit_distance_exact(&Graph::turan(6, 3).unwrap()).unwrap().edits, 0);
        assert_eq!(edit_distance_exact(&Graph::cycle(5).unwrap()).unwrap().edits, 3);
        assert_eq!(edit_distance_exact(&Graph::complete(4).unwrap()).unwrap().edits, 1);
        let k33 = Graph::complete_multipartite(&PartSizes::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(edit_distance_exact(&k33).unwrap().edits, 0);
        assert_eq!(edit_distance_exact(&Graph::empty(7).unwrap()).unwrap().assignment, vec![0; 7]);
        assert!(matches!(edit_distance_exact(&Graph::empty(13).unwrap()), Err(StabilityError::TooLargeForExact(13))));
    }

    #[test]
    fn exact_is_lexicographically_smallest_optimum() {
        // K4: the lex-smallest optimal assignment puts vertices 0 and 1 together
        let r = edit_distance_exact(&Graph::complete(4).unwrap()).unwrap();
        assert_eq!(r.assignment, vec![0, 0, 1, 2]);
        assert_eq!(edit_cost(&Graph::complete(4).unwrap(), &r.assignment), 1);
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..40 {
            let n = rng.gen_range(1..=7);
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        g = g.with_edge_toggled(u, v).unwrap();
                    }
                }
            }
            let r = edit_distance_exact(&g).unwrap();
            assert_eq!(r.edits, brute_force(&g));
            assert_eq!(edit_cost(&g, &r.assignment), r.edits);
        }
    }

    #[test]
    fn local_on_turan_and_bipartite() {
        let r = edit_distance_local(&Graph::turan(30, 3).unwrap(), 4, 1).unwrap();
        assert_eq!(r.edits, 0);
        let k33 = Graph::complete_multipartite(&PartSizes::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(edit_distance_local(&k33, 3, 2).unwrap().edits, 0);
        assert_eq!(edit_distance_local(&k33, 0, 2), Err(StabilityError::NoRestarts));
    }

    #[test]
    fn experiment_rows() {
        let rows = stability_experiment(12, &[0, 1, 5], 4, 3).unwrap();
        assert_eq!(rows.len(), 12);
        let zero = &rows[0];
        assert_eq!((zero.k, zero.edits, zero.m), (0, 0, 48));
        assert!((zero.lambda1_sq_over_m - 4.0 / 3.0).abs() < 1e-9);
        for r in &rows {
            assert!(r.edits <= r.k);
            assert_eq!(r.m, 48 - r.k);
        }
        assert_eq!(rows, stability_experiment(12, &[0, 1, 5], 4, 3).unwrap());
        assert!(matches!(stability_experiment(6, &[13], 1, 0), Err(StabilityError::TooManyDeletions { k: 13, m: 12 })));
    }

    #[test]
    fn csv_shape() {
        let rows = stability_experiment(6, &[1], 1, 0).unwrap();
        assert_eq!(StabilityRow::CSV_HEADER.split(',').count(), rows[0].csv_row().split(',').count());
        assert!(rows[0].csv_row().ends_with(",exact"));
    }

    #[test]
    fn weyl_near_tripartite() {
        let h = Graph::turan(9, 3).unwrap();
        let g = h.with_edge_toggled(0, 1).unwrap().with_edge_toggled(0, 3).unwrap();
        let w = tripartite_weyl(&g, &h, 1e-9).unwrap();
        assert_eq!(w.edits, 2);
        assert!(w.holds);
        assert_eq!(w.sqrt_two_k, 2.0);
    }

    #[test]
    fn dense_case_examples() {
        let k333 = Graph::turan(9, 3).unwrap();
        let r = dense_case_check(&k333, 0.25, DEFAULT_DELTA).checked().unwrap().clone();
        assert_eq!(r.m, 27);
        assert!(r.bn.holds && r.bn.equality);
        assert_eq!(r.case, DenseCase::NearExtremal);

        let c5 = dense_case_check(&Graph::cycle(5).unwrap(), 0.2, DEFAULT_DELTA).checked().unwrap().clone();
        assert!(c5.bn.holds && !c5.bn.equality);
        assert_eq!(c5.triangles, 0);
        assert!((c5.triangle_bound - 5.0 / 3.0).abs() < 1e-12);
        assert!(c5.triangles_within_bound);

        let k222 = Graph::turan(6, 3).unwrap().with_edge_toggled(0, 2).unwrap();
        let r = dense_case_check(&k222, 0.25, DEFAULT_DELTA).checked().unwrap().clone();
        assert!(r.bn.holds && r.bn.gap > 1e-9);

        assert!(dense_case_check(&Graph::complete(3).unwrap(), 0.1, DEFAULT_DELTA).checked().is_none());
        assert!(dense_case_check(&Graph::complete(4).unwrap(), 0.1, DEFAULT_DELTA).checked().is_none());
        assert!(dense_case_check(&Graph::cycle(5).unwrap(), 0.21, DEFAULT_DELTA).checked().is_none());
    }
}

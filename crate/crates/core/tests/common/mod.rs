#![allow(dead_code)]

use bn_core::search::stream_rng;
use bn_core::{parse_graph6, Graph};
use rand::Rng;
use std::path::PathBuf;

/// One graph per isomorphism class on 1 to 8 vertices.
pub fn bundled_corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/graphs_upto8.g6")
}

pub fn load_graph6(path: &std::path::Path) -> Vec<Graph> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_graph6(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &edges).unwrap()
}

/// Mixed-size random graphs: `count` draws with `n` in `lo..=hi` and uniform density.
pub fn random_graphs(seed: u64, count: usize, lo: usize, hi: usize) -> Vec<Graph> {
    let mut rng = stream_rng(seed, 0);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let p = rng.gen_range(0.0..1.0);
            gnp(n, p, &mut rng)
        })
        .collect()
}

/// Eigenvalues from nalgebra's symmetric solver, non-increasing.
pub fn nalgebra_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let m = nalgebra::DMatrix::from_row_slice(n, n, &g.adjacency_matrix());
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Largest clique by checking every vertex subset; `n <= 16`.
pub fn brute_clique(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&s| {
            let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

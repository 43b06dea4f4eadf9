//! Exact clique search: branch and bound with greedy-colouring bounds.

use super::Graph;
use crate::bits;

/// `ω(G)`. Vertices are coloured greedily in increasing index order, so the
/// search is fully deterministic.
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    let candidates = bits::full(g.n());
    expand(g, 0, candidates, &mut best);
    best
}

/// `α(G) = ω(complement of G)`.
pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Direct search for four mutually adjacent vertices, exiting on the first hit.
pub fn is_k4_free(g: &Graph) -> bool {
    let mut common = vec![0u64; g.row(0).len()];
    for (u, v) in g.edges() {
        for ((c, a), b) in common.iter_mut().zip(g.row(u)).zip(g.row(v)) {
            *c = a & b;
        }
        if bits::iter_ones(&common).any(|w| bits::and_count(g.row(w), &common) > 0) {
            return false;
        }
    }
    true
}

fn expand(g: &Graph, size: usize, mut candidates: Vec<u64>, best: &mut usize) {
    let (order, colors) = colour_sort(g, &candidates);
    for idx in (0..order.len()).rev() {
        if size + colors[idx] <= *best {
            return;
        }
        let v = order[idx];
        let next: Vec<u64> = candidates.iter().zip(g.row(v)).map(|(c, r)| c & r).collect();
        if bits::is_empty(&next) {
            *best = (*best).max(size + 1);
        } else {
            expand(g, size + 1, next, best);
        }
        bits::clear(&mut candidates, v);
    }
}

/// Sequential greedy colouring of `candidates`; returns vertices with
/// non-decreasing colour numbers (1-based).
fn colour_sort(g: &Graph, candidates: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = candidates.to_vec();
    let mut order = Vec::with_capacity(bits::count(candidates));
    let mut colors = Vec::with_capacity(order.capacity());
    let mut color = 0;
    while !bits::is_empty(&uncoloured) {
        color += 1;
        let mut open = uncoloured.clone();
        while let Some(v) = bits::first(&open) {
            bits::clear(&mut uncoloured, v);
            bits::clear(&mut open, v);
            for (o, r) in open.iter_mut().zip(g.row(v)) {
                *o &= !r;
            }
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartSizes;

    /// Largest `k` such that some `k`-subset is a clique, by plain enumeration.
    fn brute_clique(g: &Graph) -> usize {
        let n = g.n();
        assert!(n <= 16);
        (0u32..1 << n)
            .filter(|mask| {
                let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn named_graphs() {
        let k222 = Graph::turan(6, 3).unwrap();
        assert_eq!(clique_number(&k222), 3);
        assert_eq!(independence_number(&k222), 2);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(clique_number(&c5), 2);
        assert_eq!(independence_number(&c5), 2);
        assert_eq!(clique_number(&Graph::complete(5).unwrap()), 5);
        assert_eq!(independence_number(&Graph::empty(4).unwrap()), 4);
        assert_eq!(clique_number(&Graph::empty(1).unwrap()), 1);
    }

    #[test]
    fn k4_detection() {
        let k333 = Graph::complete_multipartite(&PartSizes::new(vec![3, 3, 3]).unwrap()).unwrap();
        assert!(is_k4_free(&k333));
        assert!(!is_k4_free(&Graph::complete(4).unwrap()));
        assert!(is_k4_free(&Graph::petersen()));
    }

    #[test]
    fn petersen_has_no_triangle_by_subset_enumeration() {
        let g = Graph::petersen();
        assert_eq!(brute_clique(&g), 2);
        assert_eq!(clique_number(&g), 2);
        // every 4-subset fails to be a clique
        for mask in (0u32..1 << 10).filter(|m| m.count_ones() == 4) {
            let vs: Vec<usize> = (0..10).filter(|&i| mask >> i & 1 == 1).collect();
            let all = vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)));
            assert!(!all);
        }
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        // deterministic pseudo-random graphs from a linear congruential sequence
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for n in 1..=12 {
            for _ in 0..20 {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        if state >> 62 != 0 {
                            edges.push((u, v));
                        }
                    }
                }
                let g = Graph::from_edge_list(n, &edges).unwrap();
                assert_eq!(clique_number(&g), brute_clique(&g), "{g:?}");
                assert_eq!(is_k4_free(&g), brute_clique(&g) <= 3);
            }
        }
    }
}

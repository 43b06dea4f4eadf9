use super::{GraphError, MAX_VERTICES};
use serde::Serialize;

/// Part sizes of a complete multipartite graph, kept non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    /// Canonicalizes `sizes` to non-increasing order; needs `r >= 2` positive parts.
    pub fn new(mut sizes: Vec<usize>) -> Result<Self, GraphError> {
        if sizes.len() < 2 {
            return Err(GraphError::InvalidParts(format!("need at least 2 parts, got {}", sizes.len())));
        }
        if sizes.contains(&0) {
            return Err(GraphError::InvalidParts("part sizes must be positive".into()));
        }
        let n: usize = sizes.iter().sum();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(sizes))
    }

    /// Balanced sizes `floor(n/r)` / `ceil(n/r)`, larger parts first.
    pub fn turan(n: usize, r: usize) -> Result<Self, GraphError> {
        if r < 2 || r > n {
            return Err(GraphError::InvalidTuran { n, r });
        }
        let (q, rem) = (n / r, n % r);
        Self::new((0..r).map(|i| if i < rem { q + 1 } else { q }).collect())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts.
    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// `sum_{i<j} n_i n_j`.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        let sq: usize = self.0.iter().map(|s| s * s).sum();
        (n * n - sq) / 2
    }

    /// Distinct sizes `p_1 > ... > p_s` with their multiplicities `t_k`.
    pub fn distinct(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &s in &self.0 {
            match out.last_mut() {
                Some((p, t)) if *p == s => *t += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    pub fn is_balanced(&self) -> bool {
        self.0.first() == self.0.last()
    }

    /// Part index of every vertex under the grouping used by
    /// [`super::Graph::complete_multipartite`].
    pub fn vertex_parts(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect()
    }
}

impl std::fmt::Display for PartSizes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "K({})", body.join(","))
    }
}

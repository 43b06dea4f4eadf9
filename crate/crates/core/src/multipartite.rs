//! Exact spectrum of complete multipartite graphs.
//!
//! Every eigenvector of `K_{n_1,...,n_r}` is either a within-part difference
//! vector (eigenvalue 0), a difference of constant vectors on two equal-size
//! parts (eigenvalue `-p`), or constant on every part with value
//! `c_i = s / (λ + n_i)`, which forces `Σ n_i / (λ + n_i) = 1`.
//!
//! Root finding works on the collapsed form `Σ_k t_k p_k / (λ + p_k)` over the
//! distinct sizes `p_1 > ... > p_s`, so every pole is simple. There is one
//! root in `(0, n]` and one between each pair of consecutive poles.

use crate::graph::{Graph, PartSizes};
use crate::spectral::Spectrum;
use serde::Serialize;
use thiserror::Error;

/// Distance from a pole below which [`quotient_eigenvector`] refuses a root.
pub const POLE_GUARD: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultipartiteError {
    #[error("λ = {0} is a pole of the secular function")]
    Pole(f64),
    #[error("root {root} lies within {POLE_GUARD} of the pole {pole}")]
    NearPole { root: f64, pole: f64 },
}

/// Structured spectrum of `K_{n_1,...,n_r}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecularSpectrum {
    pub parts: PartSizes,
    /// `(p_k, t_k)` with `p_1 > ... > p_s`.
    pub distinct: Vec<(usize, usize)>,
    /// One positive root, then one root per inter-pole interval, descending.
    pub secular_roots: Vec<f64>,
    /// `(-p_k, t_k - 1)` for every size that occurs more than once.
    pub pole_eigenvalues: Vec<(f64, usize)>,
    pub zero_multiplicity: usize,
}

impl SecularSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.secular_roots.len() + self.pole_eigenvalues.iter().map(|(_, t)| t).sum::<usize>() + self.zero_multiplicity
    }

    /// All `n` eigenvalues, non-increasing.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parts.n());
        out.extend(&self.secular_roots);
        for &(value, mult) in &self.pole_eigenvalues {
            out.extend(std::iter::repeat_n(value, mult));
        }
        out.extend(std::iter::repeat_n(0.0, self.zero_multiplicity));
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    pub fn to_spectrum(&self) -> Spectrum {
        Spectrum::new(self.flatten(), self.parts.edge_count())
    }

    pub fn lambda1(&self) -> f64 {
        self.secular_roots[0]
    }
}

/// `f(λ) = Σ_i n_i / (λ + n_i)` summed over all `r` parts.
pub fn secular_value(parts: &PartSizes, lambda: f64) -> Result<f64, MultipartiteError> {
    if parts.sizes().iter().any(|&s| lambda + s as f64 == 0.0) {
        return Err(MultipartiteError::Pole(lambda));
    }
    Ok(parts.sizes().iter().map(|&s| s as f64 / (lambda + s as f64)).sum())
}

fn collapsed(distinct: &[(usize, usize)], lambda: f64) -> (f64, f64) {
    distinct.iter().fold((0.0, 0.0), |(f, df), &(p, t)| {
        let p = p as f64;
        let w = t as f64 * p;
        let den = lambda + p;
        (f + w / den, df - w / (den * den))
    })
}

/// Root of `collapsed = 1` in `(lo, hi)` given `f(lo) > 1 > f(hi)`.
fn bracketed_root(distinct: &[(usize, usize)], mut lo: f64, mut hi: f64) -> f64 {
    let width = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if collapsed(distinct, mid).0 > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let (f, df) = collapsed(distinct, x);
    let polished = x - (f - 1.0) / df;
    if polished.is_finite() && (lo..=hi).contains(&polished) {
        polished
    } else {
        x
    }
}

/// The `s` roots of the secular equation, descending.
pub fn secular_roots(parts: &PartSizes) -> Vec<f64> {
    let distinct = parts.distinct();
    let mut roots = Vec::with_capacity(distinct.len());
    roots.push(bracketed_root(&distinct, 0.0, parts.n() as f64));
    // poles -p_1 < -p_2 < ... < -p_s; walk the gaps from the right
    for k in (0..distinct.len() - 1).rev() {
        let (left, right) = (distinct[k].0 as f64, distinct[k + 1].0 as f64);
        let lo = -left + (1e-12 * left).max(1e-12);
        let hi = -right - (1e-12 * right).max(1e-12);
        roots.push(bracketed_root(&distinct, lo, hi));
    }
    roots
}

pub fn multipartite_spectrum(parts: &PartSizes) -> SecularSpectrum {
    let distinct = parts.distinct();
    let pole_eigenvalues = distinct.iter().filter(|(_, t)| *t > 1).map(|&(p, t)| (-(p as f64), t - 1)).collect();
    SecularSpectrum {
        parts: parts.clone(),
        secular_roots: secular_roots(parts),
        pole_eigenvalues,
        zero_multiplicity: parts.n() - parts.r(),
        distinct,
    }
}

/// `λ_2`: exactly 0 when `n > r`, exactly -1 for `K_r`.
pub fn lambda2_multipartite(parts: &PartSizes) -> f64 {
    if parts.n() > parts.r() {
        0.0
    } else {
        -1.0
    }
}

/// A within-part difference vector `e_{u_k} - e_{u_last}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroBasisVector {
    pub part_index: usize,
    pub member_index: usize,
    pub coefficients: Vec<i64>,
}

/// The `n - r` difference vectors spanning the zero eigenspace, using the
/// vertex grouping of [`Graph::complete_multipartite`].
pub fn zero_eigenbasis(parts: &PartSizes) -> Vec<ZeroBasisVector> {
    let n = parts.n();
    let mut out = Vec::with_capacity(n - parts.r());
    let mut offset = 0;
    for (i, &size) in parts.sizes().iter().enumerate() {
        let last = offset + size - 1;
        for k in 0..size - 1 {
            let mut coefficients = vec![0; n];
            coefficients[offset + k] = 1;
            coefficients[last] = -1;
            out.push(ZeroBasisVector { part_index: i, member_index: k, coefficients });
        }
        offset += size;
    }
    out
}

/// Part-constant eigenvector coefficients `c_i = 1 / (root + n_i)`, normalized
/// so that `Σ n_i c_i = 1`.
pub fn quotient_eigenvector(parts: &PartSizes, root: f64) -> Result<Vec<f64>, MultipartiteError> {
    if let Some(&s) = parts.sizes().iter().find(|&&s| (root + s as f64).abs() < POLE_GUARD) {
        return Err(MultipartiteError::NearPole { root, pole: -(s as f64) });
    }
    Ok(parts.sizes().iter().map(|&s| 1.0 / (root + s as f64)).collect())
}

/// Spread part coefficients over the vertices of [`Graph::complete_multipartite`].
pub fn lift_to_vertices(parts: &PartSizes, coefficients: &[f64]) -> Vec<f64> {
    parts.vertex_parts().into_iter().map(|i| coefficients[i]).collect()
}

/// Closed-form spectrum for bipartite, complete and balanced cases.
pub fn closed_forms(parts: &PartSizes) -> Option<Spectrum> {
    let (n, r, m) = (parts.n(), parts.r(), parts.edge_count());
    let sizes = parts.sizes();
    let values = if r == 2 {
        let root = ((sizes[0] * sizes[1]) as f64).sqrt();
        let mut v = vec![root];
        v.extend(std::iter::repeat_n(0.0, n - 2));
        v.push(-root);
        v
    } else if parts.is_balanced() {
        let p = sizes[0];
        let mut v = vec![((r - 1) * p) as f64];
        v.extend(std::iter::repeat_n(0.0, n - r));
        v.extend(std::iter::repeat_n(-(p as f64), r - 1));
        v
    } else {
        return None;
    };
    Some(Spectrum::new(values, m))
}

/// Convenience for callers that want the graph and its exact spectrum together.
pub fn graph_and_spectrum(parts: &PartSizes) -> (Graph, SecularSpectrum) {
    let g = Graph::complete_multipartite(parts).expect("PartSizes respects the vertex cap");
    (g, multipartite_spectrum(parts))
}

//! Dense symmetric eigenvalues, trace identities and Weyl perturbation checks.
//!
//! Eigenvalues are computed by Householder reduction to tridiagonal form
//! followed by implicit-shift QL sweeps. Eigenvectors are never formed.

use crate::graph::Graph;
use serde::Serialize;
use thiserror::Error;

/// Absolute tolerance for trace identities.
pub const TRACE_TOL: f64 = 1e-8;
/// Absolute tolerance for `Σ λ_i^3 = 6 t_3`.
pub const CUBIC_TRACE_TOL: f64 = 1e-6;
/// Relative tolerance for comparing two independently computed spectra.
pub const ORACLE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("graphs have different vertex counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("QL iteration failed to converge")]
    NoConvergence,
}

/// Adjacency eigenvalues `λ_1 >= ... >= λ_n` of a graph with `source_m` edges.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub source_m: usize,
    pub tol: f64,
}

impl Spectrum {
    /// Sorts `values` non-increasing.
    pub fn new(mut values: Vec<f64>, source_m: usize) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, source_m, tol: TRACE_TOL }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lambda1(&self) -> f64 {
        self.values[0]
    }

    /// Second largest eigenvalue; `None` for a single vertex.
    pub fn lambda2(&self) -> Option<f64> {
        self.values.get(1).copied()
    }

    pub fn lambda_n(&self) -> f64 {
        *self.values.last().expect("spectrum is never empty")
    }

    /// `Σ λ_i^k`.
    pub fn power_sum(&self, k: i32) -> f64 {
        self.values.iter().map(|l| l.powi(k)).sum()
    }

    /// Largest elementwise difference against `other`, divided by `max(1, |λ_1|)`.
    pub fn max_relative_deviation(&self, other: &[f64]) -> f64 {
        assert_eq!(self.values.len(), other.len());
        let scale = self.values[0].abs().max(1.0);
        self.values.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
    }
}

/// Full adjacency spectrum of `g`.
pub fn eigenvalues(g: &Graph) -> Spectrum {
    let values = symmetric_eigenvalues(g.n(), g.adjacency_matrix()).expect("QL converges on adjacency matrices");
    Spectrum::new(values, g.m())
}

/// Eigenvalues of the symmetric row-major `n x n` matrix `a`, sorted non-increasing.
pub fn symmetric_eigenvalues(n: usize, mut a: Vec<f64>) -> Result<Vec<f64>, SpectralError> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(n, &mut a);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| y.total_cmp(x));
    Ok(d)
}

/// Householder reduction of the lower triangle of `a`; returns the diagonal
/// and the sub-diagonal (`e[i]` couples rows `i - 1` and `i`, `e[0] = 0`).
fn tridiagonalize(n: usize, a: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let row = i * n;
        if l == 0 {
            e[i] = a[row];
            continue;
        }
        let scale: f64 = a[row..=row + l].iter().map(|x| x.abs()).sum();
        if scale == 0.0 {
            e[i] = a[row + l];
            continue;
        }
        let mut h = 0.0;
        for x in &mut a[row..=row + l] {
            *x /= scale;
            h += *x * *x;
        }
        let f = a[row + l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[row + l] = f - g;

        let mut f = 0.0;
        for j in 0..=l {
            let mut g = 0.0;
            for k in 0..=j {
                g += a[j * n + k] * a[row + k];
            }
            for k in (j + 1)..=l {
                g += a[k * n + j] * a[row + k];
            }
            e[j] = g / h;
            f += e[j] * a[row + j];
        }
        let hh = f / (h + h);
        for j in 0..=l {
            let f = a[row + j];
            let g = e[j] - hh * f;
            e[j] = g;
            for k in 0..=j {
                a[j * n + k] -= f * e[k] + g * a[row + k];
            }
        }
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    e[0] = 0.0;
    (d, e)
}

/// Implicit-shift QL on the tridiagonal `(d, e)`; eigenvalues end up in `d`.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<(), SpectralError> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 64 {
                return Err(SpectralError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceCheck {
    /// `|Σ λ_i|`
    pub sum_residual: f64,
    /// `|Σ λ_i^2 - 2m|`
    pub square_residual: f64,
    pub pass: bool,
}

/// Checks `Σ λ_i = 0` within `tol·n` and `Σ λ_i^2 = 2m` within `tol·max(1, 2m)`.
pub fn trace_check(s: &Spectrum) -> TraceCheck {
    let n = s.len() as f64;
    let two_m = 2.0 * s.source_m as f64;
    let sum_residual = s.power_sum(1).abs();
    let square_residual = (s.power_sum(2) - two_m).abs();
    let pass = sum_residual <= s.tol * n && square_residual <= s.tol * two_m.max(1.0);
    TraceCheck { sum_residual, square_residual, pass }
}

/// `|Σ λ_i^3 - 6 t_3|` for the spectrum of a graph with `triangles` triangles.
pub fn cubic_trace_residual(s: &Spectrum, triangles: u64) -> f64 {
    (s.power_sum(3) - 6.0 * triangles as f64).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylReport {
    /// `‖A(g) - A(h)‖_2`
    pub spectral_norm: f64,
    /// `‖A(g) - A(h)‖_F = sqrt(2 |E(g) Δ E(h)|)`
    pub frobenius_norm: f64,
    pub symmetric_difference: usize,
    /// `|λ_k(g) - λ_k(h)|` for every `k`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub holds: bool,
}

/// Compares the spectra of `g` and `h` against the norm of their difference.
pub fn weyl_check(g: &Graph, h: &Graph, tol: f64) -> Result<WeylReport, SpectralError> {
    if g.n() != h.n() {
        return Err(SpectralError::DimensionMismatch(g.n(), h.n()));
    }
    let n = g.n();
    let mut diff = g.adjacency_matrix();
    for (x, y) in diff.iter_mut().zip(h.adjacency_matrix()) {
        *x -= y;
    }
    let symmetric_difference = diff.iter().filter(|x| **x != 0.0).count() / 2;
    let e = symmetric_eigenvalues(n, diff)?;
    let spectral_norm = e.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let (sg, sh) = (eigenvalues(g), eigenvalues(h));
    let deviations: Vec<f64> = sg.values.iter().zip(&sh.values).map(|(a, b)| (a - b).abs()).collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(WeylReport {
        spectral_norm,
        frobenius_norm: (2.0 * symmetric_difference as f64).sqrt(),
        symmetric_difference,
        holds: max_deviation <= spectral_norm + tol,
        deviations,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartSizes;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn small_named_spectra() {
        assert_close(&eigenvalues(&Graph::complete(3).unwrap()).values, &[2.0, -1.0, -1.0], 1e-12);
        let k23 = Graph::complete_multipartite(&PartSizes::new(vec![2, 3]).unwrap()).unwrap();
        let r6 = 6f64.sqrt();
        assert_close(&eigenvalues(&k23).values, &[r6, 0.0, 0.0, 0.0, -r6], 1e-12);
        assert_eq!(eigenvalues(&Graph::empty(1).unwrap()).values, vec![0.0]);
    }

    #[test]
    fn cycle_spectrum_is_cosines() {
        for n in 3..40 {
            let s = eigenvalues(&Graph::cycle(n).unwrap());
            let mut want: Vec<f64> =
                (0..n).map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
            want.sort_by(|a, b| b.total_cmp(a));
            assert_close(&s.values, &want, 1e-12);
        }
    }

    #[test]
    fn trace_checks() {
        let s = eigenvalues(&Graph::turan(6, 3).unwrap());
        let t = trace_check(&s);
        assert!(t.pass);
        assert!((s.power_sum(2) - 24.0).abs() < 1e-10);

        let t = trace_check(&eigenvalues(&Graph::empty(4).unwrap()));
        assert_eq!((t.sum_residual, t.square_residual, t.pass), (0.0, 0.0, true));

        let tampered = Spectrum::new(vec![4.0, 0.0, 0.0, 0.0, -2.0, -2.0], 13);
        let t = trace_check(&tampered);
        assert!(t.sum_residual <= 1e-12);
        assert_eq!(t.square_residual, 2.0);
        assert!(!t.pass);
    }

    #[test]
    fn weyl_examples() {
        let g = Graph::turan(6, 3).unwrap();
        let r = weyl_check(&g, &g, 1e-9).unwrap();
        assert_eq!((r.spectral_norm, r.max_deviation), (0.0, 0.0));

        let h = g.with_edge_toggled(0, 2).unwrap();
        let r = weyl_check(&g, &h, 1e-9).unwrap();
        assert!((r.spectral_norm - 1.0).abs() < 1e-12);
        assert!(r.holds);
        assert!((r.frobenius_norm - 2f64.sqrt()).abs() < 1e-15);

        let r = weyl_check(&Graph::complete(5).unwrap(), &Graph::empty(5).unwrap(), 1e-9).unwrap();
        assert!((r.spectral_norm - 4.0).abs() < 1e-12);
        assert!((r.max_deviation - 4.0).abs() < 1e-12);

        assert_eq!(
            weyl_check(&g, &Graph::empty(5).unwrap(), 1e-9),
            Err(SpectralError::DimensionMismatch(6, 5))
        );
    }

    #[test]
    fn handles_decoupled_blocks() {
        // disjoint union of K3 and an isolated vertex exercises deflation
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_close(&eigenvalues(&g).values, &[2.0, 0.0, -1.0, -1.0], 1e-12);
    }
}

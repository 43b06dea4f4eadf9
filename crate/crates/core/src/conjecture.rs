//! Gap reports for `λ_1² + λ_2² <= 2(1 - 1/ω) m` and the eigenvalue bounds
//! that surround it: the spectral Turán bound, the Hoffman ratio bound, and
//! the trace-identity estimate `2m - λ_1²/4` for K4-free graphs with large
//! independent sets.

use crate::graph::{clique_number, independence_number, is_k4_free, Graph, PartSizes};
use crate::multipartite::{lambda2_multipartite, multipartite_spectrum};
use crate::spectral::{eigenvalues, Spectrum};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjectureError {
    /// Edgeless graphs (and single vertices) have `ω < 2`; the bound degenerates.
    #[error("out of domain: n = {n}, m = {m} (needs at least one edge)")]
    OutOfDomain { n: usize, m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// `holds` iff `gap >= -tol`.
    pub tol: f64,
    /// `equality` iff `|gap| <= eq_tol · max(1, bound)`.
    pub eq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: 1e-9, eq_tol: 1e-9 }
    }
}

/// Every quantity of the inequality for one graph. Serializes to a flat JSON object.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BnReport {
    pub n: usize,
    pub m: usize,
    pub omega: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub bound: f64,
    pub lhs: f64,
    pub gap: f64,
    pub holds: bool,
    pub equality: bool,
    /// The graph is complete; the inequality is not claimed for it.
    pub excluded: bool,
    pub source: String,
}

impl BnReport {
    fn assemble(
        n: usize,
        m: usize,
        omega: usize,
        (lambda1, lambda2, lambda_n): (f64, f64, f64),
        source: String,
        tol: Tolerances,
    ) -> Self {
        let bound = 2.0 * (1.0 - 1.0 / omega as f64) * m as f64;
        let lhs = lambda1 * lambda1 + lambda2 * lambda2;
        let gap = bound - lhs;
        Self {
            n,
            m,
            omega,
            lambda1,
            lambda2,
            lambda_n,
            bound,
            lhs,
            gap,
            holds: gap >= -tol.tol,
            equality: gap.abs() <= tol.eq_tol * bound.max(1.0),
            excluded: m == n * (n - 1) / 2,
            source,
        }
    }

    /// A non-excluded graph for which the inequality fails.
    pub fn is_violation(&self) -> bool {
        !self.excluded && !self.holds
    }
}

pub fn bn_report(g: &Graph) -> Result<BnReport, ConjectureError> {
    bn_report_with(g, format!("graph6:{}", crate::graph::to_graph6(g)), Tolerances::default())
}

pub fn bn_report_with(g: &Graph, source: String, tol: Tolerances) -> Result<BnReport, ConjectureError> {
    let (n, m) = (g.n(), g.m());
    if m == 0 {
        return Err(ConjectureError::OutOfDomain { n, m });
    }
    let s = eigenvalues(g);
    let lambda2 = s.lambda2().expect("an edge implies n >= 2");
    Ok(BnReport::assemble(n, m, clique_number(g), (s.lambda1(), lambda2, s.lambda_n()), source, tol))
}

/// Report for `K_{n_1,...,n_r}` from the exact structured spectrum, with `ω = r`.
pub fn bn_report_multipartite(parts: &PartSizes) -> BnReport {
    bn_report_multipartite_with(parts, Tolerances::default())
}

pub fn bn_report_multipartite_with(parts: &PartSizes, tol: Tolerances) -> BnReport {
    let sp = multipartite_spectrum(parts);
    let flat = sp.flatten();
    let mut source = parts.to_string();
    if parts.r() == 2 && parts.n() > 2 && !parts.is_balanced() {
        // λ_1² = ab = m for every K_{a,b}, so unbalanced bipartite graphs are tight too
        source.push_str(" [unbalanced bipartite: equality holds for every a, b]");
    }
    BnReport::assemble(
        parts.n(),
        parts.edge_count(),
        parts.r(),
        (sp.lambda1(), lambda2_multipartite(parts), *flat.last().expect("n >= 2")),
        source,
        tol,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuranCheck {
    pub omega: usize,
    pub lambda1: f64,
    /// `sqrt(2(1 - 1/ω) m)`
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

/// `λ_1 <= sqrt(2(1 - 1/ω) m)`.
pub fn spectral_turan_check(g: &Graph, tol: f64) -> Result<TuranCheck, ConjectureError> {
    if g.m() == 0 {
        return Err(ConjectureError::OutOfDomain { n: g.n(), m: 0 });
    }
    let omega = clique_number(g);
    let lambda1 = eigenvalues(g).lambda1();
    let bound = (2.0 * (1.0 - 1.0 / omega as f64) * g.m() as f64).sqrt();
    let slack = bound - lambda1;
    Ok(TuranCheck { omega, lambda1, bound, slack, holds: slack >= -tol })
}

fn hoffman_from(n: usize, s: &Spectrum) -> f64 {
    -(n as f64) * s.lambda_n() / (s.lambda1() - s.lambda_n())
}

/// Hoffman's ratio bound `-n λ_n / (λ_1 - λ_n) >= α`.
pub fn hoffman_bound(g: &Graph) -> Result<f64, ConjectureError> {
    if g.m() == 0 {
        return Err(ConjectureError::OutOfDomain { n: g.n(), m: 0 });
    }
    Ok(hoffman_from(g.n(), &eigenvalues(g)))
}

/// Outcome of a check whose hypotheses may not apply to the given graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Check<T> {
    NotApplicable { reason: String },
    Checked(T),
}

impl<T> Check<T> {
    pub fn checked(&self) -> Option<&T> {
        match self {
            Check::Checked(t) => Some(t),
            Check::NotApplicable { .. } => None,
        }
    }

    pub(crate) fn not_applicable(reason: &str) -> Self {
        Check::NotApplicable { reason: reason.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoffmanRatio {
    pub alpha: usize,
    pub lambda1: f64,
    pub lambda_n: f64,
    /// `|λ_n| / λ_1`
    pub ratio: f64,
    pub passes: bool,
}

/// Applicability shared by the ratio and obstruction checks: K4-free,
/// `3α >= n` (exact integers) and at least one edge.
fn large_independent_set(g: &Graph) -> Result<usize, &'static str> {
    if g.m() == 0 {
        return Err("graph has no edges");
    }
    if !is_k4_free(g) {
        return Err("graph contains K4");
    }
    let alpha = independence_number(g);
    if 3 * alpha < g.n() {
        return Err("independence number below n/3");
    }
    Ok(alpha)
}

/// `|λ_n| >= λ_1 / 2` for K4-free graphs with `α >= n/3`.
pub fn hoffman_ratio_check(g: &Graph, tol: f64) -> Check<HoffmanRatio> {
    let alpha = match large_independent_set(g) {
        Ok(a) => a,
        Err(reason) => return Check::not_applicable(reason),
    };
    let s = eigenvalues(g);
    let ratio = s.lambda_n().abs() / s.lambda1();
    Check::Checked(HoffmanRatio { alpha, lambda1: s.lambda1(), lambda_n: s.lambda_n(), ratio, passes: ratio >= 0.5 - tol })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub m: usize,
    pub lambda1: f64,
    pub lhs: f64,
    /// `B = 2m - λ_1²/4`
    pub energy_bound: f64,
    pub four_thirds_m: f64,
    /// (i) `λ_1² + λ_2² <= B`
    pub lhs_within_bound: bool,
    /// (ii) `B > 4m/3`: the estimate cannot reach the target bound.
    pub bound_exceeds_target: bool,
    /// (iii) `λ_1² < 8m/3`, the condition under which (ii) follows.
    pub lambda1_sq_below_eight_thirds: bool,
    pub passes: bool,
}

pub fn obstruction_report(g: &Graph, tol: f64) -> Check<ObstructionReport> {
    if let Err(reason) = large_independent_set(g) {
        return Check::not_applicable(reason);
    }
    if g.n() == 3 && g.is_complete() {
        return Check::not_applicable("graph is K3");
    }
    // dropping λ_n² from the trace sum needs λ_2 and λ_n to be different eigenvalues
    if g.n() < 3 {
        return Check::not_applicable("fewer than three vertices");
    }
    let s = eigenvalues(g);
    let m = g.m() as f64;
    let l1sq = s.lambda1() * s.lambda1();
    let lhs = l1sq + s.lambda2().map_or(0.0, |x| x * x);
    let energy_bound = 2.0 * m - l1sq / 4.0;
    let four_thirds_m = 4.0 * m / 3.0;
    let lhs_within_bound = lhs <= energy_bound + tol;
    let bound_exceeds_target = energy_bound > four_thirds_m - tol;
    let lambda1_sq_below_eight_thirds = l1sq < 8.0 * m / 3.0;
    Check::Checked(ObstructionReport {
        m: g.m(),
        lambda1: s.lambda1(),
        lhs,
        energy_bound,
        four_thirds_m,
        lhs_within_bound,
        bound_exceeds_target,
        lambda1_sq_below_eight_thirds,
        passes: lhs_within_bound && bound_exceeds_target && lambda1_sq_below_eight_thirds,
    })
}

//! Proximal operators, projections, and Moreau-envelope evaluation.
//!
//! Conventions: `prox(x, t)` with `t > 0` is the proximal operator of the
//! scaled function `t * g`, i.e. the minimizer of `g(y) + (1/2t) ||x - y||^2`.
//! A regularization weight `ell` maps to the prox scale `t = 1/ell`; all
//! signatures take `t` so the reciprocal appears in exactly one place.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{dist_sq, norm};
use crate::merit::SimplexWeights;
use crate::problem::{ConvexOracle, FeasibleSet, ProxStructure};

#[derive(Debug, Error)]
pub enum ProxError {
    #[error("prox oracle unavailable: {0}")]
    ProxUnavailable(String),
    #[error("prox scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(
        "iterative prox splitting stalled after {iterations} iterations (residual {residual:e})"
    )]
    IterativeProxStalled { iterations: usize, residual: f64 },
}

/// Prox of the zero function: the identity.
pub fn prox_zero(point: &[f64], scale: f64) -> Vec<f64> {
    debug_assert!(scale > 0.0);
    let _ = scale;
    point.to_vec()
}

/// Scalar soft-threshold, the prox of `t * |.|`.
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// Coordinatewise soft-threshold, the prox of `t * sum_j |x_j|`.
pub fn prox_abs(point: &[f64], scale: f64) -> Vec<f64> {
    point.iter().map(|&v| soft_threshold(v, scale)).collect()
}

/// Prox of `t * sum_j w_j |x_j]` with nonnegative weights.
pub fn prox_weighted_l1(point: &[f64], weights: &[f64], scale: f64) -> Vec<f64> {
    debug_assert_eq!(point.len(), weights.len());
    point
        .iter()
        .zip(weights)
        .map(|(&v, &w)| soft_threshold(v, scale * w))
        .collect()
}

/// Euclidean projection onto an axis-aligned box (entries may be infinite).
pub fn project_box(point: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    debug_assert_eq!(point.len(), lo.len());
    debug_assert_eq!(point.len(), hi.len());
    point
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(&v, (&l, &h))| v.clamp(l, h))
        .collect()
}

/// Euclidean projection onto a closed ball.
pub fn project_ball(point: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    debug_assert_eq!(point.len(), center.len());
    let d: Vec<f64> = point.iter().zip(center).map(|(p, c)| p - c).collect();
    let nd = norm(&d);
    if nd <= radius {
        return point.to_vec();
    }
    let s = radius / nd;
    center.iter().zip(&d).map(|(c, di)| c + s * di).collect()
}

/// Euclidean projection onto the standard simplex, by sort and threshold.
/// O(m log m); the dual dimension m is the objective count, so this is cheap.
pub fn project_simplex(v: &[f64]) -> SimplexWeights {
    assert!(!v.is_empty(), "cannot project an empty vector onto a simplex");
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("non-finite entry in simplex projection"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumulative += uj;
        let t = (cumulative - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    let mut w: Vec<f64> = v.iter().map(|&vi| (vi - theta).max(0.0)).collect();
    let sum: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= sum;
    }
    SimplexWeights::new(w).expect("simplex projection produced invalid weights")
}

/// Value and minimizer of `min_y g(y) + (1/2t) ||x - y||^2`.
#[derive(Clone, Debug)]
pub struct EnvelopeEval {
    pub value: f64,
    pub minimizer: Vec<f64>,
}

/// Moreau envelope of `g` at `x` with quadratic scale `t`.
pub fn moreau_envelope(
    g: &dyn ConvexOracle,
    point: &[f64],
    scale: f64,
) -> Result<EnvelopeEval, ProxError> {
    if scale <= 0.0 {
        return Err(ProxError::NonPositiveScale(scale));
    }
    if !g.has_prox() {
        return Err(ProxError::ProxUnavailable(
            "convex term has no prox oracle".to_string(),
        ));
    }
    let minimizer = g.prox(point, scale);
    let value = g.eval(&minimizer) + dist_sq(point, &minimizer) / (2.0 * scale);
    Ok(EnvelopeEval { value, minimizer })
}

/// Which closed form (or fallback) computed a weighted-sum prox.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProxStrategy {
    /// All terms are the same function and the set is all of R^n; the
    /// weighted sum collapses to the single term because weights sum to one.
    IdenticalTerms,
    /// All terms are zero: the prox is the projection onto the set.
    ZeroTerms,
    /// Terms act on pairwise disjoint coordinate blocks and the set is all
    /// of R^n: per-block prox with scale `t * w_i`.
    DisjointBlocks,
    /// Splitting iteration (or a directly combined separable form).
    Iterative,
}

#[derive(Clone, Debug)]
pub struct WeightedProx {
    pub point: Vec<f64>,
    pub strategy: ProxStrategy,
    pub iterations: usize,
}

/// Configuration for the iterative fallback of [`weighted_sum_prox`].
#[derive(Clone, Debug)]
pub struct IterativeProxConfig {
    pub enabled: bool,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterativeProxConfig {
    fn default() -> Self {
        IterativeProxConfig {
            enabled: true,
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// Combined closed form of `sum_i w_i g_i` when one exists.
enum CombinedTerm {
    Zero,
    WeightedL1(Vec<f64>),
    Single(usize),
}

fn combine_terms(terms: &[&dyn ConvexOracle], weights: &[f64], n: usize) -> Option<CombinedTerm> {
    let structures: Vec<ProxStructure> = terms.iter().map(|t| t.structure()).collect();
    if structures.iter().all(|s| *s == ProxStructure::Zero) {
        return Some(CombinedTerm::Zero);
    }
    if structures.iter().all(|s| *s == structures[0]) {
        // Weights sum to one, so the weighted sum of identical terms is the
        // term itself.
        return Some(CombinedTerm::Single(0));
    }
    if structures
        .iter()
        .all(|s| matches!(s, ProxStructure::Zero | ProxStructure::WeightedL1(_)))
    {
        let mut combined = vec![0.0; n];
        for (s, &w) in structures.iter().zip(weights) {
            if let ProxStructure::WeightedL1(c) = s {
                for j in 0..n {
                    combined[j] += w * c[j];
                }
            }
        }
        return Some(CombinedTerm::WeightedL1(combined));
    }
    None
}

fn prox_combined(
    combined: &CombinedTerm,
    terms: &[&dyn ConvexOracle],
    point: &[f64],
    scale: f64,
) -> Vec<f64> {
    match combined {
        CombinedTerm::Zero => point.to_vec(),
        CombinedTerm::WeightedL1(c) => prox_weighted_l1(point, c, scale),
        CombinedTerm::Single(i) => terms[*i].prox(point, scale),
    }
}

/// Prox of `sum_i weights_i g_i + indicator(S)` at `point` with scale `t`.
///
/// Dispatch is ordered and the first matching strategy wins:
/// identical terms, all-zero terms, disjoint blocks, iterative fallback.
/// The block shortcut needs `S = R^n`; block structure over a constrained set
/// goes through the splitting iteration instead.
pub fn weighted_sum_prox(
    terms: &[&dyn ConvexOracle],
    weights: &SimplexWeights,
    set: &FeasibleSet,
    point: &[f64],
    scale: f64,
    fallback: &IterativeProxConfig,
) -> Result<WeightedProx, ProxError> {
    if scale <= 0.0 {
        return Err(ProxError::NonPositiveScale(scale));
    }
    if terms.len() != weights.len() {
        return Err(ProxError::DimensionMismatch(format!(
            "{} terms vs {} weights",
            terms.len(),
            weights.len()
        )));
    }
    let n = point.len();
    let w = weights.as_slice();
    let structures: Vec<ProxStructure> = terms.iter().map(|t| t.structure()).collect();

    // 1. Identical terms over an unconstrained set.
    if set.is_unconstrained() && structures.iter().all(|s| *s == structures[0]) {
        if !terms[0].has_prox() {
            return Err(ProxError::ProxUnavailable(
                "identical convex terms lack a prox oracle".to_string(),
            ));
        }
        return Ok(WeightedProx {
            point: terms[0].prox(point, scale),
            strategy: ProxStrategy::IdenticalTerms,
            iterations: 0,
        });
    }

    // 2. All-zero terms: reduces to the projection onto the set.
    if structures.iter().all(|s| *s == ProxStructure::Zero) {
        return Ok(WeightedProx {
            point: set.project(point),
            strategy: ProxStrategy::ZeroTerms,
            iterations: 0,
        });
    }

    // 3. Disjoint coordinate blocks over an unconstrained set.
    if set.is_unconstrained() {
        let supports: Option<Vec<Vec<usize>>> =
            structures.iter().map(|s| s.support(n)).collect();
        if let Some(supports) = supports {
            let mut seen = vec![false; n];
            let mut disjoint = true;
            'outer: for sup in &supports {
                for &j in sup {
                    if seen[j] {
                        disjoint = false;
                        break 'outer;
                    }
                    seen[j] = true;
                }
            }
            if disjoint {
                let mut out = point.to_vec();
                for (i, sup) in supports.iter().enumerate() {
                    if sup.is_empty() {
                        continue;
                    }
                    let block = terms[i].prox(point, scale * w[i]);
                    for &j in sup {
                        out[j] = block[j];
                    }
                }
                return Ok(WeightedProx {
                    point: out,
                    strategy: ProxStrategy::DisjointBlocks,
                    iterations: 0,
                });
            }
        }
    }

    // 4. Iterative fallback.
    if !fallback.enabled {
        return Err(ProxError::ProxUnavailable(
            "no closed-form strategy applies and the iterative fallback is disabled".to_string(),
        ));
    }
    let combined = combine_terms(terms, w, n).ok_or_else(|| {
        ProxError::ProxUnavailable(
            "weighted sum has no computable prox: terms are heterogeneous and opaque".to_string(),
        )
    })?;
    if set.is_unconstrained() {
        // Overlapping separable terms combine into one separable term.
        return Ok(WeightedProx {
            point: prox_combined(&combined, terms, point, scale),
            strategy: ProxStrategy::Iterative,
            iterations: 0,
        });
    }

    // Douglas-Rachford splitting for min_y A(y) + (1/2t)||x - y||^2 + i_S(y)
    // with A = sum_i w_i g_i. The quadratic is folded into the A-side prox so
    // that side is strongly convex and the iteration converges linearly.
    //
    // prox of s * (A + (1/2t)||x - .||^2) at z, with s = t, equals
    // prox_{(t/2) A}((x + z) / 2).
    let t = scale;
    let mut z = point.to_vec();
    let scale_a = t / 2.0;
    let res_tol = fallback.tol * (1.0 + norm(point));
    let mut last_q: Vec<f64> = Vec::new();
    for k in 0..fallback.max_iter {
        let mid: Vec<f64> = point.iter().zip(&z).map(|(x, zi)| 0.5 * (x + zi)).collect();
        let p = prox_combined(&combined, terms, &mid, scale_a);
        let reflected: Vec<f64> = p.iter().zip(&z).map(|(pi, zi)| 2.0 * pi - zi).collect();
        let q = set.project(&reflected);
        let residual = dist_sq(&q, &p).sqrt();
        for j in 0..n {
            z[j] += q[j] - p[j];
        }
        last_q = q;
        if residual <= res_tol {
            return Ok(WeightedProx {
                point: last_q,
                strategy: ProxStrategy::Iterative,
                iterations: k + 1,
            });
        }
    }
    let residual = {
        let mid: Vec<f64> = point.iter().zip(&z).map(|(x, zi)| 0.5 * (x + zi)).collect();
        let p = prox_combined(&combined, terms, &mid, scale_a);
        dist_sq(&last_q, &p).sqrt()
    };
    Err(ProxError::IterativeProxStalled {
        iterations: fallback.max_iter,
        residual,
    })
}

/// Value of `sum_i weights_i g_i` at a point (the indicator part is excluded;
/// feasibility is the caller's concern).
pub fn weighted_sum_value(terms: &[&dyn ConvexOracle], weights: &SimplexWeights, y: &[f64]) -> f64 {
    terms
        .iter()
        .zip(weights.as_slice())
        .map(|(g, &w)| w * g.eval(y))
        .sum()
}

// ---------------------------------------------------------------------------
// Catalog terms
// ---------------------------------------------------------------------------

/// The zero function.
#[derive(Clone, Debug, Default)]
pub struct ZeroTerm;

impl ConvexOracle for ZeroTerm {
    fn eval(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn prox(&self, x: &[f64], _t: f64) -> Vec<f64> {
        x.to_vec()
    }

    fn structure(&self) -> ProxStructure {
        ProxStructure::Zero
    }

    fn lipschitz_bound(&self) -> Option<f64> {
        Some(0.0)
    }

    fn directional_derivative(&self, _x: &[f64], _d: &[f64]) -> f64 {
        0.0
    }
}

/// `g(x) = sum_j weights_j |x_j|` with nonnegative weights.
#[derive(Clone, Debug)]
pub struct WeightedL1Term {
    weights: Vec<f64>,
}

impl WeightedL1Term {
    pub fn new(weights: Vec<f64>) -> Self {
        assert!(weights.iter().all(|w| *w >= 0.0 && w.is_finite()));
        WeightedL1Term { weights }
    }

    /// Plain absolute-value sum in `dim` coordinates.
    pub fn uniform(dim: usize) -> Self {
        WeightedL1Term {
            weights: vec![1.0; dim],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl ConvexOracle for WeightedL1Term {
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.weights).map(|(xi, wi)| wi * xi.abs()).sum()
    }

    fn prox(&self, x: &[f64], t: f64) -> Vec<f64> {
        prox_weighted_l1(x, &self.weights, t)
    }

    fn structure(&self) -> ProxStructure {
        ProxStructure::WeightedL1(self.weights.clone())
    }

    fn lipschitz_bound(&self) -> Option<f64> {
        Some(norm(&self.weights))
    }

    fn directional_derivative(&self, x: &[f64], d: &[f64]) -> f64 {
        // sign(x_j) d_j away from kinks, |d_j| on them.
        x.iter()
            .zip(d.iter().zip(&self.weights))
            .map(|(&xj, (&dj, &wj))| {
                if xj.abs() <= 1e-12 {
                    wj * dj.abs()
                } else {
                    wj * xj.signum() * dj
                }
            })
            .sum()
    }
}

/// Named catalog of built-in convex terms in a given dimension, used by
/// envelope and prox property tests.
pub fn catalog(dim: usize) -> Vec<(String, Arc<dyn ConvexOracle>)> {
    let mut entries: Vec<(String, Arc<dyn ConvexOracle>)> = vec![
        ("zero".to_string(), Arc::new(ZeroTerm)),
        ("abs".to_string(), Arc::new(WeightedL1Term::uniform(dim))),
    ];
    let ramp: Vec<f64> = (0..dim).map(|j| 0.5 + j as f64).collect();
    entries.push((
        "weighted_l1_ramp".to_string(),
        Arc::new(WeightedL1Term::new(ramp)),
    ));
    entries
}

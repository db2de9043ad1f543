//! Strongly convex inner problems behind the dual merit evaluations.
//!
//! Two proximal-gradient solves cover everything the duals need:
//! `min_{y in S} sum_i w_i F_i(y) + (ell/2) ||center - y||^2` (regularized)
//! and `min_{y in S} sum_i w_i F_i(y)` (plain weighted scalarization). A
//! brute-force grid oracle over a bounding box provides the independent
//! reference values the tests compare against.

use thiserror::Error;

use crate::linalg::{dist, dist_sq, norm};
use crate::merit::SimplexWeights;
use crate::problem::{FeasibleSet, MultiobjectiveProblem};
use crate::prox::{weighted_sum_prox, IterativeProxConfig, ProxError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    Fixed(f64),
    /// Shrink factor and sufficient-decrease fraction, both in (0, 1).
    Backtracking { shrink: f64, decrease: f64 },
}

#[derive(Clone, Debug)]
pub struct InnerSolveConfig {
    /// Stationarity residual `||y - y_plus|| / step` at which to stop.
    pub tol: f64,
    pub max_iter: usize,
    pub step_rule: StepRule,
    /// Fallback policy for weighted-sum prox steps without a closed form.
    pub prox_fallback: IterativeProxConfig,
    /// Record the objective value after every accepted step.
    pub record_objective_trace: bool,
}

impl Default for InnerSolveConfig {
    fn default() -> Self {
        InnerSolveConfig {
            tol: 1e-8,
            max_iter: 10_000,
            step_rule: StepRule::Backtracking {
                shrink: 0.5,
                decrease: 0.9,
            },
            prox_fallback: IterativeProxConfig::default(),
            record_objective_trace: false,
        }
    }
}

impl InnerSolveConfig {
    pub fn validate(&self) -> Result<(), InnerError> {
        if !(self.tol > 0.0) {
            return Err(InnerError::BadConfig("tol must be positive".to_string()));
        }
        match self.step_rule {
            StepRule::Fixed(g) if g > 0.0 => Ok(()),
            StepRule::Fixed(_) => Err(InnerError::BadConfig(
                "fixed step must be positive".to_string(),
            )),
            StepRule::Backtracking { shrink, decrease } => {
                if shrink > 0.0 && shrink < 1.0 && decrease > 0.0 && decrease < 1.0 {
                    Ok(())
                } else {
                    Err(InnerError::BadConfig(
                        "backtracking parameters must lie in (0, 1)".to_string(),
                    ))
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct InnerSolution {
    pub point: Vec<f64>,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum InnerError {
    #[error("inner solve stopped after {} iterations with residual {:e}", best.iterations, best.residual)]
    NotConverged { best: Box<InnerSolution> },
    #[error("declared convexity required: {0}")]
    ConvexityRequired(String),
    #[error("weighted scalarization appears unbounded below (iterate norm {norm:e})")]
    Unbounded { norm: f64 },
    #[error("grid oracle supports dimension <= 3, got {0}")]
    DimensionTooLarge(usize),
    #[error("grid oracle requires a bounding box on the feasible set")]
    BoundingBoxRequired,
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Prox(#[from] ProxError),
}

/// Smooth objective pieces of one inner solve.
struct SmoothPart<'a> {
    p: &'a MultiobjectiveProblem,
    weights: &'a SimplexWeights,
    regularization: Option<(&'a [f64], f64)>,
}

impl SmoothPart<'_> {
    fn value(&self, y: &[f64]) -> f64 {
        let mut v = 0.0;
        for (obj, &w) in self.p.objectives().iter().zip(self.weights.as_slice()) {
            if w != 0.0 {
                v += w * obj.smooth.eval(y);
            }
        }
        if let Some((center, ell)) = self.regularization {
            v += ell / 2.0 * dist_sq(center, y);
        }
        v
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; y.len()];
        for (obj, &w) in self.p.objectives().iter().zip(self.weights.as_slice()) {
            if w != 0.0 {
                let gi = obj.smooth.gradient(y);
                for j in 0..y.len() {
                    g[j] += w * gi[j];
                }
            }
        }
        if let Some((center, ell)) = self.regularization {
            for j in 0..y.len() {
                g[j] += ell * (y[j] - center[j]);
            }
        }
        g
    }

    fn convex_value(&self, y: &[f64]) -> f64 {
        self.p
            .objectives()
            .iter()
            .zip(self.weights.as_slice())
            .map(|(obj, &w)| if w != 0.0 { w * obj.convex.eval(y) } else { 0.0 })
            .sum()
    }

    fn total(&self, y: &[f64]) -> f64 {
        self.value(y) + self.convex_value(y)
    }
}

fn proximal_gradient(
    smooth: &SmoothPart<'_>,
    start: Vec<f64>,
    step_seed: f64,
    cfg: &InnerSolveConfig,
    unbounded_threshold: Option<f64>,
) -> Result<InnerSolution, InnerError> {
    cfg.validate()?;
    let p = smooth.p;
    let terms = p.convex_terms();
    let set = p.feasible_set();

    let mut y = start;
    let mut phi = smooth.total(&y);
    let mut trace = Vec::new();
    if cfg.record_objective_trace {
        trace.push(phi);
    }
    let mut step = match cfg.step_rule {
        StepRule::Fixed(g) => g,
        StepRule::Backtracking { .. } => step_seed,
    };

    let mut residual = f64::INFINITY;
    for k in 0..cfg.max_iter {
        let grad = smooth.gradient(&y);
        let mut backtracks = 0usize;
        let (y_next, phi_next) = loop {
            let shifted: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - step * gi).collect();
            let candidate = weighted_sum_prox(
                &terms,
                smooth.weights,
                set,
                &shifted,
                step,
                &cfg.prox_fallback,
            )?
            .point;
            let phi_candidate = smooth.total(&candidate);
            match cfg.step_rule {
                StepRule::Fixed(_) => break (candidate, phi_candidate),
                StepRule::Backtracking { shrink, decrease } => {
                    let gain = decrease / (2.0 * step) * dist_sq(&candidate, &y);
                    if phi_candidate <= phi - gain + 1e-15 * (1.0 + phi.abs()) {
                        break (candidate, phi_candidate);
                    }
                    step *= shrink;
                    backtracks += 1;
                    if step < 1e-18 {
                        return Err(InnerError::NotConverged {
                            best: Box::new(InnerSolution {
                                point: y,
                                value: phi,
                                residual,
                                iterations: k,
                                converged: false,
                                objective_trace: trace,
                            }),
                        });
                    }
                }
            }
        };

        residual = dist(&y_next, &y) / step;
        if residual <= cfg.tol {
            if cfg.record_objective_trace {
                trace.push(phi_next);
            }
            return Ok(InnerSolution {
                point: y_next,
                value: phi_next,
                residual,
                iterations: k,
                converged: true,
                objective_trace: trace,
            });
        }
        y = y_next;
        phi = phi_next;
        if cfg.record_objective_trace {
            trace.push(phi);
        }
        if let Some(threshold) = unbounded_threshold {
            let ny = norm(&y);
            if ny > threshold {
                return Err(InnerError::Unbounded { norm: ny });
            }
        }
        if backtracks == 0 {
            if let StepRule::Backtracking { .. } = cfg.step_rule {
                step = (step * 1.5).min(1e12);
            }
        }
    }
    Err(InnerError::NotConverged {
        best: Box::new(InnerSolution {
            value: smooth.total(&y),
            point: y,
            residual,
            iterations: cfg.max_iter,
            converged: false,
            objective_trace: trace,
        }),
    })
}

fn require_convex(p: &MultiobjectiveProblem, what: &str) -> Result<(), InnerError> {
    if p.metadata().all_objectives_convex() {
        Ok(())
    } else {
        Err(InnerError::ConvexityRequired(format!(
            "{what} needs every objective declared convex"
        )))
    }
}

fn step_seed(p: &MultiobjectiveProblem, weights: &SimplexWeights, ell: f64) -> f64 {
    let mut curvature = ell;
    for (facts, &w) in p.metadata().objectives.iter().zip(weights.as_slice()) {
        if let Some(lip) = facts.lip {
            curvature += w * lip;
        }
    }
    if curvature > 0.0 {
        1.0 / curvature
    } else {
        1.0
    }
}

/// `min_{y in S} sum_i weights_i F_i(y) + (ell/2) ||center - y||^2`
/// by proximal gradient: the quadratic joins the smooth part, the weighted
/// convex terms plus the set indicator form the prox part.
pub fn solve_regularized_weighted(
    p: &MultiobjectiveProblem,
    weights: &SimplexWeights,
    center: &[f64],
    ell: f64,
    cfg: &InnerSolveConfig,
) -> Result<InnerSolution, InnerError> {
    solve_regularized_weighted_from(p, weights, center, ell, cfg, None)
}

/// Same solve with an explicit starting point (used for warm starts and the
/// uniqueness tests). `None` starts from the projected center.
pub fn solve_regularized_weighted_from(
    p: &MultiobjectiveProblem,
    weights: &SimplexWeights,
    center: &[f64],
    ell: f64,
    cfg: &InnerSolveConfig,
    init: Option<&[f64]>,
) -> Result<InnerSolution, InnerError> {
    require_convex(p, "regularized weighted solve")?;
    if !(ell > 0.0) {
        return Err(InnerError::BadConfig("ell must be positive".to_string()));
    }
    let smooth = SmoothPart {
        p,
        weights,
        regularization: Some((center, ell)),
    };
    let start = match init {
        Some(v) => p.feasible_set().project(v),
        None => p.feasible_set().project(center),
    };
    proximal_gradient(&smooth, start, step_seed(p, weights, ell), cfg, None)
}

/// Global minimizer of the weighted scalarization `sum_i weights_i F_i` over
/// `S`. Divergent iterates are reported as `Unbounded` instead of grinding to
/// the iteration cap.
pub fn solve_weighted_scalarization(
    p: &MultiobjectiveProblem,
    weights: &SimplexWeights,
    cfg: &InnerSolveConfig,
) -> Result<InnerSolution, InnerError> {
    solve_weighted_scalarization_from(p, weights, cfg, None)
}

pub fn solve_weighted_scalarization_from(
    p: &MultiobjectiveProblem,
    weights: &SimplexWeights,
    cfg: &InnerSolveConfig,
    init: Option<&[f64]>,
) -> Result<InnerSolution, InnerError> {
    require_convex(p, "weighted scalarization")?;
    let smooth = SmoothPart {
        p,
        weights,
        regularization: None,
    };
    let start = match init {
        Some(v) => p.feasible_set().project(v),
        None => p.feasible_set().project(&vec![0.0; p.dimension()]),
    };
    let diameter = p
        .feasible_set()
        .bounding_box()
        .map(|b| b.diameter())
        .unwrap_or(0.0);
    let threshold = 1e6 * (1.0 + diameter);
    proximal_gradient(&smooth, start, step_seed(p, weights, 0.0), cfg, Some(threshold))
}

/// Grid-search reference evaluation of the primal max-min.
#[derive(Clone, Debug)]
pub struct GridEvaluation {
    pub value: f64,
    pub maximizer: Vec<f64>,
    /// Largest axis spacing of the grid.
    pub spacing: f64,
    /// Bound on how far the grid max can sit below the true max over the
    /// boxed region, from a Lipschitz estimate of the integrand.
    pub slack: f64,
}

/// The primal integrand `min_i { ... }` of the merit definitions at `(x, y)`.
/// With `linearized` the smooth parts enter through their gradients at `x`.
pub fn primal_integrand(
    p: &MultiobjectiveProblem,
    x: &[f64],
    y: &[f64],
    ell: f64,
    linearized: bool,
) -> f64 {
    let reg = ell / 2.0 * dist_sq(x, y);
    let mut best = f64::INFINITY;
    for obj in p.objectives() {
        let q = if linearized {
            let g = obj.smooth.gradient(x);
            let mut lin = 0.0;
            for j in 0..x.len() {
                lin += g[j] * (x[j] - y[j]);
            }
            lin + obj.convex.eval(x) - obj.convex.eval(y) - reg
        } else {
            obj.value(x) - obj.value(y) - reg
        };
        best = best.min(q);
    }
    best
}

fn default_resolution(n: usize) -> usize {
    match n {
        1 => 2001,
        2 => 257,
        _ => 41,
    }
}

fn smooth_gradient_bound(
    p: &MultiobjectiveProblem,
    i: usize,
    bounds: &crate::problem::BoundingBox,
) -> f64 {
    let obj = &p.objectives()[i];
    if let Some(b) = obj.smooth.gradient_sup_bound(bounds) {
        return b;
    }
    // Sampled fallback with a safety margin.
    let n = bounds.dim();
    let per_axis = 9usize;
    let mut worst = 0.0f64;
    let mut idx = vec![0usize; n];
    loop {
        let y: Vec<f64> = (0..n)
            .map(|j| {
                bounds.lo[j] + (bounds.hi[j] - bounds.lo[j]) * idx[j] as f64 / (per_axis - 1) as f64
            })
            .collect();
        worst = worst.max(norm(&obj.smooth.gradient(&y)));
        let mut j = 0;
        loop {
            if j == n {
                return worst * 1.5;
            }
            idx[j] += 1;
            if idx[j] < per_axis {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Brute-force `max over grid points y in S` of the primal integrand, for
/// dimensions up to three. Serves as the independent reference the dual
/// evaluations are checked against, and as the evaluation route for the
/// unregularized merit on problems without declared strong convexity.
pub fn grid_oracle_maxmin(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    linearized: bool,
    resolution: usize,
) -> Result<GridEvaluation, InnerError> {
    let n = p.dimension();
    if n > 3 {
        return Err(InnerError::DimensionTooLarge(n));
    }
    if ell < 0.0 {
        return Err(InnerError::BadConfig("ell must be nonnegative".to_string()));
    }
    let bounds = p
        .feasible_set()
        .bounding_box()
        .ok_or(InnerError::BoundingBoxRequired)?;
    let res = if resolution < 2 {
        default_resolution(n)
    } else {
        resolution
    };

    let set = p.feasible_set();
    let mut best = f64::NEG_INFINITY;
    let mut maximizer = vec![0.0; n];
    // y = x is always a candidate, pinning the max at a nonnegative value
    // even when x falls between grid points.
    if set.contains(x) {
        best = primal_integrand(p, x, x, ell, linearized);
        maximizer = x.to_vec();
    }
    let mut idx = vec![0usize; n];
    let mut spacing = 0.0f64;
    for j in 0..n {
        spacing = spacing.max((bounds.hi[j] - bounds.lo[j]) / (res - 1) as f64);
    }
    loop {
        let y: Vec<f64> = (0..n)
            .map(|j| bounds.lo[j] + (bounds.hi[j] - bounds.lo[j]) * idx[j] as f64 / (res - 1) as f64)
            .collect();
        if set.contains(&y) {
            let q = primal_integrand(p, x, &y, ell, linearized);
            if q > best {
                best = q;
                maximizer = y;
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                if best == f64::NEG_INFINITY {
                    return Err(InnerError::BadConfig(
                        "no feasible grid point inside the bounding box".to_string(),
                    ));
                }
                // Lipschitz bound of the integrand in y over the box.
                let mut lip = 0.0f64;
                for i in 0..p.objective_count() {
                    let grad_term = if linearized {
                        norm(&p.objectives()[i].smooth.gradient(x))
                    } else {
                        smooth_gradient_bound(p, i, &bounds)
                    };
                    let g_lip = p.objectives()[i]
                        .convex
                        .lipschitz_bound()
                        .unwrap_or_else(|| sampled_convex_lipschitz(p, i, &bounds));
                    lip = lip.max(grad_term + g_lip);
                }
                lip += ell * bounds.reach_from(x);
                // Nearest feasible grid point: half a cell diagonal for box
                // and unconstrained sets, a generous multiple for curved ones.
                let cell = spacing * (n as f64).sqrt();
                let reach_factor = match set {
                    FeasibleSet::Ball { .. } => 4.0,
                    _ => 0.5,
                };
                return Ok(GridEvaluation {
                    value: best,
                    maximizer,
                    spacing,
                    slack: lip * cell * reach_factor + 1e-12,
                });
            }
            idx[j] += 1;
            if idx[j] < res {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn sampled_convex_lipschitz(
    p: &MultiobjectiveProblem,
    i: usize,
    bounds: &crate::problem::BoundingBox,
) -> f64 {
    // Max secant slope over axis-aligned probes, with a margin.
    let g = &p.objectives()[i].convex;
    let n = bounds.dim();
    let mut worst = 0.0f64;
    let center: Vec<f64> = (0..n).map(|j| 0.5 * (bounds.lo[j] + bounds.hi[j])).collect();
    for j in 0..n {
        let mut a = center.clone();
        let mut b = center.clone();
        a[j] = bounds.lo[j];
        b[j] = bounds.hi[j];
        let width = (bounds.hi[j] - bounds.lo[j]).max(1e-12);
        worst = worst.max((g.eval(&a) - g.eval(&b)).abs() / width);
        // Slopes near the edges catch piecewise behavior the midpoint misses.
        let mut c = center.clone();
        c[j] = bounds.hi[j] - 1e-6 * width;
        worst = worst.max((g.eval(&b) - g.eval(&c)).abs() / (b[j] - c[j]).max(1e-12));
    }
    worst * 1.5
}

//! The three merit functions and their dual evaluations.
//!
//! `u0` is the plain sup-min gap, `u_ell` adds a quadratic regularization,
//! and `w_ell` additionally linearizes the smooth parts of composite
//! objectives. Each regularized merit equals the optimal value of an
//! m-dimensional simplex-constrained convex dual whose gradient comes out of
//! the inner proximal solves, so the dual is solved by Frank-Wolfe with away
//! steps: the linear subproblem over the simplex picks the minimizing vertex
//! (lowest index on ties), a derivative bisection line-search fixes the step,
//! and the Frank-Wolfe gap is the certified stopping criterion.
//!
//! Reported values are the primal integrand at the returned maximizer, so
//! `value` is a feasible lower witness of the merit and `value + fw_gap`
//! brackets it from above (up to inner-solver error).

use thiserror::Error;

use crate::inner::{
    grid_oracle_maxmin, primal_integrand, solve_regularized_weighted_from,
    solve_weighted_scalarization_from, InnerError, InnerSolveConfig,
};
use crate::linalg::{dot, norm_sq, sub};
use crate::problem::MultiobjectiveProblem;
use crate::prox::{weighted_sum_prox, weighted_sum_value, ProxError};

/// A point of the standard simplex: nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(w: Vec<f64>) -> Result<Self, MeritError> {
        if w.is_empty() {
            return Err(MeritError::BadWeights("empty weight vector".to_string()));
        }
        let mut w = w;
        for wi in &mut w {
            if !wi.is_finite() || *wi < -Self::SUM_TOL {
                return Err(MeritError::BadWeights(format!("negative weight {wi}")));
            }
            if *wi < 0.0 {
                *wi = 0.0;
            }
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(MeritError::BadWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(SimplexWeights(w))
    }

    /// Rescale a nonnegative vector with positive sum onto the simplex.
    pub fn normalized(v: &[f64]) -> Result<Self, MeritError> {
        let sum: f64 = v.iter().sum();
        if !(sum > 0.0) {
            return Err(MeritError::BadWeights(
                "cannot normalize a vector with nonpositive sum".to_string(),
            ));
        }
        Self::new(v.iter().map(|x| x / sum).collect())
    }

    pub fn barycenter(m: usize) -> Self {
        SimplexWeights(vec![1.0 / m as f64; m])
    }

    pub fn vertex(m: usize, i: usize) -> Self {
        let mut w = vec![0.0; m];
        w[i] = 1.0;
        SimplexWeights(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeritKind {
    U0,
    UEll,
    WEll,
}

impl MeritKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeritKind::U0 => "u0",
            MeritKind::UEll => "u_ell",
            MeritKind::WEll => "w_ell",
        }
    }

    pub fn parse(s: &str) -> Option<MeritKind> {
        match s {
            "u0" => Some(MeritKind::U0),
            "u_ell" => Some(MeritKind::UEll),
            "w_ell" => Some(MeritKind::WEll),
            _ => None,
        }
    }
}

/// How an evaluation was computed.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalRoute {
    Dual,
    Grid { resolution: usize, slack: f64 },
}

#[derive(Clone, Debug)]
pub struct InnerDiagnostics {
    pub route: EvalRoute,
    /// Frank-Wolfe iterations of the dual solve.
    pub outer_iterations: usize,
    /// Accumulated inner proximal-gradient iterations.
    pub inner_iterations: usize,
    /// Dual objective evaluations spent in line searches.
    pub line_search_evals: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct MeritEvaluation {
    pub kind: MeritKind,
    pub ell: f64,
    /// Primal integrand at `(x, maximizer)`: a feasible lower witness of the
    /// merit value, within `fw_gap` plus inner error of the true value.
    pub value: f64,
    pub maximizer: Vec<f64>,
    /// Exit point of the dual solve (one element of the optimal-weight set).
    pub dual_weights: SimplexWeights,
    /// Frank-Wolfe duality gap at exit (zero for grid evaluations).
    pub fw_gap: f64,
    pub inner_diagnostics: InnerDiagnostics,
}

#[derive(Clone, Debug)]
pub struct DualSolveConfig {
    /// Frank-Wolfe gap at which the dual solve stops.
    pub gap_tol: f64,
    /// Cap on Frank-Wolfe iterations.
    pub max_iter: usize,
    pub inner: InnerSolveConfig,
    /// Points per axis for grid-routed evaluations; 0 picks a per-dimension
    /// default.
    pub grid_resolution: usize,
}

impl Default for DualSolveConfig {
    fn default() -> Self {
        DualSolveConfig {
            gap_tol: 1e-7,
            max_iter: 300,
            inner: InnerSolveConfig::default(),
            grid_resolution: 0,
        }
    }
}

impl DualSolveConfig {
    /// Error budget of one evaluation: tests treat values within this of
    /// zero (or of each other) as equal.
    pub fn epsilon_eval(&self) -> f64 {
        10.0 * (self.gap_tol + self.inner.tol)
    }
}

#[derive(Debug, Error)]
pub enum MeritError {
    #[error("declared convexity required: {0}")]
    ConvexityRequired(String),
    #[error("dual solve did not reach the gap tolerance (best value {})", best.value)]
    NotConverged { best: Box<MeritEvaluation> },
    #[error("objective {0} has no Hessian oracle")]
    HessianRequired(usize),
    #[error("unsupported problem: {0}")]
    UnsupportedProblem(String),
    #[error("point is not feasible within tolerance")]
    InfeasiblePoint,
    #[error("ell must be positive")]
    NonPositiveEll,
    #[error("invalid simplex weights: {0}")]
    BadWeights(String),
    #[error("invalid dual solve configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Inner(#[from] InnerError),
    #[error(transparent)]
    Prox(#[from] ProxError),
}

/// One dual objective evaluation: value, gradient, and the inner maximizer
/// realizing the enveloped term.
#[derive(Clone, Debug)]
pub struct DualPoint {
    pub theta: f64,
    pub grad: Vec<f64>,
    pub inner_point: Vec<f64>,
}

trait DualObjectiveOracle {
    fn arity(&self) -> usize;
    fn eval(&mut self, lambda: &[f64]) -> Result<DualPoint, MeritError>;
    fn inner_iterations(&self) -> usize;
    fn inner_converged(&self) -> bool;
}

fn argmin_index(v: &[f64]) -> usize {
    let mut best = 0;
    for j in 1..v.len() {
        if v[j] < v[best] {
            best = j;
        }
    }
    best
}

fn argmax_support(v: &[f64], lambda: &[f64]) -> usize {
    let mut best = usize::MAX;
    for j in 0..v.len() {
        if lambda[j] > 0.0 && (best == usize::MAX || v[j] > v[best]) {
            best = j;
        }
    }
    best
}

fn step_along(lambda: &[f64], direction: &[f64], tau: f64) -> Vec<f64> {
    let mut out: Vec<f64> = lambda
        .iter()
        .zip(direction)
        .map(|(l, d)| (l + tau * d).max(0.0))
        .collect();
    let sum: f64 = out.iter().sum();
    for o in &mut out {
        *o /= sum;
    }
    out
}

struct FwOutcome {
    lambda: Vec<f64>,
    dual: DualPoint,
    fw_gap: f64,
    iterations: usize,
    line_search_evals: usize,
    converged: bool,
}

/// Frank-Wolfe with away steps over the simplex, derivative-bisection line
/// search, and the duality gap as stopping criterion.
fn frank_wolfe<O: DualObjectiveOracle>(
    oracle: &mut O,
    cfg: &DualSolveConfig,
) -> Result<FwOutcome, MeritError> {
    if !(cfg.gap_tol > 0.0) {
        return Err(MeritError::BadConfig("gap_tol must be positive".to_string()));
    }
    let m = oracle.arity();
    let mut lambda = vec![1.0 / m as f64; m];
    let mut dual = oracle.eval(&lambda)?;
    let mut ls_evals = 0usize;
    let mut best: Option<(Vec<f64>, DualPoint, f64)> = None;

    for k in 0..cfg.max_iter {
        let s = argmin_index(&dual.grad);
        let grad_dot_lambda = dot(&dual.grad, &lambda);
        let fw_gap = grad_dot_lambda - dual.grad[s];
        if best.as_ref().is_none_or(|(_, b, _)| dual.theta < b.theta) {
            best = Some((lambda.clone(), dual.clone(), fw_gap));
        }
        if fw_gap <= cfg.gap_tol {
            return Ok(FwOutcome {
                lambda,
                dual,
                fw_gap,
                iterations: k,
                line_search_evals: ls_evals,
                converged: true,
            });
        }

        let v = argmax_support(&dual.grad, &lambda);
        let away_gap = dual.grad[v] - grad_dot_lambda;
        let (direction, tau_max) = if fw_gap >= away_gap {
            let mut d: Vec<f64> = lambda.iter().map(|l| -l).collect();
            d[s] += 1.0;
            (d, 1.0)
        } else {
            let mut d = lambda.clone();
            d[v] -= 1.0;
            let lv = lambda[v];
            (d, if lv < 1.0 { lv / (1.0 - lv) } else { 0.0 })
        };
        if tau_max <= 0.0 {
            break;
        }

        let lam_hi = step_along(&lambda, &direction, tau_max);
        let dp_hi = oracle.eval(&lam_hi)?;
        ls_evals += 1;
        if dot(&dp_hi.grad, &direction) <= 0.0 {
            lambda = lam_hi;
            dual = dp_hi;
            continue;
        }
        let mut lo = 0.0_f64;
        let mut hi = tau_max;
        let mut chosen = (lam_hi, dp_hi);
        for _ in 0..60 {
            if hi - lo <= 1e-13 * tau_max.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let lam_mid = step_along(&lambda, &direction, mid);
            let dp_mid = oracle.eval(&lam_mid)?;
            ls_evals += 1;
            let slope = dot(&dp_mid.grad, &direction);
            if dp_mid.theta < chosen.1.theta {
                chosen = (lam_mid, dp_mid.clone());
            }
            if slope < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lambda = chosen.0;
        dual = chosen.1;
    }

    let (lambda, dual, fw_gap) = best.expect("frank-wolfe ran at least one iteration");
    Ok(FwOutcome {
        lambda,
        dual,
        fw_gap,
        iterations: cfg.max_iter,
        line_search_evals: ls_evals,
        converged: false,
    })
}

// ---------------------------------------------------------------------------
// Dual objective oracles
// ---------------------------------------------------------------------------

/// Dual objective of the regularized merit:
/// `theta(lambda) = sum_i lambda_i F_i(x) - min_{y in S} { sum_i lambda_i F_i(y) + (ell/2)||x - y||^2 }`
/// with gradient `F(x) - F(y_lambda)`.
struct UEllOracle<'a> {
    p: &'a MultiobjectiveProblem,
    x: &'a [f64],
    ell: f64,
    fx: Vec<f64>,
    inner_cfg: &'a InnerSolveConfig,
    warm: Option<Vec<f64>>,
    inner_iters: usize,
    clean: bool,
}

impl DualObjectiveOracle for UEllOracle<'_> {
    fn arity(&self) -> usize {
        self.p.objective_count()
    }

    fn eval(&mut self, lambda: &[f64]) -> Result<DualPoint, MeritError> {
        let w = SimplexWeights::new(lambda.to_vec())?;
        let sol = match solve_regularized_weighted_from(
            self.p,
            &w,
            self.x,
            self.ell,
            self.inner_cfg,
            self.warm.as_deref(),
        ) {
            Ok(s) => s,
            Err(InnerError::NotConverged { best }) => {
                self.clean = false;
                *best
            }
            Err(e) => return Err(e.into()),
        };
        self.warm = Some(sol.point.clone());
        self.inner_iters += sol.iterations;
        let fy = self.p.objective_values(&sol.point);
        let theta = dot(lambda, &self.fx) - sol.value;
        let grad = self.fx.iter().zip(&fy).map(|(a, b)| a - b).collect();
        Ok(DualPoint {
            theta,
            grad,
            inner_point: sol.point,
        })
    }

    fn inner_iterations(&self) -> usize {
        self.inner_iters
    }

    fn inner_converged(&self) -> bool {
        self.clean
    }
}

/// Dual objective of the partially linearized merit:
/// `theta(gamma) = sum_i gamma_i g_i(x) + ||v(gamma)||^2/(2 ell)
///   - min_{y in S} { sum_i gamma_i g_i(y) + (ell/2)||c(gamma) - y||^2 }`
/// with `v = sum_i gamma_i grad f_i(x)`, `c = x - v/ell`, and gradient
/// `g(x) - g(y_gamma) - J_f(x)(y_gamma - x)`.
struct WEllOracle<'a> {
    p: &'a MultiobjectiveProblem,
    x: &'a [f64],
    ell: f64,
    gx: Vec<f64>,
    grads: Vec<Vec<f64>>,
    inner_cfg: &'a InnerSolveConfig,
    prox_iters: usize,
}

impl DualObjectiveOracle for WEllOracle<'_> {
    fn arity(&self) -> usize {
        self.p.objective_count()
    }

    fn eval(&mut self, lambda: &[f64]) -> Result<DualPoint, MeritError> {
        let n = self.x.len();
        let w = SimplexWeights::new(lambda.to_vec())?;
        let mut vbar = vec![0.0; n];
        for (gi, &wi) in self.grads.iter().zip(lambda) {
            for j in 0..n {
                vbar[j] += wi * gi[j];
            }
        }
        let c: Vec<f64> = self
            .x
            .iter()
            .zip(&vbar)
            .map(|(xj, vj)| xj - vj / self.ell)
            .collect();
        let terms = self.p.convex_terms();
        let wp = weighted_sum_prox(
            &terms,
            &w,
            self.p.feasible_set(),
            &c,
            1.0 / self.ell,
            &self.inner_cfg.prox_fallback,
        )?;
        self.prox_iters += wp.iterations;
        let y = wp.point;
        let envelope = weighted_sum_value(&terms, &w, &y)
            + self.ell / 2.0 * crate::linalg::dist_sq(&c, &y);
        let theta = dot(lambda, &self.gx) + norm_sq(&vbar) / (2.0 * self.ell) - envelope;
        let gy = self.p.convex_values(&y);
        let shift = sub(&y, self.x);
        let grad = (0..lambda.len())
            .map(|i| self.gx[i] - gy[i] - dot(&self.grads[i], &shift))
            .collect();
        Ok(DualPoint {
            theta,
            grad,
            inner_point: y,
        })
    }

    fn inner_iterations(&self) -> usize {
        self.prox_iters
    }

    fn inner_converged(&self) -> bool {
        true
    }
}

/// Dual objective of the unregularized merit on strongly convex problems:
/// `theta(lambda) = sum_i lambda_i F_i(x) - min_{y in S} sum_i lambda_i F_i(y)`
/// with gradient `F(x) - F(y_lambda)`.
struct U0Oracle<'a> {
    p: &'a MultiobjectiveProblem,
    x: &'a [f64],
    fx: Vec<f64>,
    inner_cfg: &'a InnerSolveConfig,
    warm: Option<Vec<f64>>,
    inner_iters: usize,
    clean: bool,
}

impl DualObjectiveOracle for U0Oracle<'_> {
    fn arity(&self) -> usize {
        self.p.objective_count()
    }

    fn eval(&mut self, lambda: &[f64]) -> Result<DualPoint, MeritError> {
        let w = SimplexWeights::new(lambda.to_vec())?;
        let start = self.warm.clone().unwrap_or_else(|| self.x.to_vec());
        let sol = match solve_weighted_scalarization_from(
            self.p,
            &w,
            self.inner_cfg,
            Some(&start),
        ) {
            Ok(s) => s,
            Err(InnerError::NotConverged { best }) => {
                self.clean = false;
                *best
            }
            Err(e) => return Err(e.into()),
        };
        self.warm = Some(sol.point.clone());
        self.inner_iters += sol.iterations;
        let fy = self.p.objective_values(&sol.point);
        let theta = dot(lambda, &self.fx) - sol.value;
        let grad = self.fx.iter().zip(&fy).map(|(a, b)| a - b).collect();
        Ok(DualPoint {
            theta,
            grad,
            inner_point: sol.point,
        })
    }

    fn inner_iterations(&self) -> usize {
        self.inner_iters
    }

    fn inner_converged(&self) -> bool {
        self.clean
    }
}

// ---------------------------------------------------------------------------
// Public evaluations
// ---------------------------------------------------------------------------

fn require_feasible(p: &MultiobjectiveProblem, x: &[f64]) -> Result<(), MeritError> {
    if x.len() != p.dimension() || !p.feasible_set().contains(x) {
        return Err(MeritError::InfeasiblePoint);
    }
    Ok(())
}

fn finish<O: DualObjectiveOracle>(
    p: &MultiobjectiveProblem,
    x: &[f64],
    kind: MeritKind,
    ell: f64,
    oracle: &O,
    outcome: FwOutcome,
) -> Result<MeritEvaluation, MeritError> {
    let linearized = kind == MeritKind::WEll;
    let integrand_ell = if kind == MeritKind::U0 { 0.0 } else { ell };
    let value = primal_integrand(p, x, &outcome.dual.inner_point, integrand_ell, linearized);
    let converged = outcome.converged && oracle.inner_converged();
    let evaluation = MeritEvaluation {
        kind,
        ell: integrand_ell,
        value,
        maximizer: outcome.dual.inner_point,
        dual_weights: SimplexWeights::new(outcome.lambda)?,
        fw_gap: outcome.fw_gap,
        inner_diagnostics: InnerDiagnostics {
            route: EvalRoute::Dual,
            outer_iterations: outcome.iterations,
            inner_iterations: oracle.inner_iterations(),
            line_search_evals: outcome.line_search_evals,
            converged,
        },
    };
    if converged {
        Ok(evaluation)
    } else {
        Err(MeritError::NotConverged {
            best: Box::new(evaluation),
        })
    }
}

/// Evaluate the regularized merit at a feasible point of a problem with
/// every objective declared convex.
pub fn eval_u_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<MeritEvaluation, MeritError> {
    require_feasible(p, x)?;
    if !(ell > 0.0) {
        return Err(MeritError::NonPositiveEll);
    }
    if !p.metadata().all_objectives_convex() {
        return Err(MeritError::ConvexityRequired(
            "the regularized merit needs every objective declared convex".to_string(),
        ));
    }
    let mut oracle = UEllOracle {
        p,
        x,
        ell,
        fx: p.objective_values(x),
        inner_cfg: &cfg.inner,
        warm: None,
        inner_iters: 0,
        clean: true,
    };
    let outcome = frank_wolfe(&mut oracle, cfg)?;
    finish(p, x, MeritKind::UEll, ell, &oracle, outcome)
}

/// Evaluate the regularized and partially linearized merit at a feasible
/// point. No convexity of the smooth parts is required.
pub fn eval_w_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<MeritEvaluation, MeritError> {
    require_feasible(p, x)?;
    if !(ell > 0.0) {
        return Err(MeritError::NonPositiveEll);
    }
    let mut oracle = WEllOracle {
        p,
        x,
        ell,
        gx: p.convex_values(x),
        grads: p.smooth_gradients(x),
        inner_cfg: &cfg.inner,
        prox_iters: 0,
    };
    let outcome = frank_wolfe(&mut oracle, cfg)?;
    finish(p, x, MeritKind::WEll, ell, &oracle, outcome)
}

/// Evaluate the unregularized merit. Uses the dual route when every
/// objective is declared strongly convex, otherwise falls back to the grid
/// reference for low dimensions with a bounding box.
pub fn eval_u0(
    p: &MultiobjectiveProblem,
    x: &[f64],
    cfg: &DualSolveConfig,
) -> Result<MeritEvaluation, MeritError> {
    require_feasible(p, x)?;
    let meta = p.metadata();
    if meta.all_objectives_convex() && meta.all_strongly_convex() {
        let mut oracle = U0Oracle {
            p,
            x,
            fx: p.objective_values(x),
            inner_cfg: &cfg.inner,
            warm: None,
            inner_iters: 0,
            clean: true,
        };
        let outcome = frank_wolfe(&mut oracle, cfg)?;
        return finish(p, x, MeritKind::U0, 0.0, &oracle, outcome);
    }
    let has_box = p.feasible_set().bounding_box().is_some();
    if p.dimension() <= 3 && has_box {
        let ge = grid_oracle_maxmin(p, x, 0.0, false, cfg.grid_resolution)?;
        // A dual witness for the grid route: all weight on the objective
        // attaining the min at the maximizer.
        let m = p.objective_count();
        let diffs: Vec<f64> = (0..m)
            .map(|i| p.objective_value(i, x) - p.objective_value(i, &ge.maximizer))
            .collect();
        let active = argmin_index(&diffs);
        return Ok(MeritEvaluation {
            kind: MeritKind::U0,
            ell: 0.0,
            value: ge.value,
            maximizer: ge.maximizer,
            dual_weights: SimplexWeights::vertex(m, active),
            fw_gap: 0.0,
            inner_diagnostics: InnerDiagnostics {
                route: EvalRoute::Grid {
                    resolution: if cfg.grid_resolution < 2 {
                        0
                    } else {
                        cfg.grid_resolution
                    },
                    slack: ge.slack,
                },
                outer_iterations: 0,
                inner_iterations: 0,
                line_search_evals: 0,
                converged: true,
            },
        });
    }
    Err(MeritError::UnsupportedProblem(
        "u0 needs either declared strong convexity (dual route) or dimension <= 3 with a \
         bounding box (grid route); the value may be infinite otherwise"
            .to_string(),
    ))
}

/// Directional derivative of the regularized merit at `x` toward `z`,
/// evaluated at the dual weights the evaluation returns. When the optimal
/// weight set is not a singleton this upper-bounds the true derivative.
pub fn directional_derivative_u_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    z: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<f64, MeritError> {
    require_feasible(p, z)?;
    let ev = eval_u_ell(p, x, ell, cfg)?;
    let d = sub(z, x);
    let lambda = ev.dual_weights.as_slice();
    let mut total = 0.0;
    for (obj, &li) in p.objectives().iter().zip(lambda) {
        if li != 0.0 {
            total += li * obj.directional_derivative(x, &d);
        }
    }
    let x_minus_y = sub(x, &ev.maximizer);
    Ok(total - ell * dot(&x_minus_y, &d))
}

/// Directional derivative of the partially linearized merit at `x` toward
/// `z`. Needs Hessian oracles for every smooth part.
pub fn directional_derivative_w_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    z: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<f64, MeritError> {
    require_feasible(p, z)?;
    let n = p.dimension();
    let ev = eval_w_ell(p, x, ell, cfg)?;
    let gamma = ev.dual_weights.as_slice();
    let mut hbar = vec![0.0; n * n];
    let mut vbar = vec![0.0; n];
    for (i, obj) in p.objectives().iter().enumerate() {
        let h = obj
            .smooth
            .hessian(x)
            .ok_or(MeritError::HessianRequired(i))?;
        let g = obj.smooth.gradient(x);
        for j in 0..n * n {
            hbar[j] += gamma[i] * h[j];
        }
        for j in 0..n {
            vbar[j] += gamma[i] * g[j];
        }
    }
    let d = sub(z, x);
    let x_minus_y = sub(x, &ev.maximizer);
    let h_times = crate::linalg::matvec(n, &hbar, &x_minus_y);
    // [I - H/ell](x - y) - v/ell, scaled by ell in the derivative formula.
    let inner_vec: Vec<f64> = (0..n)
        .map(|j| x_minus_y[j] - h_times[j] / ell - vbar[j] / ell)
        .collect();
    let mut total = 0.0;
    for (obj, &gi) in p.objectives().iter().zip(gamma) {
        if gi != 0.0 {
            total += gi * obj.convex.directional_derivative(x, &d);
        }
    }
    Ok(total - ell * dot(&inner_vec, &d))
}

/// Stationarity certificate: the partially linearized merit value itself.
/// Zero (within the evaluation budget) exactly at Pareto stationary points.
pub fn pareto_stationarity_residual(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<f64, MeritError> {
    Ok(eval_w_ell(p, x, ell, cfg)?.value)
}

// ---------------------------------------------------------------------------
// Raw dual-objective access (used by gradient fidelity tests)
// ---------------------------------------------------------------------------

/// Dual objective and gradient of the regularized merit at given weights.
pub fn dual_point_u_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    weights: &SimplexWeights,
    inner_cfg: &InnerSolveConfig,
) -> Result<DualPoint, MeritError> {
    let mut oracle = UEllOracle {
        p,
        x,
        ell,
        fx: p.objective_values(x),
        inner_cfg,
        warm: None,
        inner_iters: 0,
        clean: true,
    };
    oracle.eval(weights.as_slice())
}

/// Dual objective and gradient of the partially linearized merit at given
/// weights.
pub fn dual_point_w_ell(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    weights: &SimplexWeights,
    inner_cfg: &InnerSolveConfig,
) -> Result<DualPoint, MeritError> {
    let mut oracle = WEllOracle {
        p,
        x,
        ell,
        gx: p.convex_values(x),
        grads: p.smooth_gradients(x),
        inner_cfg,
        prox_iters: 0,
    };
    oracle.eval(weights.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn cfg() -> DualSolveConfig {
        DualSolveConfig::default()
    }

    #[test]
    fn u_ell_abs_closed_form_points() {
        let p = zoo::builtin("paper-abs").unwrap().problem();
        let e = |x: f64| eval_u_ell(&p, &[x], 1.0, &cfg()).unwrap().value;
        assert!((e(0.5) - 0.375).abs() < 1e-9);
        assert!((e(2.0) - 0.5).abs() < 1e-9);
        assert!(e(0.0).abs() < 1e-9);
    }

    #[test]
    fn u_ell_zero_at_weak_pareto_points() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        let ev = eval_u_ell(&p, &[0.3], 1.0, &cfg()).unwrap();
        assert!(ev.value.abs() <= cfg().epsilon_eval());
        assert!(ev.fw_gap <= cfg().gap_tol);
    }

    #[test]
    fn u_ell_requires_declared_convexity() {
        let p = zoo::builtin("paper-negsq").unwrap().problem();
        assert!(matches!(
            eval_u_ell(&p, &[0.0], 1.0, &cfg()),
            Err(MeritError::ConvexityRequired(_))
        ));
    }

    #[test]
    fn w_ell_zero_at_origin_for_negated_square() {
        let p = zoo::builtin("paper-negsq").unwrap().problem();
        for &ell in &[0.5, 1.0, 2.0] {
            let ev = eval_w_ell(&p, &[0.0], ell, &cfg()).unwrap();
            assert!(ev.value.abs() < 1e-8, "w_{ell}(0) = {}", ev.value);
        }
    }

    #[test]
    fn w_ell_positive_away_from_stationary_points() {
        let p = zoo::builtin("paper-negsq").unwrap().problem();
        // Closed form for this objective: 2 x^2 / ell.
        for &(x, ell) in &[(0.5, 1.0), (1.0, 2.0), (-1.5, 0.5)] {
            let ev = eval_w_ell(&p, &[x], ell, &cfg()).unwrap();
            let expect = 2.0 * x * x / ell;
            assert!(
                (ev.value - expect).abs() < 1e-7,
                "w_{ell}({x}) = {}, expected {expect}",
                ev.value
            );
        }
    }

    #[test]
    fn w_matches_u_when_smooth_parts_vanish() {
        let p = zoo::builtin("paper-abs").unwrap().problem();
        for &x in &[-1.5, -0.25, 0.0, 0.7, 2.0] {
            let u = eval_u_ell(&p, &[x], 1.0, &cfg()).unwrap().value;
            let w = eval_w_ell(&p, &[x], 1.0, &cfg()).unwrap().value;
            assert!((u - w).abs() <= 2.0 * cfg().epsilon_eval());
        }
    }

    #[test]
    fn u0_levelbound_example_is_identically_zero() {
        let p = zoo::builtin("paper-levelbound").unwrap().problem();
        for &x in &[-2.5, -1.0, 0.0, 0.5, 2.0] {
            let ev = eval_u0(&p, &[x], &cfg()).unwrap();
            assert!(ev.value.abs() < 1e-10);
            assert!(matches!(
                ev.inner_diagnostics.route,
                EvalRoute::Grid { .. }
            ));
        }
    }

    #[test]
    fn u0_dual_route_on_strongly_convex_pair() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        let at_zero = eval_u0(&p, &[0.0], &cfg()).unwrap();
        assert!(matches!(at_zero.inner_diagnostics.route, EvalRoute::Dual));
        assert!(at_zero.value.abs() <= cfg().epsilon_eval());
        let away = eval_u0(&p, &[2.0], &cfg()).unwrap();
        assert!(away.value > 0.5);
    }

    #[test]
    fn u0_unsupported_without_routes() {
        let p = zoo::single_quadratic_1d_unboxed_nonconvex();
        assert!(matches!(
            eval_u0(&p, &[0.0], &cfg()),
            Err(MeritError::UnsupportedProblem(_))
        ));
    }

    #[test]
    fn monotone_regularization_u_ell_below_u0() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        for &x in &[-2.0, -0.4, 1.7] {
            let u0 = eval_u0(&p, &[x], &cfg()).unwrap().value;
            let u1 = eval_u_ell(&p, &[x], 1.0, &cfg()).unwrap().value;
            assert!(u1 <= u0 + cfg().epsilon_eval());
        }
    }

    #[test]
    fn directional_derivative_zero_direction() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        let du = directional_derivative_u_ell(&p, &[0.7], &[0.7], 1.0, &cfg()).unwrap();
        assert_eq!(du, 0.0);
        let dw = directional_derivative_w_ell(&p, &[0.7], &[0.7], 1.0, &cfg()).unwrap();
        assert_eq!(dw, 0.0);
    }

    #[test]
    fn directional_derivatives_agree_when_smooth_parts_vanish() {
        let p = zoo::builtin("paper-abs").unwrap().problem();
        let du = directional_derivative_u_ell(&p, &[0.5], &[1.5], 1.0, &cfg()).unwrap();
        let dw = directional_derivative_w_ell(&p, &[0.5], &[1.5], 1.0, &cfg()).unwrap();
        assert!((du - dw).abs() < 1e-8);
    }

    #[test]
    fn directional_derivative_nonnegative_at_weak_pareto_point() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        for &z in &[-2.5, -1.0, 0.4, 2.9] {
            let d = directional_derivative_u_ell(&p, &[0.0], &[z], 1.0, &cfg()).unwrap();
            assert!(d >= -cfg().epsilon_eval(), "d({z}) = {d}");
        }
    }

    #[test]
    fn stationarity_residual_examples() {
        let negsq = zoo::builtin("paper-negsq").unwrap().problem();
        assert!(pareto_stationarity_residual(&negsq, &[0.0], 1.0, &cfg())
            .unwrap()
            .abs()
            < 1e-8);
        let abs = zoo::builtin("paper-abs").unwrap().problem();
        assert!(pareto_stationarity_residual(&abs, &[0.0], 1.0, &cfg())
            .unwrap()
            .abs()
            < 1e-9);
        let r = pareto_stationarity_residual(&abs, &[0.5], 1.0, &cfg()).unwrap();
        assert!((r - 0.375).abs() < 1e-9);
    }

    #[test]
    fn dual_primal_consistency() {
        let p = zoo::builtin("quadpair-2d").unwrap().problem();
        let x = [1.5, -0.75];
        let ev = eval_u_ell(&p, &x, 2.0, &cfg()).unwrap();
        let primal = primal_integrand(&p, &x, &ev.maximizer, 2.0, false);
        assert!((primal - ev.value).abs() <= cfg().epsilon_eval() + ev.fw_gap);
    }

    #[test]
    fn infeasible_point_rejected() {
        let entry = zoo::builtin("ball-quad-2d").unwrap();
        let p = entry.problem();
        assert!(matches!(
            eval_w_ell(&p, &[5.0, 5.0], 1.0, &cfg()),
            Err(MeritError::InfeasiblePoint)
        ));
    }

    #[test]
    fn simplex_weights_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.6, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![-0.1, 1.1]).is_err());
        assert!(SimplexWeights::new(vec![]).is_err());
        let w = SimplexWeights::normalized(&[2.0, 2.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 0.5]);
    }
}

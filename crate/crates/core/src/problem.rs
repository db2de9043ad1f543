//! Problem instances and their oracle interfaces.
//!
//! A [`MultiobjectiveProblem`] bundles `m` composite objectives
//! `F_i = f_i + g_i` over a closed convex feasible set `S`. The smooth part
//! `f_i` exposes value/gradient (and optionally Hessian) oracles, the convex
//! part `g_i` exposes value/prox oracles, and the set exposes a membership
//! test plus a Euclidean projection. Declared convexity constants ride along
//! as [`ConvexityMetadata`]; [`validate_problem`] spot-checks every declared
//! fact against the oracles and fails loudly on inconsistency. Validation can
//! only falsify a declared constant, never certify it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{add_scaled, dist, dist_sq, dot, norm};
use crate::prox::{project_ball, project_box};

/// Absolute per-coordinate tolerance for feasibility tests.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Oracle for a continuously differentiable (not necessarily convex) term.
pub trait SmoothOracle: Send + Sync {
    fn eval(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Row-major `n x n` Hessian, when second derivatives are available.
    fn hessian(&self, x: &[f64]) -> Option<Vec<f64>> {
        let _ = x;
        None
    }

    /// Upper bound on `sup { ||grad f(y)|| : y in box }`, when computable.
    /// Used to size the slack of grid-based reference evaluations.
    fn gradient_sup_bound(&self, bounds: &BoundingBox) -> Option<f64> {
        let _ = bounds;
        None
    }
}

/// Structural description of a convex term, used to dispatch weighted-sum
/// prox computations to closed forms.
#[derive(Clone, Debug, PartialEq)]
pub enum ProxStructure {
    /// The zero function.
    Zero,
    /// `g(x) = sum_j weights_j * |x_j|` with `weights_j >= 0`.
    WeightedL1(Vec<f64>),
    /// No exploitable structure; terms with equal tags are treated as
    /// identical functions.
    Opaque(String),
}

impl ProxStructure {
    /// Coordinates the term actually depends on, when known.
    pub fn support(&self, dim: usize) -> Option<Vec<usize>> {
        match self {
            ProxStructure::Zero => Some(Vec::new()),
            ProxStructure::WeightedL1(w) => {
                debug_assert_eq!(w.len(), dim);
                Some((0..dim).filter(|&j| w[j] != 0.0).collect())
            }
            ProxStructure::Opaque(_) => None,
        }
    }
}

/// Oracle for a closed, proper, convex term with a prox operator.
///
/// `prox(x, t)` must return the minimizer of `g(y) + (1/2t) ||x - y||^2`,
/// i.e. the proximal operator of `t * g` at `x`.
pub trait ConvexOracle: Send + Sync {
    fn eval(&self, x: &[f64]) -> f64;

    /// Domain membership. Values outside the domain stand for +infinity and
    /// must never enter arithmetic; callers check this predicate first.
    fn in_domain(&self, x: &[f64]) -> bool {
        let _ = x;
        true
    }

    fn has_prox(&self) -> bool {
        true
    }

    fn prox(&self, x: &[f64], t: f64) -> Vec<f64>;

    fn structure(&self) -> ProxStructure;

    /// Global Lipschitz constant of the term, when finite.
    fn lipschitz_bound(&self) -> Option<f64> {
        None
    }

    /// One-sided directional derivative `g'(x; d)`.
    ///
    /// The default uses a small forward difference, which for convex `g`
    /// upper-bounds the true value; catalog terms override with closed forms.
    fn directional_derivative(&self, x: &[f64], d: &[f64]) -> f64 {
        let t = 1e-7;
        (self.eval(&add_scaled(x, t, d)) - self.eval(x)) / t
    }
}

/// Axis-aligned box, used both as a feasible set and as the sampling window
/// for grid-based reference evaluations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        BoundingBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn diameter(&self) -> f64 {
        dist(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| xi >= lo - tol && xi <= hi + tol)
    }

    /// Farthest distance from `x` to a point of the box.
    pub fn reach_from(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (j, xj) in x.iter().enumerate() {
            let d = (xj - self.lo[j]).abs().max((xj - self.hi[j]).abs());
            s += d * d;
        }
        s.sqrt()
    }

    /// All corner points. Only sensible for small dimensions.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let v = (0..n)
                .map(|j| if mask >> j & 1 == 1 { self.hi[j] } else { self.lo[j] })
                .collect();
            out.push(v);
        }
        out
    }
}

/// Feasible set with membership and projection oracles.
#[derive(Clone, Debug)]
pub enum FeasibleSet {
    /// All of R^n. An optional box tells grid-based evaluations where to look.
    Reals {
        dim: usize,
        grid_box: Option<BoundingBox>,
    },
    Box(BoundingBox),
    Ball { center: Vec<f64>, radius: f64 },
}

impl FeasibleSet {
    pub fn reals(dim: usize) -> Self {
        FeasibleSet::Reals { dim, grid_box: None }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Reals { dim, .. } => *dim,
            FeasibleSet::Box(b) => b.dim(),
            FeasibleSet::Ball { center, .. } => center.len(),
        }
    }

    pub fn is_unconstrained(&self) -> bool {
        matches!(self, FeasibleSet::Reals { .. })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            FeasibleSet::Reals { .. } => true,
            FeasibleSet::Box(b) => b.contains(x, FEASIBILITY_TOL),
            FeasibleSet::Ball { center, radius } => {
                dist(x, center) <= radius + FEASIBILITY_TOL * (x.len() as f64).sqrt()
            }
        }
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            FeasibleSet::Reals { .. } => x.to_vec(),
            FeasibleSet::Box(b) => project_box(x, &b.lo, &b.hi),
            FeasibleSet::Ball { center, radius } => project_ball(x, center, *radius),
        }
    }

    /// Box enclosing the region grid evaluations should scan.
    pub fn bounding_box(&self) -> Option<BoundingBox> {
        match self {
            FeasibleSet::Reals { grid_box, .. } => grid_box.clone(),
            FeasibleSet::Box(b) => b.clone().into(),
            FeasibleSet::Ball { center, radius } => Some(BoundingBox::new(
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
        }
    }
}

/// One composite objective `F_i = f_i + g_i`.
#[derive(Clone)]
pub struct Objective {
    pub smooth: Arc<dyn SmoothOracle>,
    pub convex: Arc<dyn ConvexOracle>,
}

impl Objective {
    pub fn value(&self, x: &[f64]) -> f64 {
        self.smooth.eval(x) + self.convex.eval(x)
    }

    /// `F'(x; d)` assembled from the gradient of the smooth part and the
    /// directional derivative of the convex part.
    pub fn directional_derivative(&self, x: &[f64], d: &[f64]) -> f64 {
        dot(&self.smooth.gradient(x), d) + self.convex.directional_derivative(x, d)
    }
}

/// Declared convexity facts for one objective.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveFacts {
    /// `f_i` is `mu`-convex (may be negative for concave-ish smooth parts).
    pub mu: Option<f64>,
    /// `F_i` is `sigma`-convex with `sigma > 0` (strong convexity).
    pub sigma: Option<f64>,
    /// Gradient of `f_i` is Lipschitz with this constant (`> 0`).
    pub lip: Option<f64>,
    /// `f_i` is convex.
    #[serde(default)]
    pub f_convex: bool,
    /// `F_i` is convex.
    #[serde(rename = "F_convex", default)]
    pub objective_convex: bool,
    /// `F_i` is strictly convex.
    #[serde(rename = "F_strictly_convex", default)]
    pub objective_strictly_convex: bool,
}

/// Declared convexity facts for every objective. Facts are inputs, not
/// conclusions: validation samples can refute them but never prove them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvexityMetadata {
    pub objectives: Vec<ObjectiveFacts>,
}

impl ConvexityMetadata {
    pub fn all_objectives_convex(&self) -> bool {
        !self.objectives.is_empty() && self.objectives.iter().all(|o| o.objective_convex)
    }

    pub fn all_strongly_convex(&self) -> bool {
        !self.objectives.is_empty()
            && self.objectives.iter().all(|o| matches!(o.sigma, Some(s) if s > 0.0))
    }

    pub fn min_sigma(&self) -> Option<f64> {
        self.objectives
            .iter()
            .map(|o| o.sigma)
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn min_mu(&self) -> Option<f64> {
        self.objectives
            .iter()
            .map(|o| o.mu)
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn max_lip(&self) -> Option<f64> {
        self.objectives
            .iter()
            .map(|o| o.lip)
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("problem must have at least one objective")]
    NoObjectives,
    #[error("problem dimension must be at least one")]
    ZeroDimension,
    #[error("metadata covers {meta} objectives but the problem has {m}")]
    MetadataMismatch { meta: usize, m: usize },
    #[error("feasible set dimension {set} does not match problem dimension {n}")]
    SetDimensionMismatch { set: usize, n: usize },
}

/// The problem instance every other module consumes.
#[derive(Clone)]
pub struct MultiobjectiveProblem {
    n: usize,
    objectives: Vec<Objective>,
    feasible_set: FeasibleSet,
    metadata: ConvexityMetadata,
}

impl MultiobjectiveProblem {
    pub fn new(
        objectives: Vec<Objective>,
        feasible_set: FeasibleSet,
        metadata: ConvexityMetadata,
    ) -> Result<Self, ProblemError> {
        if objectives.is_empty() {
            return Err(ProblemError::NoObjectives);
        }
        let n = feasible_set.dim();
        if n == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        if metadata.objectives.len() != objectives.len() {
            return Err(ProblemError::MetadataMismatch {
                meta: metadata.objectives.len(),
                m: objectives.len(),
            });
        }
        Ok(MultiobjectiveProblem {
            n,
            objectives,
            feasible_set,
            metadata,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn objective_count(&self) -> usize {
        self.objectives.len()
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    pub fn feasible_set(&self) -> &FeasibleSet {
        &self.feasible_set
    }

    pub fn metadata(&self) -> &ConvexityMetadata {
        &self.metadata
    }

    pub fn objective_value(&self, i: usize, x: &[f64]) -> f64 {
        self.objectives[i].value(x)
    }

    pub fn objective_values(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|o| o.value(x)).collect()
    }

    pub fn convex_values(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|o| o.convex.eval(x)).collect()
    }

    pub fn smooth_gradients(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.objectives.iter().map(|o| o.smooth.gradient(x)).collect()
    }

    pub fn convex_terms(&self) -> Vec<&dyn ConvexOracle> {
        self.objectives.iter().map(|o| o.convex.as_ref()).collect()
    }
}

/// One validated invariant with the worst violation seen over the samples.
#[derive(Clone, Debug)]
pub struct ValidationCheck {
    pub name: String,
    pub objective: Option<usize>,
    pub worst_violation: f64,
    pub worst_point: Vec<f64>,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let scope = match c.objective {
                Some(i) => format!("[objective {i}] "),
                None => String::new(),
            };
            out.push_str(&format!(
                "{} {}{}: worst violation {:e} (tol {:e}, {} samples)\n",
                if c.pass { "PASS" } else { "FAIL" },
                scope,
                c.name,
                c.worst_violation,
                c.tolerance,
                c.samples,
            ));
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("oracle inconsistency in check `{check}` at {point:?}: violation {magnitude:e}")]
    OracleInconsistent {
        check: String,
        point: Vec<f64>,
        magnitude: f64,
        report: ValidationReport,
    },
}

struct CheckBuilder {
    name: String,
    objective: Option<usize>,
    tolerance: f64,
    worst: f64,
    worst_point: Vec<f64>,
    samples: usize,
}

impl CheckBuilder {
    fn new(name: &str, objective: Option<usize>, tolerance: f64) -> Self {
        CheckBuilder {
            name: name.to_string(),
            objective,
            tolerance,
            worst: 0.0,
            worst_point: Vec::new(),
            samples: 0,
        }
    }

    fn observe(&mut self, violation: f64, point: &[f64]) {
        self.samples += 1;
        if violation > self.worst {
            self.worst = violation;
            self.worst_point = point.to_vec();
        }
    }

    fn finish(self) -> ValidationCheck {
        ValidationCheck {
            pass: self.worst <= self.tolerance,
            name: self.name,
            objective: self.objective,
            worst_violation: self.worst,
            worst_point: self.worst_point,
            tolerance: self.tolerance,
            samples: self.samples,
        }
    }
}

fn sample_feasible(p: &MultiobjectiveProblem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = p.dimension();
    let raw: Vec<f64> = match p.feasible_set().bounding_box() {
        Some(b) => (0..n)
            .map(|j| {
                let (lo, hi) = (b.lo[j].max(-1e6), b.hi[j].min(1e6));
                rng.random_range(lo..=hi)
            })
            .collect(),
        None => (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
    };
    p.feasible_set().project(&raw)
}

fn central_gradient_fd(f: &dyn SmoothOracle, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for j in 0..x.len() {
        let h = 1e-6 * (1.0 + x[j].abs());
        xp[j] = x[j] + h;
        let fp = f.eval(&xp);
        xp[j] = x[j] - h;
        let fm = f.eval(&xp);
        xp[j] = x[j];
        g[j] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Spot-check every oracle invariant and declared convexity fact at `samples`
/// random feasible points. Deterministic given the seed.
pub fn validate_problem(
    p: &MultiobjectiveProblem,
    samples: usize,
    seed: u64,
) -> Result<ValidationReport, ValidationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.dimension();
    let points: Vec<Vec<f64>> = (0..samples.max(2)).map(|_| sample_feasible(p, &mut rng)).collect();
    let mut report = ValidationReport::default();

    // Per-objective oracle checks.
    for (i, obj) in p.objectives().iter().enumerate() {
        let mut grad_fd = CheckBuilder::new("smooth_gradient_fd", Some(i), 1e-5);
        let mut hess_fd = CheckBuilder::new("smooth_hessian_fd", Some(i), 1e-4);
        let mut hess_sym = CheckBuilder::new("smooth_hessian_symmetry", Some(i), 1e-10);
        let mut composite = CheckBuilder::new("composite_consistency", Some(i), 0.0);
        let mut nonexp = CheckBuilder::new("convex_prox_nonexpansive", Some(i), 1e-10);
        let mut minimality = CheckBuilder::new("convex_prox_minimality", Some(i), 1e-10);
        let mut second_prox = CheckBuilder::new("convex_second_prox", Some(i), 1e-9);

        for x in &points {
            let g = obj.smooth.gradient(x);
            let fd = central_gradient_fd(obj.smooth.as_ref(), x);
            let scale = 1.0 + norm(&g);
            grad_fd.observe(
                fd.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale,
                x,
            );

            if let Some(h) = obj.smooth.hessian(x) {
                let mut worst = 0.0f64;
                let mut hscale = 1.0f64;
                for j in 0..n {
                    let step = 1e-5 * (1.0 + x[j].abs());
                    let mut xp = x.clone();
                    xp[j] = x[j] + step;
                    let gp = obj.smooth.gradient(&xp);
                    xp[j] = x[j] - step;
                    let gm = obj.smooth.gradient(&xp);
                    for k in 0..n {
                        let fd_jk = (gp[k] - gm[k]) / (2.0 * step);
                        worst = worst.max((fd_jk - h[k * n + j]).abs());
                        hscale = hscale.max(h[k * n + j].abs());
                    }
                }
                hess_fd.observe(worst / hscale, x);
                let mut asym = 0.0f64;
                for j in 0..n {
                    for k in 0..n {
                        asym = asym.max((h[j * n + k] - h[k * n + j]).abs());
                    }
                }
                hess_sym.observe(asym, x);
            }

            // F_i must equal f_i + g_i without drift.
            let drift =
                (obj.value(x) - (obj.smooth.eval(x) + obj.convex.eval(x))).abs();
            composite.observe(drift, x);

            if obj.convex.has_prox() {
                let t = rng.random_range(0.2..2.0);
                let other = sample_feasible(p, &mut rng);
                let pa = obj.convex.prox(x, t);
                let pb = obj.convex.prox(&other, t);
                nonexp.observe(dist(&pa, &pb) - dist(x, &other), x);

                // prox(x, t) minimizes g(y) + (1/2t) |x - y|^2 against
                // nearby perturbations.
                let px = obj.convex.prox(x, t);
                let base = obj.convex.eval(&px) + dist_sq(x, &px) / (2.0 * t);
                for _ in 0..4 {
                    let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let nrm = norm(&dir).max(1e-12);
                    let pert = add_scaled(&px, 1e-3 / nrm, &dir);
                    if obj.convex.in_domain(&pert) {
                        let val = obj.convex.eval(&pert) + dist_sq(x, &pert) / (2.0 * t);
                        minimality.observe(base - val, x);
                    }
                }

                if obj.convex.in_domain(x) {
                    let p1 = obj.convex.prox(x, 1.0);
                    let lhs = dist_sq(x, &p1);
                    let rhs = obj.convex.eval(x) - obj.convex.eval(&p1);
                    second_prox.observe(lhs - rhs, x);
                }
            }
        }
        report.checks.push(grad_fd.finish());
        if points.iter().any(|x| obj.smooth.hessian(x).is_some()) {
            report.checks.push(hess_fd.finish());
            report.checks.push(hess_sym.finish());
        }
        report.checks.push(composite.finish());
        report.checks.push(nonexp.finish());
        report.checks.push(minimality.finish());
        report.checks.push(second_prox.finish());
    }

    // Feasible-set projection checks.
    {
        let set = p.feasible_set();
        let mut idem = CheckBuilder::new("set_projection_idempotent", None, 1e-10);
        let mut member = CheckBuilder::new("set_projection_identity_on_members", None, 1e-10);
        let mut nonexp = CheckBuilder::new("set_projection_nonexpansive", None, 1e-10);
        for x in &points {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let pr = set.project(&raw);
            idem.observe(dist(&set.project(&pr), &pr), &raw);
            member.observe(dist(&set.project(x), x), x);
            let other: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            nonexp.observe(dist(&pr, &set.project(&other)) - dist(&raw, &other), &raw);
        }
        report.checks.push(idem.finish());
        report.checks.push(member.finish());
        report.checks.push(nonexp.finish());
    }

    // Declared convexity facts, falsified by sampling when wrong.
    for (i, facts) in p.metadata().objectives.iter().enumerate() {
        let obj = &p.objectives()[i];
        let value = |x: &[f64]| obj.value(x);
        let smooth = |x: &[f64]| obj.smooth.eval(x);

        let mut sigma_check = CheckBuilder::new("metadata_sigma_convexity", Some(i), 1e-9);
        let mut mu_check = CheckBuilder::new("metadata_mu_convexity", Some(i), 1e-9);
        let mut convex_check = CheckBuilder::new("metadata_objective_convexity", Some(i), 1e-9);
        let mut lip_check = CheckBuilder::new("metadata_lipschitz", Some(i), 1e-9);

        for _ in 0..points.len() {
            let x = sample_feasible(p, &mut rng);
            let y = sample_feasible(p, &mut rng);
            let alpha: f64 = rng.random_range(0.0..1.0);
            let mid = convex_combination(&x, alpha, &y);
            let d2 = dist_sq(&x, &y);
            let span = 1.0 + value(&x).abs() + value(&y).abs();

            if let Some(sigma) = facts.sigma {
                let bound =
                    alpha * value(&x) + (1.0 - alpha) * value(&y) - alpha * (1.0 - alpha) * sigma / 2.0 * d2;
                sigma_check.observe((value(&mid) - bound) / span, &x);
            }
            if let Some(mu) = facts.mu {
                let sspan = 1.0 + smooth(&x).abs() + smooth(&y).abs();
                let bound =
                    alpha * smooth(&x) + (1.0 - alpha) * smooth(&y) - alpha * (1.0 - alpha) * mu / 2.0 * d2;
                mu_check.observe((smooth(&mid) - bound) / sspan, &x);
            }
            if facts.objective_convex {
                let bound = alpha * value(&x) + (1.0 - alpha) * value(&y);
                convex_check.observe((value(&mid) - bound) / span, &x);
            }
            if let Some(lip) = facts.lip {
                let ga = obj.smooth.gradient(&x);
                let gb = obj.smooth.gradient(&y);
                let lhs = dist(&ga, &gb);
                let rhs = lip * dist(&x, &y);
                lip_check.observe((lhs - rhs) / (1.0 + rhs), &x);
            }
        }
        if facts.sigma.is_some() {
            report.checks.push(sigma_check.finish());
        }
        if facts.mu.is_some() {
            report.checks.push(mu_check.finish());
        }
        if facts.objective_convex {
            report.checks.push(convex_check.finish());
        }
        if facts.lip.is_some() {
            report.checks.push(lip_check.finish());
        }
    }

    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        let err = ValidationError::OracleInconsistent {
            check: bad.name.clone(),
            point: bad.worst_point.clone(),
            magnitude: bad.worst_violation,
            report: report.clone(),
        };
        return Err(err);
    }
    Ok(report)
}

fn convex_combination(x: &[f64], alpha: f64, y: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
        .collect()
}

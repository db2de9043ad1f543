//! Built-in problem instances and the declarative problem-spec format.
//!
//! A problem document is a single JSON object: dimension, a list of
//! objectives (each a smooth kind plus a convex kind plus declared convexity
//! facts), a feasible-set kind, and optional known-solution annotations
//! (catalogued solution/non-solution points, a Pareto-set description for
//! distance computations). Quadratic matrices are flat row-major arrays.
//! `custom` smooth kinds resolve against a compiled-in registry only; there
//! is no runtime expression evaluation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, matvec, norm, norm_sq};
use crate::problem::{
    BoundingBox, ConvexityMetadata, FeasibleSet, MultiobjectiveProblem, Objective, ObjectiveFacts,
    ProblemError, SmoothOracle,
};
use crate::prox::{WeightedL1Term, ZeroTerm};

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("spec parse error: {0}")]
    Parse(String),
    #[error("unknown kind: {0}")]
    UnknownKind(String),
    #[error("inconsistent dimensions: {0}")]
    InconsistentDimensions(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("unknown builtin id `{0}`")]
    UnknownId(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

// ---------------------------------------------------------------------------
// Smooth oracle kinds
// ---------------------------------------------------------------------------

/// `f(x) = 0.5 x^T Q x + b^T x + c` with symmetric `Q` (flat row-major).
#[derive(Clone, Debug)]
pub struct QuadraticSmooth {
    n: usize,
    q: Vec<f64>,
    b: Vec<f64>,
    c: f64,
}

impl QuadraticSmooth {
    pub fn new(n: usize, q: Vec<f64>, b: Vec<f64>, c: f64) -> Self {
        assert_eq!(q.len(), n * n);
        assert_eq!(b.len(), n);
        QuadraticSmooth { n, q, b, c }
    }
}

impl SmoothOracle for QuadraticSmooth {
    fn eval(&self, x: &[f64]) -> f64 {
        0.5 * dot(&matvec(self.n, &self.q, x), x) + dot(&self.b, x) + self.c
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = matvec(self.n, &self.q, x);
        for (gj, bj) in g.iter_mut().zip(&self.b) {
            *gj += bj;
        }
        g
    }

    fn hessian(&self, _x: &[f64]) -> Option<Vec<f64>> {
        Some(self.q.clone())
    }

    fn gradient_sup_bound(&self, bounds: &BoundingBox) -> Option<f64> {
        // ||Qy + b|| is convex, so the sup over a box sits at a vertex.
        let mut worst = 0.0f64;
        for v in bounds.vertices() {
            worst = worst.max(norm(&self.gradient(&v)));
        }
        Some(worst)
    }
}

/// The zero function.
#[derive(Clone, Debug, Default)]
pub struct ZeroSmooth {
    n: usize,
}

impl ZeroSmooth {
    pub fn new(n: usize) -> Self {
        ZeroSmooth { n }
    }
}

impl SmoothOracle for ZeroSmooth {
    fn eval(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![0.0; x.len().max(self.n)]
    }

    fn hessian(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(vec![0.0; x.len() * x.len()])
    }

    fn gradient_sup_bound(&self, _bounds: &BoundingBox) -> Option<f64> {
        Some(0.0)
    }
}

/// `f(x) = -||x||^2`, the standard nonconvex smooth example.
#[derive(Clone, Debug, Default)]
pub struct NegatedSquareSmooth;

impl SmoothOracle for NegatedSquareSmooth {
    fn eval(&self, x: &[f64]) -> f64 {
        -norm_sq(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| -2.0 * v).collect()
    }

    fn hessian(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = x.len();
        let mut h = vec![0.0; n * n];
        for j in 0..n {
            h[j * n + j] = -2.0;
        }
        Some(h)
    }

    fn gradient_sup_bound(&self, bounds: &BoundingBox) -> Option<f64> {
        let worst = bounds
            .vertices()
            .iter()
            .map(|v| norm(v))
            .fold(0.0, f64::max);
        Some(2.0 * worst)
    }
}

/// `f(x) = 0.25 ||x||^4`: convex, smooth, gradient not globally Lipschitz.
#[derive(Clone, Debug, Default)]
pub struct QuarticWellSmooth;

impl SmoothOracle for QuarticWellSmooth {
    fn eval(&self, x: &[f64]) -> f64 {
        0.25 * norm_sq(x).powi(2)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let s = norm_sq(x);
        x.iter().map(|v| s * v).collect()
    }

    fn hessian(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = x.len();
        let s = norm_sq(x);
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = 2.0 * x[i] * x[j] + if i == j { s } else { 0.0 };
            }
        }
        Some(h)
    }

    fn gradient_sup_bound(&self, bounds: &BoundingBox) -> Option<f64> {
        let worst = bounds
            .vertices()
            .iter()
            .map(|v| norm(v))
            .fold(0.0, f64::max);
        Some(worst.powi(3))
    }
}

fn custom_smooth(id: &str) -> Option<Arc<dyn SmoothOracle>> {
    match id {
        "quartic_well" => Some(Arc::new(QuarticWellSmooth)),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Spec document
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothSpec {
    /// Flat row-major `q` of length `n^2`.
    Quadratic {
        q: Vec<f64>,
        b: Vec<f64>,
        #[serde(default)]
        c: f64,
    },
    Zero,
    NegatedSquare,
    Custom { id: String },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSpec {
    /// Coordinatewise absolute value (weights all one).
    Abs,
    L1 { weights: Vec<f64> },
    Zero,
    /// Alias of `zero`: no nonsmooth term beyond the set indicator.
    IndicatorFree,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    Reals {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounding_box: Option<BoundingBox>,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ObjectiveSpec {
    pub smooth: SmoothSpec,
    pub convex: ConvexSpec,
    #[serde(default)]
    pub metadata: ObjectiveFacts,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParetoSetSpec {
    Points { points: Vec<Vec<f64>> },
    Segment { a: Vec<f64>, b: Vec<f64> },
}

impl ParetoSetSpec {
    /// Euclidean distance from `x` to the described set.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            ParetoSetSpec::Points { points } => points
                .iter()
                .map(|p| crate::linalg::dist(x, p))
                .fold(f64::INFINITY, f64::min),
            ParetoSetSpec::Segment { a, b } => {
                let ab: Vec<f64> = b.iter().zip(a).map(|(bi, ai)| bi - ai).collect();
                let ax: Vec<f64> = x.iter().zip(a).map(|(xi, ai)| xi - ai).collect();
                let denom = norm_sq(&ab);
                let t = if denom > 0.0 {
                    (dot(&ax, &ab) / denom).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let closest: Vec<f64> = a.iter().zip(&ab).map(|(ai, d)| ai + t * d).collect();
                crate::linalg::dist(x, &closest)
            }
        }
    }
}

/// Catalogued facts about a problem's solution structure.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct KnownSolutions {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weak_pareto_points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stationary_points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub non_solution_points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pareto_set: Option<ParetoSetSpec>,
    /// Whether the merit functions are expected to be level-bounded on this
    /// problem (drives the level-boundedness probes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merit_level_bounded: Option<bool>,
    /// Smallest regularization for which the grid reference is exact (the
    /// maximizer provably sits inside the bounding box); `None` when the
    /// grid value is only a lower estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_exact_min_ell: Option<f64>,
    /// Region property checks should sample evaluation points from. Defaults
    /// to a shrunk copy of the grid box so reference maximizers stay interior.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_box: Option<BoundingBox>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProblemSpec {
    pub dimension: usize,
    pub objectives: Vec<ObjectiveSpec>,
    pub set: SetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known: Option<KnownSolutions>,
}

impl ProblemSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    pub fn validate(&self) -> Result<(), ZooError> {
        let n = self.dimension;
        if n == 0 {
            return Err(ZooError::InvalidValue("dimension must be positive".into()));
        }
        if self.objectives.is_empty() {
            return Err(ZooError::InvalidValue(
                "at least one objective required".into(),
            ));
        }
        for (i, obj) in self.objectives.iter().enumerate() {
            match &obj.smooth {
                SmoothSpec::Quadratic { q, b, .. } => {
                    if q.len() != n * n {
                        return Err(ZooError::InconsistentDimensions(format!(
                            "objective {i}: q has {} entries, expected {}",
                            q.len(),
                            n * n
                        )));
                    }
                    if b.len() != n {
                        return Err(ZooError::InconsistentDimensions(format!(
                            "objective {i}: b has {} entries, expected {n}",
                            b.len()
                        )));
                    }
                    let scale = 1.0 + q.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                    for r in 0..n {
                        for cidx in 0..r {
                            if (q[r * n + cidx] - q[cidx * n + r]).abs() > 1e-12 * scale {
                                return Err(ZooError::InconsistentDimensions(format!(
                                    "objective {i}: q is not symmetric at ({r}, {cidx})"
                                )));
                            }
                        }
                    }
                }
                SmoothSpec::Custom { id } => {
                    if custom_smooth(id).is_none() {
                        return Err(ZooError::UnknownKind(format!("custom smooth `{id}`")));
                    }
                }
                SmoothSpec::Zero | SmoothSpec::NegatedSquare => {}
            }
            match &obj.convex {
                ConvexSpec::L1 { weights } => {
                    if weights.len() != n {
                        return Err(ZooError::InconsistentDimensions(format!(
                            "objective {i}: l1 weights have {} entries, expected {n}",
                            weights.len()
                        )));
                    }
                    if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
                        return Err(ZooError::InvalidValue(format!(
                            "objective {i}: l1 weights must be nonnegative"
                        )));
                    }
                }
                ConvexSpec::Abs | ConvexSpec::Zero | ConvexSpec::IndicatorFree => {}
            }
            if let Some(sigma) = obj.metadata.sigma {
                if !(sigma > 0.0) {
                    return Err(ZooError::InvalidValue(format!(
                        "objective {i}: sigma must be positive when declared"
                    )));
                }
            }
            if let Some(lip) = obj.metadata.lip {
                if !(lip > 0.0) {
                    return Err(ZooError::InvalidValue(format!(
                        "objective {i}: lip must be positive when declared"
                    )));
                }
            }
        }
        let set_dim = match &self.set {
            SetSpec::Reals { bounding_box } => {
                if let Some(b) = bounding_box {
                    if b.lo.iter().zip(&b.hi).any(|(l, h)| l > h) {
                        return Err(ZooError::InvalidValue(
                            "bounding box has lo > hi".into(),
                        ));
                    }
                    b.dim()
                } else {
                    n
                }
            }
            SetSpec::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(ZooError::InconsistentDimensions(
                        "box lo and hi lengths differ".into(),
                    ));
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(ZooError::InvalidValue("box has lo > hi".into()));
                }
                lo.len()
            }
            SetSpec::Ball { center, radius } => {
                if !(radius > &0.0) {
                    return Err(ZooError::InvalidValue("ball radius must be positive".into()));
                }
                center.len()
            }
        };
        if set_dim != n {
            return Err(ZooError::InconsistentDimensions(format!(
                "set dimension {set_dim} does not match problem dimension {n}"
            )));
        }
        if let Some(known) = &self.known {
            for pts in [
                &known.weak_pareto_points,
                &known.stationary_points,
                &known.non_solution_points,
            ] {
                if pts.iter().any(|p| p.len() != n) {
                    return Err(ZooError::InconsistentDimensions(
                        "known point with wrong dimension".into(),
                    ));
                }
            }
            match &known.pareto_set {
                Some(ParetoSetSpec::Points { points }) => {
                    if points.iter().any(|p| p.len() != n) {
                        return Err(ZooError::InconsistentDimensions(
                            "pareto point with wrong dimension".into(),
                        ));
                    }
                }
                Some(ParetoSetSpec::Segment { a, b }) if a.len() != n || b.len() != n => {
                    return Err(ZooError::InconsistentDimensions(
                        "pareto segment endpoint with wrong dimension".into(),
                    ));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Synthesize the oracle-backed problem this document describes.
    pub fn build(&self) -> Result<MultiobjectiveProblem, ZooError> {
        self.validate()?;
        let n = self.dimension;
        let mut objectives = Vec::with_capacity(self.objectives.len());
        let mut facts = Vec::with_capacity(self.objectives.len());
        for obj in &self.objectives {
            let smooth: Arc<dyn SmoothOracle> = match &obj.smooth {
                SmoothSpec::Quadratic { q, b, c } => {
                    Arc::new(QuadraticSmooth::new(n, q.clone(), b.clone(), *c))
                }
                SmoothSpec::Zero => Arc::new(ZeroSmooth::new(n)),
                SmoothSpec::NegatedSquare => Arc::new(NegatedSquareSmooth),
                SmoothSpec::Custom { id } => custom_smooth(id)
                    .ok_or_else(|| ZooError::UnknownKind(format!("custom smooth `{id}`")))?,
            };
            let convex: Arc<dyn crate::problem::ConvexOracle> = match &obj.convex {
                ConvexSpec::Abs => Arc::new(WeightedL1Term::uniform(n)),
                ConvexSpec::L1 { weights } => Arc::new(WeightedL1Term::new(weights.clone())),
                ConvexSpec::Zero | ConvexSpec::IndicatorFree => Arc::new(ZeroTerm),
            };
            objectives.push(Objective { smooth, convex });
            facts.push(obj.metadata.clone());
        }
        let set = match &self.set {
            SetSpec::Reals { bounding_box } => FeasibleSet::Reals {
                dim: n,
                grid_box: bounding_box.clone(),
            },
            SetSpec::Box { lo, hi } => {
                FeasibleSet::Box(BoundingBox::new(lo.clone(), hi.clone()))
            }
            SetSpec::Ball { center, radius } => FeasibleSet::Ball {
                center: center.clone(),
                radius: *radius,
            },
        };
        Ok(MultiobjectiveProblem::new(
            objectives,
            set,
            ConvexityMetadata { objectives: facts },
        )?)
    }
}

/// Parse a problem document without building it.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, ZooError> {
    serde_json::from_str::<ProblemSpec>(text).map_err(|e| {
        let msg = format!("line {}, column {}: {e}", e.line(), e.column());
        if msg.contains("unknown variant") {
            ZooError::UnknownKind(msg)
        } else {
            ZooError::Parse(msg)
        }
    })
}

/// Parse, validate, and build a problem from document text.
pub fn load_spec(text: &str) -> Result<MultiobjectiveProblem, ZooError> {
    parse_spec(text)?.build()
}

// ---------------------------------------------------------------------------
// Built-in entries
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub id: String,
    pub provenance: String,
    pub spec: ProblemSpec,
}

impl ZooEntry {
    pub fn problem(&self) -> MultiobjectiveProblem {
        self.spec.build().expect("builtin specs are valid")
    }

    pub fn known(&self) -> KnownSolutions {
        self.spec.known.clone().unwrap_or_default()
    }

    /// Catalogued points as CSV: `problem,category,x1,...,xn`.
    pub fn known_points_csv(&self) -> String {
        let n = self.spec.dimension;
        let mut out = String::from("problem,category,");
        out.push_str(&(1..=n).map(|j| format!("x{j}")).collect::<Vec<_>>().join(","));
        out.push('\n');
        let known = self.known();
        for (category, points) in [
            ("weak_pareto", &known.weak_pareto_points),
            ("stationary", &known.stationary_points),
            ("non_solution", &known.non_solution_points),
        ] {
            for p in points {
                out.push_str(&format!(
                    "{},{category},{}\n",
                    self.id,
                    p.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",")
                ));
            }
        }
        out
    }
}

fn facts(
    mu: Option<f64>,
    sigma: Option<f64>,
    lip: Option<f64>,
    f_convex: bool,
    objective_convex: bool,
    objective_strictly_convex: bool,
) -> ObjectiveFacts {
    ObjectiveFacts {
        mu,
        sigma,
        lip,
        f_convex,
        objective_convex,
        objective_strictly_convex,
    }
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| a + (b - a) * k as f64 / (count - 1) as f64)
        .collect()
}

fn reals_with_box(lo: f64, hi: f64, n: usize) -> SetSpec {
    SetSpec::Reals {
        bounding_box: Some(BoundingBox::new(vec![lo; n], vec![hi; n])),
    }
}

fn entry_paper_abs() -> ZooEntry {
    let spec = ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::Zero,
            convex: ConvexSpec::Abs,
            metadata: facts(Some(0.0), None, None, true, true, false),
        }],
        set: reals_with_box(-3.0, 3.0, 1),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![0.0]],
            stationary_points: vec![vec![0.0]],
            non_solution_points: linspace(0.3, 2.0, 10)
                .into_iter()
                .flat_map(|v| [vec![v], vec![-v]])
                .collect(),
            pareto_set: Some(ParetoSetSpec::Points {
                points: vec![vec![0.0]],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0], vec![2.0])),
        }),
    };
    ZooEntry {
        id: "paper-abs".to_string(),
        provenance: "worked example: single absolute-value objective on the line".to_string(),
        spec,
    }
}

fn entry_paper_negsq() -> ZooEntry {
    let spec = ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::NegatedSquare,
            convex: ConvexSpec::Zero,
            metadata: facts(Some(-2.0), None, Some(2.0), false, false, false),
        }],
        set: reals_with_box(-8.0, 8.0, 1),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![],
            stationary_points: vec![vec![0.0]],
            non_solution_points: vec![vec![0.5], vec![-1.0], vec![1.5], vec![-2.0]],
            pareto_set: None,
            merit_level_bounded: None,
            grid_exact_min_ell: Some(3.0),
            sample_box: Some(BoundingBox::new(vec![-2.0], vec![2.0])),
        }),
    };
    ZooEntry {
        id: "paper-negsq".to_string(),
        provenance: "worked example: concave parabola, stationary but not weakly optimal at 0"
            .to_string(),
        spec,
    }
}

fn entry_paper_levelbound() -> ZooEntry {
    let spec = ProblemSpec {
        dimension: 1,
        objectives: vec![
            ObjectiveSpec {
                smooth: SmoothSpec::Quadratic {
                    q: vec![2.0],
                    b: vec![0.0],
                    c: 0.0,
                },
                convex: ConvexSpec::Zero,
                metadata: facts(Some(2.0), Some(2.0), Some(2.0), true, true, true),
            },
            ObjectiveSpec {
                smooth: SmoothSpec::Zero,
                convex: ConvexSpec::Zero,
                metadata: facts(Some(0.0), None, None, true, true, false),
            },
        ],
        set: reals_with_box(-3.0, 3.0, 1),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![-2.0], vec![-1.0], vec![0.0], vec![1.0], vec![2.0]],
            stationary_points: vec![vec![-2.0], vec![-1.0], vec![0.0], vec![1.0], vec![2.0]],
            non_solution_points: vec![],
            pareto_set: Some(ParetoSetSpec::Points {
                points: vec![vec![0.0]],
            }),
            merit_level_bounded: Some(false),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0], vec![2.0])),
        }),
    };
    ZooEntry {
        id: "paper-levelbound".to_string(),
        provenance: "worked example: (x^2, 0) pair whose unregularized merit vanishes everywhere"
            .to_string(),
        spec,
    }
}

fn quad_objective_1d(center: f64) -> ObjectiveSpec {
    // (x - center)^2
    ObjectiveSpec {
        smooth: SmoothSpec::Quadratic {
            q: vec![2.0],
            b: vec![-2.0 * center],
            c: center * center,
        },
        convex: ConvexSpec::Zero,
        metadata: facts(Some(2.0), Some(2.0), Some(2.0), true, true, true),
    }
}

fn entry_quadpair_1d() -> ZooEntry {
    let solutions: Vec<Vec<f64>> = linspace(-1.0, 1.0, 20).into_iter().map(|v| vec![v]).collect();
    let non_solutions: Vec<Vec<f64>> = linspace(1.3, 3.0, 10)
        .into_iter()
        .flat_map(|v| [vec![v], vec![-v]])
        .collect();
    let spec = ProblemSpec {
        dimension: 1,
        objectives: vec![quad_objective_1d(1.0), quad_objective_1d(-1.0)],
        set: reals_with_box(-4.0, 4.0, 1),
        known: Some(KnownSolutions {
            weak_pareto_points: solutions.clone(),
            stationary_points: solutions,
            non_solution_points: non_solutions,
            pareto_set: Some(ParetoSetSpec::Segment {
                a: vec![-1.0],
                b: vec![1.0],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.5], vec![2.5])),
        }),
    };
    ZooEntry {
        id: "quadpair-1d".to_string(),
        provenance: "constructed family: two shifted parabolas on the line".to_string(),
        spec,
    }
}

fn quad_objective_nd(center: &[f64]) -> ObjectiveSpec {
    // ||x - center||^2
    let n = center.len();
    let mut q = vec![0.0; n * n];
    for j in 0..n {
        q[j * n + j] = 2.0;
    }
    ObjectiveSpec {
        smooth: SmoothSpec::Quadratic {
            q,
            b: center.iter().map(|c| -2.0 * c).collect(),
            c: norm_sq(center),
        },
        convex: ConvexSpec::Zero,
        metadata: facts(Some(2.0), Some(2.0), Some(2.0), true, true, true),
    }
}

fn segment_points(a: [f64; 2], b: [f64; 2], count: usize) -> Vec<Vec<f64>> {
    linspace(0.0, 1.0, count)
        .into_iter()
        .map(|t| vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])
        .collect()
}

fn entry_quadpair_2d() -> ZooEntry {
    let solutions = segment_points([-1.0, 0.0], [1.0, 0.0], 20);
    let non_solutions: Vec<Vec<f64>> = linspace(-1.0, 1.0, 10)
        .into_iter()
        .flat_map(|t| [vec![t, 0.9], vec![t + 0.3, -1.4]])
        .collect();
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            quad_objective_nd(&[1.0, 0.0]),
            quad_objective_nd(&[-1.0, 0.0]),
        ],
        set: reals_with_box(-3.0, 3.0, 2),
        known: Some(KnownSolutions {
            weak_pareto_points: solutions.clone(),
            stationary_points: solutions,
            non_solution_points: non_solutions,
            pareto_set: Some(ParetoSetSpec::Segment {
                a: vec![-1.0, 0.0],
                b: vec![1.0, 0.0],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0, -2.0], vec![2.0, 2.0])),
        }),
    };
    ZooEntry {
        id: "quadpair-2d".to_string(),
        provenance: "constructed family: two shifted paraboloids in the plane".to_string(),
        spec,
    }
}

fn entry_box_quad_2d() -> ZooEntry {
    let solutions = segment_points([-1.0, 0.0], [1.0, 0.0], 20);
    let non_solutions: Vec<Vec<f64>> = linspace(-0.9, 0.9, 10)
        .into_iter()
        .flat_map(|t| [vec![t, 0.8], vec![t, -0.95]])
        .collect();
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            quad_objective_nd(&[2.0, 0.0]),
            quad_objective_nd(&[-2.0, 0.0]),
        ],
        set: SetSpec::Box {
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
        },
        known: Some(KnownSolutions {
            weak_pareto_points: solutions.clone(),
            stationary_points: solutions,
            non_solution_points: non_solutions,
            pareto_set: Some(ParetoSetSpec::Segment {
                a: vec![-1.0, 0.0],
                b: vec![1.0, 0.0],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-1.0, -1.0], vec![1.0, 1.0])),
        }),
    };
    ZooEntry {
        id: "box-quad-2d".to_string(),
        provenance: "constructed family: paraboloids with centers outside a box constraint"
            .to_string(),
        spec,
    }
}

fn entry_ball_quad_2d() -> ZooEntry {
    let solutions = segment_points([-0.95, 0.0], [0.95, 0.0], 20);
    let non_solutions: Vec<Vec<f64>> = linspace(-0.7, 0.7, 10)
        .into_iter()
        .flat_map(|t| [vec![t, 0.5], vec![t, -0.55]])
        .collect();
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            quad_objective_nd(&[2.0, 0.0]),
            quad_objective_nd(&[-2.0, 0.0]),
        ],
        set: SetSpec::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        },
        known: Some(KnownSolutions {
            weak_pareto_points: solutions.clone(),
            stationary_points: solutions,
            non_solution_points: non_solutions,
            pareto_set: Some(ParetoSetSpec::Segment {
                a: vec![-1.0, 0.0],
                b: vec![1.0, 0.0],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-0.7, -0.7], vec![0.7, 0.7])),
        }),
    };
    ZooEntry {
        id: "ball-quad-2d".to_string(),
        provenance: "constructed family: paraboloids over the unit disk".to_string(),
        spec,
    }
}

fn entry_abs_quad_1d() -> ZooEntry {
    // F = (x - 1)^2 / 2 + |x|, minimized exactly at 0.
    let spec = ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::Quadratic {
                q: vec![1.0],
                b: vec![-1.0],
                c: 0.5,
            },
            convex: ConvexSpec::Abs,
            metadata: facts(Some(1.0), Some(1.0), Some(1.0), true, true, true),
        }],
        set: reals_with_box(-3.0, 3.0, 1),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![0.0]],
            stationary_points: vec![vec![0.0]],
            non_solution_points: vec![vec![0.5], vec![1.0], vec![-1.0], vec![2.0]],
            pareto_set: Some(ParetoSetSpec::Points {
                points: vec![vec![0.0]],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0], vec![2.0])),
        }),
    };
    ZooEntry {
        id: "abs-quad-1d".to_string(),
        provenance: "constructed composite: quadratic plus absolute value".to_string(),
        spec,
    }
}

fn entry_l1pair_2d() -> ZooEntry {
    // f_i = ||x - a_i||^2 / 2 with l1 terms on disjoint coordinates.
    let mut q = vec![0.0; 4];
    q[0] = 1.0;
    q[3] = 1.0;
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            ObjectiveSpec {
                smooth: SmoothSpec::Quadratic {
                    q: q.clone(),
                    b: vec![-1.0, -1.0],
                    c: 1.0,
                },
                convex: ConvexSpec::L1 {
                    weights: vec![1.0, 0.0],
                },
                metadata: facts(Some(1.0), Some(1.0), Some(1.0), true, true, true),
            },
            ObjectiveSpec {
                smooth: SmoothSpec::Quadratic {
                    q,
                    b: vec![1.0, 1.0],
                    c: 1.0,
                },
                convex: ConvexSpec::L1 {
                    weights: vec![0.0, 1.0],
                },
                metadata: facts(Some(1.0), Some(1.0), Some(1.0), true, true, true),
            },
        ],
        set: reals_with_box(-3.0, 3.0, 2),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
            stationary_points: vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
            non_solution_points: vec![vec![2.0, 2.0], vec![-2.0, 2.0], vec![1.5, -1.5]],
            pareto_set: None,
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0, -2.0], vec![2.0, 2.0])),
        }),
    };
    ZooEntry {
        id: "l1pair-2d".to_string(),
        provenance: "constructed composite: l1 terms on disjoint coordinate blocks".to_string(),
        spec,
    }
}

fn entry_shared_l1_2d() -> ZooEntry {
    let mut q = vec![0.0; 4];
    q[0] = 1.0;
    q[3] = 1.0;
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            ObjectiveSpec {
                smooth: SmoothSpec::Quadratic {
                    q: q.clone(),
                    b: vec![-2.0, 0.0],
                    c: 2.0,
                },
                convex: ConvexSpec::Abs,
                metadata: facts(Some(1.0), Some(1.0), Some(1.0), true, true, true),
            },
            ObjectiveSpec {
                smooth: SmoothSpec::Quadratic {
                    q,
                    b: vec![0.0, -2.0],
                    c: 2.0,
                },
                convex: ConvexSpec::Abs,
                metadata: facts(Some(1.0), Some(1.0), Some(1.0), true, true, true),
            },
        ],
        set: reals_with_box(-3.0, 3.0, 2),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            stationary_points: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            non_solution_points: vec![vec![2.0, 2.0], vec![-1.0, -1.0], vec![2.0, -2.0]],
            pareto_set: None,
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0, -2.0], vec![2.0, 2.0])),
        }),
    };
    ZooEntry {
        id: "shared-l1-2d".to_string(),
        provenance: "constructed composite: one shared l1 term across objectives".to_string(),
        spec,
    }
}

fn entry_l1mix_2d() -> ZooEntry {
    // Pure nonsmooth pair: overlapping weighted-l1 objectives, both minimized
    // exactly at the origin.
    let spec = ProblemSpec {
        dimension: 2,
        objectives: vec![
            ObjectiveSpec {
                smooth: SmoothSpec::Zero,
                convex: ConvexSpec::L1 {
                    weights: vec![1.0, 2.0],
                },
                metadata: facts(Some(0.0), None, None, true, true, false),
            },
            ObjectiveSpec {
                smooth: SmoothSpec::Zero,
                convex: ConvexSpec::L1 {
                    weights: vec![2.0, 1.0],
                },
                metadata: facts(Some(0.0), None, None, true, true, false),
            },
        ],
        set: reals_with_box(-3.0, 3.0, 2),
        known: Some(KnownSolutions {
            weak_pareto_points: vec![vec![0.0, 0.0]],
            stationary_points: vec![vec![0.0, 0.0]],
            non_solution_points: vec![vec![1.0, 1.0], vec![-0.5, 0.5], vec![2.0, 0.0]],
            pareto_set: Some(ParetoSetSpec::Points {
                points: vec![vec![0.0, 0.0]],
            }),
            merit_level_bounded: Some(true),
            grid_exact_min_ell: Some(0.0),
            sample_box: Some(BoundingBox::new(vec![-2.0, -2.0], vec![2.0, 2.0])),
        }),
    };
    ZooEntry {
        id: "l1mix-2d".to_string(),
        provenance: "constructed nonsmooth pair: overlapping weighted-l1 objectives".to_string(),
        spec,
    }
}

pub fn builtin_ids() -> Vec<&'static str> {
    vec![
        "paper-abs",
        "paper-negsq",
        "paper-levelbound",
        "quadpair-1d",
        "quadpair-2d",
        "box-quad-2d",
        "ball-quad-2d",
        "abs-quad-1d",
        "l1pair-2d",
        "shared-l1-2d",
        "l1mix-2d",
    ]
}

pub fn builtin(id: &str) -> Result<ZooEntry, ZooError> {
    match id {
        "paper-abs" => Ok(entry_paper_abs()),
        "paper-negsq" => Ok(entry_paper_negsq()),
        "paper-levelbound" => Ok(entry_paper_levelbound()),
        "quadpair-1d" => Ok(entry_quadpair_1d()),
        "quadpair-2d" => Ok(entry_quadpair_2d()),
        "box-quad-2d" => Ok(entry_box_quad_2d()),
        "ball-quad-2d" => Ok(entry_ball_quad_2d()),
        "abs-quad-1d" => Ok(entry_abs_quad_1d()),
        "l1pair-2d" => Ok(entry_l1pair_2d()),
        "shared-l1-2d" => Ok(entry_shared_l1_2d()),
        "l1mix-2d" => Ok(entry_l1mix_2d()),
        other => Err(ZooError::UnknownId(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Reproducible random ensembles
// ---------------------------------------------------------------------------

/// Random strongly convex quadratic ensemble member. The spectrum is drawn
/// from `sigma_range` and rotated by a random orthogonal matrix, so the
/// declared constants (`sigma = mu = min eigenvalue`, `lip = max eigenvalue`)
/// are exact by construction. The generated document fully reproduces the
/// instance.
pub fn random_quadratic_family(
    seed: u64,
    n: usize,
    m: usize,
    sigma_range: (f64, f64),
) -> ProblemSpec {
    assert!(n >= 1 && m >= 1);
    assert!(sigma_range.0 > 0.0 && sigma_range.1 >= sigma_range.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut objectives = Vec::with_capacity(m);
    for _ in 0..m {
        let eigs: Vec<f64> = (0..n)
            .map(|_| rng.random_range(sigma_range.0..=sigma_range.1))
            .collect();
        let rot = random_orthogonal(n, &mut rng);
        // Q = R diag(eigs) R^T, symmetrized exactly.
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                for k in 0..n {
                    v += rot[i * n + k] * eigs[k] * rot[j * n + k];
                }
                q[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (q[i * n + j] + q[j * n + i]);
                q[i * n + j] = avg;
                q[j * n + i] = avg;
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let sigma = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        let lip = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        objectives.push(ObjectiveSpec {
            smooth: SmoothSpec::Quadratic { q, b, c: 0.0 },
            convex: ConvexSpec::Zero,
            // Declared constants are known slightly conservatively so exact
            // arithmetic noise in the rotation cannot falsify them.
            metadata: facts(
                Some(sigma * (1.0 - 1e-9)),
                Some(sigma * (1.0 - 1e-9)),
                Some(lip * (1.0 + 1e-9)),
                true,
                true,
                true,
            ),
        });
    }
    ProblemSpec {
        dimension: n,
        objectives,
        set: reals_with_box(-8.0, 8.0, n),
        known: None,
    }
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Modified Gram-Schmidt on random columns, with unit-vector fallback for
    // near-dependent draws. Columns are stored row-major: rot[i*n + k] is
    // component i of column k.
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut k = 0;
    let mut attempts = 0;
    while k < n {
        let mut v: Vec<f64> = if attempts < 8 {
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
        } else {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            e
        };
        for c in &cols {
            let proj = dot(&v, c);
            for j in 0..n {
                v[j] -= proj * c[j];
            }
        }
        let nv = norm(&v);
        if nv > 1e-6 {
            for x in &mut v {
                *x /= nv;
            }
            cols.push(v);
            k += 1;
            attempts = 0;
        } else {
            attempts += 1;
        }
    }
    let mut rot = vec![0.0; n * n];
    for (kk, c) in cols.iter().enumerate() {
        for i in 0..n {
            rot[i * n + kk] = c[i];
        }
    }
    rot
}

// ---------------------------------------------------------------------------
// Small fixed instances used by solver unit tests
// ---------------------------------------------------------------------------

#[cfg(test)]
pub(crate) fn single_quadratic_1d() -> MultiobjectiveProblem {
    ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::Quadratic {
                q: vec![2.0],
                b: vec![0.0],
                c: 0.0,
            },
            convex: ConvexSpec::Zero,
            metadata: facts(Some(2.0), Some(2.0), Some(2.0), true, true, true),
        }],
        set: reals_with_box(-4.0, 4.0, 1),
        known: None,
    }
    .build()
    .unwrap()
}

#[cfg(test)]
pub(crate) fn single_quadratic_1d_unboxed() -> MultiobjectiveProblem {
    ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::Quadratic {
                q: vec![2.0],
                b: vec![0.0],
                c: 0.0,
            },
            convex: ConvexSpec::Zero,
            metadata: facts(Some(2.0), Some(2.0), Some(2.0), true, true, true),
        }],
        set: SetSpec::Reals { bounding_box: None },
        known: None,
    }
    .build()
    .unwrap()
}

#[cfg(test)]
pub(crate) fn single_quadratic_1d_unboxed_nonconvex() -> MultiobjectiveProblem {
    ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::NegatedSquare,
            convex: ConvexSpec::Zero,
            metadata: facts(Some(-2.0), None, Some(2.0), false, false, false),
        }],
        set: SetSpec::Reals { bounding_box: None },
        known: None,
    }
    .build()
    .unwrap()
}

#[cfg(test)]
pub(crate) fn zero_objective_1d() -> MultiobjectiveProblem {
    ProblemSpec {
        dimension: 1,
        objectives: vec![ObjectiveSpec {
            smooth: SmoothSpec::Zero,
            convex: ConvexSpec::Zero,
            metadata: facts(Some(0.0), None, None, true, true, false),
        }],
        set: reals_with_box(-1.0, 1.0, 1),
        known: None,
    }
    .build()
    .unwrap()
}

#[cfg(test)]
pub(crate) fn linear_pair_1d() -> MultiobjectiveProblem {
    let linear = |slope: f64| ObjectiveSpec {
        smooth: SmoothSpec::Quadratic {
            q: vec![0.0],
            b: vec![slope],
            c: 0.0,
        },
        convex: ConvexSpec::Zero,
        metadata: facts(Some(0.0), None, None, true, true, false),
    };
    ProblemSpec {
        dimension: 1,
        objectives: vec![linear(1.0), linear(-1.0)],
        set: SetSpec::Reals { bounding_box: None },
        known: None,
    }
    .build()
    .unwrap()
}

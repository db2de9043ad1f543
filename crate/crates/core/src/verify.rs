//! Mechanical checking of the merit functions' structural properties over
//! problem/sample ensembles.
//!
//! Every check id maps to exactly one property statement (its "citation"),
//! printed in the report. Runs are deterministic given the sample plan's
//! seed: identical configurations produce byte-identical reports. Failures
//! are report entries carrying a reproducible witness, never panics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::inner::{grid_oracle_maxmin, InnerError};
use crate::linalg::norm;
use crate::merit::{
    eval_u0, eval_u_ell, eval_w_ell, DualSolveConfig, EvalRoute, MeritError, MeritEvaluation,
    MeritKind,
};
use crate::problem::{BoundingBox, MultiobjectiveProblem};
use crate::prox::{catalog, moreau_envelope, ProxError};
use crate::zoo::{self, KnownSolutions, ProblemSpec, ZooError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("metadata missing: {0}")]
    MetadataMissing(String),
    #[error("no Pareto-set distance oracle catalogued for this problem")]
    DistanceOracleMissing,
    #[error("invalid check input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Merit(#[from] MeritError),
    #[error(transparent)]
    Inner(#[from] InnerError),
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

/// Identifier of one checked property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckId {
    NonnegU0,
    IffWeakParetoU0,
    NonnegUEll,
    IffWeakParetoUEll,
    NonnegWEll,
    IffStationaryWEll,
    BetweenConvex,
    BetweenLipschitz,
    InnerScalingW,
    InnerScalingU,
    LevelBoundedProbe,
    ErrorBoundW,
    ErrorBoundU,
    ErrorBoundU0,
    GradEnvelope,
    SecondProx,
    RemarkWEqualsU,
}

impl CheckId {
    pub const ALL: [CheckId; 17] = [
        CheckId::NonnegU0,
        CheckId::IffWeakParetoU0,
        CheckId::NonnegUEll,
        CheckId::IffWeakParetoUEll,
        CheckId::NonnegWEll,
        CheckId::IffStationaryWEll,
        CheckId::BetweenConvex,
        CheckId::BetweenLipschitz,
        CheckId::InnerScalingW,
        CheckId::InnerScalingU,
        CheckId::LevelBoundedProbe,
        CheckId::ErrorBoundW,
        CheckId::ErrorBoundU,
        CheckId::ErrorBoundU0,
        CheckId::GradEnvelope,
        CheckId::SecondProx,
        CheckId::RemarkWEqualsU,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckId::NonnegU0 => "NONNEG_U0",
            CheckId::IffWeakParetoU0 => "IFF_WEAK_PARETO_U0",
            CheckId::NonnegUEll => "NONNEG_UL",
            CheckId::IffWeakParetoUEll => "IFF_WEAK_PARETO_UL",
            CheckId::NonnegWEll => "NONNEG_WL",
            CheckId::IffStationaryWEll => "IFF_STATIONARY_WL",
            CheckId::BetweenConvex => "BETWEEN_CONVEX",
            CheckId::BetweenLipschitz => "BETWEEN_LIPSCHITZ",
            CheckId::InnerScalingW => "INNER_SCALING_W",
            CheckId::InnerScalingU => "INNER_SCALING_U",
            CheckId::LevelBoundedProbe => "LEVEL_BOUNDED_PROBE",
            CheckId::ErrorBoundW => "ERROR_BOUND_W",
            CheckId::ErrorBoundU => "ERROR_BOUND_U",
            CheckId::ErrorBoundU0 => "ERROR_BOUND_U0",
            CheckId::GradEnvelope => "GRAD_ENVELOPE",
            CheckId::SecondProx => "SECOND_PROX",
            CheckId::RemarkWEqualsU => "REMARK_W_EQUALS_U",
        }
    }

    /// The property statement this check samples.
    pub fn citation(&self) -> &'static str {
        match self {
            CheckId::NonnegU0 => "u0(x) >= 0 for every feasible x",
            CheckId::IffWeakParetoU0 => "u0(x) = 0 exactly at weakly Pareto optimal points",
            CheckId::NonnegUEll => "u_ell(x) >= 0 for every feasible x (convex objectives)",
            CheckId::IffWeakParetoUEll => {
                "u_ell(x) = 0 exactly at weakly Pareto optimal points (convex objectives)"
            }
            CheckId::NonnegWEll => "w_ell(x) >= 0 for every feasible x",
            CheckId::IffStationaryWEll => "w_ell(x) = 0 exactly at Pareto stationary points",
            CheckId::BetweenConvex => {
                "with mu = min_i mu_i: u0 <= w_mu and u_ell <= w_(mu+ell) when mu >= 0, else \
                 u_(-mu+ell) <= w_ell"
            }
            CheckId::BetweenLipschitz => {
                "with L = max_i L_i: u_(L+ell) <= w_ell, u0 >= w_L, and u_ell >= w_(L+ell)"
            }
            CheckId::InnerScalingW => "for r >= ell > 0: w_r(x) <= w_ell(x) <= (r/ell) w_r(x)",
            CheckId::InnerScalingU => {
                "for r >= ell > 0: u_r(x) <= u_ell(x) <= (r/ell) u_r(x) (convex objectives)"
            }
            CheckId::LevelBoundedProbe => {
                "level-bounded convex objectives give level-bounded merits; the (x^2, 0) pair \
                 keeps u0 = 0 arbitrarily far out"
            }
            CheckId::ErrorBoundW => {
                "w_ell(x) >= kappa(rho) dist(x, Pareto set)^2, kappa = (rho-ell)/2 if ell < \
                 rho/2 else rho^2/(8 ell)"
            }
            CheckId::ErrorBoundU => {
                "u_ell(x) >= upsilon(sigma) dist(x, Pareto set)^2, upsilon = (sigma-ell)/2 if \
                 ell < sigma/2 else sigma^2/(8 ell)"
            }
            CheckId::ErrorBoundU0 => {
                "u0(x) >= (sigma/2) dist(x, Pareto set)^2 under sigma-convexity"
            }
            CheckId::GradEnvelope => {
                "the Moreau envelope is differentiable with gradient x - prox(x)"
            }
            CheckId::SecondProx => {
                "||x - prox(x)||^2 <= g(x) - g(prox(x)) for closed proper convex g"
            }
            CheckId::RemarkWEqualsU => {
                "with zero smooth parts the partially linearized merit equals the regularized one"
            }
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        CheckId::ALL.iter().copied().find(|c| c.name() == s)
    }
}

/// Reference to a problem a check runs over.
#[derive(Clone, Debug)]
pub enum ProblemRef {
    Builtin(&'static str),
    RandomQuadratic {
        seed: u64,
        n: usize,
        m: usize,
        sigma_range: (f64, f64),
    },
    /// An already-parsed document (user problems fed through the CLI).
    Inline { label: String, spec: Box<ProblemSpec> },
}

impl ProblemRef {
    fn load(&self) -> Result<(String, ProblemSpec), ZooError> {
        match self {
            ProblemRef::Builtin(id) => {
                let entry = zoo::builtin(id)?;
                Ok((entry.id, entry.spec))
            }
            ProblemRef::RandomQuadratic {
                seed,
                n,
                m,
                sigma_range,
            } => Ok((
                format!("random-quad[seed={seed},n={n},m={m}]"),
                zoo::random_quadratic_family(*seed, *n, *m, *sigma_range),
            )),
            ProblemRef::Inline { label, spec } => Ok((label.clone(), spec.as_ref().clone())),
        }
    }
}

/// Whether the unregularized merit has an evaluation route on this problem.
fn u0_route_available(p: &MultiobjectiveProblem) -> bool {
    let meta = p.metadata();
    (meta.all_objectives_convex() && meta.all_strongly_convex())
        || (p.dimension() <= 3 && p.feasible_set().bounding_box().is_some())
}

#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub problems: Vec<ProblemRef>,
    /// Random evaluation points per problem (checks with catalogued points
    /// use those instead).
    pub points: usize,
    pub ell_grid: Vec<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct TheoremCheck {
    pub id: CheckId,
    pub plan: SamplePlan,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub problem: String,
    pub x: Vec<f64>,
    pub ell: f64,
    pub r: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: CheckId,
    pub pass: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&format!(
                "{} {:<22} worst={:e} tol={:e} samples={}\n    {}\n",
                if o.pass { "PASS" } else { "FAIL" },
                o.id.name(),
                o.worst_violation,
                o.tolerance,
                o.samples,
                o.id.citation(),
            ));
            if let Some(w) = &o.witness {
                if !o.pass {
                    out.push_str(&format!(
                        "    witness: problem={} x={:?} ell={} r={:?} {}\n",
                        w.problem, w.x, w.ell, w.r, w.detail
                    ));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "check_id,status,worst_violation,tolerance,samples,witness_problem,witness_x,\
             witness_ell,witness_r,witness_detail,citation\n",
        );
        for o in &self.outcomes {
            let (wp, wx, wl, wr, wd) = match &o.witness {
                Some(w) => (
                    w.problem.clone(),
                    w.x.iter()
                        .map(|v| format!("{v}"))
                        .collect::<Vec<_>>()
                        .join(";"),
                    format!("{}", w.ell),
                    w.r.map(|r| format!("{r}")).unwrap_or_default(),
                    w.detail.clone(),
                ),
                None => Default::default(),
            };
            let row = [
                o.id.name().to_string(),
                (if o.pass { "pass" } else { "fail" }).to_string(),
                format!("{:e}", o.worst_violation),
                format!("{:e}", o.tolerance),
                o.samples.to_string(),
                wp,
                wx,
                wl,
                wr,
                wd,
                o.id.citation().to_string(),
            ];
            let quoted: Vec<String> = row
                .iter()
                .map(|f| {
                    if f.contains(',') || f.contains('"') || f.contains('\n') {
                        format!("\"{}\"", f.replace('"', "\"\""))
                    } else {
                        f.clone()
                    }
                })
                .collect();
            out.push_str(&quoted.join(","));
            out.push('\n');
        }
        out
    }
}

struct Tracker {
    worst: f64,
    witness: Option<Witness>,
    samples: usize,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            worst: 0.0,
            witness: None,
            samples: 0,
        }
    }

    fn observe(&mut self, violation: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        if violation > self.worst || (self.witness.is_none() && violation > 0.0) {
            self.worst = self.worst.max(violation);
            self.witness = Some(witness());
        }
    }

    fn finish(self, id: CheckId, tolerance: f64) -> CheckOutcome {
        CheckOutcome {
            id,
            pass: self.worst <= tolerance,
            worst_violation: self.worst,
            tolerance,
            samples: self.samples,
            witness: self.witness,
        }
    }
}

/// A problem together with its catalogued solution knowledge.
pub struct VerifiedProblem<'a> {
    pub problem: &'a MultiobjectiveProblem,
    pub known: Option<&'a KnownSolutions>,
}

fn sample_points(
    p: &MultiobjectiveProblem,
    known: Option<&KnownSolutions>,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let bounds: BoundingBox = known
        .and_then(|k| k.sample_box.clone())
        .or_else(|| {
            p.feasible_set().bounding_box().map(|b| {
                // Shrink toward the center so reference maximizers stay
                // interior to the grid window.
                let lo = b
                    .lo
                    .iter()
                    .zip(&b.hi)
                    .map(|(l, h)| 0.5 * (l + h) - 0.35 * (h - l))
                    .collect();
                let hi = b
                    .lo
                    .iter()
                    .zip(&b.hi)
                    .map(|(l, h)| 0.5 * (l + h) + 0.35 * (h - l))
                    .collect();
                BoundingBox::new(lo, hi)
            })
        })
        .unwrap_or_else(|| {
            BoundingBox::new(vec![-2.0; p.dimension()], vec![2.0; p.dimension()])
        });
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..p.dimension())
                .map(|j| rng.random_range(bounds.lo[j]..=bounds.hi[j]))
                .collect();
            p.feasible_set().project(&raw)
        })
        .collect()
}

/// Value of the unregularized or regularized merit with route slack.
/// Returns `(value, upper_slack, certified)`: the true value lies in
/// `[value, value + upper_slack]` when `certified`, and is only known to be
/// `>= value` otherwise.
fn u_value_with_slack(
    vp: &VerifiedProblem<'_>,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<(f64, f64, bool), VerifyError> {
    let p = vp.problem;
    if ell == 0.0 {
        let ev = eval_u0(p, x, cfg)?;
        return Ok(match ev.inner_diagnostics.route {
            EvalRoute::Dual => (ev.value, 0.0, true),
            EvalRoute::Grid { slack, .. } => {
                let certified = vp
                    .known
                    .and_then(|k| k.grid_exact_min_ell)
                    .is_some_and(|gmin| 0.0 >= gmin);
                (ev.value, slack, certified)
            }
        });
    }
    if p.metadata().all_objectives_convex() {
        let ev = eval_u_ell(p, x, ell, cfg)?;
        return Ok((ev.value, 0.0, true));
    }
    let ge = grid_oracle_maxmin(p, x, ell, false, cfg.grid_resolution)?;
    let certified = vp
        .known
        .and_then(|k| k.grid_exact_min_ell)
        .is_some_and(|gmin| ell >= gmin);
    Ok((ge.value, ge.slack, certified))
}

/// Worst positive violation of the sandwich inequalities relating the
/// unregularized/regularized merits to the partially linearized one, using
/// whichever convexity constants the metadata declares.
pub fn check_between(
    vp: &VerifiedProblem<'_>,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<f64, VerifyError> {
    let p = vp.problem;
    let meta = p.metadata();
    let mu = meta.min_mu();
    let lip = meta.max_lip();
    if mu.is_none() && lip.is_none() {
        return Err(VerifyError::MetadataMissing(
            "sandwich checks need mu or lip for every objective".to_string(),
        ));
    }
    let w_at = |l: f64| -> Result<f64, VerifyError> { Ok(eval_w_ell(p, x, l, cfg)?.value) };
    let mut worst = 0.0f64;

    if let Some(mu) = mu {
        if mu > 0.0 {
            // u0 <= w_mu: a lower estimate of u0 never false-flags here.
            let (u0v, _, _) = u_value_with_slack(vp, x, 0.0, cfg)?;
            worst = worst.max(u0v - w_at(mu)?);
            let (ulv, _, _) = u_value_with_slack(vp, x, ell, cfg)?;
            worst = worst.max(ulv - w_at(mu + ell)?);
        } else if mu == 0.0 {
            let (ulv, _, _) = u_value_with_slack(vp, x, ell, cfg)?;
            worst = worst.max(ulv - w_at(ell)?);
        } else {
            let (uv, _, _) = u_value_with_slack(vp, x, -mu + ell, cfg)?;
            worst = worst.max(uv - w_at(ell)?);
        }
    }

    if let Some(lip) = lip {
        let (uv, _, _) = u_value_with_slack(vp, x, lip + ell, cfg)?;
        worst = worst.max(uv - w_at(ell)?);
        // The two lower bounds on u need certified values: a grid lower
        // estimate cannot refute them.
        let (u0v, u0slack, u0cert) = u_value_with_slack(vp, x, 0.0, cfg)?;
        if u0cert {
            worst = worst.max(w_at(lip)? - (u0v + u0slack));
        }
        let (ulv, ulslack, ulcert) = u_value_with_slack(vp, x, ell, cfg)?;
        if ulcert {
            worst = worst.max(w_at(lip + ell)? - (ulv + ulslack));
        }
    }
    Ok(worst.max(0.0))
}

/// Worst positive violation of `m_r <= m_ell <= (r/ell) m_r` for `r >= ell`.
pub fn check_inner_scaling(
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    r: f64,
    kind: MeritKind,
    cfg: &DualSolveConfig,
) -> Result<f64, VerifyError> {
    if !(r >= ell && ell > 0.0) {
        return Err(VerifyError::InvalidInput(
            "inner scaling needs r >= ell > 0".to_string(),
        ));
    }
    let eval = |l: f64| -> Result<f64, VerifyError> {
        Ok(match kind {
            MeritKind::WEll => eval_w_ell(p, x, l, cfg)?.value,
            MeritKind::UEll => eval_u_ell(p, x, l, cfg)?.value,
            MeritKind::U0 => {
                return Err(VerifyError::InvalidInput(
                    "inner scaling applies to the regularized merits".to_string(),
                ))
            }
        })
    };
    let vr = eval(r)?;
    let vl = eval(ell)?;
    Ok((vr - vl).max(vl - r / ell * vr).max(0.0))
}

/// Observation row of a level-boundedness probe.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub alpha: f64,
    /// Largest probed radius at which a sublevel point was found.
    pub largest_sublevel_radius: Option<f64>,
    pub sublevel_at_outermost: bool,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub kind: MeritKind,
    pub ell: f64,
    pub radii: Vec<f64>,
    pub rows: Vec<ProbeRow>,
}

fn probe_directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for j in 0..n {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[j] = s;
            dirs.push(d);
        }
    }
    if n > 1 {
        for mask in 0..(1usize << n) {
            let d: Vec<f64> = (0..n)
                .map(|j| if mask >> j & 1 == 1 { 1.0 } else { -1.0 })
                .collect();
            let nd = norm(&d);
            dirs.push(d.iter().map(|v| v / nd).collect());
        }
    }
    dirs
}

/// Sample merit values on growing radius rings and report where sublevel
/// points persist. A sampler can exhibit unboundedness of a sublevel set but
/// never prove boundedness; the report states observed escape radii only.
pub fn probe_level_boundedness(
    p: &MultiobjectiveProblem,
    kind: MeritKind,
    ell: f64,
    thresholds: &[f64],
    radii: &[f64],
    cfg: &DualSolveConfig,
) -> Result<ProbeReport, VerifyError> {
    if radii.is_empty() || thresholds.is_empty() {
        return Err(VerifyError::InvalidInput(
            "probe needs nonempty threshold and radius grids".to_string(),
        ));
    }
    let dirs = probe_directions(p.dimension());
    let outermost = *radii.last().unwrap();
    let mut rows = Vec::new();
    for &alpha in thresholds {
        let mut largest: Option<f64> = None;
        let mut at_outermost = false;
        for &radius in radii {
            let mut found = false;
            for d in &dirs {
                let x = p
                    .feasible_set()
                    .project(&d.iter().map(|v| v * radius).collect::<Vec<_>>());
                if norm(&x) < 0.5 * radius {
                    // The set does not reach this ring in this direction.
                    continue;
                }
                let value = match kind {
                    MeritKind::U0 => eval_u0(p, &x, cfg)?.value,
                    MeritKind::UEll => eval_u_ell(p, &x, ell, cfg)?.value,
                    MeritKind::WEll => eval_w_ell(p, &x, ell, cfg)?.value,
                };
                if value <= alpha {
                    found = true;
                    break;
                }
            }
            if found {
                largest = Some(radius);
                if radius == outermost {
                    at_outermost = true;
                }
            }
        }
        rows.push(ProbeRow {
            alpha,
            largest_sublevel_radius: largest,
            sublevel_at_outermost: at_outermost,
        });
    }
    Ok(ProbeReport {
        kind,
        ell,
        radii: radii.to_vec(),
        rows,
    })
}

/// Positive violation of the squared-distance error bound for the requested
/// merit kind at a point with a catalogued Pareto set.
pub fn check_error_bound(
    vp: &VerifiedProblem<'_>,
    x: &[f64],
    kind: MeritKind,
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<f64, VerifyError> {
    let p = vp.problem;
    let pareto = vp
        .known
        .and_then(|k| k.pareto_set.as_ref())
        .ok_or(VerifyError::DistanceOracleMissing)?;
    let meta = p.metadata();
    let sigma = meta
        .min_sigma()
        .ok_or_else(|| VerifyError::MetadataMissing("sigma required per objective".to_string()))?;
    let d2 = pareto.distance(x).powi(2);
    let violation = match kind {
        MeritKind::WEll => {
            // rho_i = sigma_i + mu_i, or sigma_i - L_i when only the
            // Lipschitz constant is declared; both must stay positive.
            let rho = {
                let mu_rho = meta.min_mu().map(|_| {
                    meta.objectives
                        .iter()
                        .map(|o| o.sigma.unwrap() + o.mu.unwrap())
                        .fold(f64::INFINITY, f64::min)
                });
                let lip_rho = meta.max_lip().map(|_| {
                    meta.objectives
                        .iter()
                        .map(|o| o.sigma.unwrap() - o.lip.unwrap())
                        .fold(f64::INFINITY, f64::min)
                });
                match (mu_rho, lip_rho) {
                    (Some(r), _) if r > 0.0 => r,
                    (_, Some(r)) if r > 0.0 => r,
                    _ => {
                        return Err(VerifyError::MetadataMissing(
                            "no positive rho from sigma+mu or sigma-lip".to_string(),
                        ))
                    }
                }
            };
            let kappa = if ell < rho / 2.0 {
                (rho - ell) / 2.0
            } else {
                rho * rho / (8.0 * ell)
            };
            kappa * d2 - eval_w_ell(p, x, ell, cfg)?.value
        }
        MeritKind::UEll => {
            let upsilon = if ell < sigma / 2.0 {
                (sigma - ell) / 2.0
            } else {
                sigma * sigma / (8.0 * ell)
            };
            upsilon * d2 - eval_u_ell(p, x, ell, cfg)?.value
        }
        MeritKind::U0 => sigma / 2.0 * d2 - eval_u0(p, x, cfg)?.value,
    };
    Ok(violation.max(0.0))
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

struct LoadedProblem {
    label: String,
    problem: MultiobjectiveProblem,
    known: KnownSolutions,
}

fn load_plan(plan: &SamplePlan) -> Result<Vec<LoadedProblem>, VerifyError> {
    plan.problems
        .iter()
        .map(|r| {
            let (label, spec) = r.load()?;
            let problem = spec.build()?;
            Ok(LoadedProblem {
                label,
                problem,
                known: spec.known.clone().unwrap_or_default(),
            })
        })
        .collect()
}

fn merit_value(
    kind: MeritKind,
    p: &MultiobjectiveProblem,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<MeritEvaluation, MeritError> {
    match kind {
        MeritKind::U0 => eval_u0(p, x, cfg),
        MeritKind::UEll => eval_u_ell(p, x, ell, cfg),
        MeritKind::WEll => eval_w_ell(p, x, ell, cfg),
    }
}

/// Whether a merit kind is evaluable on this problem at all.
fn kind_supported(kind: MeritKind, p: &MultiobjectiveProblem) -> bool {
    match kind {
        MeritKind::U0 => u0_route_available(p),
        MeritKind::UEll => p.metadata().all_objectives_convex(),
        MeritKind::WEll => true,
    }
}

fn witness(label: &str, x: &[f64], ell: f64, r: Option<f64>, detail: String) -> Witness {
    Witness {
        problem: label.to_string(),
        x: x.to_vec(),
        ell,
        r,
        detail,
    }
}

fn run_check(check: &TheoremCheck, cfg: &DualSolveConfig) -> CheckOutcome {
    match try_run_check(check, cfg) {
        Ok(outcome) => outcome,
        Err(e) => CheckOutcome {
            id: check.id,
            pass: false,
            worst_violation: f64::INFINITY,
            tolerance: check.tolerance,
            samples: 0,
            witness: Some(Witness {
                problem: String::new(),
                x: vec![],
                ell: 0.0,
                r: None,
                detail: format!("check aborted: {e}"),
            }),
        },
    }
}

fn try_run_check(check: &TheoremCheck, cfg: &DualSolveConfig) -> Result<CheckOutcome, VerifyError> {
    let plan = &check.plan;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let problems = load_plan(plan)?;
    let eps = cfg.epsilon_eval();
    let mut tracker = Tracker::new();

    match check.id {
        CheckId::NonnegU0 | CheckId::NonnegUEll | CheckId::NonnegWEll => {
            let kind = match check.id {
                CheckId::NonnegU0 => MeritKind::U0,
                CheckId::NonnegUEll => MeritKind::UEll,
                _ => MeritKind::WEll,
            };
            for lp in &problems {
                if !kind_supported(kind, &lp.problem) {
                    continue;
                }
                let pts = sample_points(&lp.problem, Some(&lp.known), plan.points, &mut rng);
                let ells: &[f64] = if kind == MeritKind::U0 {
                    &[0.0]
                } else {
                    &plan.ell_grid
                };
                for x in &pts {
                    for &ell in ells {
                        let ev = merit_value(kind, &lp.problem, x, ell, cfg)?;
                        tracker.observe((-ev.value).max(0.0), || {
                            witness(&lp.label, x, ell, None, format!("value {}", ev.value))
                        });
                    }
                }
            }
        }
        CheckId::IffWeakParetoU0 | CheckId::IffWeakParetoUEll | CheckId::IffStationaryWEll => {
            let kind = match check.id {
                CheckId::IffWeakParetoU0 => MeritKind::U0,
                CheckId::IffWeakParetoUEll => MeritKind::UEll,
                _ => MeritKind::WEll,
            };
            for lp in &problems {
                if !kind_supported(kind, &lp.problem) {
                    continue;
                }
                let solutions = if kind == MeritKind::WEll {
                    &lp.known.stationary_points
                } else {
                    &lp.known.weak_pareto_points
                };
                let ells: &[f64] = if kind == MeritKind::U0 {
                    &[0.0]
                } else {
                    &plan.ell_grid
                };
                for &ell in ells {
                    for x in solutions {
                        let ev = merit_value(kind, &lp.problem, x, ell, cfg)?;
                        tracker.observe(ev.value.max(0.0), || {
                            witness(
                                &lp.label,
                                x,
                                ell,
                                None,
                                format!("merit {} at catalogued solution", ev.value),
                            )
                        });
                    }
                    for x in &lp.known.non_solution_points {
                        let ev = merit_value(kind, &lp.problem, x, ell, cfg)?;
                        tracker.observe((10.0 * eps - ev.value).max(0.0), || {
                            witness(
                                &lp.label,
                                x,
                                ell,
                                None,
                                format!("merit {} at catalogued non-solution", ev.value),
                            )
                        });
                    }
                }
            }
        }
        CheckId::BetweenConvex | CheckId::BetweenLipschitz => {
            for lp in &problems {
                let meta = lp.problem.metadata();
                let applicable = match check.id {
                    CheckId::BetweenConvex => meta.min_mu().is_some(),
                    _ => meta.max_lip().is_some(),
                };
                // The u-side needs either the dual route or a grid window.
                let u_evaluable = meta.all_objectives_convex()
                    || (lp.problem.dimension() <= 3
                        && lp.problem.feasible_set().bounding_box().is_some());
                if !applicable || !u_evaluable {
                    continue;
                }
                let vp = VerifiedProblem {
                    problem: &lp.problem,
                    known: Some(&lp.known),
                };
                let pts = sample_points(&lp.problem, Some(&lp.known), plan.points, &mut rng);
                for x in &pts {
                    for &ell in &plan.ell_grid {
                        let v = check_between(&vp, x, ell, cfg)?;
                        tracker.observe(v, || {
                            witness(&lp.label, x, ell, None, "sandwich violation".to_string())
                        });
                    }
                }
            }
        }
        CheckId::InnerScalingW | CheckId::InnerScalingU => {
            let kind = if check.id == CheckId::InnerScalingW {
                MeritKind::WEll
            } else {
                MeritKind::UEll
            };
            for lp in &problems {
                if kind == MeritKind::UEll && !lp.problem.metadata().all_objectives_convex() {
                    continue;
                }
                let pts = sample_points(&lp.problem, Some(&lp.known), plan.points, &mut rng);
                for x in &pts {
                    for &ell in &plan.ell_grid {
                        let factor: f64 = rng.random_range(1.0..6.0);
                        let r = ell * factor;
                        let v = check_inner_scaling(&lp.problem, x, ell, r, kind, cfg)?;
                        tracker.observe(v, || {
                            witness(&lp.label, x, ell, Some(r), "scaling violation".to_string())
                        });
                    }
                }
            }
        }
        CheckId::LevelBoundedProbe => {
            for lp in &problems {
                let Some(expect_bounded) = lp.known.merit_level_bounded else {
                    continue;
                };
                if !u0_route_available(&lp.problem) {
                    continue;
                }
                // Unregularized merit where a route exists, as in the
                // counterexample; regularized for the bounded expectation on
                // composite problems.
                let kind = MeritKind::U0;
                let radii = [2.0, 4.0, 8.0, 16.0, 32.0];
                let report = probe_level_boundedness(
                    &lp.problem,
                    kind,
                    1.0,
                    &[0.5, 2.0],
                    &radii,
                    cfg,
                )?;
                for row in &report.rows {
                    let broken = if expect_bounded {
                        row.sublevel_at_outermost
                    } else {
                        !row.sublevel_at_outermost
                    };
                    tracker.observe(if broken { 1.0 } else { 0.0 }, || {
                        witness(
                            &lp.label,
                            &[],
                            row.alpha,
                            None,
                            format!(
                                "largest sublevel radius {:?}, expected level-bounded: {}",
                                row.largest_sublevel_radius, expect_bounded
                            ),
                        )
                    });
                }
            }
        }
        CheckId::ErrorBoundW | CheckId::ErrorBoundU | CheckId::ErrorBoundU0 => {
            let kind = match check.id {
                CheckId::ErrorBoundW => MeritKind::WEll,
                CheckId::ErrorBoundU => MeritKind::UEll,
                _ => MeritKind::U0,
            };
            for lp in &problems {
                if lp.known.pareto_set.is_none() || !kind_supported(kind, &lp.problem) {
                    continue;
                }
                let vp = VerifiedProblem {
                    problem: &lp.problem,
                    known: Some(&lp.known),
                };
                let pts = sample_points(&lp.problem, Some(&lp.known), plan.points, &mut rng);
                let ells: &[f64] = if kind == MeritKind::U0 {
                    &[0.0]
                } else {
                    &plan.ell_grid
                };
                'points: for x in &pts {
                    for &ell in ells {
                        let v = match check_error_bound(&vp, x, kind, ell, cfg) {
                            Ok(v) => v,
                            // Problems without the needed constants are out
                            // of this check's scope, not failures.
                            Err(VerifyError::MetadataMissing(_)) => break 'points,
                            Err(e) => return Err(e),
                        };
                        tracker.observe(v, || {
                            witness(&lp.label, x, ell, None, "error bound violation".to_string())
                        });
                    }
                }
            }
        }
        CheckId::GradEnvelope => {
            for dim in [1usize, 2] {
                for (name, g) in catalog(dim) {
                    for _ in 0..plan.points {
                        let x: Vec<f64> =
                            (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
                        let e0 = moreau_envelope(g.as_ref(), &x, 1.0)?;
                        let residual: Vec<f64> = x
                            .iter()
                            .zip(&e0.minimizer)
                            .map(|(xi, mi)| xi - mi)
                            .collect();
                        let mut worst = 0.0f64;
                        for j in 0..dim {
                            let h = 1e-6 * (1.0 + x[j].abs());
                            let mut xp = x.clone();
                            xp[j] = x[j] + h;
                            let ep = moreau_envelope(g.as_ref(), &xp, 1.0)?.value;
                            xp[j] = x[j] - h;
                            let em = moreau_envelope(g.as_ref(), &xp, 1.0)?.value;
                            let fd = (ep - em) / (2.0 * h);
                            worst = worst.max((fd - residual[j]).abs());
                        }
                        let scale = 1.0 + norm(&residual);
                        tracker.observe(worst / scale, || {
                            witness(&name, &x, 1.0, None, "envelope gradient mismatch".into())
                        });
                    }
                }
            }
        }
        CheckId::SecondProx => {
            for dim in [1usize, 2] {
                for (name, g) in catalog(dim) {
                    for _ in 0..plan.points {
                        let x: Vec<f64> =
                            (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
                        let p1 = g.prox(&x, 1.0);
                        let lhs = crate::linalg::dist_sq(&x, &p1);
                        let rhs = g.eval(&x) - g.eval(&p1);
                        tracker.observe((lhs - rhs).max(0.0), || {
                            witness(&name, &x, 1.0, None, "second-prox violation".into())
                        });
                    }
                }
            }
        }
        CheckId::RemarkWEqualsU => {
            for lp in &problems {
                if !lp.problem.metadata().all_objectives_convex() {
                    continue;
                }
                let zero_smooth = {
                    let pts = sample_points(&lp.problem, Some(&lp.known), 3, &mut rng);
                    pts.iter().all(|x| {
                        lp.problem
                            .smooth_gradients(x)
                            .iter()
                            .all(|g| norm(g) == 0.0)
                    })
                };
                if !zero_smooth {
                    continue;
                }
                let pts = sample_points(&lp.problem, Some(&lp.known), plan.points, &mut rng);
                for x in &pts {
                    for &ell in &plan.ell_grid {
                        let u = eval_u_ell(&lp.problem, x, ell, cfg)?.value;
                        let w = eval_w_ell(&lp.problem, x, ell, cfg)?.value;
                        tracker.observe((u - w).abs(), || {
                            witness(&lp.label, x, ell, None, format!("u={u} w={w}"))
                        });
                    }
                }
            }
        }
    }
    Ok(tracker.finish(check.id, check.tolerance))
}

/// Run a suite; failures become report rows, never errors.
pub fn run_all(suite: &[TheoremCheck], cfg: &DualSolveConfig) -> VerificationReport {
    VerificationReport {
        outcomes: suite.iter().map(|c| run_check(c, cfg)).collect(),
    }
}

/// The default suite covering every checked property over the built-in zoo.
pub fn default_suite(seed: u64, cfg: &DualSolveConfig) -> Vec<TheoremCheck> {
    let eps = cfg.epsilon_eval();
    let tol = 10.0 * eps;
    let b = ProblemRef::Builtin;
    let random2 = |s: u64| ProblemRef::RandomQuadratic {
        seed: s,
        n: 2,
        m: 2,
        sigma_range: (0.8, 4.0),
    };
    let plan = |problems: Vec<ProblemRef>, points: usize, ell_grid: Vec<f64>, salt: u64| {
        SamplePlan {
            problems,
            points,
            ell_grid,
            seed: seed.wrapping_add(salt),
        }
    };
    let convex_zoo = || {
        vec![
            b("paper-abs"),
            b("quadpair-1d"),
            b("quadpair-2d"),
            b("box-quad-2d"),
            b("ball-quad-2d"),
            b("abs-quad-1d"),
            b("l1pair-2d"),
            b("shared-l1-2d"),
            b("l1mix-2d"),
        ]
    };
    let u0_zoo = || {
        vec![
            b("paper-abs"),
            b("paper-levelbound"),
            b("quadpair-1d"),
            b("quadpair-2d"),
            b("box-quad-2d"),
            b("ball-quad-2d"),
        ]
    };
    let eb_zoo = || {
        vec![
            b("quadpair-1d"),
            b("quadpair-2d"),
            b("box-quad-2d"),
            b("ball-quad-2d"),
            b("abs-quad-1d"),
        ]
    };

    vec![
        TheoremCheck {
            id: CheckId::NonnegU0,
            plan: plan(u0_zoo(), 10, vec![], 1),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffWeakParetoU0,
            plan: plan(u0_zoo(), 0, vec![], 2),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::NonnegUEll,
            plan: plan(convex_zoo(), 8, vec![0.5, 1.0, 2.0], 3),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffWeakParetoUEll,
            plan: plan(convex_zoo(), 0, vec![1.0], 4),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::NonnegWEll,
            plan: plan(
                {
                    let mut v = convex_zoo();
                    v.push(b("paper-negsq"));
                    v.push(b("paper-levelbound"));
                    v
                },
                8,
                vec![0.5, 1.0, 2.0],
                5,
            ),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffStationaryWEll,
            plan: plan(
                vec![
                    b("paper-negsq"),
                    b("paper-abs"),
                    b("abs-quad-1d"),
                    b("quadpair-1d"),
                    b("l1mix-2d"),
                ],
                0,
                vec![0.5, 1.0],
                6,
            ),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::BetweenConvex,
            plan: plan(
                vec![
                    b("quadpair-1d"),
                    b("quadpair-2d"),
                    b("abs-quad-1d"),
                    b("paper-negsq"),
                    random2(seed.wrapping_add(101)),
                    random2(seed.wrapping_add(102)),
                ],
                5,
                vec![0.5, 1.5],
                7,
            ),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::BetweenLipschitz,
            plan: plan(
                vec![
                    b("quadpair-1d"),
                    b("quadpair-2d"),
                    b("paper-negsq"),
                    random2(seed.wrapping_add(103)),
                    random2(seed.wrapping_add(104)),
                ],
                5,
                vec![3.0, 5.0],
                8,
            ),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::InnerScalingW,
            plan: plan(
                {
                    let mut v = convex_zoo();
                    v.push(b("paper-negsq"));
                    v
                },
                5,
                vec![0.5, 1.0, 2.0],
                9,
            ),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::InnerScalingU,
            plan: plan(convex_zoo(), 5, vec![0.5, 1.0, 2.0], 10),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::LevelBoundedProbe,
            plan: plan(
                vec![b("paper-levelbound"), b("quadpair-1d"), b("quadpair-2d")],
                0,
                vec![],
                11,
            ),
            tolerance: 0.5,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundW,
            plan: plan(eb_zoo(), 8, vec![0.5, 1.0, 4.0], 12),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundU,
            plan: plan(eb_zoo(), 8, vec![0.5, 1.0, 4.0], 13),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundU0,
            plan: plan(eb_zoo(), 8, vec![], 14),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::GradEnvelope,
            plan: plan(vec![], 40, vec![], 15),
            tolerance: 1e-5,
        },
        TheoremCheck {
            id: CheckId::SecondProx,
            plan: plan(vec![], 60, vec![], 16),
            tolerance: 1e-9,
        },
        TheoremCheck {
            id: CheckId::RemarkWEqualsU,
            plan: plan(vec![b("paper-abs"), b("l1mix-2d")], 12, vec![0.5, 1.0, 2.0], 17),
            tolerance: 2.0 * eps,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DualSolveConfig {
        DualSolveConfig::default()
    }

    fn vp<'a>(
        p: &'a MultiobjectiveProblem,
        known: &'a KnownSolutions,
    ) -> VerifiedProblem<'a> {
        VerifiedProblem {
            problem: p,
            known: Some(known),
        }
    }

    #[test]
    fn between_trivial_when_smooth_parts_vanish() {
        let entry = zoo::builtin("paper-abs").unwrap();
        let p = entry.problem();
        let known = entry.known();
        let v = check_between(&vp(&p, &known), &[0.7], 1.0, &cfg()).unwrap();
        assert!(v <= 10.0 * cfg().epsilon_eval(), "violation {v}");
    }

    #[test]
    fn between_holds_on_strongly_convex_quadratics() {
        let entry = zoo::builtin("quadpair-1d").unwrap();
        let p = entry.problem();
        let known = entry.known();
        for &x in &[-1.8, 0.3, 2.2] {
            let v = check_between(&vp(&p, &known), &[x], 1.0, &cfg()).unwrap();
            assert!(v <= 10.0 * cfg().epsilon_eval(), "violation {v} at {x}");
        }
    }

    #[test]
    fn between_missing_metadata_errors() {
        let spec = zoo::random_quadratic_family(1, 1, 1, (1.0, 1.0));
        let mut spec = spec;
        spec.objectives[0].metadata.mu = None;
        spec.objectives[0].metadata.lip = None;
        let p = spec.build().unwrap();
        let known = KnownSolutions::default();
        assert!(matches!(
            check_between(&vp(&p, &known), &[0.5], 1.0, &cfg()),
            Err(VerifyError::MetadataMissing(_))
        ));
    }

    #[test]
    fn scaling_equal_parameters_zero_violation() {
        let p = zoo::builtin("paper-abs").unwrap().problem();
        let v = check_inner_scaling(&p, &[0.5], 1.0, 1.0, MeritKind::UEll, &cfg()).unwrap();
        assert!(v <= 1e-12);
    }

    #[test]
    fn scaling_known_values_on_abs_objective() {
        // u_1(0.5) = 0.375 and u_2(0.5) = 0.25: the chain
        // u_2 <= u_1 <= 2 u_2 holds strictly here.
        let p = zoo::builtin("paper-abs").unwrap().problem();
        let u1 = eval_u_ell(&p, &[0.5], 1.0, &cfg()).unwrap().value;
        let u2 = eval_u_ell(&p, &[0.5], 2.0, &cfg()).unwrap().value;
        assert!((u1 - 0.375).abs() < 1e-9);
        assert!((u2 - 0.25).abs() < 1e-9);
        let v = check_inner_scaling(&p, &[0.5], 1.0, 2.0, MeritKind::UEll, &cfg()).unwrap();
        assert!(v <= 1e-9);
    }

    #[test]
    fn probe_finds_persistent_sublevels_on_counterexample() {
        let p = zoo::builtin("paper-levelbound").unwrap().problem();
        let report =
            probe_level_boundedness(&p, MeritKind::U0, 1.0, &[0.5], &[1.0, 2.0], &cfg()).unwrap();
        assert!(report.rows[0].sublevel_at_outermost);
    }

    #[test]
    fn probe_finds_escape_radius_on_bounded_problem() {
        let p = zoo::builtin("quadpair-1d").unwrap().problem();
        let report = probe_level_boundedness(
            &p,
            MeritKind::U0,
            1.0,
            &[0.5, 2.0],
            &[2.0, 8.0, 32.0],
            &cfg(),
        )
        .unwrap();
        for row in &report.rows {
            assert!(!row.sublevel_at_outermost, "alpha {}", row.alpha);
        }
    }

    #[test]
    fn error_bound_zero_at_solutions() {
        let entry = zoo::builtin("quadpair-1d").unwrap();
        let p = entry.problem();
        let known = entry.known();
        let v = check_error_bound(&vp(&p, &known), &[0.4], MeritKind::WEll, 1.0, &cfg()).unwrap();
        assert!(v <= 1e-9);
    }

    #[test]
    fn error_bound_both_branches_hold_outside() {
        let entry = zoo::builtin("quadpair-1d").unwrap();
        let p = entry.problem();
        let known = entry.known();
        // rho = 4: ell = 1 exercises (rho-ell)/2, ell = 4 exercises rho^2/8ell.
        for &(ell, kappa) in &[(1.0, 1.5), (4.0, 0.5)] {
            let x = 2.5;
            let d2 = (x - 1.0f64).powi(2);
            let w = eval_w_ell(&p, &[x], ell, &cfg()).unwrap().value;
            assert!(w >= kappa * d2 - 1e-7, "ell={ell}: {w} vs {}", kappa * d2);
            let v =
                check_error_bound(&vp(&p, &known), &[x], MeritKind::WEll, ell, &cfg()).unwrap();
            assert!(v <= 10.0 * cfg().epsilon_eval());
        }
    }

    #[test]
    fn error_bound_requires_distance_oracle() {
        let p = zoo::builtin("l1pair-2d").unwrap().problem();
        let known = KnownSolutions::default();
        assert!(matches!(
            check_error_bound(&vp(&p, &known), &[1.0, 1.0], MeritKind::WEll, 1.0, &cfg()),
            Err(VerifyError::DistanceOracleMissing)
        ));
    }

    #[test]
    fn empty_suite_gives_empty_report() {
        let report = run_all(&[], &cfg());
        assert!(report.outcomes.is_empty());
        assert!(report.all_pass());
    }

    #[test]
    fn corrupted_metadata_fails_with_witness() {
        // Understate the Lipschitz constant: the sandwich inequalities then
        // compare against the wrong scale and must fail.
        let mut spec = zoo::builtin("quadpair-1d").unwrap().spec;
        for obj in &mut spec.objectives {
            obj.metadata.lip = Some(0.5);
            obj.metadata.mu = None;
        }
        let p = spec.build().unwrap();
        let known = spec.known.clone().unwrap();
        let mut worst = 0.0f64;
        for &x in &[1.8, 2.2, -2.0] {
            worst = worst
                .max(check_between(&vp(&p, &known), &[x], 1.0, &cfg()).unwrap());
        }
        assert!(worst > 10.0 * cfg().epsilon_eval(), "violation {worst}");
    }

    #[test]
    fn check_ids_are_unique_and_parse() {
        for id in CheckId::ALL {
            assert_eq!(CheckId::parse(id.name()), Some(id));
            assert!(!id.citation().is_empty());
        }
    }

    #[test]
    fn report_rendering_is_deterministic() {
        let suite = vec![TheoremCheck {
            id: CheckId::SecondProx,
            plan: SamplePlan {
                problems: vec![],
                points: 10,
                ell_grid: vec![],
                seed: 5,
            },
            tolerance: 1e-9,
        }];
        let a = run_all(&suite, &cfg());
        let b = run_all(&suite, &cfg());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.render_text(), b.render_text());
    }
}

// Negated comparisons like `!(x > 0.0)` are load-bearing: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Python bindings: problems from the zoo or spec documents, merit
//! evaluation, and the verification suite.
//!
//! Build the extension with `cargo build -p momerit-py --release`; the
//! resulting `libmomerit.so` imports as the `momerit` module once renamed to
//! `momerit.so` (python/smoke.py does this automatically).

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use momerit_core::merit::{
    directional_derivative_u_ell, directional_derivative_w_ell, eval_u0, eval_u_ell, eval_w_ell,
    DualSolveConfig, EvalRoute, MeritEvaluation, MeritKind,
};
use momerit_core::problem::{validate_problem, MultiobjectiveProblem};
use momerit_core::verify;
use momerit_core::zoo::{self, KnownSolutions};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// One merit evaluation: value, dual weights, maximizer, and solve quality.
#[pyclass(frozen)]
struct MeritResult {
    #[pyo3(get)]
    kind: String,
    #[pyo3(get)]
    ell: f64,
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    fw_gap: f64,
    #[pyo3(get)]
    maximizer: Vec<f64>,
    #[pyo3(get)]
    dual_weights: Vec<f64>,
    #[pyo3(get)]
    route: String,
}

impl MeritResult {
    fn from_eval(ev: MeritEvaluation) -> Self {
        MeritResult {
            kind: ev.kind.as_str().to_string(),
            ell: ev.ell,
            value: ev.value,
            fw_gap: ev.fw_gap,
            maximizer: ev.maximizer,
            dual_weights: ev.dual_weights.as_slice().to_vec(),
            route: match ev.inner_diagnostics.route {
                EvalRoute::Dual => "dual".to_string(),
                EvalRoute::Grid { .. } => "grid".to_string(),
            },
        }
    }
}

#[pymethods]
impl MeritResult {
    fn __repr__(&self) -> String {
        format!(
            "MeritResult(kind='{}', ell={}, value={}, fw_gap={})",
            self.kind, self.ell, self.value, self.fw_gap
        )
    }
}

/// A multiobjective problem instance with oracle-backed objectives.
#[pyclass(frozen)]
struct Problem {
    inner: Arc<MultiobjectiveProblem>,
    known: KnownSolutions,
    label: String,
}

impl Problem {
    fn config(gap_tol: Option<f64>, inner_tol: Option<f64>) -> PyResult<DualSolveConfig> {
        let mut cfg = DualSolveConfig::default();
        if let Some(g) = gap_tol {
            if !(g > 0.0) {
                return Err(value_err("gap_tol must be positive"));
            }
            cfg.gap_tol = g;
        }
        if let Some(t) = inner_tol {
            if !(t > 0.0) {
                return Err(value_err("inner_tol must be positive"));
            }
            cfg.inner.tol = t;
        }
        Ok(cfg)
    }

    fn eval_kind(
        &self,
        kind: MeritKind,
        x: Vec<f64>,
        ell: f64,
        gap_tol: Option<f64>,
        inner_tol: Option<f64>,
    ) -> PyResult<MeritResult> {
        let cfg = Self::config(gap_tol, inner_tol)?;
        let ev = match kind {
            MeritKind::U0 => eval_u0(&self.inner, &x, &cfg),
            MeritKind::UEll => eval_u_ell(&self.inner, &x, ell, &cfg),
            MeritKind::WEll => eval_w_ell(&self.inner, &x, ell, &cfg),
        }
        .map_err(runtime_err)?;
        Ok(MeritResult::from_eval(ev))
    }
}

#[pymethods]
impl Problem {
    /// Load a built-in problem by id.
    #[staticmethod]
    fn builtin(id: &str) -> PyResult<Problem> {
        let entry = zoo::builtin(id).map_err(value_err)?;
        let problem = entry.spec.build().map_err(value_err)?;
        Ok(Problem {
            inner: Arc::new(problem),
            known: entry.known(),
            label: entry.id,
        })
    }

    /// Build a problem from a spec JSON document.
    #[staticmethod]
    fn from_spec_json(text: &str) -> PyResult<Problem> {
        let spec = zoo::parse_spec(text).map_err(value_err)?;
        spec.validate().map_err(value_err)?;
        let problem = spec.build().map_err(value_err)?;
        Ok(Problem {
            inner: Arc::new(problem),
            known: spec.known.unwrap_or_default(),
            label: "spec".to_string(),
        })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn objective_count(&self) -> usize {
        self.inner.objective_count()
    }

    #[getter]
    fn label(&self) -> String {
        self.label.clone()
    }

    /// Objective values F_i(x) for all i.
    fn objective_values(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        if x.len() != self.inner.dimension() {
            return Err(value_err("point has the wrong dimension"));
        }
        Ok(self.inner.objective_values(&x))
    }

    /// Unregularized merit u0 at x.
    #[pyo3(signature = (x, gap_tol=None, inner_tol=None))]
    fn u0(&self, x: Vec<f64>, gap_tol: Option<f64>, inner_tol: Option<f64>) -> PyResult<MeritResult> {
        self.eval_kind(MeritKind::U0, x, 0.0, gap_tol, inner_tol)
    }

    /// Regularized merit u_ell at x.
    #[pyo3(signature = (x, ell, gap_tol=None, inner_tol=None))]
    fn u_ell(
        &self,
        x: Vec<f64>,
        ell: f64,
        gap_tol: Option<f64>,
        inner_tol: Option<f64>,
    ) -> PyResult<MeritResult> {
        self.eval_kind(MeritKind::UEll, x, ell, gap_tol, inner_tol)
    }

    /// Regularized, partially linearized merit w_ell at x.
    #[pyo3(signature = (x, ell, gap_tol=None, inner_tol=None))]
    fn w_ell(
        &self,
        x: Vec<f64>,
        ell: f64,
        gap_tol: Option<f64>,
        inner_tol: Option<f64>,
    ) -> PyResult<MeritResult> {
        self.eval_kind(MeritKind::WEll, x, ell, gap_tol, inner_tol)
    }

    /// Stationarity certificate: w_ell itself, zero exactly at Pareto
    /// stationary points.
    fn stationarity_residual(&self, x: Vec<f64>, ell: f64) -> PyResult<f64> {
        Ok(self.w_ell(x, ell, None, None)?.value)
    }

    /// Directional derivative of u_ell or w_ell at x toward z.
    fn directional_derivative(
        &self,
        kind: &str,
        x: Vec<f64>,
        z: Vec<f64>,
        ell: f64,
    ) -> PyResult<f64> {
        let cfg = DualSolveConfig::default();
        match MeritKind::parse(kind) {
            Some(MeritKind::UEll) => {
                directional_derivative_u_ell(&self.inner, &x, &z, ell, &cfg).map_err(runtime_err)
            }
            Some(MeritKind::WEll) => {
                directional_derivative_w_ell(&self.inner, &x, &z, ell, &cfg).map_err(runtime_err)
            }
            _ => Err(value_err("kind must be 'u_ell' or 'w_ell'")),
        }
    }

    /// Spot-check every oracle invariant and declared convexity fact;
    /// returns the text report, raising on any inconsistency.
    #[pyo3(signature = (samples=200, seed=0))]
    fn validate(&self, samples: usize, seed: u64) -> PyResult<String> {
        match validate_problem(&self.inner, samples, seed) {
            Ok(report) => Ok(report.render_text()),
            Err(e) => Err(runtime_err(e)),
        }
    }

    /// Catalogued weakly Pareto optimal points, when known.
    #[getter]
    fn weak_pareto_points(&self) -> Vec<Vec<f64>> {
        self.known.weak_pareto_points.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(label='{}', dimension={}, objectives={})",
            self.label,
            self.inner.dimension(),
            self.inner.objective_count()
        )
    }
}

/// Ids of the built-in problems.
#[pyfunction]
fn builtin_ids() -> Vec<String> {
    zoo::builtin_ids().into_iter().map(String::from).collect()
}

/// Run the default verification suite; returns (all_pass, text_report,
/// csv_report).
#[pyfunction]
#[pyo3(signature = (seed=0))]
fn run_default_verification(seed: u64) -> (bool, String, String) {
    let cfg = DualSolveConfig::default();
    let suite = verify::default_suite(seed, &cfg);
    let report = verify::run_all(&suite, &cfg);
    (report.all_pass(), report.render_text(), report.to_csv())
}

#[pymodule]
fn momerit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<MeritResult>()?;
    m.add_function(wrap_pyfunction!(builtin_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_default_verification, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

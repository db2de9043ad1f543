// Negated comparisons like `!(x > 0.0)` are load-bearing: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Merit functions for multiobjective optimization.
//!
//! Composite problems `min_{x in S} (F_1(x), ..., F_m(x))` with
//! `F_i = f_i + g_i` (smooth plus convex) carry three scalar merit
//! functions: the plain sup-min gap `u0`, its quadratic regularization
//! `u_ell`, and the regularized, partially linearized `w_ell`. Each is zero
//! exactly on the corresponding solution set (weak Pareto optima for the
//! first two, Pareto stationary points for the third) and positive
//! elsewhere, so evaluating them scores candidate solutions and traces the
//! progress of external solvers.
//!
//! The crate evaluates the regularized merits through their m-dimensional
//! simplex-constrained convex duals (Frank-Wolfe over the weight simplex,
//! proximal solves inside), ships a zoo of problems with catalogued
//! solution sets, and mechanically samples every structural property of the
//! merit functions — nonnegativity, zero-iff-solution, scaling and sandwich
//! inequalities, level-boundedness probes, and squared-distance error
//! bounds — into a deterministic pass/fail report.

pub mod inner;
pub mod linalg;
pub mod merit;
pub mod problem;
pub mod prox;
pub mod verify;
pub mod zoo;

pub use merit::{
    directional_derivative_u_ell, directional_derivative_w_ell, eval_u0, eval_u_ell, eval_w_ell,
    pareto_stationarity_residual, DualSolveConfig, MeritEvaluation, MeritKind, SimplexWeights,
};
pub use problem::{
    validate_problem, ConvexOracle, ConvexityMetadata, FeasibleSet, MultiobjectiveProblem,
    Objective, SmoothOracle,
};
pub use verify::{default_suite, run_all, CheckId, VerificationReport};
pub use zoo::{builtin, builtin_ids, load_spec, ProblemSpec, ZooEntry};

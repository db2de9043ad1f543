//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (assertion failures mark the criterion failed).
//!
//! Criterion 12 (byte-identical verification reports from the command-line
//! front end) lives in the CLI crate's acceptance target; the report
//! determinism it relies on is exercised here as part of the run-all check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use momerit_core::inner::grid_oracle_maxmin;
use momerit_core::merit::{
    directional_derivative_u_ell, directional_derivative_w_ell, dual_point_u_ell,
    dual_point_w_ell, eval_u0, eval_u_ell, eval_w_ell, DualSolveConfig, EvalRoute, MeritKind,
    SimplexWeights,
};
use momerit_core::problem::MultiobjectiveProblem;
use momerit_core::verify::{default_suite, run_all};
use momerit_core::zoo::{self, builtin, KnownSolutions};

fn cfg() -> DualSolveConfig {
    DualSolveConfig::default()
}

/// Tightened budget for finite-difference comparisons.
fn tight_cfg() -> DualSolveConfig {
    let mut c = DualSolveConfig {
        gap_tol: 1e-10,
        ..DualSolveConfig::default()
    };
    c.inner.tol = 1e-12;
    c
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| a + (b - a) * k as f64 / (count - 1) as f64)
        .collect()
}

fn problem(id: &str) -> (MultiobjectiveProblem, KnownSolutions) {
    let entry = builtin(id).unwrap();
    (entry.problem(), entry.known())
}

fn sample_xs(p: &MultiobjectiveProblem, known: &KnownSolutions, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = known
        .sample_box
        .clone()
        .or_else(|| p.feasible_set().bounding_box())
        .unwrap();
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..p.dimension())
                .map(|j| rng.random_range(b.lo[j]..=b.hi[j]))
                .collect();
            p.feasible_set().project(&raw)
        })
        .collect()
}

#[test]
fn criterion_01_regularized_merit_closed_form_on_abs() {
    let (p, _) = problem("paper-abs");
    let mut worst = 0.0f64;
    for x in linspace(-2.0, 2.0, 41) {
        let v = eval_u_ell(&p, &[x], 1.0, &cfg()).unwrap().value;
        let expect = if x.abs() < 1.0 { x.abs() - x * x / 2.0 } else { 0.5 };
        worst = worst.max((v - expect).abs());
    }
    assert!(worst <= 1e-6, "worst |error| = {worst:e}");
    println!("ACCEPTANCE 1 PASS: u_1 closed form on |x| at 41 points, worst error {worst:e}");
}

#[test]
fn criterion_02_linearized_merit_zero_at_spurious_stationary_point() {
    let (p, _) = problem("paper-negsq");
    for &ell in &[0.5, 1.0, 2.0] {
        let w = eval_w_ell(&p, &[0.0], ell, &cfg()).unwrap().value;
        assert!(w.abs() <= 1e-8, "w_{ell}(0) = {w:e}");
    }
    let u0 = eval_u0(&p, &[0.0], &cfg()).unwrap();
    assert!(matches!(u0.inner_diagnostics.route, EvalRoute::Grid { .. }));
    assert!(u0.value >= 0.1, "u0(0) = {} should stay positive", u0.value);
    println!(
        "ACCEPTANCE 2 PASS: w_ell(0) = 0 for ell in {{0.5, 1, 2}} while u0(0) = {:.3} > 0.1",
        u0.value
    );
}

#[test]
fn criterion_03_unregularized_merit_vanishes_on_levelbound_pair() {
    let (p, _) = problem("paper-levelbound");
    let mut worst = 0.0f64;
    for x in linspace(-3.0, 3.0, 21) {
        let ev = eval_u0(&p, &[x], &cfg()).unwrap();
        let slack = match ev.inner_diagnostics.route {
            EvalRoute::Grid { slack, .. } => slack,
            EvalRoute::Dual => panic!("expected grid route"),
        };
        assert!(ev.value.abs() <= slack, "u0({x}) = {} (slack {slack})", ev.value);
        worst = worst.max(ev.value.abs());
    }
    println!("ACCEPTANCE 3 PASS: u0 = 0 within grid slack on the (x^2, 0) pair, worst {worst:e}");
}

#[test]
fn criterion_04_zero_iff_on_catalogued_sets() {
    let eps = cfg().epsilon_eval();
    let ids = ["quadpair-1d", "quadpair-2d", "box-quad-2d", "ball-quad-2d"];
    for id in ids {
        let (p, known) = problem(id);
        assert!(known.weak_pareto_points.len() >= 20, "{id} needs 20 solutions");
        assert!(
            known.non_solution_points.len() >= 20,
            "{id} needs 20 non-solutions"
        );
        for x in known.weak_pareto_points.iter().take(20) {
            for kind in [MeritKind::U0, MeritKind::UEll, MeritKind::WEll] {
                let v = match kind {
                    MeritKind::U0 => eval_u0(&p, x, &cfg()).unwrap().value,
                    MeritKind::UEll => eval_u_ell(&p, x, 1.0, &cfg()).unwrap().value,
                    MeritKind::WEll => eval_w_ell(&p, x, 1.0, &cfg()).unwrap().value,
                };
                assert!(
                    v <= eps,
                    "{id}: {} = {v:e} at solution {x:?}",
                    kind.as_str()
                );
            }
        }
        for x in known.non_solution_points.iter().take(20) {
            for kind in [MeritKind::U0, MeritKind::UEll, MeritKind::WEll] {
                let v = match kind {
                    MeritKind::U0 => eval_u0(&p, x, &cfg()).unwrap().value,
                    MeritKind::UEll => eval_u_ell(&p, x, 1.0, &cfg()).unwrap().value,
                    MeritKind::WEll => eval_w_ell(&p, x, 1.0, &cfg()).unwrap().value,
                };
                assert!(
                    v >= 10.0 * eps,
                    "{id}: {} = {v:e} at non-solution {x:?}",
                    kind.as_str()
                );
            }
        }
    }
    println!("ACCEPTANCE 4 PASS: zero-iff at 20+20 catalogued points on {} problems", ids.len());
}

#[test]
fn criterion_05_scaling_inequalities_over_random_draws() {
    let eps = 10.0 * cfg().epsilon_eval();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let w_ids = [
        "quadpair-1d",
        "quadpair-2d",
        "box-quad-2d",
        "abs-quad-1d",
        "shared-l1-2d",
        "l1mix-2d",
        "paper-abs",
        "paper-negsq",
    ];
    let mut worst_w = 0.0f64;
    for k in 0..100 {
        let id = w_ids[k % w_ids.len()];
        let (p, known) = problem(id);
        let x = sample_xs(&p, &known, 1, 1000 + k as u64).pop().unwrap();
        let ell = 10f64.powf(rng.random_range(-0.5..0.5));
        let r = ell * rng.random_range(1.0..5.0);
        let wr = eval_w_ell(&p, &x, r, &cfg()).unwrap().value;
        let wl = eval_w_ell(&p, &x, ell, &cfg()).unwrap().value;
        worst_w = worst_w.max(wr - wl).max(wl - r / ell * wr);
        assert!(wr <= wl + eps, "{id}: w_{r}({x:?}) > w_{ell}");
        assert!(wl <= r / ell * wr + eps, "{id}: w_{ell} > (r/ell) w_{r}");
    }
    let u_ids = &w_ids[..7];
    let mut worst_u = 0.0f64;
    for k in 0..100 {
        let id = u_ids[k % u_ids.len()];
        let (p, known) = problem(id);
        let x = sample_xs(&p, &known, 1, 2000 + k as u64).pop().unwrap();
        let ell = 10f64.powf(rng.random_range(-0.5..0.5));
        let r = ell * rng.random_range(1.0..5.0);
        let ur = eval_u_ell(&p, &x, r, &cfg()).unwrap().value;
        let ul = eval_u_ell(&p, &x, ell, &cfg()).unwrap().value;
        worst_u = worst_u.max(ur - ul).max(ul - r / ell * ur);
        assert!(ur <= ul + eps && ul <= r / ell * ur + eps, "{id} at {x:?}");
    }
    println!(
        "ACCEPTANCE 5 PASS: scaling chain over 100+100 draws, worst violations {worst_w:e} (w) {worst_u:e} (u)"
    );
}

#[test]
fn criterion_06_sandwich_inequalities_on_quadratic_families() {
    let eps = 10.0 * cfg().epsilon_eval();
    let ell = 1.0;
    let mut draws = 0;
    let mut worst = 0.0f64;
    for seed in 201..211 {
        let spec = zoo::random_quadratic_family(seed, 2, 2, (0.8, 4.0));
        let p = spec.build().unwrap();
        let meta = p.metadata();
        let mu = meta.min_mu().unwrap();
        let lip = meta.max_lip().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(7));
        for _ in 0..5 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-2.0..2.0)).collect();
            let u0 = eval_u0(&p, &x, &cfg()).unwrap().value;
            let ul = eval_u_ell(&p, &x, ell, &cfg()).unwrap().value;
            let w_mu = eval_w_ell(&p, &x, mu, &cfg()).unwrap().value;
            let w_mu_ell = eval_w_ell(&p, &x, mu + ell, &cfg()).unwrap().value;
            let w_ell = eval_w_ell(&p, &x, ell, &cfg()).unwrap().value;
            let w_lip = eval_w_ell(&p, &x, lip, &cfg()).unwrap().value;
            let w_lip_ell = eval_w_ell(&p, &x, lip + ell, &cfg()).unwrap().value;
            let u_lip_ell = eval_u_ell(&p, &x, lip + ell, &cfg()).unwrap().value;
            let checks = [
                ("u0 <= w_mu", u0 - w_mu),
                ("u_ell <= w_(mu+ell)", ul - w_mu_ell),
                ("u_(L+ell) <= w_ell", u_lip_ell - w_ell),
                ("u0 >= w_L", w_lip - u0),
                ("u_ell >= w_(L+ell)", w_lip_ell - ul),
            ];
            for (name, violation) in checks {
                worst = worst.max(violation);
                assert!(violation <= eps, "seed {seed}: {name} violated by {violation:e}");
            }
            draws += 1;
        }
    }
    assert_eq!(draws, 50);
    println!("ACCEPTANCE 6 PASS: five sandwich inequalities over 50 draws, worst violation {worst:e}");
}

#[test]
fn criterion_07_error_bounds_both_branches() {
    let eps = 10.0 * cfg().epsilon_eval();
    let mut worst = 0.0f64;
    for id in ["quadpair-1d", "quadpair-2d"] {
        let (p, known) = problem(id);
        let pareto = known.pareto_set.clone().unwrap();
        let sigma = p.metadata().min_sigma().unwrap();
        let rho = 2.0 * sigma; // sigma_i + mu_i with mu_i = sigma_i here.
        // 50 points per kappa branch.
        for (branch, ell) in [("small-ell", 1.0), ("large-ell", 4.0)] {
            let kappa = if ell < rho / 2.0 {
                (rho - ell) / 2.0
            } else {
                rho * rho / (8.0 * ell)
            };
            for x in sample_xs(&p, &known, 50, 0xE0 + ell as u64) {
                let d2 = pareto.distance(&x).powi(2);
                let w = eval_w_ell(&p, &x, ell, &cfg()).unwrap().value;
                let violation = kappa * d2 - w;
                worst = worst.max(violation);
                assert!(violation <= eps, "{id} {branch}: {violation:e} at {x:?}");
            }
        }
        // Regularized-merit analogue with upsilon(sigma), both branches.
        for ell in [0.5, 4.0] {
            let upsilon = if ell < sigma / 2.0 {
                (sigma - ell) / 2.0
            } else {
                sigma * sigma / (8.0 * ell)
            };
            for x in sample_xs(&p, &known, 50, 0xF0 + ell as u64) {
                let d2 = pareto.distance(&x).powi(2);
                let u = eval_u_ell(&p, &x, ell, &cfg()).unwrap().value;
                let violation = upsilon * d2 - u;
                worst = worst.max(violation);
                assert!(violation <= eps, "{id} upsilon ell={ell}: {violation:e}");
            }
        }
        // Unregularized analogue with sigma/2.
        for x in sample_xs(&p, &known, 50, 0xFA) {
            let d2 = pareto.distance(&x).powi(2);
            let u0 = eval_u0(&p, &x, &cfg()).unwrap().value;
            let violation = sigma / 2.0 * d2 - u0;
            worst = worst.max(violation);
            assert!(violation <= eps, "{id} u0 bound: {violation:e}");
        }
    }
    println!("ACCEPTANCE 7 PASS: squared-distance error bounds, both branches, worst violation {worst:e}");
}

#[test]
fn criterion_08_dual_gradients_match_finite_differences() {
    let cfg = tight_cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut worst = 0.0f64;
    for id in ["quadpair-1d", "quadpair-2d", "box-quad-2d", "ball-quad-2d"] {
        let (p, known) = problem(id);
        let m = p.objective_count();
        for x in sample_xs(&p, &known, 3, 88) {
            for _ in 0..3 {
                // Interior weights, random tangent direction e_i - e_j.
                let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
                let lambda = SimplexWeights::normalized(&raw).unwrap();
                let i = rng.random_range(0..m);
                let mut j = rng.random_range(0..m);
                if j == i {
                    j = (i + 1) % m;
                }
                let h = 1e-5;
                let shift = |s: f64| {
                    let mut v = lambda.as_slice().to_vec();
                    v[i] += s;
                    v[j] -= s;
                    SimplexWeights::new(v).unwrap()
                };
                for kind in [MeritKind::UEll, MeritKind::WEll] {
                    let point = |w: &SimplexWeights| match kind {
                        MeritKind::UEll => dual_point_u_ell(&p, &x, 1.0, w, &cfg.inner).unwrap(),
                        _ => dual_point_w_ell(&p, &x, 1.0, w, &cfg.inner).unwrap(),
                    };
                    let base = point(&lambda);
                    let analytic = base.grad[i] - base.grad[j];
                    let fd =
                        (point(&shift(h)).theta - point(&shift(-h)).theta) / (2.0 * h);
                    let err = (fd - analytic).abs() / (1.0 + analytic.abs());
                    worst = worst.max(err);
                    assert!(
                        err <= 1e-4,
                        "{id} {}: fd {fd} vs analytic {analytic}",
                        kind.as_str()
                    );
                }
            }
        }
    }
    println!("ACCEPTANCE 8 PASS: dual gradients match tangent finite differences, worst rel err {worst:e}");
}

#[test]
fn criterion_09_dual_route_matches_grid_reference() {
    let eps = 10.0 * cfg().epsilon_eval();
    let mut checked = 0;
    for id in zoo::builtin_ids() {
        let (p, known) = problem(id);
        if p.dimension() > 2 {
            continue;
        }
        let convex = p.metadata().all_objectives_convex();
        let strongly = p.metadata().all_strongly_convex();
        for x in sample_xs(&p, &known, 3, 0x91) {
            for ell in [0.7, 1.3] {
                let w = eval_w_ell(&p, &x, ell, &cfg()).unwrap().value;
                let g = grid_oracle_maxmin(&p, &x, ell, true, 0).unwrap();
                assert!(
                    (w - g.value).abs() <= g.slack + eps,
                    "{id}: w_{ell}({x:?}) = {w} vs grid {} (slack {})",
                    g.value,
                    g.slack
                );
                checked += 1;
                if convex {
                    let u = eval_u_ell(&p, &x, ell, &cfg()).unwrap().value;
                    let g = grid_oracle_maxmin(&p, &x, ell, false, 0).unwrap();
                    assert!(
                        (u - g.value).abs() <= g.slack + eps,
                        "{id}: u_{ell}({x:?}) = {u} vs grid {} (slack {})",
                        g.value,
                        g.slack
                    );
                    checked += 1;
                }
                if strongly {
                    let u0 = eval_u0(&p, &x, &cfg()).unwrap().value;
                    let g = grid_oracle_maxmin(&p, &x, 0.0, false, 0).unwrap();
                    assert!(
                        (u0 - g.value).abs() <= g.slack + eps,
                        "{id}: u0({x:?}) = {u0} vs grid {}",
                        g.value
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50);
    println!("ACCEPTANCE 9 PASS: dual evaluations match the grid reference ({checked} comparisons)");
}

#[test]
fn criterion_10_linearized_merit_equals_regularized_without_smooth_parts() {
    let eps = 2.0 * cfg().epsilon_eval();
    let mut worst = 0.0f64;
    let mut samples = 0;
    for id in ["paper-abs", "l1mix-2d"] {
        let (p, known) = problem(id);
        for x in sample_xs(&p, &known, 25, 0xAA) {
            let ell = 0.5 + (samples % 3) as f64;
            let u = eval_u_ell(&p, &x, ell, &cfg()).unwrap().value;
            let w = eval_w_ell(&p, &x, ell, &cfg()).unwrap().value;
            worst = worst.max((u - w).abs());
            assert!((u - w).abs() <= eps, "{id}: u = {u}, w = {w} at {x:?}");
            samples += 1;
        }
    }
    assert_eq!(samples, 50);
    println!("ACCEPTANCE 10 PASS: |w - u| <= 2 eps over {samples} samples, worst {worst:e}");
}

#[test]
fn criterion_11_directional_derivatives_match_finite_differences() {
    let cfg = tight_cfg();
    let mut worst = 0.0f64;
    // Smooth strongly convex problems where the dual minimizer is unique at
    // the probed points.
    for (id, xs) in [
        ("quadpair-1d", vec![vec![1.6], vec![-2.0], vec![0.4]]),
        ("quadpair-2d", vec![vec![1.2, 0.7], vec![-0.9, -1.1]]),
    ] {
        let (p, _) = problem(id);
        let n = p.dimension();
        for x in &xs {
            let z: Vec<f64> = x.iter().map(|v| v + 0.5).collect();
            let d: Vec<f64> = (0..n).map(|j| z[j] - x[j]).collect();
            let t = 1e-4;
            for kind in [MeritKind::UEll, MeritKind::WEll] {
                let analytic = match kind {
                    MeritKind::UEll => {
                        directional_derivative_u_ell(&p, x, &z, 1.0, &cfg).unwrap()
                    }
                    _ => directional_derivative_w_ell(&p, x, &z, 1.0, &cfg).unwrap(),
                };
                let at = |s: f64| {
                    let pt: Vec<f64> = (0..n).map(|j| x[j] + s * d[j]).collect();
                    match kind {
                        MeritKind::UEll => eval_u_ell(&p, &pt, 1.0, &cfg).unwrap().value,
                        _ => eval_w_ell(&p, &pt, 1.0, &cfg).unwrap().value,
                    }
                };
                let fd = (at(t) - at(-t)) / (2.0 * t);
                let err = (fd - analytic).abs() / (1.0 + analytic.abs());
                worst = worst.max(err);
                assert!(err <= 1e-4, "{id} {}: fd {fd} vs {analytic}", kind.as_str());
            }
        }
    }
    // Zero direction returns exactly zero.
    let (p, _) = problem("quadpair-2d");
    let x = vec![0.8, -0.3];
    assert_eq!(
        directional_derivative_u_ell(&p, &x, &x, 1.0, &cfg).unwrap(),
        0.0
    );
    assert_eq!(
        directional_derivative_w_ell(&p, &x, &x, 1.0, &cfg).unwrap(),
        0.0
    );
    println!("ACCEPTANCE 11 PASS: directional derivatives match finite differences, worst rel err {worst:e}");
}

#[test]
fn default_verification_suite_passes_and_is_deterministic() {
    let cfg = cfg();
    let suite = default_suite(4242, &cfg);
    let report = run_all(&suite, &cfg);
    let text = report.render_text();
    for outcome in &report.outcomes {
        assert!(outcome.pass, "check failed:\n{text}");
    }
    let again = run_all(&suite, &cfg);
    assert_eq!(report.to_csv(), again.to_csv());
    println!("ACCEPTANCE (verify run) PASS: default suite all-pass and reports byte-stable");
}

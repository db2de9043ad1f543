//! Property-based invariants and reference-value anchors.

use proptest::prelude::*;

use momerit_core::inner::{grid_oracle_maxmin, primal_integrand, solve_regularized_weighted};
use momerit_core::inner::InnerSolveConfig;
use momerit_core::linalg::{dist, dist_sq};
use momerit_core::merit::{
    dual_point_u_ell, eval_u0, eval_u_ell, eval_w_ell, DualSolveConfig, SimplexWeights,
};
use momerit_core::prox::{
    catalog, moreau_envelope, project_simplex, soft_threshold, weighted_sum_prox,
    IterativeProxConfig, ProxStrategy,
};
use momerit_core::problem::FeasibleSet;
use momerit_core::zoo::builtin;

fn cfg() -> DualSolveConfig {
    DualSolveConfig::default()
}

proptest! {
    #[test]
    fn soft_threshold_shrinks_toward_zero(v in -50.0f64..50.0, t in 1e-6f64..10.0) {
        let s = soft_threshold(v, t);
        prop_assert!(s.abs() <= v.abs());
        prop_assert!(s * v >= 0.0);
        if v.abs() > t {
            prop_assert!((v.abs() - s.abs() - t).abs() < 1e-12);
        } else {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn simplex_projection_is_feasible_and_idempotent(
        v in prop::collection::vec(-10.0f64..10.0, 1..6)
    ) {
        let w = project_simplex(&v);
        let s: f64 = w.as_slice().iter().sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
        prop_assert!(w.as_slice().iter().all(|&x| x >= 0.0));
        let again = project_simplex(w.as_slice());
        prop_assert!(dist(again.as_slice(), w.as_slice()) <= 1e-12);
    }

    #[test]
    fn simplex_projection_no_worse_than_random_candidates(
        v in prop::collection::vec(-5.0f64..5.0, 2..4),
        probes in prop::collection::vec(0.0f64..1.0, 16)
    ) {
        let w = project_simplex(&v);
        let dw = dist_sq(w.as_slice(), &v);
        let m = v.len();
        for chunk in probes.chunks(m) {
            if chunk.len() < m { continue; }
            let sum: f64 = chunk.iter().sum();
            if sum <= 0.0 { continue; }
            let cand: Vec<f64> = chunk.iter().map(|c| c / sum).collect();
            prop_assert!(dw <= dist_sq(&cand, &v) + 1e-9);
        }
    }

    #[test]
    fn catalog_proxes_are_nonexpansive(
        a in prop::collection::vec(-8.0f64..8.0, 2),
        b in prop::collection::vec(-8.0f64..8.0, 2),
        t in 0.05f64..5.0
    ) {
        for (_, g) in catalog(2) {
            let pa = g.prox(&a, t);
            let pb = g.prox(&b, t);
            prop_assert!(dist(&pa, &pb) <= dist(&a, &b) + 1e-12);
        }
    }

    #[test]
    fn envelope_lower_bounds_the_function(
        x in prop::collection::vec(-6.0f64..6.0, 2),
        t in 0.05f64..5.0
    ) {
        for (_, g) in catalog(2) {
            let e = moreau_envelope(g.as_ref(), &x, t).unwrap();
            prop_assert!(e.value <= g.eval(&x) + 1e-12);
        }
    }
}

#[test]
fn weighted_prox_dispatch_order_is_stable() {
    // First match wins: identical terms beat the zero strategy only over an
    // unconstrained set; zero terms over a box project.
    let zero_a = momerit_core::prox::ZeroTerm;
    let zero_b = momerit_core::prox::ZeroTerm;
    let terms: Vec<&dyn momerit_core::problem::ConvexOracle> = vec![&zero_a, &zero_b];
    let w = SimplexWeights::new(vec![0.5, 0.5]).unwrap();
    let free = weighted_sum_prox(
        &terms,
        &w,
        &FeasibleSet::reals(1),
        &[2.0],
        1.0,
        &IterativeProxConfig::default(),
    )
    .unwrap();
    assert_eq!(free.strategy, ProxStrategy::IdenticalTerms);
    let boxed = weighted_sum_prox(
        &terms,
        &w,
        &FeasibleSet::Box(momerit_core::problem::BoundingBox::new(vec![-1.0], vec![1.0])),
        &[2.0],
        1.0,
        &IterativeProxConfig::default(),
    )
    .unwrap();
    assert_eq!(boxed.strategy, ProxStrategy::ZeroTerms);
    assert_eq!(boxed.point, vec![1.0]);
}

#[test]
fn dual_value_brackets_primal_witness() {
    // theta(exit weights) upper-bounds the merit; the reported value is the
    // primal integrand at the exit maximizer and sits within fw_gap below.
    let p = builtin("quadpair-2d").unwrap().problem();
    let c = cfg();
    for (i, x) in [[1.4, -0.6], [0.2, 1.9], [-2.2, 0.8]].iter().enumerate() {
        let ell = 0.6 + i as f64;
        let ev = eval_u_ell(&p, x, ell, &c).unwrap();
        let dp = dual_point_u_ell(&p, x, ell, &ev.dual_weights, &c.inner).unwrap();
        assert!(dp.theta >= ev.value - c.epsilon_eval());
        assert!(dp.theta - ev.value <= ev.fw_gap + c.epsilon_eval());
        let primal = primal_integrand(&p, x, &ev.maximizer, ell, false);
        assert!((primal - ev.value).abs() <= 1e-12);
    }
}

#[test]
fn monotone_regularization_in_two_dimensions() {
    let p = builtin("quadpair-2d").unwrap().problem();
    let c = cfg();
    for x in [[1.5, 1.5], [-0.4, 0.9], [2.0, -1.0]] {
        let u0 = eval_u0(&p, &x, &c).unwrap().value;
        let mut last = f64::INFINITY;
        for ell in [0.25, 1.0, 4.0] {
            let ul = eval_u_ell(&p, &x, ell, &c).unwrap().value;
            assert!(ul <= u0 + c.epsilon_eval());
            assert!(ul <= last + c.epsilon_eval());
            last = ul;
        }
    }
}

#[test]
fn spec_example_quadpair_matches_grid_at_two() {
    let p = builtin("quadpair-1d").unwrap().problem();
    let ev = eval_u_ell(&p, &[2.0], 1.0, &cfg()).unwrap();
    let g = grid_oracle_maxmin(&p, &[2.0], 1.0, false, 0).unwrap();
    assert!((ev.value - g.value).abs() <= g.slack + cfg().epsilon_eval());
}

#[test]
fn composite_linearized_merit_matches_grid() {
    // f = (x-1)^2/2, g = |x|: dual route against the linearized grid
    // reference, plus hand-computed anchors.
    let p = builtin("abs-quad-1d").unwrap().problem();
    let c = cfg();
    for &x in &[0.0, 0.5, -1.0] {
        let w = eval_w_ell(&p, &[x], 1.0, &c).unwrap().value;
        let g = grid_oracle_maxmin(&p, &[x], 1.0, true, 0).unwrap();
        assert!((w - g.value).abs() <= g.slack + c.epsilon_eval(), "at {x}");
    }
    let at_zero = eval_w_ell(&p, &[0.0], 1.0, &c).unwrap().value;
    assert!(at_zero.abs() <= c.epsilon_eval());
    let at_half = eval_w_ell(&p, &[0.5], 1.0, &c).unwrap().value;
    assert!((at_half - 0.125).abs() <= 1e-8, "w_1(0.5) = {at_half}");
}

#[test]
fn disjoint_block_problem_uses_block_prox_end_to_end() {
    // The two l1 terms act on different coordinates; the linearized dual
    // must agree with the grid reference.
    let p = builtin("l1pair-2d").unwrap().problem();
    let c = cfg();
    for x in [[1.0, 1.0], [-0.5, 0.3]] {
        let w = eval_w_ell(&p, &x, 1.0, &c).unwrap().value;
        let g = grid_oracle_maxmin(&p, &x, 1.0, true, 257).unwrap();
        assert!((w - g.value).abs() <= g.slack + c.epsilon_eval());
    }
}

#[test]
fn constrained_composite_uses_splitting_prox_end_to_end() {
    // l1 term over a box: no closed-form weighted prox, so both duals lean
    // on the splitting iteration. Check them against the grid reference.
    let text = r#"{
        "dimension": 1,
        "objectives": [{
            "smooth": {"kind": "quadratic", "q": [1.0], "b": [-1.0], "c": 0.5},
            "convex": {"kind": "abs"},
            "metadata": {"mu": 1.0, "sigma": 1.0, "lip": 1.0,
                         "f_convex": true, "F_convex": true,
                         "F_strictly_convex": true}
        }],
        "set": {"kind": "box", "lo": [0.25], "hi": [2.0]}
    }"#;
    let p = momerit_core::zoo::load_spec(text).unwrap();
    let c = cfg();
    for &(x, ell) in &[(0.25, 1.0), (1.0, 0.5), (2.0, 2.0)] {
        let w = eval_w_ell(&p, &[x], ell, &c).unwrap().value;
        let gw = grid_oracle_maxmin(&p, &[x], ell, true, 4001).unwrap();
        assert!((w - gw.value).abs() <= gw.slack + c.epsilon_eval(), "w at {x}");
        let u = eval_u_ell(&p, &[x], ell, &c).unwrap().value;
        let gu = grid_oracle_maxmin(&p, &[x], ell, false, 4001).unwrap();
        assert!((u - gu.value).abs() <= gu.slack + c.epsilon_eval(), "u at {x}");
    }
    // The box minimum of (x-1)^2/2 + |x| sits at the left endpoint, which is
    // therefore the unique Pareto point: merits vanish there.
    assert!(eval_w_ell(&p, &[0.25], 1.0, &c).unwrap().value <= c.epsilon_eval());
    assert!(eval_w_ell(&p, &[1.5], 1.0, &c).unwrap().value > 10.0 * c.epsilon_eval());
}

#[test]
fn three_objective_duals_match_grid() {
    // Three objectives exercise the away steps of the simplex solve.
    let spec = momerit_core::zoo::random_quadratic_family(9, 2, 3, (0.8, 3.0));
    let p = spec.build().unwrap();
    let c = cfg();
    for x in [[1.2, -0.8], [0.0, 2.0], [-1.7, 0.4]] {
        for ell in [0.6, 1.7] {
            let u = eval_u_ell(&p, &x, ell, &c).unwrap();
            assert!(u.fw_gap <= c.gap_tol);
            let g = grid_oracle_maxmin(&p, &x, ell, false, 385).unwrap();
            assert!(
                (u.value - g.value).abs() <= g.slack + c.epsilon_eval(),
                "u_{ell}({x:?}) = {} vs grid {} +- {}",
                u.value,
                g.value,
                g.slack
            );
            let w = eval_w_ell(&p, &x, ell, &c).unwrap();
            let gw = grid_oracle_maxmin(&p, &x, ell, true, 385).unwrap();
            assert!((w.value - gw.value).abs() <= gw.slack + c.epsilon_eval());
        }
        let u0 = eval_u0(&p, &x, &c).unwrap();
        let g0 = grid_oracle_maxmin(&p, &x, 0.0, false, 385).unwrap();
        assert!((u0.value - g0.value).abs() <= g0.slack + c.epsilon_eval());
    }
}

#[test]
fn concurrent_evaluations_agree_with_serial() {
    let p = std::sync::Arc::new(builtin("quadpair-2d").unwrap().problem());
    let c = cfg();
    let xs: Vec<Vec<f64>> = (0..8)
        .map(|k| vec![0.4 * k as f64 - 1.5, 0.3 * (k % 3) as f64])
        .collect();
    let serial: Vec<f64> = xs
        .iter()
        .map(|x| eval_w_ell(&p, x, 1.0, &c).unwrap().value)
        .collect();
    let mut handles = Vec::new();
    for x in xs.clone() {
        let p = p.clone();
        let c = c.clone();
        handles.push(std::thread::spawn(move || {
            eval_w_ell(&p, &x, 1.0, &c).unwrap().value
        }));
    }
    let parallel: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(serial, parallel);
}

#[test]
fn nonnegativity_over_dense_samples_on_every_zoo_problem() {
    use rand::{Rng, SeedableRng};
    let c = cfg();
    let eps = c.epsilon_eval();
    for id in momerit_core::zoo::builtin_ids() {
        let entry = builtin(id).unwrap();
        let p = entry.problem();
        let known = entry.known();
        let b = known
            .sample_box
            .clone()
            .or_else(|| p.feasible_set().bounding_box())
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBEEF);
        let convex = p.metadata().all_objectives_convex();
        for _ in 0..100 {
            let raw: Vec<f64> = (0..p.dimension())
                .map(|j| rng.random_range(b.lo[j]..=b.hi[j]))
                .collect();
            let x = p.feasible_set().project(&raw);
            let w = eval_w_ell(&p, &x, 1.0, &c).unwrap().value;
            assert!(w >= -eps, "{id}: w_1({x:?}) = {w:e}");
            if convex {
                let u = eval_u_ell(&p, &x, 1.0, &c).unwrap().value;
                assert!(u >= -eps, "{id}: u_1({x:?}) = {u:e}");
            }
        }
    }
}

#[test]
fn every_builtin_annotation_is_consistent() {
    // Catalogued solutions must score as solutions under the applicable
    // merits, and catalogued non-solutions must not.
    let c = cfg();
    let eps = c.epsilon_eval();
    for id in momerit_core::zoo::builtin_ids() {
        let entry = builtin(id).unwrap();
        let p = entry.problem();
        let known = entry.known();
        let convex = p.metadata().all_objectives_convex();
        for x in known.weak_pareto_points.iter().take(5) {
            if convex {
                let u = eval_u_ell(&p, x, 1.0, &c).unwrap().value;
                assert!(u <= eps, "{id}: u_1({x:?}) = {u:e}");
            }
        }
        for x in known.stationary_points.iter().take(5) {
            let w = eval_w_ell(&p, x, 1.0, &c).unwrap().value;
            assert!(w <= eps, "{id}: w_1({x:?}) = {w:e}");
        }
        for x in known.non_solution_points.iter().take(5) {
            let w = eval_w_ell(&p, x, 1.0, &c).unwrap().value;
            assert!(w > 10.0 * eps, "{id}: w_1({x:?}) = {w:e} at non-solution");
        }
    }
}

#[test]
fn level_probe_escapes_on_single_quadratic_objective() {
    // One objective x^2: the unregularized merit is x^2 minus its minimum,
    // so every sublevel set is bounded and the probe finds escape radii.
    let spec = momerit_core::zoo::random_quadratic_family(77, 1, 1, (2.0, 2.0));
    let p = spec.build().unwrap();
    let report = momerit_core::verify::probe_level_boundedness(
        &p,
        momerit_core::merit::MeritKind::U0,
        1.0,
        &[1.0, 10.0],
        &[2.0, 8.0, 64.0],
        &cfg(),
    )
    .unwrap();
    for row in &report.rows {
        assert!(!row.sublevel_at_outermost, "alpha {}", row.alpha);
    }
    // The alpha = 10 sublevel set reaches past the innermost ring, so the
    // probe must see it there and nowhere near the outermost one.
    assert_eq!(report.rows[1].largest_sublevel_radius, Some(2.0));
}

#[test]
fn inner_solver_value_matches_envelope_identity() {
    // The regularized weighted solve at weights (1) is the scaled envelope
    // of the single objective.
    let p = builtin("paper-abs").unwrap().problem();
    let w = SimplexWeights::new(vec![1.0]).unwrap();
    for &(x, ell) in &[(0.5, 1.0), (2.0, 1.0), (-0.7, 2.0)] {
        let sol =
            solve_regularized_weighted(&p, &w, &[x], ell, &InnerSolveConfig::default()).unwrap();
        let g = momerit_core::prox::WeightedL1Term::uniform(1);
        let env = moreau_envelope(&g, &[x], 1.0 / ell).unwrap();
        assert!((sol.value - env.value).abs() < 1e-9);
        assert!(dist(&sol.point, &env.minimizer) < 1e-7);
    }
}

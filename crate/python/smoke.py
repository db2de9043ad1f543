#!/usr/bin/env python3
"""Smoke test for the momerit Python extension.

Builds nothing itself: run `cargo build -p momerit-py --release` (or debug)
first. The script locates the produced cdylib, copies it next to itself under
the importable name, and exercises the main entry points.
"""

import math
import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def locate_extension() -> pathlib.Path:
    module = HERE / "momerit.so"
    candidates = [
        ROOT / "target" / "release" / "libmomerit.so",
        ROOT / "target" / "debug" / "libmomerit.so",
        ROOT / "target" / "release" / "libmomerit.dylib",
        ROOT / "target" / "debug" / "libmomerit.dylib",
    ]
    built = [c for c in candidates if c.exists()]
    if not built:
        sys.exit("build the extension first: cargo build -p momerit-py --release")
    newest = max(built, key=lambda c: c.stat().st_mtime)
    shutil.copyfile(newest, module)
    return module


def approx(a: float, b: float, tol: float = 1e-7) -> bool:
    return abs(a - b) <= tol


def main() -> None:
    locate_extension()
    sys.path.insert(0, str(HERE))
    import momerit

    ids = momerit.builtin_ids()
    assert "paper-abs" in ids and "quadpair-2d" in ids, ids

    # Closed-form values of the regularized merit on the |x| objective.
    abs_problem = momerit.Problem.builtin("paper-abs")
    assert abs_problem.dimension == 1
    assert approx(abs_problem.u_ell([0.5], 1.0).value, 0.375)
    assert approx(abs_problem.u_ell([2.0], 1.0).value, 0.5)
    assert approx(abs_problem.u_ell([0.0], 1.0).value, 0.0)

    # Stationary-but-not-optimal example: w vanishes at 0, u0 stays positive.
    negsq = momerit.Problem.builtin("paper-negsq")
    assert approx(negsq.w_ell([0.0], 1.0).value, 0.0, tol=1e-8)
    assert negsq.u0([0.0]).value >= 0.1
    assert negsq.u0([0.0]).route == "grid"

    # Dual route on a strongly convex pair; weights live on the simplex.
    pair = momerit.Problem.builtin("quadpair-2d")
    res = pair.u_ell([1.5, -0.5], 1.0)
    assert res.route == "dual"
    assert res.value > 0.0
    assert approx(sum(res.dual_weights), 1.0, tol=1e-9)
    assert all(w >= 0.0 for w in res.dual_weights)
    for solution in pair.weak_pareto_points[:5]:
        assert pair.u_ell(solution, 1.0).value <= 1.2e-6

    # Directional derivative vanishes in the zero direction.
    assert pair.directional_derivative("u_ell", [0.7, 0.1], [0.7, 0.1], 1.0) == 0.0

    # Oracle validation passes on a spec round-trip.
    spec_json = pathlib.Path(ROOT / "target" / "smoke-spec.json")
    spec_json.write_text(
        """
        {
          "dimension": 1,
          "objectives": [
            {"smooth": {"kind": "quadratic", "q": [2.0], "b": [0.0], "c": 0.0},
             "convex": {"kind": "zero"},
             "metadata": {"mu": 2.0, "sigma": 2.0, "lip": 2.0,
                          "f_convex": true, "F_convex": true,
                          "F_strictly_convex": true}}
          ],
          "set": {"kind": "reals",
                  "bounding_box": {"lo": [-3.0], "hi": [3.0]}}
        }
        """
    )
    custom = momerit.Problem.from_spec_json(spec_json.read_text())
    report = custom.validate(samples=100, seed=1)
    assert "PASS" in report
    assert approx(custom.u0([2.0]).value, 4.0, tol=1e-5), custom.u0([2.0]).value

    # Infinity norm of value error across a small sweep.
    worst = 0.0
    for k in range(11):
        x = -2.0 + 0.4 * k
        expect = abs(x) - x * x / 2 if abs(x) < 1 else 0.5
        worst = max(worst, abs(abs_problem.u_ell([x], 1.0).value - expect))
    assert worst <= 1e-6, worst

    print("momerit python smoke test: OK (version", momerit.__version__ + ")")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Smoke test for the dmsfir_py extension module.

Build the module first:

    cargo build --release -p dmsfir-py

then run this script; it finds the cdylib in target/, stages it next to
itself under the importable name, and exercises the main types and
operations end to end.
"""

import math
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
HERE = Path(__file__).resolve().parent


def stage_extension() -> None:
    suffixes = {
        "linux": ("lib", ".so"),
        "darwin": ("lib", ".dylib"),
        "win32": ("", ".dll"),
    }
    prefix, ext = suffixes.get(sys.platform, ("lib", ".so"))
    candidates = [
        ROOT / "target" / profile / f"{prefix}dmsfir_py{ext}"
        for profile in ("release", "debug")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit(
            "dmsfir_py cdylib not found; run `cargo build --release -p dmsfir-py` first"
        )
    staged = HERE / ("dmsfir_py" + (".pyd" if sys.platform == "win32" else ".so"))
    if not staged.exists() or staged.stat().st_mtime < built.stat().st_mtime:
        shutil.copyfile(built, staged)
    sys.path.insert(0, str(HERE))


def close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol


def main() -> None:
    stage_extension()
    import dmsfir_py as d

    # catalog and problem basics
    names = d.Problem.catalog()
    assert "ZDT1" in names and "Kursawe" in names, names
    kursawe = d.Problem.builtin("Kursawe")
    assert (kursawe.n, kursawe.m, kursawe.p) == (3, 2, 0)
    f = kursawe.objectives([0.0, 0.0, 0.0])
    assert close(f[0], -20.0) and close(f[1], 0.0), f
    print("PASS problem catalog and objective fixtures")

    # violation aggregation and constraint families
    assert close(d.violation([0.5, -1.0, 2.0]), 4.25)
    assert close(d.violation([0.5, -1.0, 2.0], norm="linf", exponent=1.0), 2.0)
    zdt = d.Problem.builtin("ZDT1", dim=5)
    g4 = zdt.apply_family(4)
    assert g4.p == 4
    assert g4.default_start == d.suggested_start(4, 5) == [0.0] * 5
    assert close(g4.violation([0.0] * 5), 0.0)
    _, h, status = g4.evaluate([0.9] * 5, 100.0)
    assert status == "ok" and h > 0.0
    _, _, status = g4.evaluate([2.0] * 5)
    assert status == "barrier"
    print("PASS violation and constraint families")

    # config-text problems
    toy = d.Problem.from_config(
        "name = toy\nn = 2\nlower = 0\nupper = 1\n"
        "objective.1 = x[1]\nobjective.2 = 1 - x[1] + x[2]^2\n"
        "constraint.1 = 0.25 - x[1]\n"
    )
    assert (toy.n, toy.m, toy.p) == (2, 2, 1)
    f, h, status = toy.evaluate([0.5, 0.5])
    assert status == "ok" and close(f[1], 0.75) and h == 0.0
    print("PASS config-text problems")

    # restoration contracts the violation
    y_star, achieved, satisfied, _ = d.restore(toy, [0.0, 0.0], 1.0)
    h0 = toy.violation([0.0, 0.0])
    assert satisfied and achieved <= 0.25 * h0 and y_star[0] >= 0.125 - 1e-9
    print("PASS restoration contraction")

    # both solvers run; trivial constraints make them identical
    result = d.solve(g4, solver="filter-ir", budget=600)
    assert result.evals == 600 and result.stop_reason == "Budget"
    front = result.feasible_front()
    assert front, "expected feasible points"
    assert all(h < 1e-5 for (_, _, h, _) in front)

    trivial = d.Problem.from_config(
        "name = trivial\nn = 3\nlower = -5\nupper = 5\n"
        "objective.1 = x[1]^2 + x[2]^2\nobjective.2 = (x[1]-1)^2 + x[3]^2\n"
        "constraint.1 = 0 - 1\n"
        "start = 1\n"
    )
    a = d.solve(trivial, solver="filter-ir", budget=300, start=[[1.0, 1.0, 1.0]])
    b = d.solve(trivial, solver="eb", budget=300, start=[[1.0, 1.0, 1.0]])
    assert a.log_csv() == b.log_csv(), "degenerate runs must match"
    print("PASS solver runs and degeneration equivalence")

    # metrics: filter_front, hypervolume, purity, spread, profiles
    assert d.filter_front([[1, 2], [2, 1], [2, 2]]) == [[1, 2], [2, 1]]
    assert close(d.hypervolume2([[1, 2], [2, 1]], [3, 3]), 3.0)
    ref_points, best, worst = d.reference_front([[[1, 2]], [[2, 1]], [[1.5, 1.5]]])
    assert len(ref_points) == 3 and best == [1.0, 1.0] and worst == [2.0, 2.0]
    # [1.6, 1.7] is nondominated within its own front but beaten in the
    # reference by [1.5, 1.5]
    assert close(d.purity([[1, 2], [1.6, 1.7]], ref_points), 0.5)
    assert close(d.gamma_metric([[0, 1], [1, 0]], [0, 0], [1, 1]), 1.0)
    assert close(d.delta_metric([[0, 1], [0.4, 0.6], [1, 0]], [0, 0], [1, 1]), 0.2)
    profiles, dropped = d.performance_profiles(
        [("p1", "s1", 1.0), ("p1", "s2", 2.0), ("p2", "s1", 2.0), ("p2", "s2", 1.0)]
    )
    assert not dropped
    s1 = dict(profiles)["s1"]
    assert close(s1[0][1], 0.5) and close(s1[-1][1], 1.0)
    print("PASS metrics and performance profiles")

    # solved fronts feed straight into the metrics
    pts = [f[:2] for (_, f, _, _) in front]
    ref = [max(p[0] for p in pts) + 0.1, max(p[1] for p in pts) + 0.1]
    hv = d.hypervolume2(pts, ref)
    assert hv > 0.0 and math.isfinite(hv)
    print("PASS front-to-metrics round trip")

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()

"""Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.

Each criterion pins its tolerance and runtime budget.  Run with
``pytest tests/test_acceptance.py -s`` to see the lines as they print.
"""

import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from freeprod.conjectures import (
    BOUNDARY,
    CONJECTURED_SIMPLE,
    PROVED_NONSIMPLE,
    MatrixBlockSpec,
    conjecture_abelian,
    conjecture_finite_dim,
)
from freeprod.engine import decompose
from freeprod.model import TailSpec
from freeprod.nc import alternating_moment, wedge_trace
from freeprod.rmt import verify_two_projection_law
from freeprod.twoproj import (
    Regime,
    WEDGE_P_NOT_Q,
    WEDGE_PQ,
    certify_law,
    law_moment,
    two_projection_law,
    two_projection_structure,
)

from conftest import make_factor, make_problem

F = Fraction
GRID = [F(i, 10) for i in range(1, 10)]


def _report(number: int, ok: bool, description: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_1_worked_decomposition(worked_problem):
    t0 = time.perf_counter()
    report = decompose(worked_problem)
    elapsed = time.perf_counter() - t0
    v = report.verdicts
    ok = (
        len(report.summands) == 1
        and report.summands[0][0].choices == (("A", "p1"), ("B", "q2"))
        and report.summands[0][1] == F(1, 5)
        and len(report.characters) == 1
        and report.characters[0].choices == (("A", "p1"), ("B", "q1"))
        and report.r0_trace == F(4, 5)
        and not v.afr_simple
        and v.afr00_simple
        and v.afr00_nonunital
        and v.trace_unique
        and v.stable_rank_one == "true"
        and report.ideal_count == 6
        and elapsed < 0.010
    )
    _report(1, ok, f"worked decomposition exact ({elapsed * 1e3:.2f} ms)")


def test_criterion_2_simplicity_sweep():
    t0 = time.perf_counter()
    agree = 0
    total = 0
    for a1 in GRID:
        for b1 in GRID:
            rest_a = (1 - a1) / 2
            if rest_a <= 0:
                continue
            xs = [a1, rest_a, rest_a]
            ys = [b1, 1 - b1]
            report = decompose(
                make_problem(make_factor("A", xs), make_factor("B", ys))
            )
            expected = max(x + y for x in xs for y in ys) < 1
            total += 1
            agree += report.verdicts.afr_simple == expected
    elapsed = time.perf_counter() - t0
    ok = agree == total == 81 and elapsed < 1.0
    _report(2, ok, f"simplicity sweep {agree}/{total} agree ({elapsed:.2f} s)")


def test_criterion_3_oracle_gate():
    t0 = time.perf_counter()
    worst = 0.0
    for a in GRID:
        for b in GRID:
            worst = max(worst, certify_law(a, b, nmax=8, tol=1e-8))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 60.0
    _report(3, ok, f"law vs moment oracle, worst error {worst:.2e} ({elapsed:.1f} s)")


def test_criterion_4_wedge_trace_limit():
    t0 = time.perf_counter()
    a, b = F(7, 10), F(3, 5)
    w = wedge_trace(a, b)
    exact8 = alternating_moment(a, b, 8)
    analytic50 = law_moment(two_projection_law(a, b), 50)
    lo, hi = float(w), float(w) + 0.02
    elapsed = time.perf_counter() - t0
    ok = (
        w == F(3, 10)
        and lo <= float(exact8) <= hi
        and lo <= analytic50 <= hi
        and elapsed < 30.0
    )
    _report(
        4, ok,
        f"moments n=8 ({float(exact8):.4f}) and n=50 ({analytic50:.4f}) "
        f"within [{lo}, {hi}]",
    )


def test_criterion_5_two_projection_regimes():
    s1 = two_projection_structure(F(4, 5), F(3, 5))
    ok1 = (
        dict(s1.wedge_summands) == {WEDGE_PQ: F(2, 5), WEDGE_P_NOT_Q: F(1, 5)}
        and s1.regime is Regime.UNPINCHED
    )
    s2 = two_projection_structure(F(7, 10), F(7, 10))
    ok2 = (
        dict(s2.wedge_summands) == {WEDGE_PQ: F(2, 5)}
        and s2.regime is Regime.PINCH_AT_A
        and s2.fiber_interval[0] == 0.0
    )
    s3 = two_projection_structure(F(1, 2), F(1, 2))
    ok3 = (
        s3.wedge_summands == ()
        and s3.regime is Regime.DOUBLE_PINCH
        and s3.fiber_interval == (0.0, 1.0)
    )
    _report(5, ok1 and ok2 and ok3, "three two-projection regimes exact")


def test_criterion_6_monte_carlo():
    t0 = time.perf_counter()
    report = verify_two_projection_law(F(7, 10), F(3, 5), dim=1024, seed=0, trials=8)
    expected = round(0.7 * 1024) + round(0.6 * 1024) - 1024
    wrong_law = two_projection_law(F(1, 5), F(1, 10))
    control = verify_two_projection_law(
        F(7, 10), F(3, 5), dim=1024, seed=0, trials=8, law=wrong_law
    )
    elapsed = time.perf_counter() - t0
    ok = (
        report.passed
        and report.ks_statistic <= 0.05
        and all(c == expected for c in report.trial_atom_one_counts)
        and all(e <= 5.0 * 1024**-0.5 for e in report.moment_errors)
        and not control.passed
        and elapsed < 120.0
    )
    _report(
        6, ok,
        f"MC dim=1024 trials=8 ks={report.ks_statistic:.4f}, "
        f"negative control fails ({elapsed:.1f} s)",
    )


def test_criterion_7_infinite_product():
    t0 = time.perf_counter()
    f1 = make_factor("F1", ["1/2"], diffuse="1/2")
    f2 = make_factor("F2", ["3/4", "1/4"])
    certified = decompose(
        make_problem(f1, f2, tail=TailSpec((F(1, 16), F(1, 32)), F(1, 32)))
    )
    divergent = decompose(make_problem(f1, f2, tail=TailSpec((F(1, 4),), None)))
    elapsed = time.perf_counter() - t0
    ok = (
        not certified.verdicts.afr_simple
        and len(certified.characters) == 1
        and certified.verdicts.stable_rank_one == "true"
        and divergent.verdicts.afr_simple
        and divergent.verdicts.trace_unique
        and elapsed < 0.010
    )
    _report(7, ok, f"infinite product, both tail regimes ({elapsed * 1e3:.2f} ms)")


def test_criterion_8_isolation_flip(worked_problem):
    baseline = decompose(worked_problem)
    a = make_factor(
        "A", ["3/5", "3/10", "1/10"], labels=["p1", "p2", "p3"],
        isolated=[False, True, True],
    )
    b = make_factor("B", ["2/5", "3/5"], labels=["q1", "q2"])
    flipped = decompose(make_problem(a, b))
    deficits = {t.choices: t.deficit_sum for t in flipped.characters}
    ok = (
        len(baseline.summands) == 1
        and flipped.summands == ()
        and deficits.get((("A", "p1"), ("B", "q2"))) == F(4, 5)
        and deficits.get((("A", "p1"), ("B", "q1"))) == F(1)
    )
    _report(8, ok, "isolation flip turns the summand into a character")


def test_criterion_9_conjectures():
    checks = []
    checks.append(
        conjecture_abelian(
            make_factor("X", ["3/5", "2/5"]), make_factor("Y", ["1/2", "1/2"])
        ).status_label == PROVED_NONSIMPLE
    )
    checks.append(
        conjecture_abelian(
            make_factor("X", ["2/5", "2/5", "1/5"]),
            make_factor("Y", ["2/5", "2/5", "1/5"]),
        ).status_label == CONJECTURED_SIMPLE
    )
    checks.append(
        conjecture_abelian(
            make_factor("X", ["2/5", "3/5"]),
            make_factor("Y", ["2/5", "1/5", "1/5", "1/5"]),
        ).status_label == BOUNDARY
    )

    def blocks(*specs):
        return MatrixBlockSpec(
            tuple((s, tuple(F(w) for w in ws)) for s, ws in specs)
        )

    checks.append(
        conjecture_finite_dim(
            blocks((1, ["9/10"]), (1, ["1/10"])),
            blocks((2, ["1/4", "1/4"]), (2, ["1/4", "1/4"])),
        ).status_label == PROVED_NONSIMPLE
    )
    checks.append(
        conjecture_finite_dim(
            blocks((1, ["1/2"]), (1, ["1/2"])),
            blocks((2, ["1/8", "3/8"]), (2, ["1/8", "3/8"])),
        ).status_label == CONJECTURED_SIMPLE
    )
    checks.append(
        conjecture_finite_dim(
            blocks((2, ["1/4", "1/4"]), (2, ["1/4", "1/4"])),
            blocks((3, ["1/3", "1/3", "1/3"])),
        ).status_label == CONJECTURED_SIMPLE
    )
    # no verdict is ever a bare "simple" theorem claim
    v = conjecture_abelian(
        make_factor("X", ["2/5", "3/5"]), make_factor("Y", ["1/2", "1/2"])
    )
    checks.append(hasattr(v, "status_label") and not hasattr(v, "simple"))
    _report(9, all(checks), "conjecture worked examples, all statuses as listed")


def test_criterion_10_property_suites():
    import test_properties

    budget = 0
    for name in dir(test_properties):
        fn = getattr(test_properties, name)
        settings = getattr(fn, "_hypothesis_internal_use_settings", None)
        if settings is not None:
            budget += settings.max_examples
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q",
         str(Path(__file__).with_name("test_properties.py"))],
        capture_output=True, text=True,
    )
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and budget >= 1000 and elapsed < 300.0
    _report(
        10, ok,
        f"property suites green, {budget} randomized instances ({elapsed:.1f} s)",
    )

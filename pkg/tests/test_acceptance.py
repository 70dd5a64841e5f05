"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report including runtimes.
"""

import itertools
import random
import time
from fractions import Fraction as F

import pytest

import linwidths as lw
from linwidths.ballwidths import BallSpec, brute_force_linear_width, exact_linear_width
from linwidths.discretization import Allocation, solve_breakpoints
from linwidths.exponents import (ALL_CASE_LABELS, case_thetas, classify,
                                 concrete_theta_pair, matching_cases,
                                 random_admissible)
from linwidths.params import Extended
from linwidths.verify import _generic_rates

from conftest import CONCRETE_CASE1, CONCRETE_CASE5, SIM_TUPLES

ACCEPTANCE_GRID = [2 ** k for k in range(10, 25)]


def report(num: int, ok: bool, message: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {message}")
    assert ok, f"criterion {num}: {message}"


def test_criterion_1_identity_suite():
    t0 = time.perf_counter()
    rng = random.Random(20240809)
    count = 0
    per_case = 1000 // len(ALL_CASE_LABELS) + 1
    worst_nonzero = 0
    for label in ALL_CASE_LABELS:
        for _ in range(per_case):
            pa = random_admissible(rng, label)
            residuals = lw.identity_suite(pa)
            worst_nonzero += sum(1 for r in residuals if r != 0)
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst_nonzero == 0 and count >= 1000 and elapsed < 5.0
    report(1, ok, f"identity residuals exactly 0 on {count} tuples spanning "
                  f"all covered cases ({elapsed:.2f}s < 5s)")


def test_criterion_2_partition_coverage():
    t0 = time.perf_counter()
    den = 20
    problems = []
    boundary_pairs = 0
    for ia, ib, ic in itertools.product(range(den), range(den), range(1, den)):
        a, b, c = F(ia, den), F(ib, den), F(ic, den)
        try:
            case = lw.classify(Extended(a), Extended(b), c)
        except Exception as exc:  # noqa: BLE001
            problems.append(f"({a},{b},{c}): {exc}")
            continue
        hits = matching_cases(a, b, c)
        if case.covered:
            if not any(h.label == case.label for h in hits):
                problems.append(f"({a},{b},{c}): tie-break outside predicates")
        elif hits:
            problems.append(f"({a},{b},{c}): gap label but case predicate holds")
        if len(hits) > 1:
            boundary_pairs += 1
            pa = _generic_rates(a, b, c)
            if pa is not None:
                tables = {tuple(sorted(case_thetas(h, pa))) for h in hits}
                if len(tables) != 1:
                    problems.append(f"({a},{b},{c}): boundary tables differ")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 5.0
    report(2, ok, f"20-grid: every tuple matched exactly one outcome, "
                  f"{boundary_pairs} shared-boundary tuples coincide "
                  f"({elapsed:.2f}s < 5s); problems={problems[:3]}")


def test_criterion_3_concrete_abstract_consistency():
    import sympy as sp

    t0 = time.perf_counter()
    r, d = sp.symbols("r d", positive=True)
    beta, sigma, lam, a, b, c = sp.symbols("beta sigma lam a b c", real=True)
    s = r / d
    denom = (beta + lam) + (sigma - lam) + d * (s + a - b)
    tilde_mapped = s * ((sigma - lam) + d * (a - c)) / denom
    hat_mapped = ((sigma - lam) * (s + c - b) + (beta + lam) * (c - a)) / denom
    denom_closed = beta + sigma + r + d * a - d * b
    tilde_closed = s * (sigma - lam + d * a - d * c) / denom_closed
    hat_closed = (sigma * (s + c - b) + beta * (c - a) - lam * (s + a - b)) / denom_closed

    symbolic_ok = True
    for lhs, rhs in ((tilde_mapped, tilde_closed), (hat_mapped, hat_closed)):
        num, _ = sp.fraction(sp.together(lhs - rhs))
        symbolic_ok &= sp.expand(num) == 0

    numeric_ok = (lw.theta_pair(CONCRETE_CASE1) == (F(1, 2), F(1, 2))
                  and lw.theta_pair(CONCRETE_CASE5) == (F(1), F(1, 2))
                  and concrete_theta_pair(CONCRETE_CASE1) == (F(1, 2), F(1, 2))
                  and concrete_theta_pair(CONCRETE_CASE5) == (F(1), F(1, 2)))
    elapsed = time.perf_counter() - t0
    report(3, symbolic_ok and numeric_ok,
           f"rate displays match symbolically after clearing denominators and "
           f"exactly on both worked tuples ({elapsed:.2f}s)")


def test_criterion_4_ballwidth_oracle():
    t0 = time.perf_counter()
    failures = []

    def check(q, N, n, rel=1e-2, abs_tol=None):
        spec = BallSpec(inv_p=Extended(F(0)), inv_q=Extended.from_exponent(q),
                        dim_N=N, rank_n=n)
        exact = exact_linear_width(spec).value
        found = brute_force_linear_width(spec, restarts=2, seed=0)
        if abs_tol is not None:
            good = abs(found - exact) <= abs_tol
        elif exact == 0.0:
            good = abs(found) <= 1e-9
        else:
            good = abs(found - exact) <= rel * exact
        if not good:
            failures.append(f"(inf,{q},{N},{n}): {found} vs {exact}")

    check(1, 3, 1, abs_tol=1e-3)
    check(2, 4, 2)
    total = 2
    for q in (1, 2):
        for N in range(1, 7):
            for n in range(0, N + 1):
                check(q, N, n)
                total += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60.0
    report(4, ok, f"oracle matched the exact formula on {total} sign-vector "
                  f"instances ({elapsed:.1f}s < 60s); failures={failures[:3]}")


@pytest.fixture(scope="module")
def slope_fits():
    """Shared by criteria 5-7: fits, probe slopes, allocation budgets."""
    out = {}
    for label, pa in SIM_TUPLES.items():
        t0 = time.perf_counter()
        sim = lw.fit_exponent(pa, ACCEPTANCE_GRID)
        probe = lw.probe_slope(pa, ACCEPTANCE_GRID)
        out[label] = (pa, sim, probe, time.perf_counter() - t0)
    return out


def test_criterion_5_upper_bound_slopes(slope_fits):
    lines, ok = [], True
    for label, (pa, sim, _, elapsed) in slope_fits.items():
        table = lw.theta_table(pa)
        assert table.gap >= F(1, 10)
        err = abs(sim.fitted_slope - sim.predicted)
        good = err <= 0.05 and elapsed < 60.0
        ok &= good
        lines.append(f"{label}:{sim.fitted_slope:+.4f} (target {sim.predicted:+.4f},"
                     f" err {err:.4f}, {elapsed:.1f}s)")
    report(5, ok, "block-sum slopes within 0.05 over n=2^10..2^24: " + "; ".join(lines))


def test_criterion_6_sandwich(slope_fits):
    lines, ok = [], True
    for label, (pa, sim, probe, _) in slope_fits.items():
        table = lw.theta_table(pa)
        target = -float(table.thetas[table.j_star - 1])
        set_equal = ({th for _, th in lw.lower_bound_set(pa)} == set(table.thetas))
        good = (abs(probe - target) <= 0.1 and abs(sim.fitted_slope - target) <= 0.1
                and set_equal)
        ok &= good
        lines.append(f"{label}: probe {probe:+.4f} vs fit {sim.fitted_slope:+.4f} "
                     f"vs {target:+.4f}, sets {'=' if set_equal else '!='}")
    report(6, ok, "two-sided agreement within 0.1 and exact exponent-set "
                  "equality: " + "; ".join(lines))


def test_criterion_7_allocation_budget(slope_fits):
    worst = 0.0
    checked = 0
    for label, (pa, _, _, _) in slope_fits.items():
        case = classify(pa.inv_p0, pa.inv_p1, pa.inv_q)
        for n in ACCEPTANCE_GRID:
            eps, t1, m1 = lw.choose_allocation(pa, case, n)
            alloc = Allocation(bp=solve_breakpoints(pa, case, n), n=n,
                               eps=eps, t1=t1, m1=m1)
            ratio = alloc.total() / alloc.budget_bound()
            worst = max(worst, ratio)
            checked += 1
    ok = worst <= 1.0
    report(7, ok, f"rank budget within C(eps)*n on all {checked} simulated "
                  f"(params, n); worst utilisation {worst:.3f}")


def test_criterion_8_breakpoint_identities():
    t0 = time.perf_counter()
    rng = random.Random(4242)
    checked = 0
    failures = []
    for label in ALL_CASE_LABELS:
        for _ in range(100):
            pa = random_admissible(rng, label)
            case = classify(pa.inv_p0, pa.inv_p1, pa.inv_q)
            try:
                solve_breakpoints(pa, case, 2 ** 16)   # asserts to 1e-10 rel
            except AssertionError as exc:
                failures.append(f"{label}: {exc}")
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and checked == 100 * len(ALL_CASE_LABELS)
    report(8, ok, f"scalar-level identities to 1e-10 relative on {checked} "
                  f"tuples, 100 per case ({elapsed:.1f}s); failures={failures[:3]}")

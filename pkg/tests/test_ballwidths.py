"""Finite-dimensional ball widths: formulas, envelopes, oracle."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import linwidths as lw
from linwidths.ballwidths import width_value
from linwidths.params import Extended

E = Extended.from_exponent


def spec(p, q, N, n):
    return lw.BallSpec(inv_p=E(p), inv_q=E(q), dim_N=N, rank_n=n)


# ---------------------------------------------------------------------------
# exact formula
# ---------------------------------------------------------------------------

def test_exact_examples():
    assert lw.exact_linear_width(spec(2, 1, 10, 5)).value == pytest.approx(math.sqrt(5))
    assert lw.exact_linear_width(spec(3, 3, 7, 2)).value == 1.0
    assert lw.exact_linear_width(spec("inf", 1, 3, 1)).value == 2.0
    assert lw.exact_linear_width(spec(2, 2, 5, 5)).value == 0.0


def test_exact_rejects_q_above_p():
    with pytest.raises(lw.RegimeUnsupported):
        lw.exact_linear_width(spec(1, 2, 4, 1))


def test_exact_rank0_is_radius():
    assert lw.exact_linear_width(spec(2, 1, 9, 0)).value == pytest.approx(3.0)


# ---------------------------------------------------------------------------
# order envelopes
# ---------------------------------------------------------------------------

def test_gluskin_examples():
    assert lw.gluskin_envelope(spec(1, 4, 256, 16)).value == 1.0
    got = lw.gluskin_envelope(spec("3/2", 4, 256, 64)).value
    assert got == pytest.approx(64 ** -0.5 * 256 ** (1 / 3))
    assert lw.gluskin_envelope(spec(1, 2, 100, 17)).value == 1.0
    assert lw.gluskin_envelope(spec(3, 5, 64, 10)).value == 1.0


def test_gluskin_rejects_one_infinity_and_wrong_order():
    with pytest.raises(lw.RegimeUnsupported):
        lw.gluskin_envelope(spec(1, "inf", 16, 2))
    with pytest.raises(lw.RegimeUnsupported):
        lw.gluskin_envelope(spec(3, 2, 16, 2))


def test_width_monotone_in_rank_and_dimension():
    for p, q in ((2, 1), ("3/2", 4), (1, 2), (4, 4)):
        vals = [width_value(E(p).value, E(q).value, 64, n) for n in range(0, 65)]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
        grow = [width_value(E(p).value, E(q).value, N, 8) for N in range(9, 200, 10)]
        assert all(y >= x - 1e-12 for x, y in zip(grow, grow[1:]))


def test_interp_lambda():
    assert lw.interp_lambda(F(5, 6), F(1, 2), F(1, 4)) == F(3, 4)
    with pytest.raises(lw.OutOfRange):
        lw.interp_lambda(F(5, 6), F(3, 4), F(1, 4))  # 1/q' hits 1/p1
    mid = (F(5, 6) + F(1, 2)) / 2
    assert lw.interp_lambda(F(5, 6), F(1, 2), 1 - mid) == F(1, 2)


def make_body(radius_p1=1.0, radius_p0=1.0, nu=4096, a=F(3, 4), b=F(5, 8)):
    return lw.WBody(level_t=0, level_m=0, radius_p1=radius_p1,
                    radius_p0=radius_p0, dim_nu=nu, inv_p0=a, inv_p1=b)


def test_intersection_envelope_is_min_and_homogeneous():
    c = F(1, 4)
    body = make_body(radius_p1=2.0, radius_p0=0.5)
    est = lw.intersection_width_envelope(body, c, 64)
    p1_only = body.radius_p1 * width_value(body.inv_p1, c, body.dim_nu, 64)
    p0_only = body.radius_p0 * width_value(body.inv_p0, c, body.dim_nu, 64)
    assert est.value <= min(p1_only, p0_only) + 1e-15

    scaled = make_body(radius_p1=6.0, radius_p0=1.5)
    est3 = lw.intersection_width_envelope(scaled, c, 64)
    assert est3.value == pytest.approx(3 * est.value)


def test_intersection_envelope_dominant_sides():
    c = F(1, 4)
    small_p0 = make_body(radius_p1=1.0, radius_p0=1e-9)
    assert lw.intersection_width_envelope(small_p0, c, 16).formula_tag == "p0_ball"
    rank0 = lw.intersection_width_envelope(make_body(), c, 0)
    assert rank0.value == pytest.approx(1.0)   # both radii 1, rank-0 envelope


def test_interp_envelope_can_win():
    # mid-scale block where the dual-index ball beats both constraints:
    # interp = 2^-5 against p1 = 2^-3 and p0 = 2^-4.5
    c = F(1, 4)
    a, b = F(5, 8), F(7, 8)           # 1/q' = 3/4 strictly between
    body = lw.WBody(level_t=0, level_m=0, radius_p1=1.0, radius_p0=2.0 ** -4,
                    dim_nu=2 ** 20, inv_p0=a, inv_p1=b)
    est = lw.intersection_width_envelope(body, c, 2 ** 16)
    assert est.formula_tag == "interp_ball"
    assert est.value == pytest.approx(2.0 ** -5)


def test_rescaled_radius_consistency_on_cross_line():
    """On the cross line the rescaled p1 envelope equals the interpolated
    envelope, and on the balanced line the p0 radius equals the interpolated
    radius (exact exponent arithmetic)."""
    from linwidths.discretization import solve_breakpoints
    from linwidths.exponents import classify
    from conftest import SIM_TUPLES

    pa = SIM_TUPLES["9a"]
    lam = lw.interp_lambda(pa.a, pa.b, pa.c)
    n = 2 ** 16
    bp = solve_breakpoints(pa, classify(pa.inv_p0, pa.inv_p1, pa.inv_q), n)
    for t in (1.0, 3.0, 7.5):
        u = float(pa.k_star) * t
        for line, extra in (("m_til", True), ("m_mt", False)):
            m = bp.line(line, t)
            r1 = 2 ** (float(pa.mu_star) * u - m * float(pa.s_star + pa.c - pa.b))
            r0 = 2 ** (-float(pa.alpha_star) * u + m * float(pa.a - pa.c))
            rint = r1 ** float(1 - lam) * r0 ** float(lam)
            nu = 2 ** (float(pa.gamma_star) * u + m)
            if extra:  # cross line: equality after the Gluskin dimension factor
                lhs = r1 * nu ** float(1 - pa.b)
                rhs = rint * nu ** float(pa.c)
            else:      # balanced line: the radii agree outright
                lhs, rhs = r0, rint
            assert lhs == pytest.approx(rhs, rel=1e-9)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def test_oracle_examples():
    assert lw.brute_force_linear_width(spec("inf", 1, 3, 1)) == pytest.approx(2.0, abs=1e-3)
    got = lw.brute_force_linear_width(spec("inf", 2, 4, 2))
    assert got == pytest.approx(math.sqrt(2), rel=1e-2)
    assert lw.brute_force_linear_width(spec(1, 1, 5, 0)) == pytest.approx(1.0)


def test_oracle_rejects_general_p():
    with pytest.raises(lw.UnsupportedSource):
        lw.brute_force_linear_width(spec(2, 1, 4, 1))


def test_oracle_budget_exhaustion_carries_best():
    with pytest.raises(lw.BudgetExceeded) as err:
        lw.brute_force_linear_width(spec("inf", 2, 5, 2), budget=0, restarts=1)
    assert err.value.best_value == pytest.approx(math.sqrt(3))


def test_oracle_p1_source_gluskin_regime_upper_bound():
    # p = 1 into l_2: order is min(1, n^{-1/2} N^{1/2}); the oracle is an
    # upper bound and must not exceed the rank-0 radius
    got = lw.brute_force_linear_width(spec(1, 2, 12, 3), restarts=3)
    assert 0.0 < got <= 1.0 + 1e-9


def test_oracle_finds_cross_polytope_hilbert_widths():
    # lambda_n(B_1^N, l_2^N) = sqrt((N-n)/N); the optimal map is not a
    # coordinate projection, so this exercises the search itself
    for N in (3, 4, 5):
        for n in range(N + 1):
            got = lw.brute_force_linear_width(spec(1, 2, N, n), restarts=4, seed=1)
            assert got == pytest.approx(math.sqrt((N - n) / N), abs=2e-4), (N, n)


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=2, max_value=5), st.integers(min_value=0, max_value=5),
       st.sampled_from([1, 2]))
def test_oracle_matches_exact_on_sign_sources(N, n, q):
    n = min(n, N)
    exact = lw.exact_linear_width(spec("inf", q, N, n)).value
    got = lw.brute_force_linear_width(spec("inf", q, N, n), restarts=2)
    assert got == pytest.approx(exact, rel=1e-2, abs=1e-9)

"""Exact-rational case classification and decay-exponent tables.

The decay rate of the linear widths of an intersected two-constraint class
is the minimum of a finite list of candidate exponents theta_1..theta_j0.
Which list applies depends on the position of (1/p0, 1/p1, 1/q) relative to
the thresholds 1/q, 1/2 and the dual line 1/p + 1/q = 1.  Everything here is
computed in Fraction arithmetic because the case boundaries are equalities
that floating point would misclassify.

Conventions: a = 1/p0, b = 1/p1, c = 1/q, s = s*.  Primed exponents enter as
p'/2 = 1/(2(1-1/p)).  The two derived rates are

    theta_tilde = s (alpha* + gamma*(a - c)) / D,
    theta_hat   = (alpha*(s + c - b) + mu*(c - a)) / D,
    D = mu* + alpha* + gamma*(s + a - b),

and the whole table obeys the master relation
theta_hat = (theta_tilde/s)(s + a - b) + c - a, which is what the residual
identities I1..I4 exercise in expanded per-peak form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegenerateDenominator, UncoveredCase
from .params import HALF, ONE, ZERO, AbstractParams, ConcreteParams, Extended, Params

GAP_LABELS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class CaseId:
    """Outcome of the classification: a covered case (major 1..12, optional
    subcase letter for 6, 7, 9, 10) or one of the documented uncovered
    regions a..d that only occur for q > 2."""

    major: Optional[int] = None
    sub: Optional[str] = None
    uncovered_gap: Optional[str] = None

    def __post_init__(self):
        if (self.major is None) == (self.uncovered_gap is None):
            raise ValueError("exactly one of major / uncovered_gap must be set")
        if self.uncovered_gap is not None and self.uncovered_gap not in GAP_LABELS:
            raise ValueError(f"unknown gap label {self.uncovered_gap!r}")

    @property
    def covered(self) -> bool:
        return self.major is not None

    @property
    def label(self) -> str:
        if self.covered:
            return f"{self.major}{self.sub or ''}"
        return f"gap {self.uncovered_gap}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ExponentTable:
    case: CaseId
    j0: int
    thetas: tuple[Fraction, ...]
    theta_tilde: Fraction
    theta_hat: Fraction
    j_star: Optional[int]              # 1-based; None when the minimum ties
    gap: Optional[Fraction]            # min_{j != j*} theta_j - theta_{j*}
    tied_indices: tuple[int, ...]      # indices attaining the minimum
    tail_exponent: Optional[Fraction]  # defined when p0 <= q and p1 <= q

    @property
    def theta_star(self) -> Fraction:
        return min(self.thetas)


def _abstract(params: Params) -> AbstractParams:
    return map_concrete(params) if isinstance(params, ConcreteParams) else params


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def classify(inv_p0, inv_p1, inv_q) -> CaseId:
    """Assign (1/p0, 1/p1, 1/q) to its case, first match in order 1..12.

    The two measure-zero slivers p0 = q > 2 (resp. p1 = q > 2) next to cases
    11 and 12 are folded into those cases: every formula of the case remains
    valid at the boundary.  Unmatched q > 2 tuples get the first matching
    uncovered-region label in order a..d.
    """
    a = inv_p0.value if isinstance(inv_p0, Extended) else Fraction(inv_p0)
    b = inv_p1.value if isinstance(inv_p1, Extended) else Fraction(inv_p1)
    c = Fraction(inv_q)
    if not (ZERO <= a < ONE and ZERO <= b < ONE and ZERO < c < ONE):
        raise ValueError("need 0 <= 1/p0, 1/p1 < 1 and 0 < 1/q < 1")

    if a <= c and b <= c:
        return CaseId(1)
    if a < c and b > c and (c >= HALF or b <= HALF):
        return CaseId(2)
    if a >= c and b >= c and (c >= HALF or (a <= HALF and b <= HALF)):
        return CaseId(3)
    if b < c and a > c and (c >= HALF or a <= HALF):
        return CaseId(4)
    if c < HALF:
        if a >= HALF and b >= HALF and a + c >= 1 and b + c >= 1:
            return CaseId(5)
        if a > b >= HALF and a + c <= 1 and b + c <= 1:
            return CaseId(6, "a" if b > HALF else "b")
        if b > a >= HALF and a + c <= 1 and b + c <= 1:
            return CaseId(7, "a" if a > HALF else "b")
        if a == b > HALF and a + c <= 1:
            return CaseId(8)
        if a > HALF and b >= HALF and a + c > 1 and b + c < 1:
            return CaseId(9, "a" if b > HALF else "b")
        if b > HALF and a >= HALF and a + c < 1 and b + c > 1:
            return CaseId(10, "a" if a > HALF else "b")
        if c <= a < HALF and b > HALF and b + c <= 1:
            return CaseId(11)
        if c <= b < HALF and a > HALF and a + c <= 1:
            return CaseId(12)
        if a < c and b >= HALF:
            return CaseId(uncovered_gap="a")
        if b < c and a >= HALF:
            return CaseId(uncovered_gap="b")
        if a < HALF and b + c > 1:
            return CaseId(uncovered_gap="c")
        if b < HALF and a + c > 1:
            return CaseId(uncovered_gap="d")
    raise AssertionError(f"classification is not total at ({a}, {b}, {c})")


def matching_cases(a: Fraction, b: Fraction, c: Fraction) -> list[CaseId]:
    """All covered cases whose closed predicate holds (ignoring the 1..12
    tie-break).  Used to test that tables coincide on shared boundaries."""
    out = []
    preds = {
        1: a <= c and b <= c,
        2: a < c and b > c and (c >= HALF or b <= HALF),
        3: a >= c and b >= c and (c >= HALF or (a <= HALF and b <= HALF)),
        4: b < c and a > c and (c >= HALF or a <= HALF),
        5: c < HALF and a >= HALF and b >= HALF and a + c >= 1 and b + c >= 1,
        6: c < HALF and a > b >= HALF and a + c <= 1 and b + c <= 1,
        7: c < HALF and b > a >= HALF and a + c <= 1 and b + c <= 1,
        8: c < HALF and a == b > HALF and a + c <= 1,
        9: c < HALF and a > HALF and b >= HALF and a + c > 1 and b + c < 1,
        10: c < HALF and b > HALF and a >= HALF and a + c < 1 and b + c > 1,
        11: c < HALF and c <= a < HALF and b > HALF and b + c <= 1,
        12: c < HALF and c <= b < HALF and a > HALF and a + c <= 1,
    }
    subs = {6: b, 7: a, 9: b, 10: a}
    for major, hit in preds.items():
        if not hit:
            continue
        sub = None
        if major in subs:
            sub = "a" if subs[major] > HALF else "b"
        out.append(CaseId(major, sub))
    return out


# ---------------------------------------------------------------------------
# Concrete -> abstract mapping and the two derived rates
# ---------------------------------------------------------------------------

def map_concrete(params: ConcreteParams) -> AbstractParams:
    """s* = r/d, gamma* = d, alpha* = sigma - lambda, mu* = beta + lambda.

    k* = 1 and c = 1: both cancel from every exponent, so any positive
    choice is equivalent; the tests confirm the resulting theta_tilde and
    theta_hat match the concrete closed forms symbolically.
    """
    return AbstractParams(
        inv_p0=params.inv_p0,
        inv_p1=params.inv_p1,
        inv_q=params.inv_q,
        s_star=Fraction(params.r, params.d),
        gamma_star=Fraction(params.d),
        mu_star=params.beta + params.lambda_w,
        alpha_star=params.sigma - params.lambda_w,
        k_star=1,
        c_const=ONE,
    )


def theta_pair(params: Params) -> tuple[Fraction, Fraction]:
    """The two derived decay rates (theta_tilde, theta_hat)."""
    pa = _abstract(params)
    D = pa.denom
    if D == 0:
        raise DegenerateDenominator("mu* + alpha* + gamma*(s* + 1/p0 - 1/p1) = 0")
    tilde = pa.s_star * (pa.alpha_star + pa.gamma_star * (pa.a - pa.c)) / D
    hat = (pa.alpha_star * (pa.s_star + pa.c - pa.b) + pa.mu_star * (pa.c - pa.a)) / D
    return tilde, hat


def concrete_theta_pair(params: ConcreteParams) -> tuple[Fraction, Fraction]:
    """The closed forms stated directly in terms of (r, d, beta, sigma,
    lambda); used as an independent cross-check of map_concrete."""
    a, b, c = params.inv_p0.value, params.inv_p1.value, params.inv_q
    r, d = Fraction(params.r), Fraction(params.d)
    beta, sigma, lam = params.beta, params.sigma, params.lambda_w
    denom = beta + sigma + r + d * a - d * b
    if denom == 0:
        raise DegenerateDenominator("beta + sigma + r + d/p0 - d/p1 = 0")
    tilde = (r / d) * (sigma - lam + d * a - d * c) / denom
    hat = (sigma * (r / d + c - b) + beta * (c - a) - lam * (r / d + a - b)) / denom
    return tilde, hat


# ---------------------------------------------------------------------------
# The per-case theta lists
# ---------------------------------------------------------------------------

def _half_dual(inv: Fraction) -> Fraction:
    """p'/2 as a Fraction given 1/p."""
    return ONE / (2 * (ONE - inv))


def case_thetas(case: CaseId, params: Params) -> tuple[Fraction, ...]:
    """theta_1..theta_j0 for a covered case, in the case's stated order."""
    if not case.covered:
        raise UncoveredCase(case.uncovered_gap)
    pa = _abstract(params)
    a, b, c, s = pa.a, pa.b, pa.c, pa.s_star
    tilde, hat = theta_pair(pa)
    if s == 0:
        raise DegenerateDenominator("s* = 0")
    hq = ONE / (2 * c)          # q/2
    h0 = _half_dual(a)          # p0'/2
    h1 = _half_dual(b)          # p1'/2
    rel = ONE - tilde / s
    m = case.major

    if m == 1:
        return (s, tilde)
    if m == 2:
        return (s + c - b, tilde, hat)
    if m == 3:
        return (s + c - b, hat)
    if m == 4:
        return (s, tilde, hat)
    if m == 5:
        return (s + HALF - b, (s + c - b) * hq, hat + HALF - c, hat * hq)
    if m == 6:
        if case.sub == "a":
            e = hat + (a - b) * rel
            return (s + c - HALF, (s + c - b) * h1, e + b - HALF, e * h1, hat * h0)
        e = hat + (a - HALF) * rel
        return (s + c - HALF, e, hat * h0)
    if m == 7:
        if case.sub == "a":
            e = hat + (b - a) * tilde / s
            return (s + c - HALF, (s + c - b) * h1, e + a - HALF, e * h0, hat * h1)
        e = hat + (b - HALF) * tilde / s
        return (s + c - HALF, (s + c - b) * h1, e, hat * h1)
    if m == 8:
        return (s + c - HALF, (s + c - b) * h1, hat + b - HALF, hat * h1)
    if m == 9:
        if case.sub == "a":
            e = hat + (a - b) * rel
            return (s + c - HALF, (s + c - b) * h1, e + b - HALF, e * h1,
                    hat + HALF - c, hat * hq)
        e = hat + (a - HALF) * rel
        return (s + c - HALF, e, hat + HALF - c, hat * hq)
    if m == 10:
        if case.sub == "a":
            e = hat + (b - a) * tilde / s
            return (s + HALF - b, (s + c - b) * hq, e + a - HALF, e * h0,
                    hat + HALF - c, hat * hq)
        e = hat + (b - HALF) * tilde / s
        return (s + HALF - b, (s + c - b) * hq, e, hat + HALF - c, hat * hq)
    if m == 11:
        return (s + c - HALF, (s + c - b) * h1, hat + (b - HALF) * tilde / s, hat * h1)
    if m == 12:
        return (s + c - b, hat + (a - HALF) * (ONE - tilde / s), hat * h0)
    raise AssertionError(f"unknown case {case}")


def tail_exponent(params: Params) -> Optional[Fraction]:
    """Decay rate per level t of the residual beyond the last summed level;
    available exactly when p0 <= q and p1 <= q."""
    pa = _abstract(params)
    if pa.a < pa.c or pa.b < pa.c:
        return None
    den = pa.s_star + pa.a - pa.b
    if den == 0:
        raise DegenerateDenominator("s* + 1/p0 - 1/p1 = 0")
    num = pa.alpha_star * (pa.s_star + pa.c - pa.b) - pa.mu_star * (pa.a - pa.c)
    return num / den


def theta_table(params: Params) -> ExponentTable:
    """Full table: case, theta list, dominant index and its margin."""
    pa = _abstract(params)
    case = classify(pa.inv_p0, pa.inv_p1, pa.inv_q)
    if not case.covered:
        raise UncoveredCase(case.uncovered_gap)
    thetas = case_thetas(case, pa)
    tilde, hat = theta_pair(pa)
    tmin = min(thetas)
    tied = tuple(j + 1 for j, t in enumerate(thetas) if t == tmin)
    if len(tied) == 1:
        j_star = tied[0]
        gap = min(t for j, t in enumerate(thetas) if j + 1 != j_star) - tmin
    else:
        j_star, gap = None, None
    return ExponentTable(
        case=case,
        j0=len(thetas),
        thetas=thetas,
        theta_tilde=tilde,
        theta_hat=hat,
        j_star=j_star,
        gap=gap,
        tied_indices=tied,
        tail_exponent=tail_exponent(pa),
    )


def theta_formulas(case: CaseId, inv_p0, inv_p1, inv_q) -> tuple[str, ...]:
    """Human-readable theta formulas with the exponent triple substituted.

    s, T~ and T^ stay symbolic (they need the full rate tuple); everything
    depending only on (1/p0, 1/p1, 1/q) is folded into rational constants.
    """
    if not case.covered:
        raise UncoveredCase(case.uncovered_gap)
    a = inv_p0.value if isinstance(inv_p0, Extended) else Fraction(inv_p0)
    b = inv_p1.value if isinstance(inv_p1, Extended) else Fraction(inv_p1)
    c = Fraction(inv_q)
    hq, h0, h1 = ONE / (2 * c), _half_dual(a), _half_dual(b)

    def shift(base: str, off: Fraction) -> str:
        if off == 0:
            return base
        return f"{base} {'+' if off > 0 else '-'} {abs(off)}"

    def scaled(k: Fraction, base: str) -> str:
        return base if k == 1 else f"({k})*{base}"

    cross_p1 = f"T^ + ({a - b})*(1 - T~/s)"   # rescaled p1 crossing rate
    cross_p0 = f"T^ + ({b - a})*(T~/s)"
    m = case.major
    table: dict[tuple[int, Optional[str]], tuple[str, ...]] = {
        (1, None): ("s", "T~"),
        (2, None): (shift("s", c - b), "T~", "T^"),
        (3, None): (shift("s", c - b), "T^"),
        (4, None): ("s", "T~", "T^"),
        (5, None): (shift("s", HALF - b), scaled(hq, f"({shift('s', c - b)})"),
                    shift("T^", HALF - c), scaled(hq, "T^")),
        (6, "a"): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                   shift(cross_p1, b - HALF), scaled(h1, f"({cross_p1})"),
                   scaled(h0, "T^")),
        (6, "b"): (shift("s", c - HALF), f"T^ + ({a - HALF})*(1 - T~/s)",
                   scaled(h0, "T^")),
        (7, "a"): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                   shift(cross_p0, a - HALF), scaled(h0, f"({cross_p0})"),
                   scaled(h1, "T^")),
        (7, "b"): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                   f"T^ + ({b - HALF})*(T~/s)", scaled(h1, "T^")),
        (8, None): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                    shift("T^", b - HALF), scaled(h1, "T^")),
        (9, "a"): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                   shift(cross_p1, b - HALF), scaled(h1, f"({cross_p1})"),
                   shift("T^", HALF - c), scaled(hq, "T^")),
        (9, "b"): (shift("s", c - HALF), f"T^ + ({a - HALF})*(1 - T~/s)",
                   shift("T^", HALF - c), scaled(hq, "T^")),
        (10, "a"): (shift("s", HALF - b), scaled(hq, f"({shift('s', c - b)})"),
                    shift(cross_p0, a - HALF), scaled(h0, f"({cross_p0})"),
                    shift("T^", HALF - c), scaled(hq, "T^")),
        (10, "b"): (shift("s", HALF - b), scaled(hq, f"({shift('s', c - b)})"),
                    f"T^ + ({b - HALF})*(T~/s)", shift("T^", HALF - c),
                    scaled(hq, "T^")),
        (11, None): (shift("s", c - HALF), scaled(h1, f"({shift('s', c - b)})"),
                     f"T^ + ({b - HALF})*(T~/s)", scaled(h1, "T^")),
        (12, None): (shift("s", c - b), f"T^ + ({a - HALF})*(1 - T~/s)",
                     scaled(h0, "T^")),
    }
    return table[(case.major, case.sub)]


# ---------------------------------------------------------------------------
# Hypothesis checks
# ---------------------------------------------------------------------------

def check_hypotheses(params: Params) -> list[str]:
    """Every violated admissibility inequality, named; empty when admissible.

    The concrete tuple adds its own positivity requirements on the weight
    rates and on whichever of the two derived rates the regime needs.
    """
    violations: list[str] = []
    pa = _abstract(params)
    a, b, c, s = pa.a, pa.b, pa.c, pa.s_star
    g, mu, al = pa.gamma_star, pa.mu_star, pa.alpha_star

    if s <= 0:
        violations.append("s* > 0")
    if s + c - b <= 0:
        violations.append("s* + 1/q - 1/p1 > 0")
    if s + a - b <= 0:
        violations.append("s* + 1/p0 - 1/p1 > 0")
    if mu + al + g * (a - b) <= 0:
        violations.append("mu* + alpha* + gamma*/p0 - gamma*/p1 > 0")
    if mu + al <= 0:
        violations.append("mu* + alpha* > 0")
    if a <= c and al + g * (a - c) <= 0:
        violations.append("alpha* > gamma*/q - gamma*/p0 (p0 >= q)")
    if ((a >= c and b >= c) or (a > c and b < c)) and al * (s + c - b) <= mu * (a - c):
        violations.append("alpha*(s* + 1/q - 1/p1) > mu*(1/p0 - 1/q) (p0 <= q)")

    if isinstance(params, ConcreteParams):
        p = params
        if p.beta + p.sigma <= 0:
            violations.append("beta + sigma > 0")
        if p.beta + p.sigma + p.d * (a - b) <= 0:
            violations.append("beta + sigma + d/p0 - d/p1 > 0")
        if Fraction(p.r, p.d) + min(c, a) - b <= 0:
            violations.append("r/d + min(1/q, 1/p0) - 1/p1 > 0")
        try:
            tilde, hat = theta_pair(pa)
        except DegenerateDenominator:
            violations.append("denominator nonzero")
        else:
            if a <= c and tilde <= 0:
                violations.append("theta_tilde > 0 (p0 >= q)")
            if a > c and hat <= 0:
                violations.append("theta_hat > 0 (p0 < q)")
    return violations


# ---------------------------------------------------------------------------
# Lower-bound constructions: exponent set
# ---------------------------------------------------------------------------

# Construction labels.  Each names a finite-dimensional block recipe:
#   p1-block@x     single level t = t0, block dimension ~ n^x, p1-ball inside
#   balanced@x     level where both radii coincide, dimension ~ n^x
#   crossed@x      level where the rescaled radii cross, dimension ~ n^x
#   euclidean-sec  round section k B_2 inside both constraint balls
#   kolm           comparison with the Kolmogorov-width lower bound
P1_BLOCK = "p1-block@{}"
BALANCED = "balanced@{}"
CROSSED = "crossed@{}"
EUCLIDEAN = "euclidean-section"
KOLM = "kolm"


def _width_slope(inv_p: Fraction, c: Fraction, x: Fraction) -> Fraction:
    """log_n slope of the two-sided order of lambda_n(B_p^N, l_q^N) with
    N ~ n^x: exact (N-n)^{1/q-1/p} for q <= p, the Gluskin order for
    p < 2 < q, and 1 otherwise."""
    if c >= inv_p:
        return x * (c - inv_p)
    if c >= HALF or inv_p <= HALF:
        return ZERO
    return min(ZERO, x * max(c, ONE - inv_p) - HALF)


def _construction_list(case: CaseId, pa: AbstractParams):
    """(label, scale x, anchor, side) per construction applicable to the case.

    anchor is one of 't0' (single level), 'mt' (radii-equal line), 'mtil'
    (rescaled-cross line), 'msec' (section line).  side picks which
    constraint ball carries the width factor.
    """
    a, b, c = pa.a, pa.b, pa.c
    hq = ONE / (2 * c)
    h0 = _half_dual(a)
    h1 = _half_dual(b)
    m = case.major
    out = [(P1_BLOCK.format("n"), ONE, "t0", "p1")]
    if m in (1, 2, 4):
        out.append((KOLM, ONE, "kolm", "p1"))
    if m in (2, 3, 4):
        out.append((BALANCED.format("n"), ONE, "mt", "auto"))
    if m == 5:
        out.append((P1_BLOCK.format("q/2"), hq, "t0", "p1"))
        out.append((BALANCED.format("n"), ONE, "mt", "auto"))
        out.append((BALANCED.format("q/2"), hq, "mt", "auto"))
    if m in (6, 8, 9, 11):
        out.append((P1_BLOCK.format("p1'/2"), h1, "t0", "p1"))
    if m in (6, 8, 9):
        out.append((CROSSED.format("n"), ONE, "mtil", "p1"))
        out.append((CROSSED.format("p1'/2"), h1, "mtil", "p1"))
    if m in (7, 10):
        out.append((P1_BLOCK.format("p1'/2" if m == 7 else "q/2"),
                    h1 if m == 7 else hq, "t0", "p1"))
        out.append((CROSSED.format("n"), ONE, "mtil", "p0"))
        out.append((CROSSED.format("p0'/2"), h0, "mtil", "p0"))
    if m == 8:
        out.append((CROSSED.format("p0'/2"), h0, "mtil", "p0"))
    if m in (6, 8, 12):
        out.append((BALANCED.format("p0'/2"), h0, "mt", "p0"))
    if m in (7, 8, 11):
        out.append((BALANCED.format("p1'/2"), h1, "mt", "p1"))
    if m in (9, 10):
        out.append((BALANCED.format("n"), ONE, "mt", "auto"))
        out.append((BALANCED.format("q/2"), hq, "mt", "auto"))
    if m == 11:
        out.append((EUCLIDEAN, ONE, "msec", "p0"))
    if m == 12:
        out.append((EUCLIDEAN, ONE, "msec", "p1"))
    return out


def _side_inv(pa: AbstractParams, side: str) -> Fraction:
    if side == "auto":
        # Radii agree on the balanced line; the smaller ball (larger 1/p)
        # sits inside the other, and its width drives the value.
        return max(pa.a, pa.b)
    return pa.b if side == "p1" else pa.a


def _radius_slope(pa: AbstractParams, anchor: str, side: str, x: Fraction) -> Fraction:
    """Exact log_n slope of the scaling radius at the anchor line with block
    dimension ~ n^x (positive value e means radius ~ n^-e)."""
    tilde, hat = theta_pair(pa)
    a, b, s = pa.a, pa.b, pa.s_star
    if anchor == "t0":
        return x * (s + pa.c - b)
    if anchor == "mt":
        return x * hat
    if anchor == "mtil":
        if side == "p1":
            return x * (hat + (a - b) * (ONE - tilde / s))
        return x * (hat + (b - a) * tilde / s)
    if anchor == "msec":
        if side == "p0":   # round section bounded below by the p0 radius
            return hat + (b - HALF) * tilde / s
        return hat + (a - HALF) * (ONE - tilde / s)
    raise AssertionError(anchor)


def lower_bound_set(params: Params) -> list[tuple[str, Fraction]]:
    """Every lower-bound exponent the constructions of the covered case
    produce, labelled.  As a set the exponents equal the theta table."""
    pa = _abstract(params)
    case = classify(pa.inv_p0, pa.inv_p1, pa.inv_q)
    if not case.covered:
        raise UncoveredCase(case.uncovered_gap)
    tilde, _ = theta_pair(pa)
    out = []
    for label, x, anchor, side in _construction_list(case, pa):
        if anchor == "kolm":
            out.append((label, tilde))
            continue
        inv = _side_inv(pa, side)
        if anchor == "msec":
            inv = HALF  # the width is taken through the round section
        theta = _radius_slope(pa, anchor, side, x) - _width_slope(inv, pa.c, x)
        out.append((label, theta))
    return out


# ---------------------------------------------------------------------------
# Residual identities
# ---------------------------------------------------------------------------

IDENTITY_LABELS = ("I1", "I2", "I3", "I4")


def identity_suite(params: Params, perturb_theta_hat: Fraction = ZERO) -> list[Fraction]:
    """Left-minus-right residuals of the four per-peak exponent identities.

    All four are exact rational identities for every admissible tuple, so
    every residual must be exactly 0.  ``perturb_theta_hat`` shifts theta_hat
    on the right-hand sides only (negative control for the test harness).
    """
    pa = _abstract(params)
    a, b, c, s = pa.a, pa.b, pa.c, pa.s_star
    g, mu, al = pa.gamma_star, pa.mu_star, pa.alpha_star
    D = pa.denom
    if D == 0 or s == 0:
        raise DegenerateDenominator("identity denominators vanish")
    tilde, hat = theta_pair(pa)
    hat = hat + Fraction(perturb_theta_hat)
    rel = ONE - tilde / s

    lhs1 = s * (mu + g * (s + c - b)) / D - s - c + b
    rhs1 = -hat - (a - b) * rel

    lhs2 = -s * (al + g * a - g * c) / D - c + a
    rhs2 = -hat - (b - a) * tilde / s

    lhs3 = -(al + g * a - g * c) * (s + a - HALF) / D - c + a
    rhs3 = -hat - (b - HALF) * tilde / s

    lhs4 = (mu + g * (s + c - b)) * (s + HALF - b) / D - s - c + b
    rhs4 = -hat - (a - HALF) * rel

    return [lhs1 - rhs1, lhs2 - rhs2, lhs3 - rhs3, lhs4 - rhs4]


# ---------------------------------------------------------------------------
# Seeded random admissible tuples (shared by tests and the verify suites)
# ---------------------------------------------------------------------------

ALL_CASE_LABELS = ("1", "2", "3", "4", "5", "6a", "6b", "7a", "7b", "8",
                   "9a", "9b", "10a", "10b", "11", "12")

_REGION_SAMPLERS = {
    # label -> callable(rng) -> (a, b, c) inside the open part of the region
    "1": lambda u: _sorted3(u, lambda a, b, c: a <= c and b <= c),
    "2": lambda u: _sorted3(u, lambda a, b, c: a < c and b > c and (c >= HALF or b <= HALF)),
    "3": lambda u: _sorted3(u, lambda a, b, c: a >= c and b >= c
                            and (c >= HALF or (a <= HALF and b <= HALF))),
    "4": lambda u: _sorted3(u, lambda a, b, c: b < c and a > c and (c >= HALF or a <= HALF)),
    "5": lambda u: _sorted3(u, lambda a, b, c: c < HALF <= min(a, b) and a + c >= 1 and b + c >= 1),
    "6a": lambda u: _sorted3(u, lambda a, b, c: c < HALF < b < a and a + c <= 1),
    "6b": lambda u: _sorted3(u, lambda a, b, c: c < HALF == b < a and a + c <= 1),
    "7a": lambda u: _sorted3(u, lambda a, b, c: c < HALF < a < b and b + c <= 1),
    "7b": lambda u: _sorted3(u, lambda a, b, c: c < HALF == a < b and b + c <= 1),
    "8": lambda u: _sorted3(u, lambda a, b, c: c < HALF < a == b and a + c <= 1),
    "9a": lambda u: _sorted3(u, lambda a, b, c: c < HALF < b < a and a + c > 1 and b + c < 1),
    "9b": lambda u: _sorted3(u, lambda a, b, c: c < HALF == b < a and a + c > 1),
    "10a": lambda u: _sorted3(u, lambda a, b, c: c < HALF < a < b and a + c < 1 and b + c > 1),
    "10b": lambda u: _sorted3(u, lambda a, b, c: c < HALF == a < b and b + c > 1),
    "11": lambda u: _sorted3(u, lambda a, b, c: c <= a < HALF < b and b + c <= 1),
    "12": lambda u: _sorted3(u, lambda a, b, c: c <= b < HALF < a and a + c <= 1),
}


def _sorted3(rng: random.Random, pred) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    den = rng.choice((8, 12, 16, 20, 24))
    a = Fraction(rng.randrange(0, den), den)
    b = Fraction(rng.randrange(0, den), den)
    c = Fraction(rng.randrange(1, den), den)
    return (a, b, c) if pred(a, b, c) else None


def breakpoint_degenerate(params: Params) -> bool:
    """True when the case's crossing line is parallel to the block grid, a
    measure-zero configuration the closed-form breakpoint solver rejects.

    Hypotheses do not exclude it: the affected denominators are
    s* + 1/p0 - 1 (cases 7, 8, 11) and (1-lam)(s* + 1/p0 - 1/p1) - 1/q
    (case 10)."""
    pa = _abstract(params)
    case = classify(pa.inv_p0, pa.inv_p1, pa.inv_q)
    if not case.covered:
        return False
    if case.major in (7, 8, 11):
        return pa.s_star + pa.a - 1 == 0
    if case.major == 10:
        lam = (ONE - pa.c - pa.b) / (pa.a - pa.b)
        return (ONE - lam) * (pa.s_star + pa.a - pa.b) - pa.c == 0
    return False


def random_admissible(rng: random.Random, case_label: Optional[str] = None,
                      max_tries: int = 4000) -> AbstractParams:
    """Sample an abstract tuple passing every hypothesis, optionally pinned
    to one case label.  Rejection sampling over small-denominator rationals;
    deterministic given the Random instance.  Degenerate breakpoint
    configurations are resampled."""
    labels = ALL_CASE_LABELS if case_label is None else (case_label,)
    for _ in range(max_tries):
        label = rng.choice(labels)
        abc = _REGION_SAMPLERS[label](rng)
        if abc is None:
            continue
        a, b, c = abc
        case = classify(Extended(a), Extended(b), c)
        if case.label != label:
            continue
        s = Fraction(rng.randrange(1, 9), rng.choice((1, 2, 4)))
        if s + min(a, c) - b <= 0:
            continue
        g = Fraction(rng.randrange(1, 5), rng.choice((1, 2)))
        mu = Fraction(rng.randrange(-4, 9), 2)
        al = Fraction(rng.randrange(-4, 13), 2)
        pa = AbstractParams(inv_p0=Extended(a), inv_p1=Extended(b), inv_q=c,
                            s_star=s, gamma_star=g, mu_star=mu, alpha_star=al,
                            k_star=rng.choice((1, 1, 2)))
        if check_hypotheses(pa) or breakpoint_degenerate(pa):
            continue
        return pa
    raise RuntimeError(f"could not sample an admissible tuple for {case_label!r}")

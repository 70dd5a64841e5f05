"""Linear widths of finite-dimensional balls and intersection bodies.

Three sources of values:

* the exact Pietsch/Stesin formula lambda_n(B_p^N, l_q^N) = (N-n)^{1/q-1/p}
  for 1 <= q <= p <= infinity,
* Gluskin's two-sided order bounds for p < 2 < q (and the trivially flat
  regimes p <= q <= 2 and 2 <= p <= q), with every hidden constant set to 1
  since downstream consumers only fit slopes,
* a brute-force minimax oracle over rank-constrained linear maps, usable
  when the source ball has finitely many extreme points (p = 1 or infinity).

``WBody`` is a dyadic intersection block: sequences constrained in both the
l_{p1} and the l_{p0} norm, with dimension about c^{-1} 2^{gamma* k* t} 2^m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog, minimize

from .errors import BudgetExceeded, OutOfRange, RegimeUnsupported, UnsupportedSource
from .params import HALF, ONE, ZERO, Extended

EXACT = "exact"
GLUSKIN_ORDER = "gluskin_order"
ENVELOPE_ONLY = "envelope_only"


@dataclass(frozen=True)
class BallSpec:
    inv_p: Extended
    inv_q: Extended
    dim_N: int
    rank_n: int

    def __post_init__(self):
        if self.dim_N < 1:
            raise ValueError("dim_N must be >= 1")
        if not (0 <= self.rank_n <= self.dim_N):
            raise ValueError("need 0 <= rank_n <= dim_N")


@dataclass(frozen=True)
class WidthEstimate:
    value: float
    regime: str
    formula_tag: str


@dataclass(frozen=True)
class WBody:
    """Intersection block: radius_p1 B_{p1} cap radius_p0 B_{p0} in dimension
    dim_nu.  Carries its own exponents so envelopes can be evaluated without
    reaching back to the generating parameters."""

    level_t: int
    level_m: int
    radius_p1: float
    radius_p0: float
    dim_nu: int
    inv_p0: Fraction
    inv_p1: Fraction

    def __post_init__(self):
        if self.radius_p1 <= 0 or self.radius_p0 <= 0:
            raise ValueError("both radii must be positive")
        if self.dim_nu < 1:
            raise ValueError("dim_nu must be >= 1")


# ---------------------------------------------------------------------------
# Order formulas
# ---------------------------------------------------------------------------

def exact_linear_width(spec: BallSpec) -> WidthEstimate:
    """(N - n)^{1/q - 1/p} for q <= p; exact, constants included."""
    p_inv, q_inv = spec.inv_p.value, spec.inv_q.value
    if q_inv < p_inv:
        raise RegimeUnsupported("exact formula needs q <= p")
    if spec.rank_n >= spec.dim_N:
        return WidthEstimate(0.0, EXACT, "rank_cover")
    value = float(spec.dim_N - spec.rank_n) ** float(q_inv - p_inv)
    return WidthEstimate(value, EXACT, "pietsch_stesin")


def gluskin_envelope(spec: BallSpec) -> WidthEstimate:
    """Order value of lambda_n(B_p^N, l_q^N) for p <= q, constant 1.

    For p < 2 < q (excluding (p, q) = (1, inf)) the order is
    min(1, n^{-1/2} N^{max(1/q, 1/p')}); for p <= q <= 2 and 2 <= p <= q it
    is flat.  The two-sided form needs n <= N/2; as an upper estimate the
    same expression is valid for all n <= N.
    """
    p_inv, q_inv = spec.inv_p.value, spec.inv_q.value
    if p_inv < q_inv:
        raise RegimeUnsupported("q < p: use exact_linear_width")
    if spec.rank_n >= spec.dim_N:
        return WidthEstimate(0.0, GLUSKIN_ORDER, "rank_cover")
    if q_inv >= HALF or p_inv <= HALF:
        return WidthEstimate(1.0, GLUSKIN_ORDER, "gluskin_flat")
    if p_inv == ONE and q_inv == ZERO:
        raise RegimeUnsupported("(p, q) = (1, inf) has no two-sided order formula")
    if spec.rank_n == 0:
        return WidthEstimate(1.0, GLUSKIN_ORDER, "gluskin_ln")
    exp_n = float(max(q_inv, ONE - p_inv))
    value = min(1.0, spec.rank_n ** -0.5 * spec.dim_N ** exp_n)
    return WidthEstimate(value, GLUSKIN_ORDER, "gluskin_ln")


def width_value(inv_p: Fraction, inv_q: Fraction, dim_N: float, rank: float) -> float:
    """Upper order envelope for lambda_rank(B_p^N, l_q^N), constant 1.

    Accepts real-valued dimension and rank (dyadic block bookkeeping keeps
    both real until the final rounding); rank >= dim annihilates the block.
    Dispatches to the exact formula for q <= p and the Gluskin order
    otherwise.
    """
    if rank >= dim_N:
        return 0.0
    if inv_q >= inv_p:
        return float(dim_N - rank) ** float(inv_q - inv_p)
    if inv_q >= HALF or inv_p <= HALF:
        return 1.0
    if rank <= 0:
        return 1.0
    return min(1.0, rank ** -0.5 * dim_N ** float(max(inv_q, ONE - inv_p)))


def interp_lambda(inv_p0: Fraction, inv_p1: Fraction, inv_q: Fraction) -> Fraction:
    """The weight lam in 1/q' = (1-lam)/p1 + lam/p0, required to be in (0,1)."""
    q_dual = ONE - Fraction(inv_q)
    a, b = Fraction(inv_p0), Fraction(inv_p1)
    if a == b:
        raise OutOfRange("p0 = p1 admits no interpolation weight")
    lam = (q_dual - b) / (a - b)
    if not (ZERO < lam < ONE):
        raise OutOfRange(f"1/q' = {q_dual} not strictly between 1/p1 and 1/p0")
    return lam


def intersection_width_envelope(body: WBody, inv_q: Fraction, rank: int) -> WidthEstimate:
    """Minimum of the single-ball envelopes and, when the dual index sits
    strictly between the two constraints, the interpolated ball envelope.

    The interpolated radius is radius_p1^{1-lam} radius_p0^{lam}; Hoelder
    gives the inclusion of the block into that multiple of B_{q'}.
    """
    if rank > body.dim_nu:
        raise ValueError("rank exceeds block dimension")
    c = Fraction(inv_q)
    candidates = [
        (body.radius_p1 * width_value(body.inv_p1, c, body.dim_nu, rank), "p1_ball"),
        (body.radius_p0 * width_value(body.inv_p0, c, body.dim_nu, rank), "p0_ball"),
    ]
    try:
        lam = interp_lambda(body.inv_p0, body.inv_p1, c)
    except OutOfRange:
        pass
    else:
        radius = body.radius_p1 ** float(ONE - lam) * body.radius_p0 ** float(lam)
        candidates.append(
            (radius * width_value(ONE - c, c, body.dim_nu, rank), "interp_ball"))
    value, tag = min(candidates, key=lambda vc: vc[0])
    return WidthEstimate(value, ENVELOPE_ONLY, tag)


# ---------------------------------------------------------------------------
# Brute-force minimax oracle
# ---------------------------------------------------------------------------

def _extreme_points(inv_p: Fraction, dim_N: int) -> np.ndarray:
    if inv_p == ZERO:          # p = inf: sign vectors, first coordinate fixed
        if dim_N > 12:
            raise ValueError("p = inf oracle limited to N <= 12")
        pts = np.array(list(itertools.product((-1.0, 1.0), repeat=dim_N - 1)))
        return np.hstack([np.ones((len(pts), 1)), pts]) if dim_N > 1 else np.ones((1, 1))
    if inv_p == ONE:           # p = 1: coordinate vectors
        if dim_N > 64:
            raise ValueError("p = 1 oracle limited to N <= 64")
        return np.eye(dim_N)
    raise UnsupportedSource("extreme-point oracle needs p in {1, inf}")


def _qnorm(r: np.ndarray, inv_q: Fraction) -> float:
    if inv_q == ZERO:
        return float(np.max(np.abs(r)))
    q = float(1 / inv_q)
    return float(np.sum(np.abs(r) ** q) ** (1.0 / q))


def _objective(A: np.ndarray, pts: np.ndarray, inv_q: Fraction) -> float:
    res = pts - pts @ A.T
    return max(_qnorm(row, inv_q) for row in res)


def _solve_minmax(mats: np.ndarray, rhs: np.ndarray, inv_q: Fraction,
                  w0: np.ndarray) -> np.ndarray:
    """argmin_w max_j || rhs_j - mats_j w ||_q.  Convex: LP for q in {1, inf},
    smooth epigraph programme otherwise."""
    J, N, d = mats.shape
    if inv_q in (ZERO, ONE):
        # variables: w (d), slacks e (J*N), s
        n_var = d + J * N + 1
        cvec = np.zeros(n_var)
        cvec[-1] = 1.0
        rows, cols, vals, b_ub = [], [], [], []
        row = 0
        for j in range(J):
            for i in range(N):
                # +/- (rhs - M w)_ji <= e_ji
                for sign in (1.0, -1.0):
                    for k in range(d):
                        rows.append(row); cols.append(k); vals.append(-sign * mats[j, i, k])
                    rows.append(row); cols.append(d + j * N + i); vals.append(-1.0)
                    b_ub.append(-sign * rhs[j, i])
                    row += 1
        if inv_q == ONE:       # q = 1: sum_i e_ji <= s
            for j in range(J):
                for i in range(N):
                    rows.append(row); cols.append(d + j * N + i); vals.append(1.0)
                rows.append(row); cols.append(n_var - 1); vals.append(-1.0)
                b_ub.append(0.0)
                row += 1
        else:                  # q = inf: e_ji <= s
            for j in range(J):
                for i in range(N):
                    rows.append(row); cols.append(d + j * N + i); vals.append(1.0)
                    rows.append(row); cols.append(n_var - 1); vals.append(-1.0)
                    b_ub.append(0.0)
                    row += 1
        A_ub = np.zeros((row, n_var))
        A_ub[rows, cols] = vals
        res = linprog(cvec, A_ub=A_ub, b_ub=np.array(b_ub),
                      bounds=[(None, None)] * n_var, method="highs")
        if not res.success:
            return w0
        return res.x[:d]

    # smooth q: min s subject to ||rhs_j - M_j w||_q^q <= s
    q = float(1 / inv_q)

    def resid(w):
        return rhs - np.einsum("jik,k->ji", mats, w)

    def cons_f(z):
        r = resid(z[:d])
        return z[-1] - np.sum(np.abs(r) ** q, axis=1)

    def cons_jac(z):
        r = resid(z[:d])
        grad_r = q * np.abs(r) ** (q - 1) * np.sign(r)      # (J, N)
        jac = np.zeros((len(r), d + 1))
        jac[:, :d] = np.einsum("ji,jik->jk", grad_r, mats)  # -d/dw of -||.||
        jac[:, -1] = 1.0
        return jac

    r0 = resid(w0)
    s0 = float(np.max(np.sum(np.abs(r0) ** q, axis=1))) + 1e-9
    z0 = np.concatenate([w0, [s0]])
    res = minimize(lambda z: z[-1], z0, jac=lambda z: np.eye(len(z0))[-1],
                   constraints=[{"type": "ineq", "fun": cons_f, "jac": cons_jac}],
                   method="SLSQP", options={"maxiter": 120, "ftol": 1e-12})
    return res.x[:d] if res.success else w0


def _u_step(pts, V, inv_q):
    Y = pts @ V                                # (J, n)
    N, n = pts.shape[1], V.shape[1]
    mats = np.zeros((len(pts), N, N * n))
    for j in range(len(pts)):
        mats[j] = np.kron(np.eye(N), Y[j][None, :])   # row-major U.flatten()
    u = _solve_minmax(mats, pts, inv_q, np.zeros(N * n))
    return u.reshape(N, n)


def _v_step(pts, U, inv_q):
    N, n = U.shape
    mats = np.zeros((len(pts), N, N * n))
    for j in range(len(pts)):
        mats[j] = np.kron(pts[j][None, :], U)  # (V flattened row-major: V[i,k])
    v = _solve_minmax(mats, pts, inv_q, np.zeros(N * n))
    return v.reshape(N, n)


def brute_force_linear_width(spec: BallSpec, budget: int = 512,
                             restarts: int = 8, seed: int = 0,
                             rel_tol: float = 1e-8) -> float:
    """Search upper bound on lambda_n(B_p^N, l_q^N) for p in {1, inf}.

    Minimises max over the extreme points of B_p of the l_q residual of a
    rank-n map A = U V^T by alternating convex solves in U and V, from one
    coordinate-subspace start plus random starts.  ``budget`` caps the total
    number of alternation sweeps; if it runs out before any start converges
    the best value so far is raised inside BudgetExceeded.
    """
    if spec.inv_p.value not in (ZERO, ONE):
        raise UnsupportedSource("brute force needs p = 1 or p = inf")
    pts = _extreme_points(spec.inv_p.value, spec.dim_N)
    N, n = spec.dim_N, spec.rank_n
    inv_q = spec.inv_q.value
    if n == 0:
        return max(_qnorm(row, inv_q) for row in pts)
    if n >= N:
        return 0.0

    rng = np.random.default_rng(seed)
    best = math.inf
    sweeps_left = budget
    converged_once = False
    for restart in range(restarts):
        if restart == 0:
            V = np.eye(N)[:, :n]               # coordinate-subspace start
        else:
            V = rng.standard_normal((N, n))
            V, _ = np.linalg.qr(V)
        U = V.copy()
        prev = _objective(U @ V.T, pts, inv_q)
        best = min(best, prev)
        for _ in range(40):
            if sweeps_left <= 0:
                if converged_once:
                    return best
                raise BudgetExceeded(best)
            sweeps_left -= 1
            U = _u_step(pts, V, inv_q)
            V = _v_step(pts, U, inv_q)
            cur = _objective(U @ V.T, pts, inv_q)
            best = min(best, cur)
            if abs(prev - cur) <= rel_tol * max(1.0, abs(prev)):
                converged_once = True
                break
            prev = cur
        else:
            converged_once = True              # hit the sweep cap: accept
    return best

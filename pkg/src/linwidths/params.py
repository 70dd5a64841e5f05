"""Parameter tuples, exact-rational exponent handling, and params-file I/O.

All Lebesgue exponents are stored as their reciprocals (``Extended``), so
p = infinity is the ordinary rational 0 and every case boundary is decidable
in exact arithmetic.  Two tuple kinds exist:

* ``ConcreteParams``: derivative order r, dimension d, the three exponents
  and the three power-weight rates (beta, sigma, lambda_w) on (1+|x|).
* ``AbstractParams``: the discretization-level tuple (s*, gamma*, mu*,
  alpha*, k*, c) that drives the dyadic block machinery directly.

``map_concrete`` in :mod:`linwidths.exponents` converts the first into the
second.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b', 'a', or a decimal string into an exact Fraction."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


@dataclass(frozen=True, order=True)
class Extended:
    """Reciprocal 1/p of an exponent p in [1, inf]; value 0 encodes p = inf.

    The classification layer additionally requires value < 1 (p > 1); the
    finite-dimensional ball layer admits p = 1 as well, so the type itself
    only enforces 0 <= value <= 1.
    """

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if not (ZERO <= v <= ONE):
            raise ValueError(f"reciprocal exponent {v} outside [0, 1]")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_exponent(cls, p: Union[str, int, float, Fraction]) -> "Extended":
        """Build from the exponent itself ('inf', '4/3', 2, ...)."""
        if isinstance(p, str):
            if p.strip().lower() in ("inf", "infinity", "oo"):
                return cls(ZERO)
            p = parse_rational(p)
        p = Fraction(p)
        if p < 1:
            raise ValueError(f"exponent {p} < 1")
        return cls(ONE / p)

    @property
    def is_infinite(self) -> bool:
        return self.value == 0

    def dual(self) -> "Extended":
        """Reciprocal of the dual exponent: 1/p' = 1 - 1/p."""
        return Extended(ONE - self.value)

    def exponent_str(self) -> str:
        return "inf" if self.is_infinite else format_rational(ONE / self.value)


def _as_inv(x) -> Fraction:
    return x.value if isinstance(x, Extended) else Fraction(x)


@dataclass(frozen=True)
class ConcreteParams:
    """Weighted Sobolev tuple on R^d with power weights (1+|x|)^m."""

    r: int
    d: int
    inv_p0: Extended
    inv_p1: Extended
    inv_q: Fraction
    beta: Fraction
    sigma: Fraction
    lambda_w: Fraction

    def __post_init__(self):
        if self.r < 1 or self.d < 1:
            raise ValueError("r and d must be positive integers")
        for name in ("inv_q", "beta", "sigma", "lambda_w"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (ZERO < self.inv_q < ONE):
            raise ValueError("q must be finite with 1 < q < inf")
        if self.inv_p0.value >= 1 or self.inv_p1.value >= 1:
            raise ValueError("p0, p1 must satisfy p > 1")


@dataclass(frozen=True)
class AbstractParams:
    """Dyadic discretization tuple driving blocks W_{t,m} of dimension
    about c^{-1} 2^{gamma* k* t} 2^m."""

    inv_p0: Extended
    inv_p1: Extended
    inv_q: Fraction
    s_star: Fraction
    gamma_star: Fraction
    mu_star: Fraction
    alpha_star: Fraction
    k_star: int = 1
    c_const: Fraction = ONE
    t0: int = 0

    def __post_init__(self):
        for name in ("inv_q", "s_star", "gamma_star", "mu_star", "alpha_star", "c_const"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (ZERO < self.inv_q < ONE):
            raise ValueError("q must be finite with 1 < q < inf")
        if self.inv_p0.value >= 1 or self.inv_p1.value >= 1:
            raise ValueError("p0, p1 must satisfy p > 1")
        if self.s_star <= 0 or self.gamma_star <= 0:
            raise ValueError("s* and gamma* must be positive")
        if self.k_star < 1:
            raise ValueError("k* must be a positive integer")
        if self.c_const < 1:
            raise ValueError("c must be >= 1")
        if self.t0 < 0:
            raise ValueError("t0 must be nonnegative")

    # Short accessors used heavily by the exponent algebra.
    @property
    def a(self) -> Fraction:
        return self.inv_p0.value

    @property
    def b(self) -> Fraction:
        return self.inv_p1.value

    @property
    def c(self) -> Fraction:
        return self.inv_q

    @property
    def denom(self) -> Fraction:
        """mu* + alpha* + gamma*(s* + 1/p0 - 1/p1), the common denominator."""
        return self.mu_star + self.alpha_star + self.gamma_star * (self.s_star + self.a - self.b)


Params = Union[ConcreteParams, AbstractParams]


# ---------------------------------------------------------------------------
# Params-file format: UTF-8 "key = value" lines, '#' comments.  Rationals are
# written as integer/integer strings, p0/p1 may be "inf".
# ---------------------------------------------------------------------------

CONCRETE_KEYS = {"r", "d", "p0", "p1", "q", "beta", "sigma", "lambda"}
ABSTRACT_KEYS = {"p0", "p1", "q", "s_star", "gamma_star", "mu_star", "alpha_star", "k_star"}
_OPTIONAL_ABSTRACT = {"c_const", "t0"}


def parse_params_text(text: str) -> Params:
    """Parse a params file body into exactly one of the two tuple kinds."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value

    keys = set(entries)
    if keys == CONCRETE_KEYS:
        return ConcreteParams(
            r=int(entries["r"]),
            d=int(entries["d"]),
            inv_p0=Extended.from_exponent(entries["p0"]),
            inv_p1=Extended.from_exponent(entries["p1"]),
            inv_q=_finite_inv_q(entries["q"]),
            beta=parse_rational(entries["beta"]),
            sigma=parse_rational(entries["sigma"]),
            lambda_w=parse_rational(entries["lambda"]),
        )
    if ABSTRACT_KEYS <= keys and keys <= ABSTRACT_KEYS | _OPTIONAL_ABSTRACT:
        return AbstractParams(
            inv_p0=Extended.from_exponent(entries["p0"]),
            inv_p1=Extended.from_exponent(entries["p1"]),
            inv_q=_finite_inv_q(entries["q"]),
            s_star=parse_rational(entries["s_star"]),
            gamma_star=parse_rational(entries["gamma_star"]),
            mu_star=parse_rational(entries["mu_star"]),
            alpha_star=parse_rational(entries["alpha_star"]),
            k_star=int(entries["k_star"]),
            c_const=parse_rational(entries.get("c_const", "1")),
            t0=int(entries.get("t0", "0")),
        )
    raise ValueError(
        "params file must carry exactly the concrete keys "
        f"{sorted(CONCRETE_KEYS)} or the abstract keys {sorted(ABSTRACT_KEYS)}"
        f" (optionally {sorted(_OPTIONAL_ABSTRACT)}); got {sorted(keys)}"
    )


def _finite_inv_q(text: str) -> Fraction:
    ext = Extended.from_exponent(text)
    if ext.is_infinite:
        raise ValueError("q must be finite")
    return ext.value


def format_params_text(params: Params) -> str:
    """Inverse of :func:`parse_params_text` (canonical key order)."""
    if isinstance(params, ConcreteParams):
        lines = [
            f"r = {params.r}",
            f"d = {params.d}",
            f"p0 = {params.inv_p0.exponent_str()}",
            f"p1 = {params.inv_p1.exponent_str()}",
            f"q = {format_rational(ONE / params.inv_q)}",
            f"beta = {format_rational(params.beta)}",
            f"sigma = {format_rational(params.sigma)}",
            f"lambda = {format_rational(params.lambda_w)}",
        ]
    else:
        lines = [
            f"p0 = {params.inv_p0.exponent_str()}",
            f"p1 = {params.inv_p1.exponent_str()}",
            f"q = {format_rational(ONE / params.inv_q)}",
            f"s_star = {format_rational(params.s_star)}",
            f"gamma_star = {format_rational(params.gamma_star)}",
            f"mu_star = {format_rational(params.mu_star)}",
            f"alpha_star = {format_rational(params.alpha_star)}",
            f"k_star = {params.k_star}",
        ]
        if params.c_const != 1:
            lines.append(f"c_const = {format_rational(params.c_const)}")
        if params.t0:
            lines.append(f"t0 = {params.t0}")
    return "\n".join(lines) + "\n"

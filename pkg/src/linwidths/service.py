"""FastAPI surface over the exponent and simulation library.

Rationals cross the wire as "a/b" strings ("inf" for an infinite exponent)
so exactness survives the round trip; floats appear only in result fields
that are inherently approximate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .ballwidths import BallSpec, brute_force_linear_width, exact_linear_width, gluskin_envelope
from .discretization import fit_exponent, lower_bound_probe
from .errors import (AmbiguousDominance, DegenerateDenominator, LinWidthsError,
                     RegimeUnsupported, UncoveredCase, UnsupportedSource)
from .exponents import (check_hypotheses, classify, lower_bound_set, theta_formulas,
                        theta_table)
from .params import (AbstractParams, ConcreteParams, Extended, format_rational,
                     parse_rational)
from .verify import run_all

app = FastAPI(title="linwidths", version=__version__)


class ParamsPayload(BaseModel):
    kind: Literal["concrete", "abstract"]
    p0: str
    p1: str
    q: str
    r: Optional[int] = None
    d: Optional[int] = None
    beta: Optional[str] = None
    sigma: Optional[str] = None
    lambda_w: Optional[str] = Field(None, alias="lambda")
    s_star: Optional[str] = None
    gamma_star: Optional[str] = None
    mu_star: Optional[str] = None
    alpha_star: Optional[str] = None
    k_star: int = 1
    c_const: str = "1"
    t0: int = 0

    model_config = {"populate_by_name": True}

    def to_params(self):
        try:
            inv_p0 = Extended.from_exponent(self.p0)
            inv_p1 = Extended.from_exponent(self.p1)
            inv_q = Extended.from_exponent(self.q)
            if inv_q.is_infinite:
                raise ValueError("q must be finite")
            if self.kind == "concrete":
                missing = [k for k in ("r", "d", "beta", "sigma", "lambda_w")
                           if getattr(self, k) is None]
                if missing:
                    raise ValueError(f"concrete params missing {missing}")
                return ConcreteParams(
                    r=self.r, d=self.d, inv_p0=inv_p0, inv_p1=inv_p1,
                    inv_q=inv_q.value, beta=parse_rational(self.beta),
                    sigma=parse_rational(self.sigma),
                    lambda_w=parse_rational(self.lambda_w))
            missing = [k for k in ("s_star", "gamma_star", "mu_star", "alpha_star")
                       if getattr(self, k) is None]
            if missing:
                raise ValueError(f"abstract params missing {missing}")
            return AbstractParams(
                inv_p0=inv_p0, inv_p1=inv_p1, inv_q=inv_q.value,
                s_star=parse_rational(self.s_star),
                gamma_star=parse_rational(self.gamma_star),
                mu_star=parse_rational(self.mu_star),
                alpha_star=parse_rational(self.alpha_star),
                k_star=self.k_star, c_const=parse_rational(self.c_const),
                t0=self.t0)
        except (ValueError, ZeroDivisionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc


class ClassifyRequest(BaseModel):
    p0: str
    p1: str
    q: str


class ClassifyResponse(BaseModel):
    covered: bool
    label: str
    major: Optional[int]
    sub: Optional[str]
    gap: Optional[str]
    j0: Optional[int]
    formulas: list[str] = []


class ThetaRow(BaseModel):
    j: int
    theta: str
    theta_float: float
    is_dominant: bool
    lower_bound_label: str


class ExponentsResponse(BaseModel):
    covered: bool
    case: str
    j0: Optional[int] = None
    theta_tilde: Optional[str] = None
    theta_hat: Optional[str] = None
    j_star: Optional[int] = None
    gap: Optional[str] = None
    tied_indices: list[int] = []
    tail_exponent: Optional[str] = None
    violations: list[str] = []
    rows: list[ThetaRow] = []


class SimulateRequest(BaseModel):
    params: ParamsPayload
    nmin_log2: int
    nmax_log2: int


class SimulateRow(BaseModel):
    n: int
    S: float
    peaks: dict[str, float]
    max_lower_probe: float


class SimulateResponse(BaseModel):
    case: str
    j0: int
    rows: list[SimulateRow]
    fitted_slope: float
    predicted: float
    residual: float
    eps: float


class BallwidthRequest(BaseModel):
    p: str
    q: str
    N: int
    n: int
    brute_force: bool = False
    seed: int = 0
    restarts: int = 8
    budget: int = 512


class BallwidthResponse(BaseModel):
    value: float
    regime: str
    formula_tag: str
    brute_value: Optional[float] = None
    rel_discrepancy: Optional[float] = None


class VerifyRequest(BaseModel):
    seed: int = 0
    perturb: bool = False


class SuiteReport(BaseModel):
    name: str
    passed: bool
    checks: int
    detail: str
    failures: list[str]


class VerifyResponse(BaseModel):
    passed: bool
    seed: int
    suites: list[SuiteReport]


def _domain_error(exc: LinWidthsError) -> HTTPException:
    return HTTPException(status_code=409,
                         detail={"error": type(exc).__name__, "message": str(exc)})


@app.get("/")
def info():
    return {"name": "linwidths", "version": __version__}


@app.post("/classify", response_model=ClassifyResponse)
def classify_endpoint(req: ClassifyRequest) -> ClassifyResponse:
    try:
        inv_p0 = Extended.from_exponent(req.p0)
        inv_p1 = Extended.from_exponent(req.p1)
        inv_q = Extended.from_exponent(req.q)
        if inv_q.is_infinite:
            raise ValueError("q must be finite")
        if inv_p0.value >= 1 or inv_p1.value >= 1:
            raise ValueError("p0, p1 must exceed 1")
        case = classify(inv_p0, inv_p1, inv_q.value)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    if not case.covered:
        return ClassifyResponse(covered=False, label=case.label, major=None,
                                sub=None, gap=case.uncovered_gap, j0=None)
    formulas = list(theta_formulas(case, inv_p0, inv_p1, inv_q.value))
    return ClassifyResponse(covered=True, label=case.label, major=case.major,
                            sub=case.sub, gap=None, j0=len(formulas),
                            formulas=formulas)


@app.post("/exponents", response_model=ExponentsResponse)
def exponents_endpoint(payload: ParamsPayload) -> ExponentsResponse:
    params = payload.to_params()
    violations = check_hypotheses(params)
    try:
        table = theta_table(params)
    except UncoveredCase as exc:
        return ExponentsResponse(covered=False, case=f"gap {exc.gap}",
                                 violations=violations)
    except DegenerateDenominator as exc:
        raise _domain_error(exc) from exc
    labels: dict[Fraction, list[str]] = {}
    for label, exponent in lower_bound_set(params):
        labels.setdefault(exponent, []).append(label)
    rows = [
        ThetaRow(j=j + 1, theta=format_rational(th), theta_float=float(th),
                 is_dominant=(table.j_star == j + 1),
                 lower_bound_label="|".join(labels.get(th, [])))
        for j, th in enumerate(table.thetas)
    ]
    return ExponentsResponse(
        covered=True, case=table.case.label, j0=table.j0,
        theta_tilde=format_rational(table.theta_tilde),
        theta_hat=format_rational(table.theta_hat),
        j_star=table.j_star,
        gap=None if table.gap is None else format_rational(table.gap),
        tied_indices=list(table.tied_indices),
        tail_exponent=None if table.tail_exponent is None
        else format_rational(table.tail_exponent),
        violations=violations, rows=rows)


@app.post("/simulate", response_model=SimulateResponse)
def simulate_endpoint(req: SimulateRequest) -> SimulateResponse:
    params = req.params.to_params()
    if not (2 <= req.nmin_log2 < req.nmax_log2):
        raise HTTPException(status_code=422, detail="need 2 <= nmin_log2 < nmax_log2")
    ns = [2 ** k for k in range(req.nmin_log2, req.nmax_log2 + 1)]
    try:
        case = theta_table(params).case
        sim = fit_exponent(params, ns)
        rows = []
        for n, s_val, peaks in zip(sim.n_grid, sim.S_values, sim.peaks):
            probes = lower_bound_probe(params, case, n)
            rows.append(SimulateRow(
                n=n, S=s_val, peaks={name: value for name, _, value in peaks},
                max_lower_probe=max(p.value for p in probes)))
        return SimulateResponse(case=case.label, j0=len(sim.peaks[0]), rows=rows,
                                fitted_slope=sim.fitted_slope,
                                predicted=sim.predicted, residual=sim.residual,
                                eps=sim.eps)
    except (UncoveredCase, AmbiguousDominance, DegenerateDenominator) as exc:
        raise _domain_error(exc) from exc
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/ballwidth", response_model=BallwidthResponse)
def ballwidth_endpoint(req: BallwidthRequest) -> BallwidthResponse:
    try:
        spec = BallSpec(inv_p=Extended.from_exponent(req.p),
                        inv_q=Extended.from_exponent(req.q),
                        dim_N=req.N, rank_n=req.n)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    try:
        if spec.inv_q.value >= spec.inv_p.value:
            est = exact_linear_width(spec)
        else:
            est = gluskin_envelope(spec)
    except RegimeUnsupported as exc:
        raise _domain_error(exc) from exc
    brute = rel = None
    if req.brute_force:
        try:
            brute = brute_force_linear_width(spec, budget=req.budget,
                                             restarts=req.restarts, seed=req.seed)
        except UnsupportedSource as exc:
            raise _domain_error(exc) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        rel = abs(brute - est.value) / max(est.value, 1e-300)
    return BallwidthResponse(value=est.value, regime=est.regime,
                             formula_tag=est.formula_tag, brute_value=brute,
                             rel_discrepancy=rel)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    suites = run_all(seed=req.seed, perturb=req.perturb)
    return VerifyResponse(passed=all(s.passed for s in suites), seed=req.seed,
                          suites=[SuiteReport(name=s.name, passed=s.passed,
                                              checks=s.checks, detail=s.detail,
                                              failures=s.failures)
                                  for s in suites])

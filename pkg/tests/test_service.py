"""HTTP surface: payload handling, status codes, wire formats."""

import asyncio

import httpx

from linwidths.service import app


def post(path, payload):
    async def call():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://test") as client:
            return await client.post(path, json=payload, timeout=300.0)

    return asyncio.run(call())


def get(path):
    async def call():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://test") as client:
            return await client.get(path)

    return asyncio.run(call())


ABSTRACT_CASE5 = {
    "kind": "abstract", "p0": "4/3", "p1": "4/3", "q": "4",
    "s_star": "2", "gamma_star": "1", "mu_star": "1", "alpha_star": "2",
    "k_star": 1,
}
CONCRETE_CASE5 = {
    "kind": "concrete", "p0": "4/3", "p1": "4/3", "q": "4",
    "r": 2, "d": 1, "beta": "1", "sigma": "2", "lambda": "0",
}


def test_info():
    body = get("/").json()
    assert body["name"] == "linwidths"


def test_classify_covered_gap_and_parse_error():
    ok = post("/classify", {"p0": "3", "p1": "3", "q": "2"})
    assert ok.status_code == 200
    assert ok.json()["label"] == "1" and ok.json()["j0"] == 2

    gap = post("/classify", {"p0": "5", "p1": "3/2", "q": "4"})
    assert gap.status_code == 200
    assert gap.json() == {"covered": False, "label": "gap a", "major": None,
                          "sub": None, "gap": "a", "j0": None, "formulas": []}

    bad = post("/classify", {"p0": "2", "p1": "2", "q": "inf"})
    assert bad.status_code == 422


def test_exponents_concrete_matches_abstract():
    r_abs = post("/exponents", ABSTRACT_CASE5).json()
    r_con = post("/exponents", CONCRETE_CASE5).json()
    assert r_abs["rows"] == r_con["rows"]
    assert r_abs["theta_tilde"] == "1" and r_abs["theta_hat"] == "1/2"
    assert r_abs["j_star"] == 3 and r_abs["gap"] == "1/4"
    dominant = [r for r in r_abs["rows"] if r["is_dominant"]]
    assert len(dominant) == 1 and dominant[0]["theta"] == "3/4"
    assert all(r["lower_bound_label"] for r in r_abs["rows"])


def test_exponents_uncovered_and_violations():
    gap = post("/exponents", dict(ABSTRACT_CASE5, p0="5", p1="3/2"))
    assert gap.status_code == 200 and gap.json()["covered"] is False

    bad = post("/exponents", dict(ABSTRACT_CASE5, mu_star="-9", alpha_star="1"))
    assert bad.status_code == 200
    assert bad.json()["violations"]


def test_ballwidth_endpoint():
    body = post("/ballwidth", {"p": "inf", "q": "1", "N": 3, "n": 1,
                               "brute_force": True}).json()
    assert body["value"] == 2.0 and body["regime"] == "exact"
    assert abs(body["brute_value"] - 2.0) < 1e-6

    refuse = post("/ballwidth", {"p": "1", "q": "inf", "N": 8, "n": 1})
    assert refuse.status_code == 409
    assert refuse.json()["detail"]["error"] == "RegimeUnsupported"


def test_simulate_endpoint_and_ambiguity():
    req = {"params": ABSTRACT_CASE5, "nmin_log2": 10, "nmax_log2": 20}
    body = post("/simulate", req).json()
    assert body["case"] == "5"
    assert abs(body["fitted_slope"] - body["predicted"]) < 0.05
    assert len(body["rows"]) == 11
    assert set(body["rows"][0]["peaks"]) == {"S1", "S2", "S3", "S4"}

    tied = dict(ABSTRACT_CASE5, p0="4", p1="4", q="2",
                s_star="1/3", mu_star="-7/12", alpha_star="1")
    resp = post("/simulate", {"params": tied, "nmin_log2": 10, "nmax_log2": 20})
    assert resp.status_code == 409
    assert resp.json()["detail"]["error"] == "AmbiguousDominance"


def test_verify_endpoint_small_seeded():
    body = post("/verify", {"seed": 3}).json()
    assert body["passed"] is True
    assert {s["name"] for s in body["suites"]} == {
        "identity-sweep", "partition-scan", "breakpoint-identities",
        "ballwidth-oracle"}

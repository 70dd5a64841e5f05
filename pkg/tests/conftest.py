"""Shared fixtures: the worked parameter tuples used across the suite."""

from fractions import Fraction as F

import pytest

from linwidths.params import AbstractParams, ConcreteParams, Extended


def E(x):
    return Extended(F(x))


# Concrete tuples with hand-checked derived rates.
CONCRETE_CASE1 = ConcreteParams(r=2, d=1, inv_p0=E(F(1, 2)), inv_p1=E(F(1, 2)),
                                inv_q=F(1, 2), beta=F(1), sigma=F(1), lambda_w=F(0))
CONCRETE_CASE5 = ConcreteParams(r=2, d=1, inv_p0=E(F(3, 4)), inv_p1=E(F(3, 4)),
                                inv_q=F(1, 4), beta=F(1), sigma=F(2), lambda_w=F(0))

# Representative admissible abstract tuples, one per simulated case, each
# with a dominant-rate margin of at least 0.1.
SIM_TUPLES = {
    "1": AbstractParams(inv_p0=E(F(1, 2)), inv_p1=E(F(1, 2)), inv_q=F(1, 2),
                        s_star=F(2), gamma_star=F(1), mu_star=F(1), alpha_star=F(1)),
    "3": AbstractParams(inv_p0=E(F(3, 4)), inv_p1=E(F(3, 4)), inv_q=F(1, 2),
                        s_star=F(2), gamma_star=F(1), mu_star=F(1), alpha_star=F(2)),
    "5": AbstractParams(inv_p0=E(F(3, 4)), inv_p1=E(F(3, 4)), inv_q=F(1, 4),
                        s_star=F(2), gamma_star=F(1), mu_star=F(1), alpha_star=F(2)),
    "6a": AbstractParams(inv_p0=E(F(3, 4)), inv_p1=E(F(5, 8)), inv_q=F(1, 4),
                         s_star=F(2), gamma_star=F(1), mu_star=F(1), alpha_star=F(3)),
    "9a": AbstractParams(inv_p0=E(F(17, 20)), inv_p1=E(F(3, 5)), inv_q=F(1, 5),
                         s_star=F(2), gamma_star=F(1), mu_star=F(-1), alpha_star=F(11, 2)),
    "11": AbstractParams(inv_p0=E(F(1, 3)), inv_p1=E(F(3, 4)), inv_q=F(1, 4),
                         s_star=F(2), gamma_star=F(1), mu_star=F(1), alpha_star=F(2)),
}


@pytest.fixture(scope="session")
def sim_tuples():
    return SIM_TUPLES

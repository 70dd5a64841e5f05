"""Order exponents and desk-scale numerical verification for linear widths
of intersected weighted Sobolev classes."""

__version__ = "0.1.0"

from .errors import (AmbiguousDominance, BudgetExceeded, DegenerateDenominator,
                     InclusionFailed, LinWidthsError, OutOfRange,
                     RegimeUnsupported, UncoveredCase, UnsupportedSource)
from .params import (AbstractParams, ConcreteParams, Extended,
                     format_params_text, parse_params_text)
from .exponents import (CaseId, ExponentTable, case_thetas, check_hypotheses,
                        classify, identity_suite, lower_bound_set, map_concrete,
                        theta_pair, theta_table)
from .ballwidths import (BallSpec, WBody, WidthEstimate, brute_force_linear_width,
                         exact_linear_width, gluskin_envelope, interp_lambda,
                         intersection_width_envelope, width_value)
from .discretization import (Allocation, Breakpoints, Region, SimResult,
                             build_regions, choose_allocation, evaluate_S,
                             fit_exponent, lower_bound_probe, probe_slope,
                             solve_breakpoints)

__all__ = [name for name in dir() if not name.startswith("_")]

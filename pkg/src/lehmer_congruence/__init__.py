"""Heights of algebraic integers subject to congruence conditions.

Exact resultant and valuation arithmetic, certified Mahler measures, the
explicit lower bounds they feed, and the elliptic-curve analogue.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .bounds import (
    bdm_reference,
    corollary_bound,
    lemma_bound,
    lemma_constant_check,
    samuels_bound,
    shparlinski_eps,
    thm3_bound,
    thm3_optimize,
)
from .delta import DeltaReport, check_delta_threshold, delta, delta_power
from .elliptic import (
    RationalEllipticCurve,
    RationalPoint,
    canonical_height,
    elliptic_delta,
    group_add,
    scalar_mul,
)
from .errors import (
    BadReductionError,
    BoundViolation,
    CyclotomicCollision,
    HypothesisViolation,
    InputError,
    LehmerError,
    PrecisionExhausted,
)
from .fejer import fejer_moment, fejer_sum_at, fejer_weight, verify_fejer_bound, verify_gttheta
from .intpoly import IntPolynomial, divides_mod, has_cyclotomic_root, parse_poly, phi
from .resultant import check_resultant_divisibility, resultant, resultant_with_xn_minus_1
from .roots import MahlerValue, RootEnclosureSet, height_of_root_sum, isolate_roots, mahler

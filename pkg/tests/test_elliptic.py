from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import doubling_height, naive_add

from lehmer_congruence.elliptic import (
    RationalEllipticCurve,
    RationalPoint,
    Transform,
    calibrate_c_e,
    canonical_height,
    corollary6_filter,
    elliptic_delta,
    elliptic_delta_monotonicity_check,
    is_torsion,
    local_filtration_monotone,
    local_height_arch,
    local_height_coefficient,
    local_heights,
    scalar_mul,
    thm5_bound,
    thm5_optimize,
)
from lehmer_congruence.errors import BadReductionError, InputError, TorsionPointError

E37 = RationalEllipticCurve(0, 0, 1, -1, 0)
P37 = RationalPoint(0, 0)
E389 = RationalEllipticCurve(0, 1, 1, -2, 0)
E17 = RationalEllipticCurve(0, 0, 0, 0, 17)
CURVES = [
    (E37, [P37]),
    (E389, [RationalPoint(0, 0), RationalPoint(1, 0)]),
    (E17, [RationalPoint(-2, 3), RationalPoint(-1, 4)]),
]


def _combo(E, gens, coeffs):
    R = RationalPoint()
    for g, c in zip(gens, coeffs):
        R = E.add(R, scalar_mul(E, c, g))
    return R


def test_invariants_37a1():
    assert E37.discriminant == 37
    assert (E37.c4, E37.c6) == (48, -216)
    assert E37.bad_primes() == [37]
    assert E37.is_minimal()


def test_singular_curve_rejected():
    with pytest.raises(InputError):
        RationalEllipticCurve(0, 0, 0, 0, 0)


def test_multiples_37a1():
    expected = [(0, 0), (1, 0), (-1, -1), (2, -3), (Fraction(1, 4), Fraction(-5, 8)), (6, 14)]
    for k, (x, y) in enumerate(expected, start=1):
        assert scalar_mul(E37, k, P37) == RationalPoint(x, y)


@pytest.mark.parametrize("E, gens", CURVES)
def test_group_law_matches_independent_formula(E, gens):
    a = E.ainvs
    pts = [_combo(E, gens, c) for c in [(1,), (2,), (-1,), (3,)] if len(gens) == 1] or [
        _combo(E, gens, c) for c in [(1, 0), (0, 1), (1, 1), (2, -1)]
    ]
    for P in pts:
        for Q in pts:
            got = E.add(P, Q)
            ref = naive_add(a, None if P.is_infinity else (P.x, P.y), None if Q.is_infinity else (Q.x, Q.y))
            assert (got.is_infinity and ref is None) or (got.x, got.y) == ref
            assert E.is_on_curve(got)


@pytest.mark.parametrize("E, gens", CURVES)
def test_group_axioms(E, gens):
    P, Q, R = (_combo(E, gens, c) for c in ([1, 1][: len(gens)], [2, -1][: len(gens)], [-1, 2][: len(gens)]))
    assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
    assert E.add(P, Q) == E.add(Q, P)
    assert E.add(P, E.negate(P)).is_infinity
    assert scalar_mul(E, -3, P) == E.negate(scalar_mul(E, 3, P))


def test_heights_37a1():
    half = canonical_height(E37, P37)
    assert abs(half - 0.0255557041200) < 1e-11
    assert math.isclose(canonical_height(E37, P37, normalization="full"), 2 * half)
    assert abs(half - doubling_height(E37.ainvs, Fraction(0), Fraction(0), 12)) < 1e-9


@pytest.mark.parametrize("E, gens", CURVES)
def test_height_matches_doubling_oracle(E, gens):
    for P in gens:
        assert abs(canonical_height(E, P) - doubling_height(E.ainvs, P.x, P.y, 11)) < 1e-6


def test_local_heights_37a1():
    assert local_height_coefficient(E37, scalar_mul(E37, 5, P37), 2) == 1
    assert local_height_coefficient(E37, P37, 37) == Fraction(1, 12)
    assert abs(local_height_arch(E37, P37).value - (-0.2753541)) < 1e-6
    total = math.fsum(v.value for v in local_heights(E37, P37))
    assert math.isclose(total, canonical_height(E37, P37), rel_tol=1e-12)


@pytest.mark.parametrize("E, gens", CURVES)
def test_quadratic_and_parallelogram(E, gens):
    rng = random.Random(7)
    for _ in range(3):
        P = _combo(E, gens, [rng.randint(-2, 2) or 1 for _ in gens])
        Q = _combo(E, gens, [rng.randint(-2, 2) or 1 for _ in gens])
        hP, hQ = canonical_height(E, P), canonical_height(E, Q)
        assert abs(canonical_height(E, scalar_mul(E, 3, P)) - 9 * hP) < 1e-8
        if not E.add(P, Q).is_infinity and not E.add(P, E.negate(Q)).is_infinity:
            lhs = canonical_height(E, E.add(P, Q)) + canonical_height(E, E.add(P, E.negate(Q)))
            assert abs(lhs - 2 * hP - 2 * hQ) < 1e-8


def _random_model_change(rng):
    return Transform(rng.choice([1, 2, 3, 6]), rng.randint(-3, 3), rng.randint(-2, 2), rng.randint(-3, 3))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_height_invariant_under_model_change(seed):
    rng = random.Random(seed)
    E, gens = CURVES[rng.randrange(3)]
    tr = _random_model_change(rng)
    u, r, s, t = (Fraction(v) for v in (tr.u, tr.r, tr.s, tr.t))
    a1, a2, a3, a4, a6 = E.ainvs
    # standard formulas for the model with x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, scaled back to integers
    b1 = (a1 + 2 * s) / u
    b2 = (a2 - s * a1 + 3 * r - s * s) / u**2
    b3 = (a3 + r * a1 + 2 * t) / u**3
    b4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
    b6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
    if not all(c.denominator == 1 for c in (b1, b2, b3, b4, b6)):
        # go the other way: scale up so the model is integral and usually non-minimal
        b1, b2, b3, b4, b6 = (a1 * u, a2 * u**2, a3 * u**3, a4 * u**4, a6 * u**6)
        F = RationalEllipticCurve(*(int(c) for c in (b1, b2, b3, b4, b6)))
        P = gens[0]
        Q = RationalPoint(P.x * u**2, P.y * u**3)
    else:
        F = RationalEllipticCurve(*(int(c) for c in (b1, b2, b3, b4, b6)))
        P = gens[0]
        Q = RationalPoint((P.x - r) / u**2, (P.y - s * (P.x - r) - t) / u**3)
    assert F.is_on_curve(Q)
    Fm, _ = F.minimal_model()
    assert Fm.discriminant == E.minimal_model()[0].discriminant
    assert abs(canonical_height(F, Q) - canonical_height(E, P)) < 1e-9


@pytest.mark.parametrize("E, gens", CURVES)
def test_local_heights_nonnegative_at_good_primes(E, gens):
    for k in range(1, 7):
        Q = scalar_mul(E, k, gens[0])
        den = Q.x.denominator
        for p in (2, 3, 5, 7, 11, 13):
            if E.has_good_reduction(p):
                assert local_height_coefficient(E, Q, p) >= 0
                if den % p == 0:
                    assert local_height_coefficient(E, Q, p) > 0


def test_filtration_monotone():
    assert local_filtration_monotone(E37, P37, 2, 12)
    assert local_filtration_monotone(E17, RationalPoint(-2, 3), 5, 10)
    with pytest.raises(BadReductionError):
        local_filtration_monotone(E37, P37, 37, 3)


def test_elliptic_delta_values():
    assert elliptic_delta(E37, [P37], 2, 2).exact == 0
    assert elliptic_delta(E37, [P37], 2, 5).exact == Fraction(1, 25)
    assert elliptic_delta(E37, [P37], 4, 5).exact == Fraction(1, 50)
    comp = elliptic_delta(E37, [P37], 6, 5)
    assert comp.exact is None
    assert math.isclose(comp.value, math.log(2) / (25 * math.log(6)))
    with pytest.raises(BadReductionError):
        elliptic_delta(E37, [P37], 37, 2)


def test_torsion_points_are_refused():
    E = RationalEllipticCurve(0, 0, 0, 0, 1)
    T = RationalPoint(2, 3)
    assert is_torsion(E, T)
    assert canonical_height(E, T) < 1e-15
    with pytest.raises(TorsionPointError):
        elliptic_delta(E, [T], 5, 2)
    assert not is_torsion(E37, P37)


def test_delta_monotone_in_multiples():
    assert elliptic_delta_monotonicity_check(E37, [P37], 2, 5, 6)
    assert elliptic_delta_monotonicity_check(E17, [RationalPoint(-2, 3)], 5, 3, 6)


def test_corollary_filter():
    assert corollary6_filter(E37, P37, 2, 5, 1.0, Fraction(1, 25))
    assert not corollary6_filter(E37, P37, 2, 5, 1.0, Fraction(1, 24))


def test_thm5_and_calibration():
    assert math.isclose(thm5_bound(0.5, 2, 2, 1, 1, 0.0), math.log(2) / 2)
    with pytest.raises(InputError):
        thm5_bound(0.5, 2, 2, 1, 1, -1.0)
    cal = calibrate_c_e(E37, [scalar_mul(E37, k, P37) for k in range(1, 6)], 8)
    assert cal.C_E > 0 and len(cal.deficits) == 8
    d = elliptic_delta(E37, [P37], 2, 5)
    J, bound = thm5_optimize(d.value, 2, 5, 1, cal.C_E, J_max=8)
    # calibrated on multiples of P, the bound must not exceed the height of P
    assert bound <= canonical_height(E37, P37) + 1e-12
    assert calibrate_c_e(E17, [RationalPoint(-2, 3)], 6).C_E >= 0

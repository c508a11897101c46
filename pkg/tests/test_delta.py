from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lehmer_congruence.errors import CyclotomicCollision, InputError
from lehmer_congruence.intpoly import IntPolynomial, divides_mod, has_cyclotomic_root, phi
from lehmer_congruence.delta import (
    check_delta_threshold,
    delta,
    delta_power,
    power_monotone,
    threshold_holds,
)

F = IntPolynomial([3, 3, 1])


def test_pinned_values():
    # Res(f, X^3 - 1) = 28 = 2^2 * 7 and Res(f, X^6 - 1) = 784 = 2^4 * 7^2
    assert delta(F, 2, 3).value == Fraction(2, 3)
    assert delta_power(F, 2, 3, 2).value == Fraction(4, 3)
    assert delta(F, 7, 3).value == Fraction(1, 3)
    assert delta(F, 3, 3).value == 0
    assert delta(F, 4, 3).value == Fraction(1, 3)


def test_composite_modulus_is_numeric():
    d = delta(F, 14, 3)
    assert d.value is None
    assert math.isclose(d.numeric_value, (2 * math.log(2) + math.log(7)) / (3 * math.log(14)))
    assert [(t.p, t.e_p) for t in d.per_prime] == [(2, 2), (7, 1)]


def test_threshold():
    assert check_delta_threshold(F, 2, 3)
    assert not check_delta_threshold(F, 7, 3)


def test_collision():
    g = IntPolynomial([1, 1, 1]) * IntPolynomial([5, 1])
    with pytest.raises(CyclotomicCollision):
        delta(g, 2, 3)
    assert delta(g, 2, 3, allow_infinite=True).infinite
    assert threshold_holds(delta(g, 2, 3, allow_infinite=True))


def test_bad_arguments():
    with pytest.raises(InputError):
        delta(F, 1, 3)
    with pytest.raises(InputError):
        delta(IntPolynomial([1, 2]), 2, 3)


def test_json_keeps_big_resultant_exact():
    d = json.loads(delta(F, 2, 3).to_json())
    assert d["resultant"] == "28" and d["value"] == "2/3"


@given(
    st.lists(st.integers(-4, 4), min_size=0, max_size=4),
    st.lists(st.integers(-4, 4), min_size=1, max_size=10),
    st.integers(2, 20),
    st.integers(2, 8),
)
@settings(max_examples=200, deadline=None)
def test_divisibility_implies_threshold(a, b, m, n):
    f = phi(n - 1) * IntPolynomial(a + [1]) + IntPolynomial(b) * m
    if not f.is_monic() or has_cyclotomic_root(f):
        return
    assert divides_mod(phi(n - 1), f, m)
    assert check_delta_threshold(f, m, n)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.integers(2, 12), st.integers(1, 5), st.integers(2, 4))
@settings(max_examples=100, deadline=None)
def test_powers_only_increase_valuations(c, m, n, j):
    f = IntPolynomial(c + [1])
    if has_cyclotomic_root(f):
        return
    assert power_monotone(f, m, n, j)
    assert delta_power(f, m, n, j).numeric_value >= delta(f, m, n).numeric_value - 1e-15

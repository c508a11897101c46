from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import jensen_log_mahler

from lehmer_congruence.errors import InputError
from lehmer_congruence.intpoly import IntPolynomial, cyclotomic, has_cyclotomic_root, root_square
from lehmer_congruence.roots import isolate_roots, mahler

LEHMER = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
monic = st.lists(st.integers(-5, 5), min_size=1, max_size=6).map(lambda c: IntPolynomial(c + [1]))


def test_lehmer_polynomial():
    v = mahler(LEHMER)
    assert abs(v.log_measure - 0.16235761200773) < 1e-9
    assert v.abs_error_bound <= 1e-9
    assert not v.cyclotomic_flag


@pytest.mark.parametrize(
    "coeffs, expected",
    [([3, 3, 1], math.log(3)), ([-2, 1], math.log(2)), ([-1, -1, 1], math.log((1 + math.sqrt(5)) / 2))],
)
def test_closed_forms(coeffs, expected):
    assert abs(mahler(IntPolynomial(coeffs)).log_measure - expected) < 1e-10


def test_cyclotomic_factors_contribute_nothing():
    f = cyclotomic(3) * IntPolynomial([-2, 0, 1]) ** 2
    v = mahler(f)
    assert v.cyclotomic_flag
    assert abs(v.log_measure - 2 * math.log(2)) < 1e-10
    z = mahler(cyclotomic(4) * cyclotomic(7))
    assert z.cyclotomic_flag and z.log_measure == 0.0


def test_rejects_non_monic():
    with pytest.raises(InputError):
        mahler(IntPolynomial([1, 2]))


def test_enclosures_are_disjoint_and_contain_roots():
    enc = isolate_roots(LEHMER, 1e-14)
    assert len(enc.roots) == 10
    numeric = np.roots(LEHMER.coeffs[::-1])
    for z in numeric:
        assert sum(e.contains(complex(z)) or abs(complex(e.center) - z) < 1e-9 for e in enc.roots) >= 1
    cs = enc.centers()
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            assert abs(cs[i] - cs[j]) > float(enc.roots[i].radius + enc.roots[j].radius)


def test_multiplicities_are_exact():
    f = IntPolynomial([-3, 1]) ** 3 * IntPolynomial([1, 1, 1])
    mults = sorted(e.multiplicity for e in isolate_roots(f).roots)
    assert mults == [1, 1, 3]


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=8))
@settings(max_examples=40, deadline=None)
def test_jensen_quadrature_agrees(c):
    f = IntPolynomial(c + [1])
    if has_cyclotomic_root(f):
        return
    v = mahler(f)
    q, qerr = jensen_log_mahler(f.coeffs)
    assert abs(v.log_measure - q) <= v.abs_error_bound + qerr + 1e-7


@given(monic, monic)
@settings(max_examples=40, deadline=None)
def test_multiplicative(f, g):
    a, b, c = mahler(f), mahler(g), mahler(f * g)
    assert abs(c.log_measure - a.log_measure - b.log_measure) <= 1e-8


@given(monic)
@settings(max_examples=40, deadline=None)
def test_doubling_law(f):
    # roots of root_square(f) are the squares of the roots of f
    assert abs(mahler(root_square(f)).log_measure - 2 * mahler(f).log_measure) <= 1e-8


@given(monic)
@settings(max_examples=40, deadline=None)
def test_lower_bounded_by_constant_term(f):
    v = mahler(f)
    assert v.log_measure >= 0
    if f[0] != 0:
        assert v.log_measure >= math.log(abs(f[0])) - 1e-9

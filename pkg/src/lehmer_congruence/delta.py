"""The normalized valuation sum Delta(f, m, n).

For the root multiset of a monic f, Delta(f, m, n) is the sum over roots alpha
and places v above m of v(alpha^n - 1) / (n log m). Summed over all roots,
the local valuations above p collapse to ord_p of the integer
prod (alpha^n - 1) = Res(f, X^n - 1) weighted by log p, so one resultant and a
factorization of m determine Delta exactly.

Worked example, f = X^2 + 3X + 3, m = 2, n = 3: Res(f, X^3 - 1) = 28 = 2^2 * 7
gives Delta = 2/3; for the squared roots Res(f, X^6 - 1) = 784 = 2^4 * 7^2
gives 4/3.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factor, ord_p
from .errors import CyclotomicCollision, InputError
from .intpoly import IntPolynomial
from .resultant import resultant_with_xn_minus_1


@dataclass(frozen=True)
class PrimeTerm:
    p: int
    e_p: int
    weight: float  # log p

    def to_dict(self) -> dict:
        return {"p": self.p, "e_p": self.e_p, "log_p": self.weight}


@dataclass(frozen=True)
class DeltaReport:
    """Delta(f, m, n).

    ``value`` is an exact Fraction when m is a prime power and None otherwise
    (the quotient of logarithms is then generally irrational); ``per_prime``
    always carries the exact integer data. ``infinite`` marks a root shared
    with X^n - 1.
    """

    m: int
    n: int
    value: Fraction | None
    numeric_value: float
    per_prime: tuple[PrimeTerm, ...]
    resultant_used: int
    infinite: bool = False
    j: int = 1
    m_factorization: dict = field(default_factory=dict, compare=False)

    @property
    def log_numerator(self) -> float:
        """sum e_p log p."""
        return math.fsum(t.e_p * t.weight for t in self.per_prime)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "j": self.j,
            "infinite": self.infinite,
            "value": None if self.value is None else f"{self.value.numerator}/{self.value.denominator}",
            "numeric_value": "inf" if self.infinite else self.numeric_value,
            "per_prime": [t.to_dict() for t in self.per_prime],
            "resultant": str(self.resultant_used),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _report(res: int, m: int, n: int, j: int) -> DeltaReport:
    fac = factor(m)
    terms = tuple(PrimeTerm(p, ord_p(res, p), math.log(p)) for p in fac)
    num = math.fsum(t.e_p * t.weight for t in terms)
    numeric = num / (n * math.log(m))
    value = None
    if len(fac) == 1:
        (p, k), = fac.items()
        value = Fraction(terms[0].e_p, n * k)
        numeric = float(value)
    return DeltaReport(m, n, value, numeric, terms, res, False, j, fac)


def _check_args(f: IntPolynomial, m: int, n: int, j: int) -> None:
    if not f.is_monic() or f.degree < 1:
        raise InputError("f must be monic and nonconstant")
    if m < 2:
        raise InputError("m must be >= 2")
    if n < 1 or j < 1:
        raise InputError("n and j must be >= 1")


def delta_power(f: IntPolynomial, m: int, n: int, j: int = 1, allow_infinite: bool = False) -> DeltaReport:
    """Delta for the set of j-th powers of the roots, via Res(f, X^(jn) - 1).

    (alpha^j)^n - 1 = alpha^(jn) - 1, so the powered root set is never built.
    """
    _check_args(f, m, n, j)
    try:
        res = resultant_with_xn_minus_1(f, j * n).value
    except CyclotomicCollision:
        if not allow_infinite:
            raise
        fac = factor(m)
        return DeltaReport(m, n, None, math.inf, (), 0, True, j, fac)
    return _report(res, m, n, j)


def delta(f: IntPolynomial, m: int, n: int, allow_infinite: bool = False) -> DeltaReport:
    return delta_power(f, m, n, 1, allow_infinite)


def threshold_holds(report: DeltaReport) -> bool:
    """Delta >= (n-1)/n, decided in integers.

    sum e_p log p >= (n-1) log m is equivalent to prod p^e_p >= m^(n-1).
    """
    if report.infinite:
        return True
    lhs = 1
    for t in report.per_prime:
        lhs *= t.p**t.e_p
    return lhs >= report.m ** (report.n - 1)


def check_delta_threshold(f: IntPolynomial, m: int, n: int) -> bool:
    return threshold_holds(delta(f, m, n))


def power_monotone(f: IntPolynomial, m: int, n: int, j: int) -> bool:
    """ord_p Res(f, X^(jn)-1) >= ord_p Res(f, X^n-1) for every p | m."""
    base = delta(f, m, n)
    powered = delta_power(f, m, n, j)
    return all(b.e_p <= q.e_p for b, q in zip(base.per_prime, powered.per_prime))

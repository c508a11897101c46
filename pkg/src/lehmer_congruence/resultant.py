"""Exact resultants over Z.

Convention: for monic f, ``resultant(f, g)`` is the product of g(alpha) over
the roots alpha of f, counted with multiplicity. For monic f this agrees with
the Sylvester-determinant resultant Res(f, g).

Worked example, f = X^2 + 3X + 3 with roots a, b (a + b = -3, ab = 3):
a^3 + b^3 = (a + b)^3 - 3ab(a + b) = -27 + 27 = 0, so
Res(f, X^3 - 1) = (ab)^3 - (a^3 + b^3) + 1 = 28, and
a^6 + b^6 = (a^3 + b^3)^2 - 2(ab)^3 = -54, so Res(f, X^6 - 1) = 729 + 54 + 1 = 784.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CyclotomicCollision, InputError
from .intpoly import IntPolynomial, phi


@dataclass(frozen=True)
class ResultantValue:
    value: int
    f_degree: int
    g_degree: int

    def __int__(self) -> int:
        return self.value


def subresultant(a: IntPolynomial, b: IntPolynomial) -> int:
    """Res(a, b) = lc(a)^deg(b) * prod_{a(alpha)=0} b(alpha) by the subresultant PRS.

    Any nonzero a, b are accepted; a constant argument gives the usual power.
    """
    if a.is_zero() or b.is_zero():
        return 0
    da, db = a.degree, b.degree
    if da == 0:
        return a.lc**db
    if db == 0:
        return b.lc**da
    ca, cb = a.content(), b.content()
    A = IntPolynomial(c // ca for c in a.coeffs)
    B = IntPolynomial(c // cb for c in b.coeffs)
    t = ca**db * cb**da
    s = 1
    if da < db:
        A, B = B, A
        if da % 2 and db % 2:
            s = -1
    g = h = 1
    while True:
        dA, dB = A.degree, B.degree
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = A.pseudo_remainder(B)
        A = B
        if R.is_zero():
            return 0
        div = g * h**delta
        B = IntPolynomial(c // div for c in R.coeffs)
        g = A.lc
        if delta:
            h = g**delta // h ** (delta - 1)
        if B.degree == 0:
            dA = A.degree
            h = B.lc**dA // h ** (dA - 1) if dA >= 1 else h
            return s * t * h


def resultant(f: IntPolynomial, g: IntPolynomial) -> ResultantValue:
    """Product of g over the roots of the monic, nonconstant f."""
    if not f.is_monic() or f.degree < 1:
        raise InputError("f must be monic and nonconstant")
    if g.is_zero():
        raise InputError("g must be nonzero")
    # g(alpha) only depends on g mod f, which keeps the PRS short when deg g >> deg f
    r = g % f if g.degree >= f.degree else g
    value = subresultant(f, r) if not r.is_zero() else 0
    return ResultantValue(value, f.degree, g.degree)


def x_pow_mod(n: int, f: IntPolynomial) -> IntPolynomial:
    """X^n mod f by square-and-multiply, f monic."""
    if not f.is_monic():
        raise InputError("modulus polynomial must be monic")
    result = IntPolynomial((1,)) % f if f.degree > 0 else IntPolynomial()
    base = IntPolynomial((0, 1)) % f
    while n:
        if n & 1:
            result = (result * base) % f
        base = (base * base) % f
        n >>= 1
    return result


def resultant_with_xn_minus_1(f: IntPolynomial, n: int) -> ResultantValue:
    """prod (alpha^n - 1) over the roots of f.

    Raises CyclotomicCollision when f shares a root with X^n - 1 (the
    product vanishes exactly in that case).
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if not f.is_monic() or f.degree < 1:
        raise InputError("f must be monic and nonconstant")
    r = x_pow_mod(n, f) - 1
    value = 0 if r.is_zero() else subresultant(f, r)
    if value == 0:
        raise CyclotomicCollision(f"f shares a root with X^{n} - 1")
    return ResultantValue(value, f.degree, n)


def check_resultant_divisibility(f: IntPolynomial, m: int, n: int) -> bool:
    """m^(n-1) | Res(f, phi(n-1))."""
    if m < 2 or n < 2:
        raise InputError("need m >= 2 and n >= 2")
    res = resultant(f, phi(n - 1)).value
    if res == 0:
        raise CyclotomicCollision(f"f shares a root with phi({n - 1})")
    return res % m ** (n - 1) == 0

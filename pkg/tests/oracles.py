"""Independent reference computations used only by the tests.

Each oracle takes a route that shares no code with the package: Sylvester
determinants instead of a remainder sequence, numerical quadrature instead of
root finding, repeated doubling in gmpy2 instead of local heights.
"""
from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
import numpy as np
from scipy import integrate


def bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester_resultant(f: list[int], g: list[int]) -> int:
    """det of the Sylvester matrix; coefficient lists are ascending."""
    fd, gd = f[::-1], g[::-1]
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - i - n - 1))
    return bareiss_det(rows)


def jensen_log_mahler(coeffs: list[int]) -> tuple[float, float]:
    """(1/2 pi) int log|f(e^{i theta})| d theta by adaptive quadrature, with its error estimate."""
    desc = np.array(coeffs[::-1], dtype=float)

    def integrand(t: float) -> float:
        return math.log(abs(np.polyval(desc, complex(math.cos(t), math.sin(t)))))

    val, err = integrate.quad(integrand, 0, 2 * math.pi, limit=400, epsabs=1e-12, epsrel=1e-12)
    return val / (2 * math.pi), err / (2 * math.pi)


def doubling_height(ainvs, x: Fraction, y: Fraction, N: int = 12) -> float:
    """1/2 h(x(2^N P)) / 4^N with exact rational doubling in gmpy2."""
    a1, a2, a3, a4, a6 = (gmpy2.mpq(a) for a in ainvs)
    X = gmpy2.mpq(x.numerator, x.denominator)
    Y = gmpy2.mpq(y.numerator, y.denominator)
    for _ in range(N):
        den = 2 * Y + a1 * X + a3
        lam = (3 * X * X + 2 * a2 * X + a4 - a1 * Y) / den
        nu = (-(X**3) + a4 * X + 2 * a6 - a3 * Y) / den
        X3 = lam * lam + a1 * lam - a2 - 2 * X
        Y = -(lam + a1) * X3 - nu - a3
        X = X3
    h = gmpy2.log(gmpy2.mpz(max(abs(X.numerator), X.denominator)))
    return float(h) / 2 / 4**N


def naive_add(ainvs, P, Q):
    """Chord-tangent addition written independently, on (x, y) Fraction tuples or None."""
    a1, a2, a3, a4, a6 = ainvs
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 == x2:
        s = (3 * x1**2 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        s = (y2 - y1) / (x2 - x1)
    x3 = s * s + a1 * s - a2 - x1 - x2
    y3 = -y1 - s * (x3 - x1) - a1 * x3 - a3
    return (x3, y3)


def brute_fejer_moment(k: int, J: int) -> Fraction:
    return sum((Fraction(j) ** k * (1 - Fraction(j, J + 1)) for j in range(1, J + 1)), Fraction(0))

"""Elliptic curves over Q: group law, local and canonical heights, elliptic Delta.

Local heights use the normalization in which, at a prime of good reduction,
lambda_p(P) = 1/2 max(-ord_p x(P), 0) log p + 1/12 ord_p(Disc) log p. Their
sum over all places is the canonical height in the "half" normalization,
1/2 lim h(x(2^N P)) / 4^N. The "full" normalization (twice that, the one
tabulated in common curve databases) is available from canonical_height.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .arith import factor, ord_p, ord_p_rational
from .errors import BadReductionError, InputError, PrecisionExhausted, TorsionPointError

TORSION_THRESHOLD = 1e-6
MAX_TORSION_ORDER = 12
ARCH = "inf"


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class RationalPoint:
    """Affine point with exact rational coordinates, or the point at infinity."""

    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise InputError("point needs both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @classmethod
    def parse(cls, text: str) -> RationalPoint:
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 2:
            raise InputError(f"point must be 'x,y', got {text!r}")
        try:
            return cls(Fraction(parts[0]), Fraction(parts[1]))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational in point {text!r}") from exc

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = RationalPoint()


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class Transform:
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, mapping the new model to the old."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def to_new(self, P: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        x2 = (P.x - r) / u**2
        y2 = (P.y - s * u**2 * x2 - t) / u**3
        return RationalPoint(x2, y2)

    def to_old(self, P: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        return RationalPoint(u**2 * P.x + r, u**3 * P.y + s * u**2 * P.x + t)


IDENTITY_TRANSFORM = Transform(Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def _kraus_ok(c4: int, c6: int) -> bool:
    """c4, c6 come from an integral Weierstrass model."""
    if c6 != 0 and ord_p(c6, 3) == 2:
        return False
    if c6 % 4 == 3:
        return True
    v2 = ord_p(c4, 2) if c4 else 99
    return v2 >= 4 and c6 % 32 in (0, 8)


def _from_c_invariants(c4: int, c6: int) -> tuple[int, int, int, int, int] | None:
    for b2 in range(-5, 7):
        if (b2 * b2 - c4) % 24:
            continue
        b4 = (b2 * b2 - c4) // 24
        num = -(b2**3) + 36 * b2 * b4 - c6
        if num % 216:
            continue
        b6 = num // 216
        a1, a3 = b2 % 2, b6 % 2
        if (b2 - a1) % 4 or (b4 - a1 * a3) % 2 or (b6 - a3) % 4:
            continue
        return a1, (b2 - a1) // 4, a3, (b4 - a1 * a3) // 2, (b6 - a3) // 4
    return None


@dataclass(frozen=True)
class RationalEllipticCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    _factored: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            if int(getattr(self, name)) != getattr(self, name):
                raise InputError("a-invariants must be integers")
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.discriminant == 0:
            raise InputError("singular curve: discriminant is 0")
        if 4 * self.b8 != self.b2 * self.b6 - self.b4**2:
            raise AssertionError("b-invariant identity failed")
        if 1728 * self.discriminant != self.c4**3 - self.c6**2:
            raise AssertionError("c-invariant identity failed")

    @classmethod
    def parse(cls, text: str) -> RationalEllipticCurve:
        try:
            vals = [int(s) for s in text.replace("[", "").replace("]", "").split(",")]
        except ValueError as exc:
            raise InputError(f"curve must be 'a1,a2,a3,a4,a6' integers, got {text!r}") from exc
        if len(vals) != 5:
            raise InputError(f"curve needs five a-invariants, got {len(vals)}")
        return cls(*vals)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return self.a1, self.a2, self.a3, self.a4, self.a6

    @property
    def b2(self) -> int:
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> int:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> int:
        return -(self.b2**3) + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def bad_primes(self) -> list[int]:
        if self._factored is None:
            object.__setattr__(self, "_factored", factor(self.discriminant))
        return list(self._factored)

    def has_good_reduction(self, p: int) -> bool:
        return self.discriminant % p != 0

    # -- minimal models

    def _scaling(self) -> int:
        u = 1
        c4, c6, disc = self.c4, self.c6, self.discriminant
        for p in self.bad_primes():
            e = ord_p(disc, p) // 12
            if c4:
                e = min(e, ord_p(c4, p) // 4)
            if c6:
                e = min(e, ord_p(c6, p) // 6)
            while e > 0:
                q = p**e
                if p >= 5 or _kraus_ok(c4 // q**4, c6 // q**6):
                    break
                e -= 1
            u *= p**e
        return u

    @property
    def minimality_flag(self) -> bool:
        return self._scaling() == 1

    def is_minimal(self) -> bool:
        return self.minimality_flag

    def minimal_model(self) -> tuple[RationalEllipticCurve, Transform]:
        """A globally minimal model together with the change of variables to it."""
        u = self._scaling()
        if u == 1:
            return self, IDENTITY_TRANSFORM
        ainvs = _from_c_invariants(self.c4 // u**4, self.c6 // u**6)
        if ainvs is None:
            raise AssertionError("minimal invariants do not lift to a model")
        E2 = RationalEllipticCurve(*ainvs)
        U = Fraction(u)
        s = (U * E2.a1 - self.a1) / 2
        r = (U**2 * E2.b2 - self.b2) / 12
        t = (U**3 * E2.a3 - self.a3 - r * self.a1) / 2
        return E2, Transform(U, r, s, t)

    # -- group law

    def is_on_curve(self, P: RationalPoint) -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def check(self, P: RationalPoint) -> RationalPoint:
        if not self.is_on_curve(P):
            raise InputError(f"point {P} is not on the curve")
        return P

    def point(self, x, y) -> RationalPoint:
        return self.check(RationalPoint(Fraction(x), Fraction(y)))

    def negate(self, P: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return P
        return RationalPoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return INFINITY
            den = 2 * y1 + a1 * x1 + a3
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return RationalPoint(x3, y3)

    def multiply(self, n: int, P: RationalPoint) -> RationalPoint:
        if n < 0:
            return self.multiply(-n, self.negate(P))
        result, base = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def group_add(E: RationalEllipticCurve, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    return E.add(E.check(P), E.check(Q))


def scalar_mul(E: RationalEllipticCurve, n: int, P: RationalPoint) -> RationalPoint:
    return E.multiply(n, E.check(P))


# ---------------------------------------------------------------------------
# local heights


@dataclass(frozen=True)
class LocalHeightValue:
    place: int | str
    value: float
    method: str
    coefficient: Fraction | None = None  # value / log p for finite places

    def to_dict(self) -> dict:
        return {
            "place": self.place,
            "value": self.value,
            "method": self.method,
            "coefficient": None if self.coefficient is None else str(self.coefficient),
        }


def _require_finite(P: RationalPoint) -> None:
    if P.is_infinity:
        raise InputError("local heights are undefined at the point at infinity")


def _ord(q: Fraction, p: int) -> float:
    return math.inf if q == 0 else ord_p_rational(q, p)


def local_height_coefficient(E: RationalEllipticCurve, P: RationalPoint, p: int) -> Fraction:
    """lambda_p(P) / log p on a model minimal at p, as an exact rational."""
    _require_finite(P)
    x, y = P.x, P.y
    N = ord_p(E.discriminant, p)
    vx = _ord(x, p)
    if N == 0:
        return Fraction(max(0, -vx), 2) if vx < 0 else Fraction(0)
    a1, a2, a3, a4, _ = E.ainvs
    A = _ord(3 * x * x + 2 * a2 * x + a4 - a1 * y, p)
    B = _ord(2 * y + a1 * x + a3, p)
    C = _ord(3 * x**4 + E.b2 * x**3 + 3 * E.b4 * x * x + 3 * E.b6 * x + E.b8, p)
    if A <= 0 or B <= 0:
        lam = Fraction(max(0, -vx), 2) if vx < 0 else Fraction(0)
    elif E.c4 % p != 0:
        M = min(Fraction(B), Fraction(N, 2))
        lam = -M * (N - M) / (2 * N)
    elif C >= 3 * B:
        lam = -Fraction(B) / 3
    else:
        lam = -Fraction(C) / 8
    return lam + Fraction(N, 12)


def local_height_nonarch(E: RationalEllipticCurve, P: RationalPoint, p: int, require_minimal: bool = True) -> LocalHeightValue:
    if require_minimal and not E.is_minimal():
        raise InputError("a minimal model is required; use minimal_model()")
    c = local_height_coefficient(E, P, p)
    method = "good-formula" if E.has_good_reduction(p) else "bad-reduction-algorithm"
    return LocalHeightValue(p, float(c) * math.log(p), method, c)


def _shift(E: RationalEllipticCurve) -> int:
    """Integer r with x - r >= 1 at every real point."""
    roots = np.roots([4, E.b2, 2 * E.b4, E.b6])
    real = [z.real for z in roots if abs(z.imag) <= 1e-9 * max(1.0, abs(z))]
    lo = min(real) if real else min(z.real for z in roots)
    return math.floor(lo) - 1


def local_height_arch(E: RationalEllipticCurve, P: RationalPoint, precision: float = 1e-12) -> LocalHeightValue:
    """Archimedean local height by Tate's series after shifting x so it stays >= 1 on E(R)."""
    _require_finite(P)
    r = _shift(E)
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    b2s = b2 + 12 * r
    b4s = b4 + r * b2 + 6 * r * r
    b6s = b6 + 2 * r * b4 + r * r * b2 + 4 * r**3
    b8s = b8 + 3 * r * b6 + 3 * r * r * b4 + r**3 * b2 + 3 * r**4
    terms = int(math.ceil(math.log(1 / precision, 4))) + 12
    dps = max(30, int(-math.log10(precision)) + 20)
    with mpmath.workdps(dps):
        x = mpmath.mpf(P.x.numerator) / P.x.denominator - r
        if x < 1 - mpmath.mpf(10) ** (-dps // 2):
            raise AssertionError("shifted x-coordinate below 1 at a real point")
        t = 1 / x
        acc = mpmath.mpf(0)
        scale = mpmath.mpf(1)
        for _ in range(terms):
            t2 = t * t
            w = 4 * t + b2s * t2 + 2 * b4s * t2 * t + b6s * t2 * t2
            z = 1 - b4s * t2 - 2 * b6s * t2 * t - b8s * t2 * t2
            if z == 0:
                raise PrecisionExhausted("archimedean series hit a zero denominator")
            acc += scale * mpmath.log(abs(z))
            scale /= 4
            t = w / z
        lam = mpmath.log(x) / 2 + acc / 8 - mpmath.log(abs(E.discriminant)) / 12
        return LocalHeightValue(ARCH, float(lam), "archimedean-series")


def local_heights(E: RationalEllipticCurve, P: RationalPoint, precision: float = 1e-12) -> list[LocalHeightValue]:
    """Archimedean height, then every bad prime, on a minimal model."""
    out = [local_height_arch(E, P, precision)]
    for p in E.bad_primes():
        out.append(local_height_nonarch(E, P, p, require_minimal=False))
    return out


def canonical_height(
    E: RationalEllipticCurve,
    P: RationalPoint,
    precision: float = 1e-12,
    normalization: str = "half",
) -> float:
    """Sum of the local heights over all places.

    Good primes contribute 1/2 ord_p(den x) log p, which sums to
    1/2 (log den(x) - sum over bad p of ord_p(den x) log p) without factoring.
    """
    if normalization not in ("half", "full"):
        raise InputError("normalization must be 'half' or 'full'")
    E.check(P)
    if P.is_infinity:
        return 0.0
    Em, tr = E.minimal_model()
    Pm = tr.to_new(P)
    total = math.fsum(lv.value for lv in local_heights(Em, Pm, precision))
    den = Pm.x.denominator
    good = math.log(den)
    for p in Em.bad_primes():
        good -= ord_p(den, p) * math.log(p)
    total += good / 2
    return 2 * total if normalization == "full" else total


def height_breakdown(E: RationalEllipticCurve, P: RationalPoint, precision: float = 1e-12) -> dict:
    Em, tr = E.minimal_model()
    Pm = tr.to_new(E.check(P))
    parts = local_heights(Em, Pm, precision)
    den = Pm.x.denominator
    good = 0.0
    for p in factor(den) if den > 1 else {}:
        if p not in Em.bad_primes():
            parts.append(local_height_nonarch(Em, Pm, p, require_minimal=False))
    good = math.fsum(lv.value for lv in parts)
    return {"places": [lv.to_dict() for lv in parts], "canonical_height": good}


def is_torsion(E: RationalEllipticCurve, P: RationalPoint) -> bool:
    if P.is_infinity:
        return True
    if canonical_height(E, P) >= TORSION_THRESHOLD:
        return False
    Q = P
    for _ in range(MAX_TORSION_ORDER):
        if Q.is_infinity:
            return True
        Q = E.add(Q, P)
    return Q.is_infinity


# ---------------------------------------------------------------------------
# elliptic Delta


@dataclass(frozen=True)
class EllipticPrimeTerm:
    p: int
    coefficient: Fraction  # sum over points of lambda_p(nP) / log p
    contribution: float

    def to_dict(self) -> dict:
        return {"p": self.p, "coefficient": str(self.coefficient), "contribution": self.contribution}


@dataclass(frozen=True)
class EllipticDeltaReport:
    """sum over P of (1/log m) sum_{p | m} lambda_p(nP) / n^2."""

    value: float
    exact: Fraction | None
    per_prime: tuple[EllipticPrimeTerm, ...]
    m: int
    n: int
    points: tuple[RationalPoint, ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "exact": None if self.exact is None else str(self.exact),
            "per_prime": [t.to_dict() for t in self.per_prime],
            "m": self.m,
            "n": self.n,
            "points": [str(P) for P in self.points],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _prepare(E: RationalEllipticCurve, points: Sequence[RationalPoint], m: int, n: int, check_torsion: bool):
    if m < 2 or n < 1:
        raise InputError("need m >= 2 and n >= 1")
    for P in points:
        E.check(P)
    Em, tr = E.minimal_model()
    primes = factor(m)
    for p in primes:
        if not Em.has_good_reduction(p):
            raise BadReductionError(f"E has bad reduction at {p}, which divides m = {m}")
    mapped = [tr.to_new(P) for P in points]
    if check_torsion:
        for P in mapped:
            if is_torsion(Em, P):
                raise TorsionPointError(f"point {P} is torsion")
    return Em, mapped, primes


def _delta_terms(Em: RationalEllipticCurve, mapped, primes, n: int) -> tuple[EllipticPrimeTerm, ...]:
    multiples = []
    for P in mapped:
        nP = Em.multiply(n, P)
        if nP.is_infinity:
            raise TorsionPointError(f"{n}P = O")
        multiples.append(nP)
    terms = []
    for p in primes:
        c = sum((local_height_coefficient(Em, Q, p) for Q in multiples), Fraction(0))
        terms.append(EllipticPrimeTerm(p, c, float(c) * math.log(p)))
    return tuple(terms)


def _delta_report(terms, primes: dict, m: int, n: int, points) -> EllipticDeltaReport:
    value = math.fsum(t.contribution for t in terms) / (n * n * math.log(m))
    exact = None
    if len(primes) == 1:
        (_, k), = primes.items()
        exact = terms[0].coefficient / (n * n * k)
        value = float(exact)
    return EllipticDeltaReport(value, exact, tuple(terms), m, n, tuple(points))


def elliptic_delta(
    E: RationalEllipticCurve,
    points: Sequence[RationalPoint],
    m: int,
    n: int,
    check_torsion: bool = True,
) -> EllipticDeltaReport:
    Em, mapped, primes = _prepare(E, points, m, n, check_torsion)
    return _delta_report(_delta_terms(Em, mapped, primes, n), primes, m, n, points)


def _log_weight_ge(a: Iterable[EllipticPrimeTerm], b: Iterable[EllipticPrimeTerm]) -> bool:
    """sum c_p log p >= sum c'_p log p, decided exactly.

    Coefficients are rationals, so after clearing a common denominator both
    sides are logs of integers.
    """
    a, b = list(a), list(b)
    if all(x.coefficient >= y.coefficient for x, y in zip(a, b)):
        return True
    den = 1
    for t in a + b:
        den = den * t.coefficient.denominator // math.gcd(den, t.coefficient.denominator)
    lhs = rhs = 1
    for x, y in zip(a, b):
        e = (x.coefficient - y.coefficient) * den
        if e > 0:
            lhs *= x.p ** int(e)
        elif e < 0:
            rhs *= x.p ** int(-e)
    return lhs >= rhs


def elliptic_delta_monotonicity_check(
    E: RationalEllipticCurve, points: Sequence[RationalPoint], m: int, n: int, j_max: int
) -> bool:
    """Delta(jP, m, n) >= Delta(P, m, n) for 1 <= j <= j_max."""
    Em, mapped, primes = _prepare(E, points, m, n, True)
    base = _delta_terms(Em, mapped, primes, n)
    for j in range(2, j_max + 1):
        powered = _delta_terms(Em, [Em.multiply(j, P) for P in mapped], primes, n)
        if not _log_weight_ge(powered, base):
            return False
    return True


def local_filtration_monotone(E: RationalEllipticCurve, P: RationalPoint, p: int, j_max: int) -> bool:
    """lambda_p(jP) >= lambda_p(P) at a good prime, compared via ord_p of x-denominators."""
    if not E.has_good_reduction(p):
        raise BadReductionError(f"bad reduction at {p}")
    base = ord_p(P.x.denominator, p)
    for j in range(2, j_max + 1):
        Q = E.multiply(j, P)
        if Q.is_infinity:
            continue
        if ord_p(Q.x.denominator, p) < base:
            return False
    return True


# ---------------------------------------------------------------------------
# the height lower bound and its calibration


def thm5_bound(delta_val: float, m: int, n: int, card: int, J: int, C_E: float) -> float:
    """6/((J+1)(J+2)) (Delta log m - C_E (card/n^2) log(J+1)/J)."""
    if J < 1 or n < 1 or m < 2 or card < 1:
        raise InputError("need J, n, card >= 1 and m >= 2")
    if C_E < 0:
        raise InputError("C_E must be >= 0")
    return 6.0 / ((J + 1) * (J + 2)) * (delta_val * math.log(m) - C_E * card / (n * n) * math.log(J + 1) / J)


def thm5_optimize(delta_val: float, m: int, n: int, card: int, C_E: float, J_max: int = 10_000) -> tuple[int, float]:
    best_J, best = 1, thm5_bound(delta_val, m, n, card, 1, C_E)
    prev, decreasing = best, 0
    for J in range(2, J_max + 1):
        v = thm5_bound(delta_val, m, n, card, J, C_E)
        if v > best:
            best_J, best = J, v
        decreasing = decreasing + 1 if v < prev else 0
        prev = v
        if decreasing >= 64:
            break
    return best_J, best


def corollary6_filter(
    E: RationalEllipticCurve, Q: RationalPoint, m: int, n: int, eps: float, delta_min: float | Fraction
) -> bool:
    """Good reduction at p | m (else an error), n >= max(sqrt(eps), 2), Delta({Q}, m, n) >= delta_min."""
    if eps <= 0:
        raise InputError("eps must be positive")
    rep = elliptic_delta(E, [Q], m, n)
    if n < max(math.sqrt(eps), 2):
        return False
    if rep.exact is not None and isinstance(delta_min, (int, Fraction)):
        return rep.exact >= delta_min
    return rep.value >= float(delta_min)


@dataclass(frozen=True)
class CECalibration:
    J_max: int
    deficits: tuple[float, ...]  # deficit for J = 1..J_max
    per_place_min: dict  # place -> minimum Fejer sum at J = J_max
    C_E: float


def calibrate_c_e(E: RationalEllipticCurve, samples: Sequence[RationalPoint], J_max: int, precision: float = 1e-10) -> CECalibration:
    """Empirical C_E from the bad-place Fejer sums of the sampled points.

    For each J and each bad place v (archimedean and p | Disc) take the
    minimum over the samples Q of sum_j f_j lambda_v(jQ). With deficit_J the
    negated sum of those minima, the bound holds for the sampled points at J
    once C_E >= 2 max(deficit_J, 0) / log(J + 1); the maximum over J <= J_max
    is returned.
    """
    if J_max < 1:
        raise InputError("J_max must be >= 1")
    Em, tr = E.minimal_model()
    places: list[int | str] = [ARCH] + Em.bad_primes()
    # heights[v][i][j-1] = lambda_v(j Q_i)
    heights = {v: [] for v in places}
    for Q0 in samples:
        Q = tr.to_new(E.check(Q0))
        rows = {v: [] for v in places}
        jQ = INFINITY
        for j in range(1, J_max + 1):
            jQ = Em.add(jQ, Q)
            if jQ.is_infinity:
                raise TorsionPointError(f"{j}Q = O")
            rows[ARCH].append(local_height_arch(Em, jQ, precision).value)
            for p in Em.bad_primes():
                rows[p].append(float(local_height_coefficient(Em, jQ, p)) * math.log(p))
        for v in places:
            heights[v].append(rows[v])
    deficits = []
    C_E = 0.0
    mins = {}
    for J in range(1, J_max + 1):
        weights = [1 - j / (J + 1) for j in range(1, J + 1)]
        mins = {
            v: min(math.fsum(w * h for w, h in zip(weights, row)) for row in heights[v])
            for v in places
        }
        deficit = -math.fsum(mins.values())
        deficits.append(deficit)
        C_E = max(C_E, 2 * max(deficit, 0.0) / math.log(J + 1))
    return CECalibration(J_max, tuple(deficits), {str(k): v for k, v in mins.items()}, C_E)

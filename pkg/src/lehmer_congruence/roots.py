"""Certified root enclosures and the Mahler measure.

Roots are approximated by Aberth-Ehrlich iteration, first in hardware
doubles and then polished in mpmath at the working precision. Each
approximation z_i of a root of a square-free polynomial g of degree d is
certified by the inclusion disk of radius d*|W_i|, where
W_i = g(z_i) / (lc(g) * prod_{j != i} (z_i - z_j)) is the Weierstrass
correction; pairwise-disjoint disks each hold exactly one root. Evaluation
round-off is bounded and folded into the radius.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import InputError, PrecisionExhausted
from .intpoly import IntPolynomial, squarefree_decomposition, strip_cyclotomic

DEFAULT_TOL = 1e-9
START_BITS = 106  # double-double
MAX_BITS = 8192


@dataclass(frozen=True)
class RootEnclosure:
    center: mpmath.mpc
    radius: mpmath.mpf
    multiplicity: int

    def contains(self, z) -> bool:
        return abs(mpmath.mpc(z) - self.center) <= self.radius


@dataclass(frozen=True)
class RootEnclosureSet:
    roots: tuple[RootEnclosure, ...]
    source_degree: int
    guaranteed_radius: float
    precision_bits: int

    def centers(self) -> list[complex]:
        return [complex(r.center) for r in self.roots]


@dataclass(frozen=True)
class MahlerValue:
    log_measure: float
    abs_error_bound: float
    cyclotomic_flag: bool

    @property
    def measure(self) -> float:
        return math.exp(self.log_measure)

    def to_dict(self) -> dict:
        return {
            "log_measure": self.log_measure,
            "abs_error_bound": self.abs_error_bound,
            "cyclotomic_flag": self.cyclotomic_flag,
        }


# ---------------------------------------------------------------------------
# initial approximations


def _initial_guesses(coeffs: tuple[int, ...]) -> list[complex]:
    """Points on circles whose radii come from the upper convex hull of (k, log|a_k|)."""
    pts = [(k, math.log(abs(c))) for k, c in enumerate(coeffs) if c]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or below the segment hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    guesses = []
    offset = 0.4
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        k = j - i
        r = math.exp(min((yi - yj) / k, 700.0))
        for l in range(k):
            guesses.append(r * cmath.exp(1j * (2 * math.pi * l / k + offset)))
        offset += 1.1
    return guesses


def _newton_ratio(desc: np.ndarray, ddesc: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z), evaluated through the reversed polynomial where |z| > 1 to avoid overflow."""
    d = len(desc) - 1
    out = np.empty_like(z)
    inner = np.abs(z) <= 1
    if inner.any():
        zi = z[inner]
        out[inner] = np.polyval(desc, zi) / np.polyval(ddesc, zi)
    outer = ~inner
    if outer.any():
        w = 1 / z[outer]
        rev = desc[::-1]
        drev = np.polyder(rev) if d > 0 else np.zeros(1)
        rv = np.polyval(rev, w)
        drv = np.polyval(drev, w)
        # p'/p = d/z - w^2 rev'(w)/rev(w)
        out[outer] = 1 / (d * w - w * w * drv / rv)
    return out


def _aberth_double(coeffs: tuple[int, ...], iters: int = 400) -> np.ndarray | None:
    try:
        desc = np.array([float(c) for c in reversed(coeffs)], dtype=complex)
    except OverflowError:
        return None
    if not np.all(np.isfinite(desc)):
        return None
    desc = desc / desc[0]
    ddesc = np.polyder(desc)
    z = np.array(_initial_guesses(coeffs), dtype=complex)
    d = len(z)
    if d == 1:
        return np.array([-desc[1] / desc[0]])
    done = np.zeros(d, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(iters):
            ratio = _newton_ratio(desc, ddesc, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1 / diff, axis=1)
            w = ratio / (1 - ratio * s)
            w[~np.isfinite(w)] = 0
            w[done] = 0
            z = z - w
            done |= np.abs(w) <= 4e-16 * np.maximum(1, np.abs(z))
            if done.all():
                break
    if not np.all(np.isfinite(z)):
        return None
    return z


# ---------------------------------------------------------------------------
# multiprecision polishing and certification


def _horner(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _horner_abs_bound(abs_coeffs, r):
    acc = mpmath.mpf(0)
    for c in reversed(abs_coeffs):
        acc = acc * r + c
    return acc


def _aberth_mp(coeffs, z: list, bits: int, max_iter: int = 200) -> list:
    d = len(z)
    dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
    tol = mpmath.mpf(2) ** (-(bits - 8))
    for _ in range(max_iter):
        biggest = mpmath.mpf(0)
        new = list(z)
        for i in range(d):
            zi = new[i]
            pv = _horner(coeffs, zi)
            if pv == 0:
                continue
            dv = _horner(dcoeffs, zi)
            s = mpmath.fsum(1 / (zi - new[j]) for j in range(d) if j != i and new[j] != zi)
            ratio = pv / dv if dv != 0 else mpmath.mpc(tol)
            w = ratio / (1 - ratio * s)
            new[i] = zi - w
            rel = abs(w) / max(1, abs(new[i]))
            if rel > biggest:
                biggest = rel
        z = new
        if biggest <= tol:
            break
    return z


def _certify(coeffs, z: list, bits: int) -> list | None:
    """Inclusion radii for the approximations z of the roots of square-free coeffs, or None."""
    d = len(z)
    lc = abs(mpmath.mpf(coeffs[-1]))
    abs_coeffs = [abs(mpmath.mpf(c)) for c in coeffs]
    eps = mpmath.mpf(2) ** (-bits + 1)
    radii = []
    for i in range(d):
        zi = z[i]
        pv = abs(_horner(coeffs, zi))
        round_off = (2 * d + 2) * eps * _horner_abs_bound(abs_coeffs, abs(zi))
        prod = mpmath.mpf(1)
        for j in range(d):
            if j != i:
                gap = abs(zi - z[j])
                if gap == 0:
                    return None
                prod *= gap
        prod *= 1 - 2 * d * eps
        radii.append(d * (pv + round_off) / (lc * prod) * (1 + mpmath.mpf(2) ** (-bits // 2)))
    return radii


def _disjoint(z: list, radii: list) -> bool:
    n = len(z)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radii[i] + radii[j]:
                return False
    return True


def _isolate_squarefree(g: IntPolynomial, target: float, max_bits: int, start: list | None):
    coeffs = g.coeffs
    d = g.degree
    if start is None:
        approx = _aberth_double(coeffs)
        start = [complex(c) for c in approx] if approx is not None else _initial_guesses(coeffs)
    bits = START_BITS
    z = None
    achieved = math.inf
    while bits <= max_bits:
        with mpmath.workprec(bits):
            mp_coeffs = [mpmath.mpf(c) for c in coeffs]
            z = [mpmath.mpc(c) for c in (start if z is None else z)]
            z = _aberth_mp(mp_coeffs, z, bits)
            radii = _certify(mp_coeffs, z, bits)
            if radii is not None and _disjoint(z, radii):
                achieved = float(max(radii))
                if achieved <= target:
                    return z, radii, bits
        bits *= 2
    raise PrecisionExhausted(
        f"could not isolate roots of degree-{d} factor to radius {target:g} within {max_bits} bits",
        achieved=achieved,
    )


def isolate_roots(f: IntPolynomial, target_radius: float = 1e-12, max_bits: int = MAX_BITS) -> RootEnclosureSet:
    """Certified disks around every root of f, with exact multiplicities.

    Multiplicities come from the exact square-free decomposition, so each
    factor is isolated as a square-free polynomial.
    """
    if f.is_zero() or f.degree < 1:
        raise InputError("f must be nonconstant")
    if target_radius <= 0:
        raise InputError("target_radius must be positive")
    parts = []
    for g, mult in squarefree_decomposition(f):
        if g.coeffs[0] == 0:
            parts.append(([mpmath.mpc(0)], [mpmath.mpf(0)], mult, 0))
            g = IntPolynomial(g.coeffs[1:])
        if g.degree >= 1:
            parts.append((g, None, mult, None))

    target = target_radius
    while True:
        roots: list[RootEnclosure] = []
        bits_used = START_BITS
        for g, fixed, mult, _ in parts:
            if fixed is not None:
                roots.extend(RootEnclosure(z, r, mult) for z, r in zip(g, fixed))
                continue
            z, radii, bits = _isolate_squarefree(g, target, max_bits, None)
            bits_used = max(bits_used, bits)
            roots.extend(RootEnclosure(zi, ri, mult) for zi, ri in zip(z, radii))
        centers = [r.center for r in roots]
        radii = [r.radius for r in roots]
        if _disjoint(centers, radii):
            break
        # disks from different square-free factors overlap; tighten all of them
        target /= 1024
        if target < 2.0 ** (-max_bits // 2):
            raise PrecisionExhausted("root disks of distinct factors do not separate")
    guaranteed = float(max(radii)) if radii else 0.0
    return RootEnclosureSet(tuple(roots), f.degree, guaranteed, bits_used)


# ---------------------------------------------------------------------------
# Mahler measure


def _log_plus_interval(enc: RootEnclosure) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Range of max(log|z|, 0) over the disk."""
    c, r = abs(enc.center), enc.radius
    hi = max(mpmath.log(c + r), 0) if c + r > 0 else mpmath.mpf(0)
    lo = max(mpmath.log(c - r), 0) if c > r else mpmath.mpf(0)
    return lo, hi


def mahler(f: IntPolynomial, tol: float = DEFAULT_TOL, max_bits: int = MAX_BITS) -> MahlerValue:
    """log M(f) for monic f as the sum of max(log|alpha|, 0) over the roots.

    Classical cyclotomic factors are removed exactly first (their roots
    contribute 0). Roots near the unit circle are handled by shrinking the
    disks until the max(., 0) contribution is pinned to within tol.
    """
    if not f.is_monic() or f.degree < 1:
        raise InputError("f must be monic and nonconstant")
    if tol <= 0:
        raise InputError("tol must be positive")
    core, cyc = strip_cyclotomic(f)
    flag = bool(cyc)
    if core.degree == 0:
        return MahlerValue(0.0, tol * 1e-3, flag)
    target = tol / (4 * core.degree)
    while True:
        enc = isolate_roots(core, target, max_bits)
        with mpmath.workprec(enc.precision_bits):
            lo = hi = mpmath.mpf(0)
            for e in enc.roots:
                a, b = _log_plus_interval(e)
                lo += e.multiplicity * a
                hi += e.multiplicity * b
            value = (lo + hi) / 2
            err = (hi - lo) / 2
        v = float(value)
        err_total = float(err) + 4e-16 * max(abs(v), 1.0)
        if err_total <= tol:
            return MahlerValue(v, err_total, flag)
        target /= 64
        if target < 2.0 ** (-max_bits // 2):
            raise PrecisionExhausted(f"Mahler measure not resolved to {tol:g}", achieved=err_total)


height_of_root_sum = mahler

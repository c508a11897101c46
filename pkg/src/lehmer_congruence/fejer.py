"""Fejer-weighted sums of log|1 - z^j| and the estimates built on them.

The weights are f_j = 1 - j/(J+1). The quantity of interest is
sup_{|z| <= 1} sum_j f_j log|1 - z^j|, which is attained on |z| = 1 because
each term is harmonic inside the disk; it is claimed to be at most
1/2 log(J/2 + 1) + 1/2.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError

NEG_INF = float("-inf")
GOLDEN = (math.sqrt(5) - 1) / 2


def fejer_weight(j: int, J: int) -> Fraction:
    if not 1 <= j <= J:
        raise InputError(f"need 1 <= j <= J, got j={j}, J={J}")
    return 1 - Fraction(j, J + 1)


def fejer_moment(k: int, J: int) -> Fraction:
    """sum_{j=1}^J j^k f_j in closed form."""
    if J < 1:
        raise InputError("J must be >= 1")
    if k == 0:
        return Fraction(J, 2)
    if k == 1:
        return Fraction(J * J + 2 * J, 6)
    if k == 2:
        return Fraction(J * (J + 1) * (J + 2), 12)
    raise InputError(f"unsupported moment k={k}")


def fejer_bound(J: int) -> float:
    return 0.5 * math.log(J / 2 + 1) + 0.5


def fejer_sum_at(z: complex, J: int) -> float:
    """sum_j f_j log|1 - z^j|; -inf when some z^j equals 1."""
    if abs(z) > 1 + 1e-15:
        raise InputError("|z| must be <= 1")
    total = 0.0
    zj = 1
    for j in range(1, J + 1):
        zj *= z
        a = abs(1 - zj)
        if a == 0:
            return NEG_INF
        total += (1 - j / (J + 1)) * math.log(a)
    return total


def _boundary_values(theta: np.ndarray, J: int) -> np.ndarray:
    """Vectorized sum at e^{i theta}, using |1 - e^{i x}| = 2|sin(x/2)|."""
    j = np.arange(1, J + 1)[:, None]
    w = 1 - j / (J + 1)
    with np.errstate(divide="ignore"):
        terms = np.log(2 * np.abs(np.sin(j * theta[None, :] / 2)))
    return np.sum(w * terms, axis=0)


def _boundary_value(theta: float, J: int) -> float:
    return float(_boundary_values(np.array([theta]), J)[0])


def _golden_max(fn, a: float, b: float, rounds: int) -> tuple[float, float]:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(rounds):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class FejerSweep:
    J: int
    grid_size: int
    numeric_sup: float
    argmax_theta: float
    bound: float
    margin: float
    refinement_depth: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def sweep_samples(J: int, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    return theta, _boundary_values(theta, J)


def verify_fejer_bound(J: int, grid_size: int | None = None, refine_depth: int = 60, candidates: int = 8) -> FejerSweep:
    """Sampled supremum on |z| = 1 with golden-section refinement of the best grid points.

    The reported supremum is a value actually attained at a sampled angle,
    hence a lower bound on the true supremum.
    """
    if J < 1:
        raise InputError("J must be >= 1")
    if grid_size is None:
        grid_size = max(64 * J, 1024)
    if grid_size < 4 * J:
        raise InputError(f"grid_size must be >= 4J = {4 * J}")
    theta, values = sweep_samples(J, grid_size)
    h = 2 * np.pi / grid_size
    # deterministic ordering: larger value first, then smaller theta
    order = np.lexsort((theta, -values))[:candidates]
    best_t, best_v = float(theta[order[0]]), float(values[order[0]])
    for idx in order:
        t0 = float(theta[idx])
        t, v = _golden_max(lambda x: _boundary_value(x, J), t0 - h, t0 + h, refine_depth)
        if v > best_v or (v == best_v and t % (2 * math.pi) < best_t):
            best_t, best_v = t % (2 * math.pi), v
    bound = fejer_bound(J)
    return FejerSweep(J, grid_size, best_v, best_t, bound, bound - best_v, refine_depth)


def interior_spot_check(J: int, radii: int = 16, angles: int = 256, tol: float = 1e-12) -> bool:
    """Values on a polar grid inside the disk never exceed the boundary maximum."""
    boundary = verify_fejer_bound(J, max(angles, 4 * J)).numeric_sup
    for r in np.linspace(0, 1, radii, endpoint=False):
        for th in 2 * np.pi * np.arange(angles) / angles:
            if fejer_sum_at(r * complex(math.cos(th), math.sin(th)), J) > boundary + tol:
                return False
    return True


def export_sweep_csv(path: str | Path, J: int, grid_size: int) -> None:
    theta, values = sweep_samples(J, grid_size)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "value"])
        for t, v in zip(theta, values):
            w.writerow([repr(float(t)), repr(float(v))])


# ---------------------------------------------------------------------------
# the auxiliary inequality log|1 - e^{i theta}| <= log|1 - e^{-t} e^{i theta}| + t/2


def gap_function(t: float, theta: float) -> float:
    """F_t(theta) = log|1 - e^{-t} e^{i theta}| + t/2 - log|1 - e^{i theta}|.

    Uses |1 - r e^{i theta}|^2 = (1 - r)^2 + 4 r sin^2(theta/2) so that small
    t and theta near 0 do not cancel catastrophically.
    """
    s = math.sin(theta / 2)
    r = math.exp(-t)
    one_minus_r = -math.expm1(-t)
    near = 0.5 * math.log(one_minus_r**2 + 4 * r * s * s)
    return near + t / 2 - math.log(2 * abs(s))


def gap_derivative(t: float, theta: float) -> float:
    """d F_t / dt = (e^{2t} - 1) / (2 ((e^t - cos theta)^2 + sin^2 theta))."""
    et = math.exp(t)
    return math.expm1(2 * t) / (2 * ((et - math.cos(theta)) ** 2 + math.sin(theta) ** 2))


def verify_gttheta(t_grid, theta_grid, tol: float = 1e-12, derivative_samples: int = 16) -> bool:
    """F_t(theta) >= -tol on the grid, and dF/dt > 0 agrees with finite differences."""
    for th in theta_grid:
        if abs(math.remainder(th, 2 * math.pi)) < 1e-6:
            raise InputError("theta must avoid multiples of 2 pi")
    for t in t_grid:
        if t < 0:
            raise InputError("t must be >= 0")
        for th in theta_grid:
            if gap_function(t, th) < -tol:
                return False
    pts = [(t, th) for t in t_grid if t > 0 for th in theta_grid]
    step = max(1, len(pts) // derivative_samples)
    for t, th in pts[::step]:
        d = gap_derivative(t, th)
        h = 1e-6 * max(1.0, t)
        fd = (gap_function(t + h, th) - gap_function(max(t - h, 0.0), th)) / (t + h - max(t - h, 0.0))
        if not d > 0 or abs(d - fd) > 1e-5 * max(1.0, abs(d)):
            return False
    return True


@dataclass(frozen=True)
class BoundChain:
    J: int
    at_t: float  # -1/2 log(1 - e^{-t}) + J t / 4 at t = log(1 + 2/J)
    middle: float  # 1/2 log(J/2 + 1) + J/4 log(1 + 2/J)
    bound: float

    def holds(self, tol: float = 1e-12) -> bool:
        return self.at_t <= self.middle + tol and self.middle <= self.bound + tol


def bound_chain(J: int) -> BoundChain:
    t = math.log1p(2 / J)
    at_t = -0.5 * math.log(-math.expm1(-t)) + J * t / 4
    middle = 0.5 * math.log(J / 2 + 1) + J / 4 * math.log1p(2 / J)
    return BoundChain(J, at_t, middle, fejer_bound(J))

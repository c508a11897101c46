"""Explicit lower bounds for height sums and their comparison with measured values."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import InputError
from .intpoly import IntPolynomial, length, x_pow_minus_one

J_MAX_DEFAULT = 10_000
EARLY_EXIT = 64


def thm3_bound(delta_val: float, m: int, n: int, card: int, J: int) -> float:
    """3/(J+2) * (Delta log m - (card/n) (log(J/2+1) + 1)/J).

    Returned as is; a nonpositive value carries no information.
    """
    if J < 1 or n < 1 or m < 2 or card < 1:
        raise InputError("need J, n, card >= 1 and m >= 2")
    return 3.0 / (J + 2) * (delta_val * math.log(m) - card / n * (math.log(J / 2 + 1) + 1) / J)


def thm3_optimize(delta_val: float, m: int, n: int, card: int, J_max: int = J_MAX_DEFAULT) -> tuple[int, float]:
    """Best J in [1, J_max] for thm3_bound; ties go to the smaller J.

    The scan stops once the value has decreased for 64 consecutive J past
    the running maximum, since the bound tends to 0 from its peak.
    """
    if J_max < 1:
        raise InputError("J_max must be >= 1")
    best_J, best = 1, thm3_bound(delta_val, m, n, card, 1)
    prev = best
    decreasing = 0
    for J in range(2, J_max + 1):
        v = thm3_bound(delta_val, m, n, card, J)
        if v > best:
            best_J, best = J, v
        decreasing = decreasing + 1 if v < prev else 0
        prev = v
        if decreasing >= EARLY_EXIT:
            break
    if best <= 0:
        return 1, thm3_bound(delta_val, m, n, card, 1)
    return best_J, best


def thm3_table(delta_val: float, m: int, n: int, card: int, J_max: int) -> dict[int, float]:
    return {J: thm3_bound(delta_val, m, n, card, J) for J in range(1, J_max + 1)}


def _small_m_value(D: int, m: int, n: int) -> float:
    x = D / (n * math.log(m))
    return math.log(m) / (128 * x * math.log(16 * x))


def lemma_bound(D: int, m: int, n: int) -> tuple[float, str]:
    """Two-branch bound for monic f of degree D with phi(n-1) | f mod m."""
    if D < 1 or m < 2 or n < 2:
        raise InputError("need D >= 1 and m, n >= 2")
    logm = math.log(m)
    threshold = D / (16 * n)
    large = logm / 264
    if logm > threshold:
        return large, "large-m"
    small = _small_m_value(D, m, n)
    if logm < threshold:
        return small, "small-m"
    return max(large, small), "boundary"


def corollary_bound(m: int, eps: float) -> float:
    if not 0 < eps <= 1:
        raise InputError("eps must lie in (0, 1]")
    if m < 2:
        raise InputError("m must be >= 2")
    return math.log(m) / (185 / eps * math.log(24 / eps))


def corollary_applies(D: int, n: int, eps: float) -> bool:
    return n >= max(eps * D, 2)


def shparlinski_eps(m: int) -> float:
    """log log m / log m, the admissible eps for large m."""
    if m < 16:
        raise InputError("m must be >= 16")
    return math.log(math.log(m)) / math.log(m)


def bdm_constant(m: int) -> float:
    if m < 2:
        raise InputError("m must be >= 2")
    if m == 2:
        return math.log(5) / 4
    return math.log(math.sqrt(m * m + 1) / 2)


def bdm_reference(D: int, m: int) -> float:
    if D < 1:
        raise InputError("D must be >= 1")
    return D / (D + 1) * bdm_constant(m)


def samuels_polynomial(D: int, u: IntPolynomial) -> IntPolynomial:
    """X^(D+1) - 1 + (X - 1) u."""
    if not u.is_zero() and u.degree > D - 1:
        raise InputError(f"deg u must be <= D - 1 = {D - 1}")
    return x_pow_minus_one(D + 1) + IntPolynomial((-1, 1)) * u


def samuels_bound(D: int, m: int, u: IntPolynomial) -> float:
    if D < 1 or m < 2:
        raise InputError("need D >= 1 and m >= 2")
    L = length(samuels_polynomial(D, u))
    return D / (D + 1) * math.log(m / L)


def lemma_constant_lhs(J: int = 57) -> float:
    return (0.5 - 4 * math.log(J) / J) / J


def lemma_constant_check(J: int = 57, const: float = 1 / 264) -> bool:
    return lemma_constant_lhs(J) >= const


@dataclass
class BoundReport:
    D: int
    m: int
    n: int
    eps: float
    delta: float
    card: int
    thm3_by_J: dict[int, float]
    thm3_best: tuple[int, float]
    lemma_bound: float | None
    lemma_branch: str | None
    corollary_bound: float | None
    bdm_reference: float
    samuels_bound: float | None = None
    measured_log_mahler: float | None = None
    slack: float | None = None
    vacuous: list[str] = field(default_factory=list)

    def applicable(self) -> dict[str, float]:
        out = {"thm3": self.thm3_best[1]}
        if self.lemma_bound is not None:
            out["lemma"] = self.lemma_bound
        if self.corollary_bound is not None:
            out["corollary"] = self.corollary_bound
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["thm3_by_J"] = {str(k): v for k, v in self.thm3_by_J.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def bound_report(
    D: int,
    m: int,
    n: int,
    delta_val: float,
    card: int | None = None,
    eps: float = 1.0,
    J_max: int = J_MAX_DEFAULT,
    table_J: int = 10,
    measured: float | None = None,
    u: IntPolynomial | None = None,
    divisibility: bool = True,
) -> BoundReport:
    """All bounds for one (D, m, n, Delta).

    The lemma and corollary bounds are only reported when ``divisibility``
    holds (phi(n-1) | f mod m), which is their hypothesis; the corollary
    additionally needs n >= max(eps D, 2).
    """
    card = D if card is None else card
    best = thm3_optimize(delta_val, m, n, card, J_max)
    lem = lemma_bound(D, m, n) if divisibility and n >= 2 else (None, None)
    cor = corollary_bound(m, eps) if divisibility and corollary_applies(D, n, eps) else None
    sam = samuels_bound(D, m, u) if u is not None else None
    rep = BoundReport(
        D, m, n, eps, delta_val, card,
        thm3_table(delta_val, m, n, card, min(table_J, J_max)), best,
        lem[0], lem[1], cor, bdm_reference(D, m), sam,
    )
    if best[1] <= 0:
        rep.vacuous.append("thm3")
    if sam is not None and sam <= 0:
        rep.vacuous.append("samuels")
    if measured is not None:
        rep.measured_log_mahler = measured
        rep.slack = measured - max(rep.applicable().values())
    return rep

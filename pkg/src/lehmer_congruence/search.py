"""Coefficient-space search over congruence families, checking every lower bound.

Each candidate is a monic integer polynomial built to satisfy a congruence
hypothesis, evaluated independently of every other candidate (its random
stream is seeded by (seed, index)), so serial and parallel runs produce the
same rows in the same order.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

import numpy as np

from . import __version__
from .bounds import bdm_reference, bound_report, samuels_bound
from .delta import delta
from .errors import BoundViolation, InputError
from .intpoly import IntPolynomial, divides_mod, has_cyclotomic_root, parse_poly, phi
from .resultant import resultant
from .roots import mahler

CSV_SCHEMA = "lehmer-search-csv v1"
COLUMNS = [
    "index", "seed", "poly", "D", "m", "n", "delta", "thm3_J", "thm3", "lemma",
    "corollary", "bdm", "samuels", "mahler", "mahler_err", "slack", "flags",
]
MODES = ("congruent-to-phi", "divisible-by-phi", "samuels")


@dataclass
class SearchConfig:
    degree: int
    modulus: int
    n: int | None = None
    coeff_bound: int = 4
    count: int = 100
    exhaustive: bool = False
    seed: int = 0
    tol: float = 1e-9
    eps: float = 1.0
    mode: str = "congruent-to-phi"
    u: str = "0"
    out: str | None = None
    workers: int = 1
    j_max: int = 10_000

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {', '.join(MODES)}")
        if self.degree < 1 or self.modulus < 2 or self.coeff_bound < 1:
            raise InputError("need degree >= 1, modulus >= 2, coeff_bound >= 1")
        if self.count < 0 or self.workers < 1:
            raise InputError("count must be >= 0 and workers >= 1")
        if self.mode in ("congruent-to-phi", "samuels"):
            if self.n is not None and self.n != self.degree + 1:
                raise InputError(f"mode {self.mode} uses n = degree + 1 = {self.degree + 1}")
            self.n = self.degree + 1
        if self.n is None or self.n < 2:
            raise InputError("n must be >= 2")
        if self.mode == "divisible-by-phi" and self.n - 1 > self.degree:
            raise InputError("divisible-by-phi needs n - 1 <= degree")
        u = self.u_poly
        if not u.is_zero() and u.degree > self.degree - 1:
            raise InputError("deg u must be <= degree - 1")

    @property
    def u_poly(self) -> IntPolynomial:
        return parse_poly(self.u) if self.mode == "samuels" else IntPolynomial()

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        return d


# ---------------------------------------------------------------------------
# candidate generation


def _target(cfg: SearchConfig) -> tuple[int, ...]:
    """Residues mod m of the non-leading coefficients that the family prescribes."""
    base = phi(cfg.degree) + cfg.u_poly
    return tuple(base[i] for i in range(cfg.degree))


def _residue_values(r: int, m: int, B: int) -> list[int]:
    vals = [c for c in range(-B, B + 1) if (c - r) % m == 0]
    if vals:
        return vals
    r0 = r % m
    return [r0 if 2 * r0 <= m else r0 - m]


def _random_candidate(cfg: SearchConfig, index: int) -> IntPolynomial:
    rng = np.random.default_rng([cfg.seed, index])
    D, m, B = cfg.degree, cfg.modulus, cfg.coeff_bound
    if cfg.mode == "divisible-by-phi":
        k = D - (cfg.n - 1)
        a = [int(c) for c in rng.integers(-B, B + 1, size=k)] + [1]
        b = [int(c) for c in rng.integers(-B, B + 1, size=D)]
        return phi(cfg.n - 1) * IntPolynomial(a) + IntPolynomial(b) * m
    coeffs = []
    for r in _target(cfg):
        choices = _residue_values(r, m, B)
        coeffs.append(choices[int(rng.integers(len(choices)))])
    return IntPolynomial(coeffs + [1])


def _in_family(cfg: SearchConfig, f: IntPolynomial) -> bool:
    if cfg.mode == "divisible-by-phi":
        return divides_mod(phi(cfg.n - 1), f, cfg.modulus)
    return all((f[i] - r) % cfg.modulus == 0 for i, r in enumerate(_target(cfg)))


def candidates(cfg: SearchConfig) -> Iterator[tuple[int, IntPolynomial]]:
    """(index, f) pairs; exhaustive mode walks the coefficient box in lexicographic order."""
    if not cfg.exhaustive:
        for i in range(cfg.count):
            yield i, _random_candidate(cfg, i)
        return
    D, m, B = cfg.degree, cfg.modulus, cfg.coeff_bound
    if cfg.mode == "divisible-by-phi":
        box = itertools.product(range(-B, B + 1), repeat=D)
    else:
        # only residue-compatible values can survive the filter
        box = itertools.product(*(_residue_values(r, m, B) for r in _target(cfg)))
    i = 0
    for low in box:
        f = IntPolynomial(list(low) + [1])
        if _in_family(cfg, f):
            yield i, f
            i += 1


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class Row:
    index: int
    seed: int
    poly: str
    D: int
    m: int
    n: int
    delta: float | None = None
    thm3_J: int | None = None
    thm3: float | None = None
    lemma: float | None = None
    corollary: float | None = None
    bdm: float | None = None
    samuels: float | None = None
    mahler: float | None = None
    mahler_err: float | None = None
    slack: float | None = None
    flags: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    def csv_row(self) -> list[str]:
        out = []
        for c in COLUMNS:
            v = getattr(self, c)
            if c == "flags":
                out.append(";".join(v))
            elif v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out


def evaluate(cfg: SearchConfig, index: int, f: IntPolynomial) -> Row:
    D, m, n = cfg.degree, cfg.modulus, cfg.n
    row = Row(index, cfg.seed, str(f), D, m, n)
    if has_cyclotomic_root(f):
        row.flags.append("cyclotomic")
        return row
    d = delta(f, m, n)
    mv = mahler(f, cfg.tol)
    divisible = divides_mod(phi(n - 1), f, m)
    rep = bound_report(D, m, n, d.numeric_value, D, cfg.eps, cfg.j_max, 1, mv.log_measure, None, divisible)
    row.delta = d.numeric_value
    row.thm3_J, row.thm3 = rep.thm3_best
    row.lemma, row.corollary = rep.lemma_bound, rep.corollary_bound
    row.mahler, row.mahler_err = mv.log_measure, mv.abs_error_bound
    bounds = dict(rep.applicable())
    if cfg.mode == "congruent-to-phi":
        row.bdm = bdm_reference(D, m)
        bounds["bdm"] = row.bdm
    if cfg.mode == "samuels":
        u = cfg.u_poly
        coprime = f(1) != 0 and resultant(f, phi(D) + u).value != 0
        if coprime:
            row.samuels = samuels_bound(D, m, u)
            bounds["samuels"] = row.samuels
        else:
            row.flags.append("samuels-hypothesis-fails")
    if not divisible:
        row.flags.append("not-divisible")
    if row.thm3 is not None and row.thm3 <= 0:
        row.flags.append("thm3-vacuous")
    row.slack = mv.log_measure - max(bounds.values())
    for name, b in bounds.items():
        if mv.log_measure + mv.abs_error_bound + cfg.tol < b:
            row.violations.append(name)
    return row


def _evaluate_pair(args) -> Row:
    cfg, index, f = args
    return evaluate(cfg, index, f)


@dataclass
class RunRecord:
    config: dict
    rows: list[Row]
    generated: int
    excluded_cyclotomic: int
    min_slack: float | None
    min_measured: float | None
    counterexample_count: int
    wall_clock: float

    def summary(self) -> dict:
        return {
            "schema": CSV_SCHEMA,
            "version": __version__,
            "config": self.config,
            "generated": self.generated,
            "excluded_cyclotomic": self.excluded_cyclotomic,
            "evaluated": self.generated - self.excluded_cyclotomic,
            "min_slack": self.min_slack,
            "min_measured_log_mahler": self.min_measured,
            "counterexample_count": self.counterexample_count,
            "wall_clock_seconds": self.wall_clock,
        }

    def csv_text(self, timestamp: str | None = None) -> str:
        buf = io.StringIO()
        buf.write(f"# {CSV_SCHEMA}\n")
        buf.write(f"# generated {timestamp or datetime.now(timezone.utc).isoformat()}\n")
        buf.write(data_section(self))
        return buf.getvalue()


def data_section(record: RunRecord) -> str:
    """Everything in the CSV except the timestamp line: config echo, header, rows."""
    buf = io.StringIO()
    buf.write("# config " + json.dumps(record.config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in record.rows:
        w.writerow(r.csv_row())
    return buf.getvalue()


def run_search(cfg: SearchConfig, write: bool = True) -> RunRecord:
    """Generate, evaluate and persist a run; raises BoundViolation after dumping any counterexample."""
    start = time.perf_counter()
    pairs = [(cfg, i, f) for i, f in candidates(cfg)]
    if cfg.workers > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            rows = list(ex.map(_evaluate_pair, pairs, chunksize=max(1, len(pairs) // (4 * cfg.workers))))
    else:
        rows = [_evaluate_pair(p) for p in pairs]
    measured = [r for r in rows if r.mahler is not None]
    bad = [r for r in rows if r.violations]
    record = RunRecord(
        cfg.echo(),
        rows,
        len(rows),
        sum("cyclotomic" in r.flags for r in rows),
        min((r.slack for r in measured), default=None),
        min((r.mahler for r in measured), default=None),
        len(bad),
        time.perf_counter() - start,
    )
    if write and cfg.out:
        out = Path(cfg.out)
        out.write_text(record.csv_text())
        out.with_suffix(".json").write_text(json.dumps(record.summary(), indent=2) + "\n")
    if bad:
        dump = {"config": cfg.echo(), "counterexamples": [asdict(r) for r in bad]}
        if write and cfg.out:
            Path(cfg.out).with_suffix(".counterexample.json").write_text(json.dumps(dump, indent=2) + "\n")
        raise BoundViolation(
            f"{len(bad)} bound violation(s); first: {bad[0].poly} violates {', '.join(bad[0].violations)}"
        )
    return record

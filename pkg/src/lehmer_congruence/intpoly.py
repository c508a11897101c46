"""Integer and mod-m polynomial arithmetic.

Polynomials are stored as tuples of Python ints in ascending degree order,
so ``IntPolynomial((3, 3, 1))`` is X^2 + 3X + 3. The zero polynomial is the
empty tuple.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import zip_longest
from typing import Iterable, Sequence

from .arith import totient_table
from .errors import InputError, PolynomialSyntaxError


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPolynomial:
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    # -- basic properties ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive_part(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _coerce(other)
        return IntPolynomial(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-a for a in self.coeffs)

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(a * other for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        if k < 0:
            raise ValueError("negative power")
        result, base = IntPolynomial((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod_monic(self, g: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Exact division over Z by a monic divisor."""
        if not g.is_monic():
            raise InputError("divisor must be monic")
        r = list(self.coeffs)
        dg = g.degree
        if len(r) - 1 < dg:
            return IntPolynomial(), self
        q = [0] * (len(r) - dg)
        gc = g.coeffs
        for i in range(len(r) - 1, dg - 1, -1):
            c = r[i]
            if c:
                q[i - dg] = c
                base = i - dg
                for j in range(dg):
                    r[base + j] -= c * gc[j]
                r[i] = 0
        return IntPolynomial(q), IntPolynomial(r[:dg])

    def __mod__(self, g: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(g)[1]

    def pseudo_remainder(self, g: IntPolynomial) -> IntPolynomial:
        """lc(g)^(deg f - deg g + 1) * f mod g, computed over Z."""
        if g.is_zero():
            raise ZeroDivisionError("pseudo-remainder by zero polynomial")
        r = list(self.coeffs)
        dg, lcg = g.degree, g.lc
        if len(r) - 1 < dg:
            return self
        gc = g.coeffs
        # one multiplication by lc(g) per step, delta + 1 steps
        for i in range(len(r) - 1, dg - 1, -1):
            c = r[i]
            r = [lcg * a for a in r]
            if c:
                base = i - dg
                for j in range(dg + 1):
                    r[base + j] -= c * gc[j]
            r[i] = 0
        return IntPolynomial(r[:dg])

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, k: int) -> IntPolynomial:
        """f(X^k)."""
        out = [0] * (k * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return IntPolynomial(out)

    def exact_quotient(self, g: IntPolynomial) -> IntPolynomial:
        """Divide by g over Z when g divides self exactly (g need not be monic)."""
        if g.is_zero():
            raise ZeroDivisionError
        r = list(self.coeffs)
        dg, lcg = g.degree, g.lc
        if not r:
            return IntPolynomial()
        q = [0] * max(len(r) - dg, 0)
        for i in range(len(r) - 1, dg - 1, -1):
            c, rem = divmod(r[i], lcg)
            if rem:
                raise ValueError("division is not exact")
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] -= c * g.coeffs[j]
        if any(r):
            raise ValueError("division is not exact")
        return IntPolynomial(q)

    # -- rendering ----------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


def _coerce(p: IntPolynomial | int) -> IntPolynomial:
    return IntPolynomial((p,)) if isinstance(p, int) else p


def render(f: IntPolynomial) -> str:
    """Canonical expression form: descending powers, explicit signs, e.g. ``X^2 + 3*X + 3``."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = "X" if i == 1 else f"X^{i}"
            body = mono if a == 1 else f"{a}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|([Xx])|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._tokenize()
        self.i = 0

    def _tokenize(self) -> None:
        text = self.text
        pos = 0
        kinds = ("num", "x", "^", "*", "+", "-", "(", ")")
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m:
                ch = text[pos]
                off = len(text[:pos].encode())
                if ch in "./":
                    raise PolynomialSyntaxError("non-integer coefficient", off)
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", off)
            for kind, val in zip(kinds, m.groups()):
                if val is not None:
                    start = m.start(m.lastindex)
                    self.tokens.append((kind, val, len(text[:start].encode())))
                    break
            pos = m.end()
            if self.tokens[-1][0] == "num" and pos < len(text) and text[pos] in "./":
                after_caret = len(self.tokens) > 1 and self.tokens[-2][0] == "^"
                msg = "exponent must be a nonnegative integer" if after_caret else "non-integer coefficient"
                raise PolynomialSyntaxError(msg, len(text[:pos].encode()))
        self.tokens.append(("end", "", len(text.encode())))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> IntPolynomial:
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError("empty expression", 0)
        f = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {val!r}", off)
        return f

    def expr(self) -> IntPolynomial:
        f = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> IntPolynomial:
        f = self.unary()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                f = f * self.unary()
            elif kind in ("x", "("):
                # implicit multiplication, as in 3X or 2(X+1)
                f = f * self.unary()
            else:
                return f

    def unary(self) -> IntPolynomial:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> IntPolynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val, off = self.peek()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", off)
            self.take()
            return base ** int(val)
        return base

    def atom(self) -> IntPolynomial:
        kind, val, off = self.take()
        if kind == "num":
            return IntPolynomial((int(val),))
        if kind == "x":
            return IntPolynomial((0, 1))
        if kind == "(":
            f = self.expr()
            k2, v2, off2 = self.take()
            if k2 != ")":
                raise PolynomialSyntaxError("expected ')'", off2)
            return f
        if kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", off)
        raise PolynomialSyntaxError(f"unexpected token {val!r}", off)


def _parse_list(text: str) -> IntPolynomial:
    coeffs = []
    offset = 0
    for piece in text.split(","):
        s = piece.strip()
        here = offset + (len(piece) - len(piece.lstrip()))
        if not re.fullmatch(r"[+-]?\d+", s):
            if re.fullmatch(r"[+-]?\d*[./]\d*", s) and s not in (".", "/"):
                raise PolynomialSyntaxError("non-integer coefficient", here)
            raise PolynomialSyntaxError(f"bad list entry {s!r}", here)
        coeffs.append(int(s))
        offset += len(piece.encode()) + 1
    return IntPolynomial(coeffs)


def parse_poly(text: str) -> IntPolynomial:
    """Parse either an ascending coefficient list ``"3,3,1"`` or an expression ``"X^2+3*X+3"``."""
    if "," in text:
        return _parse_list(text)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# named polynomials


def phi(n: int) -> IntPolynomial:
    """X^n + X^(n-1) + ... + X + 1 (all n+1 coefficients equal to 1)."""
    if n < 0:
        raise InputError("phi(n) needs n >= 0")
    return IntPolynomial([1] * (n + 1))


@lru_cache(maxsize=4096)
def cyclotomic(k: int) -> IntPolynomial:
    """The classical k-th cyclotomic polynomial."""
    if k < 1:
        raise InputError("cyclotomic index must be >= 1")
    f = IntPolynomial.monomial(k) - 1
    for d in range(1, k):
        if k % d == 0:
            f = f.divmod_monic(cyclotomic(d))[0]
    return f


def x_pow_minus_one(n: int) -> IntPolynomial:
    return IntPolynomial.monomial(n) - 1


def length(g: IntPolynomial) -> int:
    return sum(abs(c) for c in g.coeffs)


# ---------------------------------------------------------------------------
# gcd over Q (returned primitive over Z)


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Greatest common divisor via the primitive PRS; primitive with positive leading coefficient."""
    a, b = f.primitive_part(), g.primitive_part()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = a.pseudo_remainder(b)
        a, b = b, r.primitive_part()
    return a.primitive_part()


def squarefree_decomposition(f: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: f = c * prod g_i^i with square-free, pairwise coprime g_i.

    Returns [(g_i, i)] for the nonconstant g_i. Works over Q; each g_i is primitive.
    """
    if f.is_zero() or f.degree == 0:
        return []
    f = f.primitive_part()
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f.exact_quotient(a0)
    c = df.exact_quotient(a0) if not df.is_zero() else df
    d = c - b.derivative()
    out = []
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_quotient(a)
        c = d.exact_quotient(a)
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# mod m polynomials


@dataclass(frozen=True)
class ModPolynomial:
    coeffs: tuple[int, ...]
    modulus: int

    def __init__(self, coeffs: Iterable[int], modulus: int):
        if modulus < 2:
            raise InputError("modulus must be >= 2")
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "coeffs", _trim(c % modulus for c in coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    def divmod_monic(self, g: IntPolynomial) -> tuple[ModPolynomial, ModPolynomial]:
        if not g.is_monic():
            raise InputError("divisor must be monic")
        m = self.modulus
        q, r = IntPolynomial(self.coeffs).divmod_monic(g)
        return ModPolynomial(q.coeffs, m), ModPolynomial(r.coeffs, m)

    def lift(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    def __str__(self) -> str:
        return f"{render(IntPolynomial(self.coeffs))} (mod {self.modulus})"


def reduce_mod(f: IntPolynomial, m: int) -> ModPolynomial:
    return ModPolynomial(f.coeffs, m)


def divides_mod(g: IntPolynomial, f: IntPolynomial, m: int) -> bool:
    """True iff the monic g divides f in (Z/mZ)[X]."""
    if not g.is_monic():
        raise InputError("divisor must be monic")
    if m < 2:
        raise InputError("modulus must be >= 2")
    # reduce first so intermediate coefficients stay small
    return reduce_mod(f, m).divmod_monic(g)[1].is_zero()


def congruent_to_phi(f: IntPolynomial, m: int) -> bool:
    """All coefficients of the monic f are 1 mod m."""
    if not f.is_monic():
        raise InputError("f must be monic")
    if m < 2:
        raise InputError("modulus must be >= 2")
    return all((c - 1) % m == 0 for c in f.coeffs)


# ---------------------------------------------------------------------------
# roots of unity


@lru_cache(maxsize=256)
def cyclotomic_order_bound(degree: int) -> int:
    """Largest k with phi(k) <= degree (Euler phi). phi(k) >= sqrt(k/2) bounds the search."""
    limit = 2 * degree * degree + 2
    tot = totient_table(limit)
    return max(k for k in range(1, limit + 1) if tot[k] <= degree)


@lru_cache(maxsize=256)
def cyclotomic_orders(degree: int, n_max: int | None = None) -> tuple[int, ...]:
    """Orders k <= n_max whose primitive roots of unity could be roots of a degree-`degree` polynomial."""
    bound = cyclotomic_order_bound(degree)
    if n_max is not None:
        bound = min(bound, n_max)
    tot = totient_table(bound)
    return tuple(k for k in range(1, bound + 1) if tot[k] <= degree)


def cyclotomic_factors(f: IntPolynomial, n_max: int | None = None) -> list[tuple[int, int]]:
    """[(k, multiplicity)] of classical cyclotomic factors dividing f, for k <= n_max."""
    if f.is_zero():
        raise InputError("zero polynomial")
    g = f
    out = []
    for k in cyclotomic_orders(max(f.degree, 1), n_max):
        ck = cyclotomic(k)
        if ck.degree > g.degree:
            continue
        e = 0
        while not g.is_constant():
            try:
                q = g.exact_quotient(ck)
            except ValueError:
                break
            g = q
            e += 1
        if e:
            out.append((k, e))
    return out


def has_cyclotomic_root(f: IntPolynomial, n_max: int | None = None) -> bool:
    """True iff f shares a root with some X^k - 1, k <= n_max.

    gcd(f, X^k - 1) is nonconstant exactly when some classical cyclotomic
    polynomial of order d | k divides f, so the test is exact division by
    those factors. The default n_max covers every order whose primitive
    roots have degree phi(k) <= deg f.
    """
    if f.is_zero():
        raise InputError("zero polynomial")
    if f.is_constant():
        return False
    return bool(cyclotomic_factors(f, n_max))


def strip_cyclotomic(f: IntPolynomial) -> tuple[IntPolynomial, list[tuple[int, int]]]:
    """Divide out every classical cyclotomic factor; returns (cofactor, [(k, multiplicity)])."""
    facs = cyclotomic_factors(f)
    g = f
    for k, e in facs:
        for _ in range(e):
            g = g.exact_quotient(cyclotomic(k))
    return g, facs


def from_sequence(coeffs: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(coeffs)


def root_square(f: IntPolynomial) -> IntPolynomial:
    """Monic polynomial whose roots are the squares of the roots of the monic f.

    (-1)^D f(X) f(-X) is a polynomial in X^2 (the Graeffe step); its even
    coefficients give the answer.
    """
    if not f.is_monic():
        raise InputError("f must be monic")
    neg = IntPolynomial(c if i % 2 == 0 else -c for i, c in enumerate(f.coeffs))
    prod = f * neg
    if f.degree % 2:
        prod = -prod
    return IntPolynomial(prod.coeffs[0::2])

"""Integer factorization and p-adic valuations."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import FactorizationError

TRIAL_LIMIT = 10**6
COFACTOR_LIMIT = 10**12

# Deterministic Miller-Rabin for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = None


def _small_primes(limit: int = TRIAL_LIMIT) -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
        _SMALL_PRIMES = [i for i, flag in enumerate(sieve) if flag]
    return _SMALL_PRIMES


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def pollard_rho(n: int, max_iter: int = 2_000_000, seed: int = 1) -> int | None:
    """Brent's variant. Returns a nontrivial factor of composite n, or None on budget exhaustion."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    for _ in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        steps = 0
        while g == 1 and steps < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            steps += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factor(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {p: exponent}.

    Trial division to 10^6, then Pollard rho. A composite cofactor that rho
    cannot split is rejected when it exceeds 10^12.
    """
    n = abs(int(n))
    if n == 0:
        raise FactorizationError("cannot factor 0")
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        stack = [n]
        while stack:
            c = stack.pop()
            if c == 1:
                continue
            if is_probable_prime(c):
                out[c] = out.get(c, 0) + 1
                continue
            d = pollard_rho(c)
            if d is None:
                if c > COFACTOR_LIMIT:
                    raise FactorizationError(f"could not split composite cofactor {c}")
                raise FactorizationError(f"rho failed on small cofactor {c}")
            stack.extend((d, c // d))
    return dict(sorted(out.items()))


def prime_divisors(n: int) -> list[int]:
    return list(factor(n))


def ord_p(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ord_p_rational(q: Fraction, p: int) -> int:
    return ord_p(q.numerator, p) - ord_p(q.denominator, p)


def euler_phi(n: int) -> int:
    result = n
    for p in factor(n):
        result -= result // p
    return result


def totient_table(limit: int) -> list[int]:
    phi = list(range(limit + 1))
    for i in range(2, limit + 1):
        if phi[i] == i:
            for j in range(i, limit + 1, i):
                phi[j] -= phi[j] // i
    return phi

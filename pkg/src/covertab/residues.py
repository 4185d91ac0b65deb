"""Residue conventions shared by every module.

All sign conventions route through here: ``lift(x, N)`` is the representative
of x in [0, N), so ``lift(-a, N)`` is the bracket [-a]_N and
``frac(-a, N) = lift(-a, N) / N`` is the fractional part <-a/N>.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence


def lift(x: int, N: int) -> int:
    return x % N


def frac(x: int, N: int) -> Fraction:
    return Fraction(x % N, N)


def gcd_all(N: int, values: Iterable[int]) -> int:
    g = N
    for v in values:
        g = math.gcd(g, v)
    return g


def neg(vec: Sequence[int], N: int) -> tuple[int, ...]:
    return tuple((-x) % N for x in vec)


def combine(n: Sequence[int], rows: Sequence[Sequence[int]], N: int) -> tuple[int, ...]:
    """The tuple n.A mod N, with entries in [0, N)."""
    s = len(rows[0])
    return tuple(sum(n[i] * rows[i][j] for i in range(len(rows))) % N for j in range(s))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True

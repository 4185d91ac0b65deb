"""Hasse-Witt blocks of abelian covers in characteristic p = 1 mod N.

For a character with tuple alpha and d = d_n >= 1, the (i, j) entry of the
block (1 <= i, j <= d) is

    sum over l_1 + ... + l_s = U of prod_k binom(c_k, l_k) z_k^l_k,
    c_k = q [-alpha_k]_N,  q = (p - 1)/N,  U = (d - i + 1)(p - 1) + (i - j),

which is the coefficient of t^U in prod_k (1 + t z_k)^c_k. Numeric blocks
use that coefficient extraction; symbolic blocks keep z_1..z_s as
indeterminates and store entries as {exponent vector: coefficient}.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from covertab.cover import CoverDatum
from covertab.errors import CharacterMismatch, RepeatedPoint, TermLimitExceeded, ValidationError
from covertab.residues import is_prime, neg
from covertab.spectrum import alpha_tuple, dim_from_alpha, spectrum_table

Poly = dict[tuple[int, ...], int]
DEFAULT_TERM_LIMIT = 200_000


class NotPrime(ValidationError):
    name = "NotPrime"


@dataclass(frozen=True)
class PrimeContext:
    N: int
    p: int
    fact: tuple[int, ...]
    invfact: tuple[int, ...]

    @property
    def q(self) -> int:
        return (self.p - 1) // self.N

    def binom(self, a: int, b: int) -> int:
        if b < 0 or b > a:
            return 0
        # caps never reach p, so no Lucas step is needed
        assert a < self.p, (a, self.p)
        return self.fact[a] * self.invfact[b] % self.p * self.invfact[a - b] % self.p


def prime_context(N: int, p: int) -> PrimeContext:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if (p - 1) % N:
        raise CharacterMismatch(f"p = {p} is not 1 mod N = {N}")
    fact = [1] * p
    for k in range(1, p):
        fact[k] = fact[k - 1] * k % p
    invfact = [1] * p
    invfact[p - 1] = pow(fact[p - 1], p - 2, p)
    for k in range(p - 1, 0, -1):
        invfact[k - 1] = invfact[k] * k % p
    return PrimeContext(N, p, tuple(fact), tuple(invfact))


def choose_prime(N: int, min_p: int = 2) -> PrimeContext:
    """Smallest prime p >= min_p with p = 1 mod N."""
    p = max(min_p, 2)
    while not (is_prime(p) and p % N == 1):
        p += 1
    return prime_context(N, p)


def upsilon(d: int, p: int, i: int, j: int) -> int:
    return (d - i + 1) * (p - 1) + (i - j)


def caps(alpha: Sequence[int], N: int, q: int) -> tuple[int, ...]:
    return tuple(q * x for x in neg(alpha, N))


@dataclass(frozen=True)
class HWBlock:
    alpha: tuple[int, ...]
    n: tuple[int, ...]
    size: int
    entries: tuple
    symbolic: bool = False

    def to_csv(self) -> str:
        if self.symbolic:
            raise ValueError("symbolic blocks serialize to JSON")
        return "".join(",".join(map(str, row)) + "\n" for row in self.entries)

    def to_json(self) -> list:
        return [[poly_to_json(e) if self.symbolic else e for e in row] for row in self.entries]


def _check_points(z: Sequence[int], s: int, p: int) -> list[int]:
    if len(z) != s:
        raise ValidationError(f"need {s} points, got {len(z)}")
    pts = [x % p for x in z]
    if len(set(pts)) != len(pts):
        raise RepeatedPoint(f"points {list(z)} are not distinct mod {p}")
    return pts


def _check_context(d: CoverDatum, ctx: PrimeContext) -> None:
    if ctx.N != d.N and (ctx.p - 1) % d.N:
        raise CharacterMismatch(f"N = {d.N} does not divide p - 1 = {ctx.p - 1}")


def _coefficients(c: Sequence[int], z: Sequence[int], top: int, ctx: PrimeContext) -> list[int]:
    """Coefficients of t^0..t^top in prod_k (1 + t z_k)^c_k mod p."""
    p = ctx.p
    poly = [1] + [0] * top
    for ck, zk in zip(c, z):
        if ck == 0:
            continue
        factor = []
        zpow = 1
        for l in range(min(ck, top) + 1):
            factor.append(ctx.binom(ck, l) * zpow % p)
            zpow = zpow * zk % p
        new = [0] * (top + 1)
        for a, ca in enumerate(poly):
            if ca:
                for l, fl in enumerate(factor[: top + 1 - a]):
                    new[a + l] = (new[a + l] + ca * fl) % p
        poly = new
    return poly


def _block_numeric(alpha: tuple[int, ...], n: tuple[int, ...], N: int, ctx: PrimeContext,
                   pts: Sequence[int]) -> HWBlock:
    d = dim_from_alpha(alpha, N)
    if d == 0:
        return HWBlock(alpha, n, 0, ())
    q = (ctx.p - 1) // N
    c = caps(alpha, N, q)
    top = d * (ctx.p - 1) + d - 1
    coeffs = _coefficients(c, pts, top, ctx)
    entries = tuple(
        tuple(coeffs[upsilon(d, ctx.p, i, j)] for j in range(1, d + 1)) for i in range(1, d + 1)
    )
    return HWBlock(alpha, n, d, entries)


def hw_block_numeric(d: CoverDatum, n: Sequence[int], ctx: PrimeContext, z: Sequence[int]) -> HWBlock:
    _check_context(d, ctx)
    pts = _check_points(z, d.s, ctx.p)
    alpha = alpha_tuple(d, n)
    return _block_numeric(alpha, tuple(n), d.N, ctx, pts)


def direct_entry(alpha: Sequence[int], N: int, p: int, z: Sequence[int], i: int, j: int) -> int:
    """Entry (i, j) by summing the binomial products over every composition of U.

    Independent of the generating-function path and of the factorial tables.
    """
    d = dim_from_alpha(alpha, N)
    q = (p - 1) // N
    c = caps(alpha, N, q)
    target = upsilon(d, p, i, j)
    total = 0
    for ls in itertools.product(*(range(ck + 1) for ck in c)):
        if sum(ls) != target:
            continue
        term = 1
        for ck, lk, zk in zip(c, ls, z):
            term *= math.comb(ck, lk) * pow(zk, lk, p)
        total += term
    return total % p


# -- symbolic entries -----------------------------------------------------------


def count_terms(c: Sequence[int], target: int) -> int:
    """Number of exponent vectors 0 <= l_k <= c_k with sum = target."""
    ways = [1] + [0] * target
    for ck in c:
        new = [0] * (target + 1)
        run = 0
        for t in range(target + 1):
            run += ways[t]
            if t - ck - 1 >= 0:
                run -= ways[t - ck - 1]
            new[t] = run
        ways = new
    return ways[target]


def symbolic_entry(alpha: Sequence[int], N: int, ctx: PrimeContext, i: int, j: int,
                   term_limit: int = DEFAULT_TERM_LIMIT) -> Poly:
    d = dim_from_alpha(alpha, N)
    q = (ctx.p - 1) // N
    c = caps(alpha, N, q)
    target = upsilon(d, ctx.p, i, j)
    terms = count_terms(c, target)
    if terms > term_limit:
        raise TermLimitExceeded(terms, term_limit)
    s = len(c)
    # suffix capacities prune dead branches
    room = [0] * (s + 1)
    for k in range(s - 1, -1, -1):
        room[k] = room[k + 1] + c[k]
    out: Poly = {}
    exps = [0] * s

    def rec(k: int, left: int, coef: int):
        if k == s:
            if left == 0 and coef:
                out[tuple(exps)] = coef
            return
        lo = max(0, left - room[k + 1])
        for l in range(lo, min(c[k], left) + 1):
            exps[k] = l
            rec(k + 1, left - l, coef * ctx.binom(c[k], l) % ctx.p)
        exps[k] = 0

    rec(0, target, 1)
    return out


def hw_block_symbolic(d: CoverDatum, n: Sequence[int], ctx: PrimeContext,
                      term_limit: int = DEFAULT_TERM_LIMIT) -> HWBlock:
    _check_context(d, ctx)
    alpha = alpha_tuple(d, n)
    size = dim_from_alpha(alpha, d.N)
    entries = tuple(
        tuple(symbolic_entry(alpha, d.N, ctx, i, j, term_limit) for j in range(1, size + 1))
        for i in range(1, size + 1)
    )
    return HWBlock(alpha, tuple(n), size, entries, symbolic=True)


def evaluate(poly: Poly, z: Sequence[int], p: int) -> int:
    total = 0
    for exps, coef in poly.items():
        term = coef
        for zk, e in zip(z, exps):
            if e:
                term = term * pow(zk, e, p) % p
        total += term
    return total % p


def poly_to_json(poly: Poly) -> list[dict]:
    return [{"exp": list(e), "coef": c} for e, c in sorted(poly.items())]


def poly_from_json(items: list[dict]) -> Poly:
    return {tuple(it["exp"]): int(it["coef"]) for it in items}


def divisibility_order(e: Poly, i: int, j: int) -> Union[int, float]:
    """Largest r with z_j^r dividing e restricted to z_i = 0 (0-based indices); inf if that is 0."""
    if i == j:
        raise ValueError("need distinct branch indices")
    rest = [exps[j] for exps, coef in e.items() if coef and exps[i] == 0]
    if not rest:
        return math.inf
    return min(rest)


@dataclass(frozen=True)
class ExponentProfile:
    """Divisibility orders of the Hasse-Witt entries for a pair of type {1, s-3}."""

    r_dual: Union[int, float]
    r1: Union[int, float]
    r2: Union[int, float]
    closed_u1: int
    closed_u2: int

    @property
    def u1(self):
        return self.r_dual + self.r1

    @property
    def u2(self):
        return self.r_dual + self.r2


def exponent_profile(d: CoverDatum, n: Sequence[int], ctx: PrimeContext, i: int, j: int,
                     term_limit: int = DEFAULT_TERM_LIMIT) -> ExponentProfile:
    """Orders in z_j (after z_i = 0) of the 1x1 block of -n and the first two diagonal
    entries of the block of n, where d_n = s - 3 and d_-n = 1.

    The closed forms compared against are q |N - [a_i] - [a_j]| and
    q max(0, [a_i] + [a_j] - N) with a = n.A.
    """
    alpha = alpha_tuple(d, n)
    s, N = d.s, d.N
    if dim_from_alpha(alpha, N) != s - 3 or dim_from_alpha(neg(alpha, N), N) != 1:
        raise ValidationError("character must have d_n = s - 3 and d_-n = 1")
    if s < 5:
        raise ValidationError("need s >= 5 for a second diagonal entry")
    a_dual = symbolic_entry(neg(alpha, N), N, ctx, 1, 1, term_limit)
    e11 = symbolic_entry(alpha, N, ctx, 1, 1, term_limit)
    e22 = symbolic_entry(alpha, N, ctx, 2, 2, term_limit)
    pair = alpha[i] + alpha[j]
    return ExponentProfile(
        r_dual=divisibility_order(a_dual, i, j),
        r1=divisibility_order(e11, i, j),
        r2=divisibility_order(e22, i, j),
        closed_u1=ctx.q * abs(N - pair),
        closed_u2=ctx.q * max(0, pair - N),
    )


# -- ordinarity -----------------------------------------------------------------


def det_mod(M: Sequence[Sequence[int]], p: int) -> int:
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col] % p
        inv = pow(A[col][col], p - 2, p)
        for r in range(col + 1, n):
            f = A[r][col] * inv % p
            if f:
                for k in range(col, n):
                    A[r][k] = (A[r][k] - f * A[col][k]) % p
    return det % p


def hw_blocks(d: CoverDatum, ctx: PrimeContext, z: Sequence[int]) -> list[HWBlock]:
    """One numeric block per nonzero character (empty for d_n = 0), in character order."""
    _check_context(d, ctx)
    pts = _check_points(z, d.s, ctx.p)
    return [
        _block_numeric(r.alpha, r.character.n, d.N, ctx, pts) for r in spectrum_table(d).records
    ]


def is_ordinary_at(d: CoverDatum, ctx: PrimeContext, z: Sequence[int]) -> bool:
    return all(det_mod(b.entries, ctx.p) for b in hw_blocks(d, ctx, z) if b.size)


@dataclass(frozen=True)
class OrdinarityScan:
    p: int
    tested: int
    ordinary: int
    exhaustive: bool
    example: Optional[tuple[int, ...]]

    @property
    def density(self) -> float:
        return self.ordinary / self.tested if self.tested else 0.0

    @property
    def exists(self) -> bool:
        return self.ordinary > 0


def point_tuples(p: int, s: int, samples: Optional[int] = None, seed: int = 0):
    """Ordered s-tuples of distinct residues: all of them when ``samples`` is None."""
    if samples is None:
        yield from itertools.permutations(range(p), s)
        return
    rng = random.Random(seed)
    for _ in range(samples):
        yield tuple(rng.sample(range(p), s))


def ordinarity_scan(d: CoverDatum, ctx: PrimeContext, samples: Optional[int] = None,
                    seed: int = 0) -> OrdinarityScan:
    """Count ordinary fibres over point tuples; exhaustive when p <= 11 and s <= 5 unless sampled."""
    exhaustive = samples is None and ctx.p <= 11 and d.s <= 5
    if samples is None and not exhaustive:
        samples = 200
    tested = ordinary = 0
    example = None
    for z in point_tuples(ctx.p, d.s, None if exhaustive else samples, seed):
        tested += 1
        if is_ordinary_at(d, ctx, z):
            ordinary += 1
            if example is None:
                example = tuple(z)
    return OrdinarityScan(ctx.p, tested, ordinary, exhaustive, example)

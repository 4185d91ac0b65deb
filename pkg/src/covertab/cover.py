"""Abelian cover data (N, s, A): validation, genus, Galois group, isomorphism keys.

A datum is an m x s matrix over Z/N whose rows sum to zero and whose columns
are all nonzero. Column j is the local monodromy at the branch point z_j, the
Galois group is the column span, and the covering degree is the size of the
row span.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from covertab.errors import BadShape, NonIntegralGenus, RowSumNonzero, ZeroColumn
from covertab.residues import gcd_all
from covertab.snf import smith_diagonal

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CoverDatum:
    N: int
    A: Matrix

    def __post_init__(self):
        _check(self.N, self.A)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def s(self) -> int:
        return len(self.A[0])

    @property
    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[j] for row in self.A) for j in range(self.s)]

    @cached_property
    def modulus_factor(self) -> int:
        """Common factor f of N and every entry; f > 1 means N is not reduced."""
        return gcd_all(self.N, (x for row in self.A for x in row))

    @property
    def reducible_modulus(self) -> bool:
        return self.modulus_factor > 1

    def reduced(self) -> CoverDatum:
        f = self.modulus_factor
        if f == 1:
            return self
        return CoverDatum(self.N // f, tuple(tuple(x // f for x in row) for row in self.A))

    @property
    def rows_independent(self) -> bool:
        return len(row_span(self)) == self.N**self.m

    @property
    def rows_primitive(self) -> bool:
        """Every row generates a subgroup of order N (no nonzero scalar kills it)."""
        return all(gcd_all(self.N, row) == 1 for row in self.A)

    def to_text(self) -> str:
        return format_datum(self)

    def to_json(self) -> dict:
        return {"N": self.N, "A": [list(row) for row in self.A]}

    def __str__(self) -> str:
        return self.to_text()


def _check(N: int, A: Matrix) -> None:
    if not isinstance(N, int) or N < 2:
        raise BadShape(f"N must be an integer >= 2, got {N!r}")
    if len(A) < 1:
        raise BadShape("at least one row is required")
    s = len(A[0])
    if any(len(row) != s for row in A):
        raise BadShape("rows have different lengths")
    if s < 3:
        raise BadShape(f"need s >= 3 branch points, got {s}")
    for row in A:
        for x in row:
            if not 0 <= x < N:
                raise BadShape(f"entry {x} outside [0, {N})")
    for i, row in enumerate(A, start=1):
        if sum(row) % N:
            raise RowSumNonzero(i)
    for j in range(s):
        if all(row[j] == 0 for row in A):
            raise ZeroColumn(j + 1)


def validate_datum(N: int, rows: Sequence[Sequence[int]]) -> CoverDatum:
    """Reduce entries into [0, N) and check the datum invariants.

    Raises ZeroColumn(j) and RowSumNonzero(i) with 1-based indices, and
    BadShape for ragged input, N < 2 or s < 3.
    """
    if not isinstance(N, int) or N < 2:
        raise BadShape(f"N must be an integer >= 2, got {N!r}")
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        raise BadShape("empty matrix")
    if any(len(r) != len(rows[0]) for r in rows):
        raise BadShape("rows have different lengths")
    return CoverDatum(N, tuple(tuple(int(x) % N for x in r) for r in rows))


# -- row span -----------------------------------------------------------------


@lru_cache(maxsize=4096)
def _span_tables(d: CoverDatum) -> tuple[np.ndarray, np.ndarray]:
    """Distinct elements of the row span (lex sorted) and a lex-first n for each."""
    N, m = d.N, d.m
    ns = np.array(list(itertools.product(range(N), repeat=m)), dtype=np.int64).reshape(-1, m)
    alphas = (ns @ np.array(d.A, dtype=np.int64)) % N
    uniq, first = np.unique(alphas, axis=0, return_index=True)
    return uniq, ns[first]


def span_array(d: CoverDatum) -> np.ndarray:
    return _span_tables(d)[0]


def span_representatives(d: CoverDatum) -> np.ndarray:
    return _span_tables(d)[1]


def row_span(d: CoverDatum) -> frozenset[tuple[int, ...]]:
    """The set {n.A : n in (Z/N)^m}; its size is the covering degree."""
    return frozenset(map(tuple, span_array(d).tolist()))


def degree(d: CoverDatum) -> int:
    return len(span_array(d))


# -- genus and group ----------------------------------------------------------


def genus(d: CoverDatum) -> int:
    """Riemann-Hurwitz: 1 + deg((s-2)/2 - (1/2N) sum_j gcd(N, column j))."""
    deg = degree(d)
    total = sum(gcd_all(d.N, col) for col in d.columns)
    g = 1 + deg * (Fraction(d.s - 2, 2) - Fraction(total, 2 * d.N))
    if g.denominator != 1 or g < 0:
        raise NonIntegralGenus(f"genus formula gave {g} for {d}")
    return int(g)


@dataclass(frozen=True)
class AbelianGroupStructure:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return "x".join(f"Z/{f}" for f in self.invariant_factors)


def group_structure(d: CoverDatum) -> AbelianGroupStructure:
    """Invariant factors of the column span inside (Z/N)^m.

    With [A | N I] = U diag(e) V, the column lattice plus N Z^m is
    (+) e_i Z in adapted coordinates, so the span is (+) Z/(N/e_i).
    """
    m, N = d.m, d.N
    big = [list(d.A[i]) + [N if k == i else 0 for k in range(m)] for i in range(m)]
    e = smith_diagonal(big)
    factors = sorted(N // x for x in e if N // x > 1)
    return AbelianGroupStructure(tuple(factors))


# -- isomorphism keys ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalKey:
    data: bytes = field(repr=False)

    def hex(self) -> str:
        return hashlib.sha256(self.data).hexdigest()[:16]

    def __str__(self) -> str:
        return self.hex()


def _multiset_permutations(items: list) -> Iterator[tuple]:
    """Distinct orderings of a list with repeated items."""
    counts: dict = {}
    order = []
    for it in items:
        if it not in counts:
            order.append(it)
            counts[it] = 0
        counts[it] += 1
    n = len(items)
    out: list = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for it in order:
            if counts[it]:
                counts[it] -= 1
                out.append(it)
                yield from rec()
                out.pop()
                counts[it] += 1

    yield from rec()


def _canonical_span(N: int, span: np.ndarray, column_perm: bool) -> tuple:
    s = span.shape[1]
    if not column_perm:
        return tuple(map(tuple, span.tolist()))
    cols = [tuple(span[:, j].tolist()) for j in range(s)]
    # a column's value histogram over the span is permutation-equivariant
    sig = [tuple(np.bincount(span[:, j], minlength=N).tolist()) for j in range(s)]
    blocks: dict = {}
    for j in range(s):
        blocks.setdefault(sig[j], []).append(j)
    block_list = [blocks[k] for k in sorted(blocks)]
    # columns equal as vectors are interchangeable, so permute column classes
    choices = [list(_multiset_permutations([cols[j] for j in b])) for b in block_list]
    best = None
    for combo in itertools.product(*choices):
        new_cols = [c for part in combo for c in part]
        rows = sorted(zip(*new_cols))
        cand = tuple(rows)
        if best is None or cand < best:
            best = cand
    return best


def canonical_key(d: CoverDatum, column_perm: bool = True) -> CanonicalKey:
    """Isomorphism-class key: the row span of the reduced datum, minimized over
    column permutations (branch-point relabelings) unless ``column_perm`` is off.
    """
    return _canonical_key(d.reduced(), column_perm)


@lru_cache(maxsize=65536)
def _canonical_key(d: CoverDatum, column_perm: bool) -> CanonicalKey:
    span = span_array(d)
    canon = _canonical_span(d.N, span, column_perm)
    body = ";".join(",".join(map(str, row)) for row in canon)
    return CanonicalKey(f"N={d.N};s={d.s};cp={int(column_perm)};{body}".encode())


def is_isomorphic(d1: CoverDatum, d2: CoverDatum, column_perm: bool = True) -> bool:
    return canonical_key(d1, column_perm) == canonical_key(d2, column_perm)


# -- text and JSON forms ------------------------------------------------------


def format_datum(d: CoverDatum) -> str:
    """Compact form ``N:row1/row2``; digit strings when N <= 10, commas otherwise."""
    if d.N <= 10:
        rows = ["".join(str(x) for x in row) for row in d.A]
    else:
        rows = [",".join(str(x) for x in row) for row in d.A]
    return f"{d.N}:" + "/".join(rows)


def parse_datum(text: str) -> CoverDatum:
    """Parse either the compact text form or a JSON object {"N": .., "A": [[..]]}."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
            return validate_datum(int(obj["N"]), obj["A"])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise BadShape(f"bad datum JSON: {exc}") from None
    head, sep, body = text.partition(":")
    if not sep:
        raise BadShape(f"expected 'N:row/row', got {text!r}")
    try:
        N = int(head)
        rows = []
        for part in body.split("/"):
            part = part.strip()
            if "," in part or N > 10:
                rows.append([int(x) for x in part.split(",")])
            else:
                rows.append([int(ch) for ch in part])
    except ValueError:
        raise BadShape(f"bad datum text {text!r}") from None
    return validate_datum(N, rows)


def datum_from_json(obj: dict) -> CoverDatum:
    return validate_datum(int(obj["N"]), obj["A"])

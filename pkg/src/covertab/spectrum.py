"""Character eigenspaces of an abelian cover: alpha tuples, d_n, dim S(G), condition (*).

Characters are identified with distinct elements of the row span (their
alpha tuples); two n with the same n.A define the same eigenspace. Records
are kept in lexicographic order of alpha, which is also the order used to
pick witnesses.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from covertab.cover import CoverDatum, genus, span_array, span_representatives
from covertab.errors import ShapeMismatch
from covertab.residues import combine, frac, gcd_all, neg


@dataclass(frozen=True)
class Character:
    n: tuple[int, ...]
    alpha: tuple[int, ...]


@dataclass(frozen=True)
class EigenspaceRecord:
    character: Character
    d: int
    d_dual: int
    order2: bool
    nonzero_count: int

    @property
    def alpha(self) -> tuple[int, ...]:
        return self.character.alpha

    @property
    def type_pair(self) -> tuple[int, int]:
        return (max(self.d, self.d_dual), min(self.d, self.d_dual))


@dataclass(frozen=True)
class SpectrumTable:
    N: int
    s: int
    records: tuple[EigenspaceRecord, ...]
    genus: int

    def by_alpha(self) -> dict[tuple[int, ...], EigenspaceRecord]:
        return {r.alpha: r for r in self.records}

    def pairs(self) -> list[tuple[EigenspaceRecord, EigenspaceRecord]]:
        """Unordered character pairs {n, -n}, each listed once (order-2 as (r, r))."""
        index = self.by_alpha()
        out = []
        for r in self.records:
            dual = index[neg(r.alpha, self.N)]
            if r.alpha <= dual.alpha:
                out.append((r, dual))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"alpha_{j + 1}" for j in range(self.s)] + ["d", "d_dual", "order2"])
        for r in self.records:
            w.writerow(list(r.alpha) + [r.d, r.d_dual, int(r.order2)])
        return buf.getvalue()


def alpha_tuple(d: CoverDatum, n: Sequence[int]) -> tuple[int, ...]:
    if len(n) != d.m:
        raise ShapeMismatch(f"character has {len(n)} entries, datum has {d.m} rows")
    return combine([x % d.N for x in n], d.A, d.N)


def dim_from_alpha(alpha: Sequence[int], N: int) -> int:
    """-1 + sum_j <-alpha_j/N> for a nonzero tuple; 0 for the trivial character."""
    if not any(x % N for x in alpha):
        return 0
    total = sum(frac(-x, N) for x in alpha) - 1
    assert total.denominator == 1, (alpha, N)
    return int(total)


def eigenspace_dim(d: CoverDatum, n: Sequence[int]) -> int:
    return dim_from_alpha(alpha_tuple(d, n), d.N)


@lru_cache(maxsize=4096)
def spectrum_table(d: CoverDatum) -> SpectrumTable:
    N = d.N
    span = span_array(d)
    reps = span_representatives(d)
    nonzero = span.any(axis=1)
    span, reps = span[nonzero], reps[nonzero]
    negs = (-span) % N
    sums = negs.sum(axis=1)
    if np.any(sums % N):
        raise ArithmeticError(f"eigenspace dimension not integral for {d}")
    dims = sums // N - 1
    # -alpha has <alpha/N> summands, so d_dual = sum(alpha)/N - 1
    duals = span.sum(axis=1) // N - 1
    order2 = (negs == span).all(axis=1)
    nz = (span != 0).sum(axis=1)
    records = tuple(
        EigenspaceRecord(
            Character(tuple(n), tuple(a)), int(dn), int(dd), bool(o2), int(c)
        )
        for a, n, dn, dd, o2, c in zip(
            span.tolist(), reps.tolist(), dims.tolist(), duals.tolist(), order2.tolist(), nz.tolist()
        )
    )
    return SpectrumTable(N, d.s, records, genus(d))


def dim_SG(d: CoverDatum) -> int:
    """sum over pairs {n, -n} with 2n != 0 of d_n d_-n, plus sum over 2n = 0 of d_n(d_n+1)/2."""
    N = d.N
    span = span_array(d)
    span = span[span.any(axis=1)]
    negs = (-span) % N
    dn = negs.sum(axis=1) // N - 1
    dd = span.sum(axis=1) // N - 1
    order2 = (negs == span).all(axis=1)
    # each non-order-2 pair appears twice among the span elements
    paired = int((dn * dd)[~order2].sum())
    return paired // 2 + int((dn * (dn + 1) // 2)[order2].sum())


def condition_star(d: CoverDatum) -> tuple[bool, Optional[EigenspaceRecord]]:
    """Is there n with {d_n, d_-n} != {0, s-2} and d_n + d_-n >= s-2? Returns the first witness."""
    s = d.s
    for r in spectrum_table(d).records:
        if {r.d, r.d_dual} != {0, s - 2} and r.d + r.d_dual >= s - 2:
            return True, r
    return False, None


def cyclic_datum_of_character(d: CoverDatum, n: Sequence[int]) -> Optional[CoverDatum]:
    """The single-row datum (N/f, alpha/f), f = gcd(N, alpha); None if alpha has a zero."""
    alpha = alpha_tuple(d, n)
    return cyclic_datum_of_alpha(alpha, d.N)


def cyclic_datum_of_alpha(alpha: Sequence[int], N: int) -> Optional[CoverDatum]:
    if not all(alpha):
        return None
    f = gcd_all(N, alpha)
    return CoverDatum(N // f, (tuple(x // f for x in alpha),))


def type_multiset(d: CoverDatum) -> dict[tuple[int, int], int]:
    """Count of character pairs per unordered type {d_n, d_-n} (written larger first)."""
    out: dict[tuple[int, int], int] = {}
    for r, _ in spectrum_table(d).pairs():
        out[r.type_pair] = out.get(r.type_pair, 0) + 1
    return out

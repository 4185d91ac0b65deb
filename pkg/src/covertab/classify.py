"""Special / not-special verdicts and the tables regenerated from them.

Rules are tried in order and the first one that fires is reported:

R1  dim S(G) = s - 3                                  -> Special
R2  sum of delta over distinct non-unitary types > s-3 -> NotSpecial
R3  dim S(G) > s - 3 and condition (*)                -> NotSpecial
R4  some all-nonzero character tuple gives a cyclic
    family with dim S(G) != s - 3                      -> NotSpecial

Anything else is Undecided.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from covertab.cover import CanonicalKey, CoverDatum, canonical_key
from covertab.errors import UnsupportedFactor
from covertab.parallel import pmap
from covertab.shapes import SHAPES, shape_patterns
from covertab.spectrum import (
    SpectrumTable,
    condition_star,
    cyclic_datum_of_alpha,
    dim_SG,
    spectrum_table,
)


class Verdict(str, Enum):
    SPECIAL = "Special"
    NOT_SPECIAL = "NotSpecial"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, order=True)
class EigenspaceType:
    a: int
    b: int
    order2: bool = False

    def __post_init__(self):
        if self.a < self.b or self.b < 0:
            raise UnsupportedFactor(f"malformed type ({self.a}, {self.b})")
        if self.order2 and self.a != self.b:
            raise UnsupportedFactor(f"order-2 eigenspace with unequal type ({self.a}, {self.b})")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)


def delta(t: EigenspaceType) -> int:
    """Dimension of the symmetric space of the simple factor attached to an eigenspace type."""
    if t.b == 0:
        return 0
    if t.order2:
        return t.a * (t.a + 1) // 2
    return t.a * t.b


def nonunitary_types(table: SpectrumTable) -> dict[tuple[int, int], tuple[EigenspaceType, tuple[int, ...]]]:
    """Distinct types {a, b} with a, b >= 1, each with its smallest delta and a witness alpha."""
    out: dict[tuple[int, int], tuple[EigenspaceType, tuple[int, ...]]] = {}
    for r, _ in table.pairs():
        a, b = r.type_pair
        if b == 0:
            continue
        t = EigenspaceType(a, b, r.order2)
        if t.pair not in out or delta(t) < delta(out[t.pair][0]):
            out[t.pair] = (t, r.alpha)
    return out


def monodromy_lower_bound(table: SpectrumTable) -> int:
    return sum(delta(t) for t, _ in nonunitary_types(table).values())


def cyclic_is_special(d: CoverDatum) -> bool:
    """Single-row families are special exactly when dim S(G) = s - 3."""
    return dim_SG(d) == d.s - 3


@dataclass(frozen=True)
class ClassificationReport:
    datum: str
    verdict: Verdict
    rule: Optional[str]
    witnesses: tuple = field(default=())
    moduli_dim: int = 0
    dim_SG: int = 0
    bound: int = 0
    condition_star: bool = False

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.moduli_dim, self.dim_SG, self.bound)

    def to_dict(self) -> dict:
        return {
            "datum": self.datum,
            "verdict": self.verdict.value,
            "rule": self.rule,
            "witnesses": [dict(w) for w in self.witnesses],
            "dims": {"moduli": self.moduli_dim, "dim_SG": self.dim_SG, "bound": self.bound},
            "condition_star": self.condition_star,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> ClassificationReport:
        return cls(
            datum=obj["datum"],
            verdict=Verdict(obj["verdict"]),
            rule=obj["rule"],
            witnesses=tuple(_freeze(w) for w in obj["witnesses"]),
            moduli_dim=obj["dims"]["moduli"],
            dim_SG=obj["dims"]["dim_SG"],
            bound=obj["dims"]["bound"],
            condition_star=obj["condition_star"],
        )

    def csv_row(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow(
            [self.datum, self.verdict.value, self.rule or "", self.moduli_dim, self.dim_SG,
             self.bound, int(self.condition_star)]
        )
        return buf.getvalue()


CSV_HEADER = "datum,verdict,rule,moduli_dim,dim_SG,bound,condition_star"


def _freeze(w: dict) -> tuple:
    """Witnesses are stored as sorted key/value tuples so reports stay hashable."""
    return tuple(sorted((k, tuple(v) if isinstance(v, list) else v) for k, v in w.items()))


def classify(d: CoverDatum) -> ClassificationReport:
    d = d.reduced()
    table = spectrum_table(d)
    s3 = d.s - 3
    dim = dim_SG(d)
    types = nonunitary_types(table)
    bound = sum(delta(t) for t, _ in types.values())
    star, star_witness = condition_star(d)
    base = dict(datum=d.to_text(), moduli_dim=s3, dim_SG=dim, bound=bound, condition_star=star)

    if dim == s3:
        return ClassificationReport(verdict=Verdict.SPECIAL, rule="R1", **base)
    if bound > s3:
        wit = tuple(
            _freeze({"type": [t.a, t.b], "order2": t.order2, "delta": delta(t), "alpha": list(alpha)})
            for t, alpha in sorted(types.values())
        )
        return ClassificationReport(verdict=Verdict.NOT_SPECIAL, rule="R2", witnesses=wit, **base)
    if dim > s3 and star:
        r = star_witness
        wit = (_freeze({"n": list(r.character.n), "alpha": list(r.alpha), "d": r.d, "d_dual": r.d_dual}),)
        return ClassificationReport(verdict=Verdict.NOT_SPECIAL, rule="R3", witnesses=wit, **base)
    for r in table.records:
        cyc = cyclic_datum_of_alpha(r.alpha, d.N)
        if cyc is not None and not cyclic_is_special(cyc):
            wit = (_freeze({"n": list(r.character.n), "alpha": list(r.alpha), "cyclic": cyc.to_text(),
                            "cyclic_dim_SG": dim_SG(cyc)}),)
            return ClassificationReport(verdict=Verdict.NOT_SPECIAL, rule="R4", witnesses=wit, **base)
    return ClassificationReport(verdict=Verdict.UNDECIDED, rule=None, **base)


# -- cyclic table ---------------------------------------------------------------


def _cyclic_block(args: tuple[int, int]) -> list[tuple[int, ...]]:
    """Sorted rows of length s over 1..N-1 with sum 0 mod N, gcd 1 and dim S(G) = s - 3."""
    N, s = args
    found: list[tuple[int, ...]] = []
    head_iter = itertools.combinations_with_replacement(range(1, N), s - 1)
    neg_table = np.array([[(-n * x) % N for x in range(N)] for n in range(N)], dtype=np.int64)
    zero_table = np.array([[(n * x) % N == 0 for x in range(N)] for n in range(N)])
    while True:
        chunk = list(itertools.islice(head_iter, 200_000))
        if not chunk:
            break
        head = np.array(chunk, dtype=np.int64).reshape(len(chunk), s - 1)
        last = (-head.sum(axis=1)) % N
        keep = (last >= head[:, -1]) & (last > 0)
        rows = np.concatenate([head[keep], last[keep, None]], axis=1)
        if rows.size == 0:
            continue
        g = np.gcd.reduce(np.concatenate([rows, np.full((len(rows), 1), N)], axis=1), axis=1)
        rows = rows[g == 1]
        if rows.size == 0:
            continue
        dims = np.zeros((N, len(rows)), dtype=np.int64)
        for n in range(1, N):
            total = neg_table[n][rows].sum(axis=1)
            trivial = zero_table[n][rows].all(axis=1)
            dims[n] = np.where(trivial, 0, total // N - 1)
        dimsg = np.zeros(len(rows), dtype=np.int64)
        for n in range(1, N):
            k = N - n
            if n < k:
                dimsg += dims[n] * dims[k]
            elif n == k:
                dimsg += dims[n] * (dims[n] + 1) // 2
        found.extend(map(tuple, rows[dimsg == s - 3].tolist()))
    return found


def cyclic_special_table(
    N_max: int, s_max: int, workers: int | None = None, column_perm: bool = True
) -> list[CoverDatum]:
    """Single-row data (up to isomorphism) with 4 <= s <= s_max, N <= N_max, gcd 1 and dim S(G) = s - 3."""
    jobs = [(N, s) for N in range(2, N_max + 1) for s in range(4, s_max + 1)]
    blocks = pmap(_cyclic_block, jobs, workers)
    best: dict[CanonicalKey, CoverDatum] = {}
    for (N, s), rows in zip(jobs, blocks):
        for row in rows:
            d = CoverDatum(N, (row,))
            # the vectorised screen is re-checked on the scalar path
            assert cyclic_is_special(d), d
            key = canonical_key(d, column_perm)
            best.setdefault(key, d)
    return sorted(best.values(), key=lambda d: (d.N, d.s, canonical_key(d, column_perm)))


# -- two-dimensional families -----------------------------------------------------


@dataclass(frozen=True)
class ScanHit:
    shape: str
    datum: CoverDatum
    key: CanonicalKey
    report: ClassificationReport


def _scan_one(args: tuple[str, int, bool]) -> list[tuple[CoverDatum, ClassificationReport]]:
    shape, N, irreducible_only = args
    out = []
    for d in shape_patterns(shape, N):
        if irreducible_only and not d.rows_primitive:
            continue
        rep = classify(d)
        if rep.verdict is not Verdict.NOT_SPECIAL:
            out.append((d, rep))
    return out


def theorem2_scan(
    N_set: Iterable[int], irreducible_only: bool = True, workers: int | None = None
) -> dict[str, list[ScanHit]]:
    """Classify every datum of shapes I-IV for each N and keep those not excluded.

    With ``irreducible_only`` data having a row killed by a nonzero scalar
    (a reducible cyclic sub-cover) are skipped, since the two-dimensional
    exclusion only concerns irreducible families.
    """
    Ns = sorted(set(N_set))
    jobs = [(shape, N, irreducible_only) for shape in SHAPES for N in Ns]
    results = pmap(_scan_one, jobs, workers)
    out: dict[str, dict[CanonicalKey, ScanHit]] = {shape: {} for shape in SHAPES}
    for (shape, _N, _), hits in zip(jobs, results):
        for d, rep in hits:
            key = canonical_key(d)
            out[shape].setdefault(key, ScanHit(shape, d, key, rep))
    return {shape: sorted(hits.values(), key=lambda h: h.key) for shape, hits in out.items()}


def survivor_keys(scan: dict[str, list[ScanHit]]) -> set[CanonicalKey]:
    return {h.key for hits in scan.values() for h in hits}


def distinct_moduli(table: list[CoverDatum]) -> list[int]:
    return sorted({d.N for d in table})

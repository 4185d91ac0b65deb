"""Bounded sweeps over cover data with one representative per isomorphism class."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Iterator, Optional

from covertab.classify import ClassificationReport, classify
from covertab.cover import (
    AbelianGroupStructure,
    CanonicalKey,
    CoverDatum,
    canonical_key,
    genus,
    group_structure,
)
from covertab.errors import SpecTooLarge
from covertab.parallel import pmap
from covertab.shapes import SHAPES, shape_patterns, shape_size

DEFAULT_MAX_RAW = 2_000_000

CSV_COLUMNS = [
    "key", "N", "m", "s", "matrix", "genus", "group", "verdict", "rule",
    "dim_SG", "bound", "condition_star", "rows_independent",
]


@dataclass(frozen=True)
class SearchSpec:
    N_values: tuple[int, ...]
    m_range: tuple[int, int] = (1, 1)
    s_range: tuple[int, int] = (3, 3)
    shape: Optional[str] = None
    genus_range: Optional[tuple[int, int]] = None
    rows_independent: Optional[bool] = None
    verdict: Optional[str] = None
    column_perm: bool = True
    max_raw: int = DEFAULT_MAX_RAW

    def __post_init__(self):
        if not self.N_values or min(self.N_values) < 2:
            raise ValueError("N values must be >= 2")
        lo, hi = self.m_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad m range {self.m_range}")
        lo, hi = self.s_range
        if not 3 <= lo <= hi:
            raise ValueError(f"bad s range {self.s_range}")
        if self.shape is not None:
            if self.shape not in SHAPES:
                raise ValueError(f"unknown shape {self.shape!r}")
            if self.m_range != (2, 2) or self.s_range != (5, 5):
                raise ValueError("shapes I-IV are 2 x 5 patterns: use m = 2, s = 5")
            if min(self.N_values) < 3:
                raise ValueError("shapes need N >= 3")

    def boxes(self) -> list[tuple[int, int, int]]:
        return [
            (N, m, s)
            for N in sorted(set(self.N_values))
            for m in range(self.m_range[0], self.m_range[1] + 1)
            for s in range(self.s_range[0], self.s_range[1] + 1)
        ]

    def raw_size(self) -> int:
        if self.shape is not None:
            return sum(shape_size(self.shape, N) for N in set(self.N_values))
        return sum(N ** ((s - 1) * m) for N, m, s in self.boxes())

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EnumerationRecord:
    datum: CoverDatum
    key: CanonicalKey
    genus: int
    group: AbelianGroupStructure
    report: ClassificationReport
    rows_independent: bool
    ordered: bool = field(default=True, compare=False)

    def csv_fields(self) -> list:
        r = self.report
        d = self.datum
        return [
            self.key.hex(), d.N, d.m, d.s, d.to_text(), self.genus,
            "x".join(map(str, self.group.invariant_factors)) or "1",
            r.verdict.value, r.rule or "", r.dim_SG, r.bound, int(r.condition_star),
            int(self.rows_independent),
        ]


def _zero_sum_rows(N: int, s: int) -> list[tuple[int, ...]]:
    return [head + ((-sum(head)) % N,) for head in itertools.product(range(N), repeat=s - 1)]


def _slabs(spec: SearchSpec) -> list[tuple]:
    """Disjoint pieces of the search box, in a fixed lexicographic order."""
    if spec.shape is not None:
        return [("shape", spec.shape, N) for N in sorted(set(spec.N_values))]
    out = []
    for N, m, s in spec.boxes():
        if m == 1:
            out.append(("box", N, m, s, None))
        else:
            out.extend(("box", N, m, s, first) for first in _zero_sum_rows(N, s))
    return out


def _slab_data(slab: tuple) -> Iterator[CoverDatum]:
    if slab[0] == "shape":
        yield from shape_patterns(slab[1], slab[2])
        return
    _, N, m, s, first = slab
    rows = _zero_sum_rows(N, s)
    heads = [first] if first is not None else []
    for rest in itertools.product(rows, repeat=m - len(heads)):
        A = tuple(heads) + rest
        if any(all(row[j] == 0 for row in A) for j in range(s)):
            continue
        yield CoverDatum(N, A)


def _passes(spec: SearchSpec, g: int, indep: bool, report: ClassificationReport) -> bool:
    if spec.genus_range is not None and not spec.genus_range[0] <= g <= spec.genus_range[1]:
        return False
    if spec.rows_independent is not None and indep != spec.rows_independent:
        return False
    if spec.verdict is not None and report.verdict.value != spec.verdict:
        return False
    return True


def _run_slab(args: tuple[SearchSpec, tuple]) -> list[EnumerationRecord]:
    spec, slab = args
    seen: set[CanonicalKey] = set()
    out = []
    for d in _slab_data(slab):
        key = canonical_key(d, spec.column_perm)
        if key in seen:
            continue
        g = genus(d)
        indep = d.rows_independent
        report = classify(d)
        if not _passes(spec, g, indep, report):
            continue
        seen.add(key)
        out.append(EnumerationRecord(d, key, g, group_structure(d), report, indep))
    return out


def enumerate_data(spec: SearchSpec, workers: int | None = None,
                   streaming: bool = False) -> Iterator[EnumerationRecord]:
    """Visit every valid datum in the box and yield one record per canonical key.

    Records come sorted by key unless ``streaming`` is set, in which case they
    are yielded in discovery order and tagged ``ordered=False``.
    """
    size = spec.raw_size()
    if size > spec.max_raw:
        raise SpecTooLarge(size, spec.max_raw)
    slabs = _slabs(spec)
    if streaming:
        seen: set[CanonicalKey] = set()
        for slab in slabs:
            for rec in _run_slab((spec, slab)):
                if rec.key not in seen:
                    seen.add(rec.key)
                    yield replace(rec, ordered=False)
        return
    results = pmap(_run_slab, [(spec, slab) for slab in slabs], workers)
    merged = dedup_stream(itertools.chain.from_iterable(results))
    yield from sorted(merged, key=lambda r: r.key)


def dedup_stream(records: Iterable[EnumerationRecord]) -> list[EnumerationRecord]:
    """Drop later records whose key was already seen; stable and idempotent."""
    seen: set[CanonicalKey] = set()
    out = []
    for r in records:
        if r.key not in seen:
            seen.add(r.key)
            out.append(r)
    return out


def records_to_csv(records: Iterable[EnumerationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_fields())
    return buf.getvalue()

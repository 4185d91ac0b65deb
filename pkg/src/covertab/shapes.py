"""Zero patterns of the two-row, five-point families I-IV."""

from __future__ import annotations

import itertools
from typing import Iterator

from covertab.cover import CoverDatum

# 1 marks a position that must be nonzero, 0 a forced zero
SHAPES: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {
    "I": ((1, 1, 1, 0, 0), (0, 0, 0, 1, 1)),
    "II": ((1, 1, 1, 0, 0), (0, 0, 1, 1, 1)),
    "III": ((1, 1, 1, 1, 0), (0, 0, 1, 1, 1)),
    "IV": ((1, 1, 1, 1, 0), (0, 0, 0, 1, 1)),
}


def _rows(mask: tuple[int, ...], N: int) -> list[tuple[int, ...]]:
    pos = [j for j, bit in enumerate(mask) if bit]
    out = []
    for vals in itertools.product(range(1, N), repeat=len(pos)):
        if sum(vals) % N:
            continue
        row = [0] * len(mask)
        for j, v in zip(pos, vals):
            row[j] = v
        out.append(tuple(row))
    return out


def shape_patterns(shape: str, N: int) -> Iterator[CoverDatum]:
    """All data of the given shape mod N: nonzero exactly off the mask's zeros, rows summing to 0."""
    if shape not in SHAPES:
        raise KeyError(f"unknown shape {shape!r}; expected one of {sorted(SHAPES)}")
    if N < 3:
        raise ValueError("shapes need N >= 3")
    top, bottom = SHAPES[shape]
    for r1 in _rows(top, N):
        for r2 in _rows(bottom, N):
            yield CoverDatum(N, (r1, r2))


def shape_size(shape: str, N: int) -> int:
    top, bottom = SHAPES[shape]
    return (N - 1) ** (sum(top) + sum(bottom) - 2)

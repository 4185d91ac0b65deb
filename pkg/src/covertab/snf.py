"""Smith normal form of small integer matrices."""

from __future__ import annotations

from typing import Sequence


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Return the nonzero diagonal of the Smith normal form of an integer matrix.

    Entries are positive and each divides the next. Only the invariant
    factors are tracked; transformation matrices are not accumulated.
    """
    M = [list(map(int, row)) for row in matrix]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < rows and t < cols:
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            p = M[t][t]
            done = True
            for i in range(t + 1, rows):
                if M[i][t]:
                    q = M[i][t] // p
                    for j in range(t, cols):
                        M[i][j] -= q * M[t][j]
                    if M[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if M[t][j]:
                    q = M[t][j] // p
                    for i in range(t, rows):
                        M[i][j] -= q * M[i][t]
                    if M[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot and repeat
                best = (t, t)
                for i in range(t, rows):
                    if M[i][t] and abs(M[i][t]) < abs(M[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, cols):
                    if M[t][j] and abs(M[t][j]) < abs(M[best[0]][best[1]]):
                        best = (t, j)
                i, j = best
                M[t], M[i] = M[i], M[t]
                for row in M:
                    row[t], row[j] = row[j], row[t]
                continue
            # pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if M[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(t, cols):
                M[t][j] += M[bad][j]
        diag.append(abs(M[t][t]))
        t += 1
    return diag

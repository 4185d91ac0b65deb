"""Brute-force point counts on w^2 = (x - z_1)(x - z_2)(x - z_3)(x - z_4).

Used as an independent check of ordinarity for N = 2, s = 4: the curve is
ordinary at p exactly when its Frobenius trace a_p is nonzero mod p.
"""

from __future__ import annotations

from typing import Sequence

from covertab.errors import RepeatedPoint, ValidationError
from covertab.hasse_witt import PrimeContext


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if _legendre(a, p) == -1)


class Fp2:
    """Arithmetic in F_p[t]/(t^2 - r) for a fixed nonresidue r."""

    def __init__(self, p: int):
        self.p = p
        self.r = _nonresidue(p)

    def mul(self, x, y):
        p, r = self.p, self.r
        return ((x[0] * y[0] + r * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def pow(self, x, e: int):
        out = (1, 0)
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def chi(self, x) -> int:
        if x == (0, 0):
            return 0
        v = self.pow(x, (self.p * self.p - 1) // 2)
        return 1 if v == (1, 0) else -1


def _check(p: int, z: Sequence[int]) -> list[int]:
    if p % 2 == 0:
        raise ValidationError("p must be odd")
    if len(z) != 4:
        raise ValidationError("need exactly 4 branch points")
    pts = [x % p for x in z]
    if len(set(pts)) != 4:
        raise RepeatedPoint(f"points {list(z)} are not distinct mod {p}")
    return pts


def count_points(p: int, z: Sequence[int], degree: int = 1) -> int:
    """#C(F_{p^degree}) for degree 1 or 2; the two points at infinity are included."""
    pts = _check(p, z)
    if degree == 1:
        affine = 0
        for x in range(p):
            f = 1
            for zj in pts:
                f = f * (x - zj) % p
            affine += 1 + _legendre(f, p)
        return affine + 2
    if degree == 2:
        F = Fp2(p)
        affine = 0
        for a in range(p):
            for b in range(p):
                f = (1, 0)
                for zj in pts:
                    f = F.mul(f, ((a - zj) % p, b))
                affine += 1 + F.chi(f)
        return affine + 2
    raise ValueError("degree must be 1 or 2")


def elliptic_trace_oracle(ctx: PrimeContext | int, z: Sequence[int]) -> int:
    """Frobenius trace a_p = p + 1 - #C(F_p)."""
    p = ctx if isinstance(ctx, int) else ctx.p
    return p + 1 - count_points(p, z)

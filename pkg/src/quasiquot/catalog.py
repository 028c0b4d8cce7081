"""Builders for the small groups used throughout the tests and the corpus."""
from __future__ import annotations

import math

from .exact import CycloScalar, ExactMatrix
from .group import Representation, close

__all__ = [
    "cos_sin",
    "rotation",
    "cyclic_rotations",
    "dihedral",
    "sign_line",
    "complex_cyclic",
    "rotation_conductor",
]


def rotation_conductor(k: int) -> int:
    """Smallest conductor holding cos(2 pi/k) and sin(2 pi/k)."""
    if k in (1, 2):
        return 1
    if k == 4:
        return 1
    return k * 4 // math.gcd(k, 4)


def cos_sin(k: int, j: int = 1, n: int | None = None) -> tuple[CycloScalar, CycloScalar]:
    """Exact ``cos(2 pi j/k)`` and ``sin(2 pi j/k)`` in Q(zeta_n)."""
    n = rotation_conductor(k) if n is None else n
    if k in (1, 2, 4):
        # rational values
        c = [1, 0, -1, 0][(4 // k * j) % 4] if k != 1 else 1
        s = [0, 1, 0, -1][(4 // k * j) % 4] if k != 1 else 0
        return CycloScalar.rational(c, n), CycloScalar.rational(s, n)
    if n % k or n % 4:
        raise ValueError("conductor %d cannot hold the %d-th rotation" % (n, k))
    step = n // k * j
    z = CycloScalar.zeta(n, step)
    zi = CycloScalar.zeta(n, -step)
    i = CycloScalar.zeta(n, n // 4)
    return (z + zi) * CycloScalar.rational(1, n) / 2, (z - zi) / (i * 2)


def rotation(k: int, j: int = 1, n: int | None = None) -> ExactMatrix:
    n = rotation_conductor(k) if n is None else n
    c, s = cos_sin(k, j, n)
    return ExactMatrix([[c, -s], [s, c]], n)


def cyclic_rotations(k: int, name: str | None = None) -> Representation:
    """Z/k acting on R^2 by rotations."""
    return close([rotation(k)], field="real", name=name or "Z%d-rotations" % k)


def dihedral(k: int, name: str | None = None) -> Representation:
    """Dihedral group of order 2k acting on R^2."""
    n = rotation_conductor(k)
    refl = ExactMatrix.diag([1, -1], n)
    return close([refl, rotation(k, 1, n)], field="real", name=name or "D%d" % (2 * k))


def sign_line() -> Representation:
    """{+1, -1} acting on R by multiplication."""
    return close([ExactMatrix([[-1]])], field="real", name="Z2-line")


def complex_cyclic(k: int, dim: int = 1, weights: tuple[int, ...] | None = None) -> Representation:
    """Z/k acting on C^dim by ``diag(zeta^w_1, ..., zeta^w_dim)``."""
    weights = weights or (1,) * dim
    n = k if k > 2 else (1 if k == 1 else 2)
    g = ExactMatrix.diag([CycloScalar.zeta(n, w * (n // k)) for w in weights], n)
    return close([g], field="complex", name="Z%d-complex" % k)

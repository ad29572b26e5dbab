"""Symmetric tensor powers in the compressed multiset basis.

A coordinate of ``Sym^m(K^d)`` is indexed by a weak composition ``alpha``
of ``m`` into ``d`` parts.  The inner product carries the multinomial
weight ``m!/prod(alpha_i!)`` so that ``<x^(m), y^(m)> = <x, y>^m`` holds
without ever forming the ``d**m`` full tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DimensionMismatch
from .linalg import Config, Matrix, as_config
from .scalar import ONE, ZERO, Scalar

MultisetIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def enumerate_multisets(d: int, m: int) -> tuple[MultisetIndex, ...]:
    """Weak compositions of ``m`` into ``d`` parts, lexicographically descending."""
    if d < 1 or m < 0:
        raise ValueError("need d >= 1 and m >= 0")

    def rec(parts: int, total: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in rec(parts - 1, total - first):
                yield (first,) + rest

    return tuple(rec(d, m))


def sym_dim(d: int, m: int) -> int:
    return math.comb(d + m - 1, m)


def weight(alpha: Sequence[int]) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


@dataclass(frozen=True)
class SymVector:
    d: int
    m: int
    coords: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.coords) != sym_dim(self.d, self.m):
            raise DimensionMismatch(
                f"Sym^{self.m}(K^{self.d}) has dimension {sym_dim(self.d, self.m)}, "
                f"got {len(self.coords)} coordinates"
            )


def lift(x: Sequence[Scalar], m: int) -> SymVector:
    """The symmetric power ``x^(m)``: coordinate ``alpha`` is ``prod x_i**alpha_i``."""
    if m < 1:
        raise ValueError("tensor order must be positive")
    d = len(x)
    # powers[i][k] = x_i**k
    powers = []
    for xi in x:
        row = [ONE]
        for _ in range(m):
            row.append(row[-1] * xi)
        powers.append(row)
    coords = []
    for alpha in enumerate_multisets(d, m):
        c = ONE
        for i, a in enumerate(alpha):
            if a:
                c = c * powers[i][a]
                if not c:
                    break
        coords.append(c)
    return SymVector(d, m, tuple(coords))


@lru_cache(maxsize=None)
def _weights(d: int, m: int) -> tuple[int, ...]:
    return tuple(weight(a) for a in enumerate_multisets(d, m))


def sym_inner(u: SymVector, v: SymVector) -> Scalar:
    if (u.d, u.m) != (v.d, v.m):
        raise DimensionMismatch(f"Sym^{u.m}(K^{u.d}) vs Sym^{v.m}(K^{v.d})")
    acc = ZERO
    for w, a, b in zip(_weights(u.d, u.m), u.coords, v.coords):
        if a and b:
            acc = acc + w * (a * b)
    return acc


def sym_frame_operator(config: Config | Sequence[Sequence], m: int) -> Matrix:
    """Matrix of ``x -> sum_j <x, u_j> u_j`` with ``u_j = lift(v_j, m)``.

    Entry ``[alpha][beta] = sum_j u_j[alpha] * weight(beta) * u_j[beta]``.
    Weights sit on the column side, so the array is not symmetric.
    """
    cfg = as_config(config)
    d = cfg.d
    N = sym_dim(d, m)
    w = _weights(d, m)
    lifts = [lift(v, m).coords for v in cfg.vectors]
    rows = [[ZERO] * N for _ in range(N)]
    for u in lifts:
        for a in range(N):
            if not u[a]:
                continue
            for b in range(a, N):
                if u[b]:
                    rows[a][b] = rows[a][b] + u[a] * u[b]
    for a in range(N):
        for b in range(a):
            rows[a][b] = rows[b][a]
    return tuple(
        tuple(rows[a][b] * w[b] if w[b] != 1 else rows[a][b] for b in range(N)) for a in range(N)
    )

"""Archimedean Welch-type bounds and coherence of real/complex unit-vector families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidArgs

FIELDS = ("r", "c")


def _check_field(field_tag: str) -> str:
    if field_tag not in FIELDS:
        raise InvalidArgs(f"field must be 'r' or 'c', got {field_tag!r}")
    return field_tag


@dataclass(frozen=True, eq=False)
class ClassicalConfig:
    """Unit vectors stored as rows of an ``(n, d)`` complex array.

    Rows are normalised on construction; for ``field_tag == 'r'`` any
    imaginary part is rejected.
    """

    vectors: np.ndarray
    field_tag: str = "c"

    def __post_init__(self):
        _check_field(self.field_tag)
        arr = np.array(self.vectors, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionMismatch("expected a nonempty (n, d) array of vectors")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgs("non-finite vector entries")
        if self.field_tag == "r" and np.any(arr.imag != 0):
            raise InvalidArgs("complex entries in a real configuration")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0):
            raise InvalidArgs("zero vector cannot be normalised")
        arr = arr / norms[:, None]
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]


def _gram_abs(config: ClassicalConfig) -> np.ndarray:
    V = config.vectors
    # <x, y> = sum x_i conj(y_i)
    return np.abs(V @ V.conj().T)


def coherence(config: ClassicalConfig) -> float:
    if config.n < 2:
        raise InvalidArgs("coherence needs at least two vectors")
    G = _gram_abs(config)
    iu = np.triu_indices(config.n, k=1)
    return float(G[iu].max())


def welch_sum_lhs(config: ClassicalConfig, m: int) -> float:
    """``sum_{j,k} |<v_j, v_k>|^(2m)`` over all ordered pairs, diagonal included."""
    if m < 1:
        raise InvalidArgs("m must be positive")
    return float(np.sum(_gram_abs(config) ** (2 * m)))


def welch_sum_rhs(n: int, d: int, m: int) -> float:
    if m < 1:
        raise InvalidArgs("m must be positive")
    return n * n / math.comb(d + m - 1, m)


class WelchMax(NamedTuple):
    value: float
    vacuous: bool


def welch_max_bound(n: int, d: int, m: int = 1) -> WelchMax:
    """Lower bound on ``max_{j!=k} |<v_j, v_k>|^(2m)``; negative values clamp to 0."""
    if d < 1 or m < 1:
        raise InvalidArgs("need d >= 1 and m >= 1")
    if n <= d:
        raise InvalidArgs(f"Welch bound needs n > d (n={n}, d={d})")
    raw = (n / math.comb(d + m - 1, m) - 1) / (n - 1)
    if raw < 0:
        return WelchMax(0.0, True)
    return WelchMax(raw, False)


def gerzon(d: int, field_tag: str) -> int:
    if d < 1:
        raise InvalidArgs("d must be positive")
    if _check_field(field_tag) == "c":
        return d * d
    return d * (d + 1) // 2


def _half_real_dim(field_tag: str) -> float:
    return 1.0 if _check_field(field_tag) == "c" else 0.5


def bukh_cox(n: int, d: int, field_tag: str) -> float:
    if n <= d or d < 1:
        raise InvalidArgs(f"Bukh-Cox bound needs n > d >= 1 (n={n}, d={d})")
    m = _half_real_dim(field_tag)
    z = gerzon(n - d, field_tag)
    return z / (n * (1 + m * (n - d - 1) * math.sqrt(1 / m + n - d)) - z)


def orthoplex(d: int) -> float:
    if d < 1:
        raise InvalidArgs("d must be positive")
    return 1 / math.sqrt(d)


def levenstein(n: int, d: int, field_tag: str) -> float:
    if n <= d or d < 1:
        raise InvalidArgs(f"Levenstein bound needs n > d >= 1 (n={n}, d={d})")
    m = _half_real_dim(field_tag)
    radicand = (n * (m + 1) - d * (m * d + 1)) / ((n - d) * (m * d + 1))
    if radicand < 0:
        raise DomainError(f"negative radicand {radicand!r} in Levenstein bound")
    return math.sqrt(radicand)


def exponential(n: int, d: int) -> float:
    if d < 2:
        raise InvalidArgs("exponential bound needs d >= 2")
    if n < 1:
        raise InvalidArgs("n must be positive")
    return 1 - 2 * n ** (-1 / (d - 1))


@dataclass
class BoundsTable:
    """Catalog of coherence lower bounds for ``n`` unit vectors in dimension ``d``.

    ``welch_max`` maps each order m to the bound on ``max |<.,.>|^(2m)``;
    the other bound entries are bounds on the coherence itself and are None
    whenever their side condition fails (see ``applicable``).
    """

    n: int
    d: int
    field_tag: str
    gerzon: int
    welch_max: dict[int, float] = field(default_factory=dict)
    welch_vacuous: dict[int, bool] = field(default_factory=dict)
    bukh_cox: Optional[float] = None
    orthoplex: Optional[float] = None
    levenstein: Optional[float] = None
    exponential: Optional[float] = None
    applicable: dict[str, bool] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    def coherence_bounds(self) -> dict[str, float]:
        out = {f"welch_m{m}": v ** (1 / (2 * m)) for m, v in self.welch_max.items()}
        for name in ("bukh_cox", "orthoplex", "levenstein", "exponential"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @property
    def best(self) -> float:
        """Largest applicable lower bound on the coherence (0 if none)."""
        return max([0.0, *self.coherence_bounds().values()])


def bounds_table(n: int, d: int, field_tag: str, m_list: Sequence[int] = (1,)) -> BoundsTable:
    if n < 2 or d < 1:
        raise InvalidArgs("need n >= 2 and d >= 1")
    z = gerzon(d, field_tag)
    table = BoundsTable(n=n, d=d, field_tag=field_tag, gerzon=z)
    table.applicable["welch_max"] = n > d
    if n > d:
        for m in m_list:
            wm = welch_max_bound(n, d, m)
            table.welch_max[m] = wm.value
            table.welch_vacuous[m] = wm.vacuous
        table.bukh_cox = bukh_cox(n, d, field_tag)
    table.applicable["bukh_cox"] = n > d
    above_gerzon = n > z
    table.applicable["orthoplex"] = above_gerzon
    table.applicable["levenstein"] = above_gerzon
    if above_gerzon:
        table.orthoplex = orthoplex(d)
        try:
            table.levenstein = levenstein(n, d, field_tag)
        except DomainError as exc:
            table.applicable["levenstein"] = False
            table.notes["levenstein"] = str(exc)
    table.applicable["exponential"] = d >= 2
    if d >= 2:
        table.exponential = exponential(n, d)
    else:
        table.notes["exponential"] = "undefined exponent for d = 1"
    return table

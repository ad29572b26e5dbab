"""Extremal-configuration search.

Classical side: random-restart perturbation descent on the coherence of
``n`` unit vectors in R^d or C^d.  Non-Archimedean side: exact backtracking
enumeration of equiangular families built from a finite alphabet of
scalars.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .classical import ClassicalConfig, bounds_table, coherence
from .errors import DegenerateParameter, InvalidArgs
from .linalg import Config, Vector, inner
from .scalar import ONE, Poly, Scalar, Valuation
from .welch import ZaunerResult, zauner_check

# --- classical --------------------------------------------------------------


def sic_construct_d2() -> ClassicalConfig:
    """Four states in C^2 whose Bloch vectors form a regular tetrahedron."""
    polar = math.acos(-1 / 3)
    vecs = [[1.0, 0.0]]
    for k in range(3):
        phase = np.exp(2j * math.pi * k / 3)
        vecs.append([math.cos(polar / 2), phase * math.sin(polar / 2)])
    return ClassicalConfig(np.array(vecs, dtype=complex), "c")


@dataclass(frozen=True)
class SearchParams:
    d: int
    n: int
    trials: int = 32
    steps: int = 2000
    initial_step: float = 0.3
    shrink: float = 0.9
    seed: int = 0
    # steps between geometric step-size reductions
    block: int = 50

    def __post_init__(self):
        if self.trials < 1 or self.steps < 1 or self.block < 1:
            raise InvalidArgs("trials, steps and block must be positive")
        if not 0 < self.shrink < 1:
            raise InvalidArgs("shrink factor must lie in (0, 1)")
        if self.initial_step <= 0:
            raise InvalidArgs("initial step must be positive")
        if self.d < 1 or self.n <= self.d:
            raise InvalidArgs(f"search needs n > d >= 1 (n={self.n}, d={self.d})")


@dataclass(frozen=True, eq=False)
class ClassicalSearchResult:
    best: ClassicalConfig
    coherence: float
    best_bound: float
    gap: float


def _max_offdiag(V: np.ndarray) -> float:
    G = np.abs(V @ V.conj().T)
    np.fill_diagonal(G, 0.0)
    return float(G.max())


def _normalize(V: np.ndarray) -> np.ndarray:
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def _run_trial(params: SearchParams, complex_field: bool, trial: int) -> tuple[float, np.ndarray]:
    rng = np.random.default_rng([params.seed, trial])
    shape = (params.n, params.d)

    def sample(scale):
        x = rng.standard_normal(shape)
        if complex_field:
            x = x + 1j * rng.standard_normal(shape)
        return scale * x

    V = _normalize(sample(1.0) + 0j)
    best = _max_offdiag(V)
    step = params.initial_step
    for i in range(params.steps):
        if i and i % params.block == 0:
            step *= params.shrink
        cand = _normalize(V + sample(step))
        c = _max_offdiag(cand)
        if c < best:
            V, best = cand, c
    return best, V


def classical_search(
    params: SearchParams, field_tag: str, workers: int = 1
) -> ClassicalSearchResult:
    """Random restarts of accept-if-better Gaussian perturbation descent.

    Trial ``i`` draws from its own stream seeded by ``(seed, i)``, so the
    result does not depend on ``workers``.
    """
    table = bounds_table(params.n, params.d, field_tag)
    complex_field = field_tag == "c"
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(
                pool.map(
                    _run_trial,
                    [params] * params.trials,
                    [complex_field] * params.trials,
                    range(params.trials),
                )
            )
    else:
        results = [_run_trial(params, complex_field, t) for t in range(params.trials)]
    # first minimum wins ties, keeping the reduction order-independent of scheduling
    best_c, best_V = min(results, key=lambda r: r[0])
    cfg = ClassicalConfig(best_V if complex_field else best_V.real, field_tag)
    coh = coherence(cfg)
    return ClassicalSearchResult(best=cfg, coherence=coh, best_bound=table.best, gap=coh - table.best)


# --- non-Archimedean ---------------------------------------------------------


def na_circle_point(s: Scalar) -> Vector:
    """Rational parametrisation ``((1-s^2)/(1+s^2), 2s/(1+s^2))`` of the unit circle."""
    s = Scalar.coerce(s)
    q = ONE + s * s
    if not q:
        raise DegenerateParameter("1 + s^2 = 0")
    inv = q.inverse()
    return ((ONE - s * s) * inv, (s + s) * inv)


def na_sphere_point(params: Sequence[Scalar]) -> Vector:
    """Unit vector in dimension ``len(params) + 1`` from nested circle points.

    Coordinates are ``c_1, s_1 c_2, s_1 s_2 c_3, ..., s_1 ... s_k`` where
    ``(c_i, s_i) = na_circle_point(params[i])``; the bilinear norm is exactly 1.
    """
    out = []
    carry = ONE
    for p in params:
        c, s = na_circle_point(p)
        out.append(carry * c)
        carry = carry * s
    out.append(carry)
    return tuple(out)


def random_parameter(rng: random.Random, max_coeff: int = 3) -> Scalar:
    """Random circle parameter ``a + b*t`` with small rational ``a`` and integer ``b``."""
    a = Fraction(rng.randint(-max_coeff, max_coeff), rng.randint(1, 3))
    b = rng.randint(-2, 2)
    return Scalar(Poly([a, b]))


def random_unit_config(rng: random.Random, n: int, d: int) -> Config:
    """``n`` exact unit vectors in dimension ``d`` from random sphere parameters."""
    vecs = []
    for _ in range(n):
        if d == 1:
            vecs.append((ONE if rng.random() < 0.5 else -ONE,))
            continue
        vecs.append(na_sphere_point([random_parameter(rng) for _ in range(d - 1)]))
    return Config(tuple(vecs))


@dataclass(frozen=True)
class GeneratorSet:
    scalars: tuple[Scalar, ...]

    def __post_init__(self):
        vals = tuple(Scalar.coerce(s) if not isinstance(s, str) else Scalar.parse(s)
                     for s in self.scalars)
        if not vals:
            raise InvalidArgs("generator set must be nonempty")
        if len(set(vals)) != len(vals):
            raise InvalidArgs("generator set has repeated elements")
        object.__setattr__(self, "scalars", vals)


@dataclass(frozen=True)
class NASearchHit:
    config: Config
    zauner: Optional[ZaunerResult]


def na_candidates(d: int, gen: GeneratorSet, a: Scalar) -> list[Vector]:
    """Candidate vectors with ``<v, v> = a``, in generator order, deduplicated.

    For ``d = 2`` and ``a = 1`` these are circle points; otherwise raw tuples
    over the alphabet (plus ``+-1`` when ``d = 1``) filtered by the norm.
    """
    a = Scalar.coerce(a)
    if d == 2 and a == ONE:
        raw = [na_circle_point(s) for s in gen.scalars]
    else:
        alphabet = list(gen.scalars)
        if d == 1:
            alphabet += [x for x in (ONE, -ONE) if x not in alphabet]
        raw = [tuple(v) for v in itertools.product(alphabet, repeat=d)]
        raw = [v for v in raw if inner(v, v) == a]
    seen, out = set(), []
    for v in raw:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def na_search(d: int, n_max: int, gen: GeneratorSet, a: Scalar, gamma_v: Valuation,
              with_zauner: bool = True) -> list[NASearchHit]:
    """All equiangular families of distinct candidates up to size ``n_max``.

    Families are subsets of :func:`na_candidates` listed in lexicographic
    index order.  Families of size >= 2 are emitted, plus singletons when
    ``d**2 == 1`` (the Zauner size in dimension one).  Zauner conditions are
    attached whenever the family has ``d**2`` members.
    """
    if d < 1 or n_max < 1:
        raise InvalidArgs("need d >= 1 and n_max >= 1")
    cands = na_candidates(d, gen, a)
    m = len(cands)
    # compatible[i][j]: pair condition for candidates i < j
    ok = [[False] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            ok[i][j] = 2 * inner(cands[i], cands[j]).valuation() == gamma_v
    hits: list[NASearchHit] = []

    def emit(idx: list[int]):
        cfg = Config(tuple(cands[i] for i in idx))
        z = zauner_check(cfg) if with_zauner and cfg.n == d * d else None
        hits.append(NASearchHit(cfg, z))

    def extend(idx: list[int]):
        if len(idx) >= 2 or len(idx) == d * d:
            emit(idx)
        if len(idx) == n_max:
            return
        start = idx[-1] + 1 if idx else 0
        for j in range(start, m):
            if all(ok[i][j] for i in idx):
                idx.append(j)
                extend(idx)
                idx.pop()

    extend([])
    return hits

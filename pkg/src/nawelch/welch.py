"""Exact verifiers for the non-Archimedean Welch bounds and related conditions.

Everything is reported on the valuation side: an absolute-value inequality
``|A| >= |B|`` becomes ``v(A) <= v(B)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import CertificateError, DimensionMismatch, NotUnitNorm, WrongCount
from .linalg import (
    Config,
    DiagCertificate,
    Matrix,
    as_config,
    frame_operator,
    inner,
    minpoly_squarefree,
    trace,
    matmul,
    trivial_certificate,
    verify_diag_certificate,
)
from .scalar import INF, ONE, ZERO, Scalar, Valuation, valuation
from .symtensor import sym_frame_operator

CERTIFIED = "certified"
PROBE_PASSED = "squarefree-probe-passed"
UNVERIFIED = "unverified"


@dataclass(frozen=True)
class WelchReport:
    m: int
    n: int
    d: int
    lhs_valuation: Valuation
    rhs_valuation: Valuation
    holds: bool
    tight: bool
    pair_valuations: dict[tuple[int, int], Valuation] = field(repr=False)
    diag_note: str
    unit_norm: bool = True


@dataclass(frozen=True)
class ZaunerResult:
    unit_norm: bool
    diagonalizable: str
    condition_iii: bool
    satisfied: bool


def _operator(cfg: Config, m: int) -> Matrix:
    return frame_operator(cfg) if m == 1 else sym_frame_operator(cfg, m)


def diagonalizability_note(M: Matrix, cert: Optional[DiagCertificate] = None) -> str:
    """Classify the diagonalizability hypothesis for ``M``.

    A supplied certificate must verify (CertificateError otherwise).  Without
    one, an already diagonal ``M`` counts as certified and anything else falls
    back to the squarefree minimal polynomial probe.
    """
    if cert is not None:
        if len(cert.P) != len(M):
            raise DimensionMismatch(
                f"certificate of size {len(cert.P)} for an operator of size {len(M)}"
            )
        if not verify_diag_certificate(M, cert):
            raise CertificateError("diagonalization certificate does not verify")
        return CERTIFIED
    if trivial_certificate(M) is not None:
        return CERTIFIED
    return PROBE_PASSED if minpoly_squarefree(M) else UNVERIFIED


def _pair_valuations(cfg: Config) -> dict[tuple[int, int], Valuation]:
    vecs = cfg.vectors
    out = {}
    for j in range(len(vecs)):
        for k in range(j + 1, len(vecs)):
            out[(j, k)] = out[(k, j)] = inner(vecs[j], vecs[k]).valuation()
    return out


def is_unit_norm(cfg: Config) -> bool:
    return all(inner(v, v) == ONE for v in cfg.vectors)


def _report(cfg, m, lhs, rhs, pairs, note, unit_norm=True) -> WelchReport:
    return WelchReport(
        m=m,
        n=cfg.n,
        d=cfg.d,
        lhs_valuation=lhs,
        rhs_valuation=rhs,
        holds=lhs <= rhs,
        tight=lhs == rhs,
        pair_valuations=pairs,
        diag_note=note,
        unit_norm=unit_norm,
    )


def check_higher_order(
    config: Config | Sequence[Sequence], m: int, cert: Optional[DiagCertificate] = None
) -> WelchReport:
    """Unit-norm bound ``max{|n|, |<v_j,v_k>|^(2m)} >= |n|^2 / |C(d+m-1,m)|``."""
    cfg = as_config(config)
    if m < 1:
        raise ValueError("order m must be positive")
    if cfg.n < 2:
        raise ValueError("the unit-norm bound needs at least two vectors")
    if not is_unit_norm(cfg):
        raise NotUnitNorm("some <v_j, v_j> != 1; use check_general")
    note = diagonalizability_note(_operator(cfg, m), cert)
    pairs = _pair_valuations(cfg)
    v_n = valuation(cfg.n)
    lhs = min([v_n] + [2 * m * v for v in pairs.values()])
    rhs = 2 * v_n - valuation(math.comb(cfg.d + m - 1, m))
    return _report(cfg, m, lhs, rhs, pairs, note)


def check_first_order(
    config: Config | Sequence[Sequence], cert: Optional[DiagCertificate] = None
) -> WelchReport:
    return check_higher_order(config, 1, cert)


def check_general(
    config: Config | Sequence[Sequence], m: int = 1, cert: Optional[DiagCertificate] = None
) -> WelchReport:
    """Bound without the unit-norm hypothesis.

    lhs is ``min(v(sum_l <v_l,v_l>^(2m)), min_{j!=k} 2m v(<v_j,v_k>))`` and rhs
    is ``2 v(sum_j <v_j,v_j>^m) - v(C(d+m-1,m))``.
    """
    cfg = as_config(config)
    if m < 1:
        raise ValueError("order m must be positive")
    note = diagonalizability_note(_operator(cfg, m), cert)
    pairs = _pair_valuations(cfg)
    norms = [inner(v, v) for v in cfg.vectors]
    sum_2m, sum_m = ZERO, ZERO
    for q in norms:
        qm = q**m
        sum_m = sum_m + qm
        sum_2m = sum_2m + qm * qm
    lhs = min([sum_2m.valuation()] + [2 * m * v for v in pairs.values()])
    rhs = 2 * sum_m.valuation() - valuation(math.comb(cfg.d + m - 1, m))
    return _report(cfg, m, lhs, rhs, pairs, note, unit_norm=all(q == ONE for q in norms))


@dataclass(frozen=True)
class TracePath:
    """Valuations recomputed from traces of the frame operator, as in the proof."""

    trace_valuation: Valuation
    trace_sq_valuation: Valuation
    lhs_valuation: Valuation
    rhs_valuation: Valuation


def trace_path(config: Config | Sequence[Sequence], m: int = 1) -> TracePath:
    """Recompute both sides from ``Tr(S)`` and ``Tr(S^2)``.

    ``|Tr(S)|^2`` is the rhs numerator and ``|Tr(S^2)|`` is bounded above by
    the lhs maximum (ultrametric inequality), so the trace-side lhs valuation
    is always ``>=`` the Gram-side one.
    """
    cfg = as_config(config)
    S = _operator(cfg, m)
    tr = trace(S)
    tr2 = trace(matmul(S, S))
    return TracePath(
        trace_valuation=tr.valuation(),
        trace_sq_valuation=tr2.valuation(),
        lhs_valuation=tr2.valuation(),
        rhs_valuation=2 * tr.valuation() - valuation(math.comb(cfg.d + m - 1, m)),
    )


def zauner_check(
    config: Config | Sequence[Sequence], cert: Optional[DiagCertificate] = None
) -> ZaunerResult:
    """Conditions of the non-Archimedean Zauner problem for ``n = d**2`` vectors."""
    cfg = as_config(config)
    if cfg.n != cfg.d**2:
        raise WrongCount(f"expected d^2 = {cfg.d ** 2} vectors, got {cfg.n}")
    unit = is_unit_norm(cfg)
    note = diagonalizability_note(frame_operator(cfg), cert)
    v_n = valuation(cfg.n)
    cond3 = all(2 * v == v_n for v in _pair_valuations(cfg).values())
    return ZaunerResult(
        unit_norm=unit,
        diagonalizable=note,
        condition_iii=cond3,
        satisfied=unit and cond3 and note == CERTIFIED,
    )


def equiangular_check(
    config: Config | Sequence[Sequence], a: Scalar, gamma_v: Valuation
) -> bool:
    """``<v_j,v_j> = a`` for all j and ``2 v(<v_j,v_k>) = gamma_v`` for j != k.

    ``gamma_v = INF`` encodes ``gamma = 0`` (pairwise orthogonal).
    """
    cfg = as_config(config)
    a = Scalar.coerce(a)
    if any(inner(v, v) != a for v in cfg.vectors):
        return False
    vecs = cfg.vectors
    for j in range(len(vecs)):
        for k in range(j + 1, len(vecs)):
            if 2 * inner(vecs[j], vecs[k]).valuation() != gamma_v:
                return False
    return True


__all__ = [
    "CERTIFIED",
    "INF",
    "PROBE_PASSED",
    "TracePath",
    "UNVERIFIED",
    "WelchReport",
    "ZaunerResult",
    "check_first_order",
    "check_general",
    "check_higher_order",
    "diagonalizability_note",
    "equiangular_check",
    "is_unit_norm",
    "trace_path",
    "zauner_check",
]

"""Dense exact linear algebra over Q(t).

Vectors are tuples of :class:`Scalar`, matrices are tuples of row tuples.
The inner product is the bilinear form ``sum a_j b_j`` (no conjugation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from flint import fmpq_mpoly_ctx, fmpq_poly

from .errors import DimensionMismatch
from .scalar import INF, ONE, ZERO, Number, Poly, Scalar, poly_gcd, to_scalar

_CTX = fmpq_mpoly_ctx.get(("x", "t"))

Vector = tuple[Scalar, ...]
Matrix = tuple[tuple[Scalar, ...], ...]
# univariate polynomial over Q(t), coefficients from degree 0 upward
ScalarPoly = tuple[Scalar, ...]


def vector(entries: Iterable[Scalar | Number | str]) -> Vector:
    return tuple(to_scalar(e) for e in entries)


def matrix(rows: Iterable[Iterable[Scalar | Number | str]]) -> Matrix:
    out = tuple(vector(r) for r in rows)
    if any(len(r) != len(out) for r in out):
        raise DimensionMismatch("matrix must be square")
    return out


@dataclass(frozen=True)
class Config:
    """A nonempty family of vectors sharing one dimension."""

    vectors: tuple[Vector, ...]

    def __post_init__(self):
        vecs = tuple(vector(v) for v in self.vectors)
        if not vecs:
            raise ValueError("a configuration needs at least one vector")
        d = len(vecs[0])
        if d == 0:
            raise DimensionMismatch("vectors must have positive dimension")
        for v in vecs:
            if len(v) != d:
                raise DimensionMismatch(f"vector of length {len(v)} in a dimension-{d} family")
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return len(self.vectors[0])

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class DiagCertificate:
    """Claimed eigenbasis ``P`` (as columns) and eigenvalues ``D``."""

    P: Matrix
    D: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "P", matrix(self.P))
        object.__setattr__(self, "D", vector(self.D))
        if len(self.D) != len(self.P):
            raise DimensionMismatch("certificate P and D sizes differ")


def as_config(config: Config | Sequence[Sequence]) -> Config:
    return config if isinstance(config, Config) else Config(tuple(config))


def inner(x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    if len(x) != len(y):
        raise DimensionMismatch(f"inner product of lengths {len(x)} and {len(y)}")
    acc = ZERO
    for a, b in zip(x, y):
        acc = acc + a * b
    return acc


def gram(config: Config | Sequence[Sequence]) -> Matrix:
    vecs = as_config(config).vectors
    n = len(vecs)
    rows = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            rows[j][k] = rows[k][j] = inner(vecs[j], vecs[k])
    return tuple(tuple(r) for r in rows)


def frame_operator(config: Config | Sequence[Sequence]) -> Matrix:
    """Matrix of ``x -> sum_j <x, v_j> v_j``, i.e. ``sum_j v_j v_j^T``."""
    cfg = as_config(config)
    d = cfg.d
    rows = [[ZERO] * d for _ in range(d)]
    for v in cfg.vectors:
        for a in range(d):
            if not v[a]:
                continue
            for b in range(a, d):
                rows[a][b] = rows[a][b] + v[a] * v[b]
    for a in range(d):
        for b in range(a):
            rows[a][b] = rows[b][a]
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def diag(entries: Sequence[Scalar | Number]) -> Matrix:
    vals = vector(entries)
    n = len(vals)
    return tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n))


def _check_square(M: Matrix) -> int:
    n = len(M)
    if any(len(r) != n for r in M):
        raise DimensionMismatch("matrix is not square")
    return n


def trace(M: Matrix) -> Scalar:
    n = _check_square(M)
    acc = ZERO
    for i in range(n):
        acc = acc + M[i][i]
    return acc


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B or len(A[0]) != len(B):
        raise DimensionMismatch("incompatible shapes for matmul")
    cols = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = ZERO
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def matadd(A: Matrix, B: Matrix) -> Matrix:
    if len(A) != len(B) or any(len(a) != len(b) for a, b in zip(A, B)):
        raise DimensionMismatch("incompatible shapes for matadd")
    return tuple(tuple(x + y for x, y in zip(a, b)) for a, b in zip(A, B))


def matscale(c: Scalar, A: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in A)


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def is_diagonal(A: Matrix) -> bool:
    return all(not A[i][j] for i in range(len(A)) for j in range(len(A[i])) if i != j)


def _pivot_row(rows: list[list[Scalar]], col: int, start: int) -> int | None:
    # minimal valuation = largest absolute value
    best, best_v = None, INF
    for r in range(start, len(rows)):
        x = rows[r][col]
        if x:
            v = x.valuation()
            if best is None or v < best_v:
                best, best_v = r, v
    return best


def determinant(M: Matrix) -> Scalar:
    n = _check_square(M)
    rows = [list(r) for r in M]
    det = ONE
    for c in range(n):
        p = _pivot_row(rows, c, c)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = piv.inverse()
        for r in range(c + 1, n):
            f = rows[r][c]
            if not f:
                continue
            f = f * inv
            rows[r] = [x - f * y if y else x for x, y in zip(rows[r], rows[c])]
    return det


def inverse(M: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError for singular input."""
    n = _check_square(M)
    rows = [list(r) + list(e) for r, e in zip(M, identity(n))]
    for c in range(n):
        p = _pivot_row(rows, c, c)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        rows[c], rows[p] = rows[p], rows[c]
        inv = rows[c][c].inverse()
        rows[c] = [x * inv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return tuple(tuple(r[n:]) for r in rows)


def _content_free(rows: list[list[Poly]]) -> list[list[Poly]]:
    g = Poly()
    for row in rows:
        for x in row:
            if x:
                g = poly_gcd(g, x)
                if g.degree == 0:
                    return rows
    if not g or g.degree == 0:
        return rows
    return [[x.exact_div(g) for x in row] for row in rows]


def _clear_denominators(M: Matrix) -> tuple[Poly, list[list[Poly]]]:
    """``M = N / L`` with ``N`` over Q[t] and ``L`` the lcm of the denominators."""
    L = Poly((1,))
    for row in M:
        for x in row:
            if not x.den.is_one():
                L = (L * x.den).exact_div(poly_gcd(L, x.den))
    return L, [[(x.num * L).exact_div(x.den) for x in row] for row in M]


def _poly_matmul(A: list[list[Poly]], B: list[list[Poly]]) -> list[list[Poly]]:
    cols = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = Poly()
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def minimal_polynomial(M: Matrix) -> ScalarPoly:
    """Monic least-degree ``mu`` with ``mu(M) = 0``.

    Denominators are cleared first (``M = N / L`` with ``N`` over Q[t]) and
    the powers ``I, N, N^2, ...`` are reduced fraction-free; the first
    power in the span of the previous ones gives ``mu_N``, and
    ``mu_M(x) = mu_N(L x) / L**k``.
    """
    n = _check_square(M)
    L, N = _clear_denominators(M)
    zero, one = Poly(), Poly((1,))
    power = [[one if i == j else zero for j in range(n)] for i in range(n)]
    # echelon rows: (flattened power combination, coefficients on I..N^k, pivot column)
    basis: list[tuple[list[Poly], list[Poly], int]] = []
    for k in range(n + 1):
        vec = [x for row in power for x in row]
        combo = [zero] * (n + 1)
        combo[k] = one
        for bvec, bcombo, pcol in basis:
            f = vec[pcol]
            if f:
                p = bvec[pcol]
                vec = [p * x - f * y for x, y in zip(vec, bvec)]
                combo = [p * x - f * y for x, y in zip(combo, bcombo)]
                vec, combo = _content_free([vec, combo])
        pcol = next((i for i, x in enumerate(vec) if x), None)
        if pcol is None:
            lead = combo[k]
            out = []
            for i in range(k + 1):
                # coefficient of x^i in mu_N(L x) / L^k, made monic
                c = Scalar(combo[i] * _poly_pow(L, i), lead * _poly_pow(L, k))
                out.append(c)
            return tuple(out)
        basis.append((vec, combo, pcol))
        power = _poly_matmul(power, N)
    raise AssertionError("Cayley-Hamilton violated")  # unreachable


def _poly_pow(p: Poly, k: int) -> Poly:
    out = Poly((1,))
    for _ in range(k):
        out = out * p
    return out


def _ptrim(p: Sequence[Scalar]) -> ScalarPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _prem(a: ScalarPoly, b: ScalarPoly) -> ScalarPoly:
    rem = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        q = c * inv
        for i, y in enumerate(b):
            rem[k - db + i] = rem[k - db + i] - q * y
    return _ptrim(rem[:db])


def scalar_poly_gcd(a: Sequence[Scalar], b: Sequence[Scalar]) -> ScalarPoly:
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _prem(a, b)
    if not a:
        return a
    inv = a[-1].inverse()
    return tuple(x * inv for x in a)


def scalar_poly_derivative(p: Sequence[Scalar]) -> ScalarPoly:
    return _ptrim(Scalar.coerce(k) * c for k, c in enumerate(p) if k)


def poly_at_matrix(p: Sequence[Scalar], M: Matrix) -> Matrix:
    n = _check_square(M)
    acc = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
    for c in reversed(p):
        acc = matadd(matmul(acc, M), matscale(c, identity(n)))
    return acc


def _berkowitz(N: list[list[fmpq_poly]]) -> list[fmpq_poly]:
    """Characteristic polynomial of ``N``, highest coefficient first, division-free."""
    n = len(N)
    zero = fmpq_poly()
    p = [fmpq_poly(1)]
    for r in range(n):
        # column of the Toeplitz factor: 1, -a_rr, -R C, -R A C, ...
        col = [fmpq_poly(1), -N[r][r]]
        C = [N[i][r] for i in range(r)]
        R = [N[r][j] for j in range(r)]
        for _ in range(r):
            acc = zero
            for a, b in zip(R, C):
                acc += a * b
            col.append(-acc)
            C = [sum((N[i][j] * C[j] for j in range(r)), zero) for i in range(r)]
        p = [sum((col[i - j] * p[j] for j in range(min(i, len(p) - 1) + 1)), zero)
             for i in range(r + 2)]
    return p


def minpoly_squarefree(M: Matrix) -> bool:
    """True iff the minimal polynomial of ``M`` has no repeated roots.

    Equivalent to ``rad(chi)(M) = 0`` where ``chi`` is the characteristic
    polynomial: ``mu`` and ``chi`` share irreducible factors, so ``mu`` is
    squarefree exactly when it divides the radical. This avoids building
    ``mu`` over Q(t), which is slow once coefficients get large.
    """
    n = _check_square(M)
    L, N = _clear_denominators(M)
    Np = [[x._p for x in row] for row in N]
    chi = _berkowitz(Np)
    x, t = _CTX.gens()
    def lift(p: fmpq_poly):
        return sum((t ** j * c for j, c in enumerate(p.coeffs()) if c), _CTX.from_dict({}))
    big = sum((lift(c) * x ** (n - i) for i, c in enumerate(chi)), _CTX.from_dict({}))
    g = big.gcd(big.derivative("x"))
    rad, rem = divmod(big, g)
    if not rem.is_zero():
        raise AssertionError("inexact radical")
    deg_x = rad.degrees()[0]
    coeffs = [fmpq_poly() for _ in range(deg_x + 1)]
    for (i, j), c in rad.to_dict().items():
        coeffs[i] += fmpq_poly([0] * j + [c])
    # Horner over Q[t]: acc = acc * N + c_i I
    acc = [[fmpq_poly() for _ in range(n)] for _ in range(n)]
    cols = list(zip(*Np))
    for c in reversed(coeffs):
        acc = [[sum((a * b for a, b in zip(row, col)), fmpq_poly()) for col in cols]
               for row in acc]
        for i in range(n):
            acc[i][i] += c
    return all(v.is_zero() for row in acc for v in row)


def verify_diag_certificate(M: Matrix, cert: DiagCertificate) -> bool:
    """True iff ``P`` is invertible and ``M P = P diag(D)`` exactly."""
    n = _check_square(M)
    if len(cert.P) != n:
        raise DimensionMismatch(f"certificate of size {len(cert.P)} for a {n}x{n} operator")
    if not determinant(cert.P):
        return False
    return matmul(M, cert.P) == matmul(cert.P, diag(cert.D))


def trivial_certificate(M: Matrix) -> DiagCertificate | None:
    """Identity certificate when ``M`` is already diagonal."""
    if not is_diagonal(M):
        return None
    return DiagCertificate(identity(len(M)), tuple(M[i][i] for i in range(len(M))))

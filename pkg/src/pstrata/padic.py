"""Exact arithmetic over Z/p^N and canonical triangular forms.

Scalars are residues mod p^N with p prime; a residue of 0 means "zero at
this precision" and its valuation is reported as N.  Matrices carry a
shared (p, N) pair and store plain integers internally; the scalar wrapper
is produced on access.  All reductions below use only three row operations,
each invertible over Z_p: swapping rows, scaling a row by a unit, and
adding an integer multiple of one row to another.  Consequently the row
span mod p^N is preserved exactly, which is what the lattice layer relies
on.

The triangularization (`hermite_rows`) picks, per column, the entry of
minimal valuation among the remaining rows (ties: lowest row index), makes
it an exact power of p by a unit scaling, clears below, and finally reduces
entries above each pivot modulo that pivot's p-power.  The resulting form
is the unique canonical basis of the row span plus p^N times the ambient.
The diagonalization (`smith_rows`) repeats the same idea with a global
pivot search and column operations, yielding ascending elementary-divisor
exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import PrecisionExhausted

__all__ = [
    "PadicScalar",
    "PadicMatrix",
    "valuation",
    "hermite_form",
    "smith_profile",
]


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def int_valuation(x: int, p: int, cap: int) -> int:
    """Valuation of the residue x, capped at cap (used for x == 0)."""
    if x == 0:
        return cap
    if p == 2:
        v = (x & -x).bit_length() - 1
    else:
        v = 0
        while x % p == 0:
            x //= p
            v += 1
    return v if v < cap else cap


@dataclass(frozen=True, slots=True)
class PadicScalar:
    """An element of Z_p known modulo p^N."""

    p: int
    N: int
    residue: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.N < 1:
            raise ValueError(f"precision must be >= 1, got {self.N}")
        object.__setattr__(self, "residue", self.residue % self.p**self.N)

    def _compat(self, other: "PadicScalar") -> None:
        if self.p != other.p or self.N != other.N:
            raise ValueError(
                f"mixed precision contexts: ({self.p},{self.N}) vs ({other.p},{other.N})"
            )

    @property
    def valuation(self) -> int:
        return int_valuation(self.residue, self.p, self.N)

    @property
    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    @property
    def is_zero(self) -> bool:
        return self.residue == 0

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._compat(other)
        return PadicScalar(self.p, self.N, self.residue + other.residue)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        self._compat(other)
        return PadicScalar(self.p, self.N, self.residue - other.residue)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._compat(other)
        return PadicScalar(self.p, self.N, self.residue * other.residue)

    def __neg__(self) -> "PadicScalar":
        return PadicScalar(self.p, self.N, -self.residue)

    def inverse(self) -> "PadicScalar":
        if not self.is_unit:
            raise ValueError(f"residue {self.residue} is not a unit mod {self.p}")
        return PadicScalar(self.p, self.N, pow(self.residue, -1, self.p**self.N))


def valuation(x: PadicScalar) -> int:
    """p-adic valuation of a scalar; N stands in for 'at least N'."""
    return x.valuation


def _freeze(rows) -> tuple:
    return tuple(tuple(int(e) for e in row) for row in rows)


@dataclass(frozen=True)
class PadicMatrix:
    """A rows x cols grid over Z/p^N.

    The grid holds raw residues; entry() wraps one in a PadicScalar.
    Construction normalizes every entry into [0, p^N).
    """

    p: int
    N: int
    grid: tuple = field()

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.N < 1:
            raise ValueError(f"precision must be >= 1, got {self.N}")
        pN = self.p**self.N
        norm = tuple(tuple(int(e) % pN for e in row) for row in self.grid)
        if norm and any(len(r) != len(norm[0]) for r in norm):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "grid", norm)

    @classmethod
    def from_rows(cls, p: int, N: int, rows) -> "PadicMatrix":
        return cls(p, N, _freeze(rows))

    @classmethod
    def identity(cls, p: int, N: int, d: int) -> "PadicMatrix":
        return cls(p, N, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0]) if self.grid else 0

    def entry(self, i: int, j: int) -> PadicScalar:
        return PadicScalar(self.p, self.N, self.grid[i][j])

    def row(self, i: int) -> tuple:
        return self.grid[i]

    def _compat(self, other: "PadicMatrix") -> None:
        if self.p != other.p or self.N != other.N:
            raise ValueError("mixed precision contexts")

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._compat(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        pN = self.p**self.N
        og = other.grid
        out = []
        for arow in self.grid:
            acc = [0] * other.cols
            for k, a in enumerate(arow):
                if a:
                    brow = og[k]
                    for j, b in enumerate(brow):
                        acc[j] += a * b
            out.append(tuple(v % pN for v in acc))
        return PadicMatrix(self.p, self.N, tuple(out))

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._compat(other)
        return PadicMatrix(
            self.p,
            self.N,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.grid, other.grid)),
        )

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._compat(other)
        return PadicMatrix(
            self.p,
            self.N,
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.grid, other.grid)),
        )


def hermite_rows(rows, p: int, N: int, want_transform: bool = False):
    """Canonical upper-triangular reduction of integer rows mod p^N.

    Returns (reduced_rows, pivot_columns, transform).  transform is None
    unless requested; when present it satisfies transform @ input == output
    mod p^N and is invertible over Z_p.  Columns without any unit-certifiable
    entry (all residues 0 mod p^N) simply receive no pivot; callers that
    need full rank must check pivot_columns themselves.
    """
    pN = p**N
    R = [[e % pN for e in row] for row in rows]
    nr = len(R)
    nc = len(R[0]) if nr else 0
    T = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)] if want_transform else None
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    pr = 0
    for col in range(nc):
        if pr >= nr:
            break
        best = -1
        best_v = N
        for i in range(pr, nr):
            x = R[i][col]
            if x:
                v = int_valuation(x, p, N)
                if v < best_v:
                    best_v = v
                    best = i
                    if v == 0:
                        break
        if best < 0:
            continue
        if best != pr:
            R[pr], R[best] = R[best], R[pr]
            if T is not None:
                T[pr], T[best] = T[best], T[pr]
        a = best_v
        pa = p**a
        u = R[pr][col] // pa
        if u != 1:
            inv = pow(u, -1, pN)
            R[pr] = [(inv * x) % pN for x in R[pr]]
            if T is not None:
                T[pr] = [(inv * x) % pN for x in T[pr]]
        # pivot is now exactly p^a; everything below has valuation >= a
        prow = R[pr]
        for i in range(pr + 1, nr):
            x = R[i][col]
            if x:
                t = x // pa
                ri = R[i]
                R[i] = [(xi - t * pi) % pN for xi, pi in zip(ri, prow)]
                if T is not None:
                    ti = T[i]
                    tp = T[pr]
                    T[i] = [(xi - t * pi) % pN for xi, pi in zip(ti, tp)]
        piv_rows.append(pr)
        piv_cols.append(col)
        pr += 1
    # reduce above each pivot modulo its p-power, left to right
    for k, col in enumerate(piv_cols):
        r = piv_rows[k]
        pa = R[r][col]
        prow = R[r]
        for i in range(r):
            x = R[i][col]
            q = x // pa
            if q:
                ri = R[i]
                R[i] = [(xi - q * pi) % pN for xi, pi in zip(ri, prow)]
                if T is not None:
                    ti = T[i]
                    tp = T[r]
                    T[i] = [(xi - q * pi) % pN for xi, pi in zip(ti, tp)]
    return R, piv_cols, T


def smith_rows(rows, p: int, N: int, want_left: bool = False, want_right_inv: bool = False):
    """Diagonalize integer rows mod p^N by unimodular row and column ops.

    Returns (exponents, origin_cols, U, W) where the exponents are the
    ascending elementary-divisor exponents of the certifiable pivots,
    origin_cols[k] is the input column the k-th pivot came from, U gathers
    the row operations (U @ input == diagonal after the column ops), and W
    is the inverse of the accumulated column transform.  U and W are None
    unless requested.
    """
    pN = p**N
    A = [[e % pN for e in row] for row in rows]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)] if want_left else None
    W = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)] if want_right_inv else None
    colmap = list(range(nc))
    exps: list[int] = []
    origin: list[int] = []
    for k in range(min(nr, nc)):
        bi = bj = -1
        bv = N
        for i in range(k, nr):
            arow = A[i]
            for j in range(k, nc):
                x = arow[j]
                if x:
                    v = int_valuation(x, p, N)
                    if v < bv:
                        bv, bi, bj = v, i, j
                        if v == 0:
                            break
            if bv == 0:
                break
        if bi < 0:
            break
        if bi != k:
            A[k], A[bi] = A[bi], A[k]
            if U is not None:
                U[k], U[bi] = U[bi], U[k]
        if bj != k:
            for row in A:
                row[k], row[bj] = row[bj], row[k]
            if W is not None:
                W[k], W[bj] = W[bj], W[k]
            colmap[k], colmap[bj] = colmap[bj], colmap[k]
        a = bv
        pa = p**a
        u = A[k][k] // pa
        if u != 1:
            inv = pow(u, -1, pN)
            A[k] = [(inv * x) % pN for x in A[k]]
            if U is not None:
                U[k] = [(inv * x) % pN for x in U[k]]
        prow = A[k]
        for i in range(k + 1, nr):
            x = A[i][k]
            if x:
                t = x // pa
                ai = A[i]
                A[i] = [(xi - t * pi) % pN for xi, pi in zip(ai, prow)]
                if U is not None:
                    ui = U[i]
                    uk = U[k]
                    U[i] = [(xi - t * pi) % pN for xi, pi in zip(ui, uk)]
        # row k right of the pivot: plain column clears; only row k is
        # affected because the pivot column is zero elsewhere by now
        ak = A[k]
        for j in range(k + 1, nc):
            x = ak[j]
            if x:
                t = x // pa
                ak[j] = 0
                if W is not None:
                    wk = W[k]
                    wj = W[j]
                    W[k] = [(a0 + t * b0) % pN for a0, b0 in zip(wk, wj)]
        exps.append(a)
        origin.append(colmap[k])
    return exps, origin, U, W


def left_kernel_rows(rows, p: int, N: int) -> list[list[int]]:
    """Generators of {y : y @ rows == 0 mod p^N} as row vectors.

    Derived from the Smith form: with U @ M ~ diag(p^a_k), the kernel mod
    p^N is spanned by p^(N - a_k) * U_k for the pivot rows and by the
    remaining rows of U verbatim.  Scaled generators with a_k == 0 vanish
    and are dropped.
    """
    exps, _, U, _ = smith_rows(rows, p, N, want_left=True)
    pN = p**N
    nr = len(rows)
    gens: list[list[int]] = []
    for k, a in enumerate(exps):
        if a > 0:
            f = p ** (N - a)
            gens.append([(f * x) % pN for x in U[k]])
    for k in range(len(exps), nr):
        gens.append(U[k])
    return gens


def det_valuation_is_zero(grid, p: int) -> bool:
    """True iff det(grid) is a p-adic unit, decided by elimination mod p."""
    A = [[e % p for e in row] for row in grid]
    n = len(A)
    if n == 0:
        return True
    if any(len(r) != n for r in A):
        return False
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] % p), -1)
        if piv < 0:
            return False
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, p)
        A[c] = [(inv * x) % p for x in A[c]]
        for i in range(c + 1, n):
            f = A[i][c]
            if f:
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return True


def hermite_form(M: PadicMatrix) -> tuple[PadicMatrix, PadicMatrix]:
    """Canonical form H and transform U with H = U @ M, U invertible over Z_p.

    Requires full row rank certifiable at precision N; a column that cannot
    produce a pivot for some row raises PrecisionExhausted.
    """
    R, piv, T = hermite_rows(M.grid, M.p, M.N, want_transform=True)
    if len(piv) != M.rows:
        raise PrecisionExhausted(
            f"rank {len(piv)} certified for {M.rows} rows at precision {M.N}"
        )
    return PadicMatrix.from_rows(M.p, M.N, R), PadicMatrix.from_rows(M.p, M.N, T)


def smith_profile(M: PadicMatrix) -> tuple[int, ...]:
    """Ascending elementary-divisor exponents of a square full-rank matrix.

    The exponents describe coker(Z_p^d -> Z_p^d) of the map given by M; their
    sum equals the valuation of det M.  Raises PrecisionExhausted when full
    rank cannot be certified at precision N.
    """
    if M.rows != M.cols:
        raise ValueError(f"smith_profile needs a square matrix, got {M.rows}x{M.cols}")
    exps, _, _, _ = smith_rows(M.grid, M.p, M.N)
    if len(exps) != M.rows:
        raise PrecisionExhausted(
            f"rank {len(exps)} certified for dimension {M.rows} at precision {M.N}"
        )
    return tuple(exps)

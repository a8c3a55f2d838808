"""Full-rank Z_p-lattices in Z_p^d at fixed precision.

A Lattice stores the canonical upper-triangular basis of a full-rank open
sublattice of Z_p^d: diagonal entries are exact powers of p, entries above
a pivot are reduced modulo that pivot's p-power.  The canonical basis is an
exact integer matrix, so relative coordinates between lattices can be
solved over Z with no loss; every mod-p^N question about vectors reduces to
an exact one because each lattice here contains p^N Z_p^d.

Operations that build a new lattice enforce the precision guard: the
result's lower level (largest elementary-divisor exponent over Z_p^d)
must stay at most N - 2, one digit short of the budget, otherwise
PrecisionExhausted is raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .errors import NotContained, PrecisionExhausted
from .padic import hermite_rows, int_valuation, left_kernel_rows, smith_rows

__all__ = [
    "Lattice",
    "Levels",
    "lattice_sum",
    "lattice_intersect",
    "log_index",
    "levels",
    "divisor_profile",
    "coords_in",
    "lattice_to_json",
    "lattice_from_json",
]


@dataclass(frozen=True)
class Lattice:
    """A full-rank open sublattice of Z_p^d with canonical basis rows."""

    p: int
    N: int
    d: int
    basis: tuple

    def __post_init__(self):
        b = self.basis
        if len(b) != self.d or any(len(r) != self.d for r in b):
            raise ValueError(f"basis must be {self.d}x{self.d}")
        for i in range(self.d):
            piv = b[i][i]
            v = int_valuation(piv, self.p, self.N)
            if piv == 0 or self.p**v != piv:
                raise ValueError(f"diagonal entry {piv} at {i} is not an exact p-power")
            if v >= self.N:
                raise PrecisionExhausted(f"diagonal exponent {v} reaches precision {self.N}")
            for j in range(i):
                if b[i][j] != 0:
                    raise ValueError("basis is not upper triangular")
            for j in range(i + 1, self.d):
                if not 0 <= b[i][j] < b[j][j]:
                    raise ValueError(f"entry ({i},{j}) not reduced modulo the column pivot")

    # -- constructors --------------------------------------------------

    @classmethod
    def standard(cls, p: int, N: int, d: int) -> "Lattice":
        return cls(p, N, d, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def from_rows(cls, p: int, N: int, d: int, rows) -> "Lattice":
        """Canonicalize a generating set; requires certifiable full rank.

        The result's lower level must stay below N - 1 (operation guard).
        """
        if not rows:
            raise ValueError("empty generating set")
        if any(len(r) != d for r in rows):
            raise ValueError(f"generators must have length {d}")
        red, piv, _ = hermite_rows(rows, p, N)
        if piv != list(range(d)):
            raise PrecisionExhausted(
                f"full rank not certifiable at precision {N} (pivots in columns {piv})"
            )
        basis = tuple(tuple(red[i]) for i in range(d))
        lat = cls(p, N, d, basis)
        if lat.lower_level > N - 2:
            raise PrecisionExhausted(
                f"lower level {lat.lower_level} too close to precision {N}"
            )
        return lat

    # -- basic queries -------------------------------------------------

    @property
    def diag_exponents(self) -> tuple:
        return tuple(int_valuation(self.basis[i][i], self.p, self.N) for i in range(self.d))

    @property
    def log_det(self) -> int:
        """log_p of the index in the standard lattice Z_p^d."""
        return sum(self.diag_exponents)

    @cached_property
    def lower_level(self) -> int:
        """Least k with p^k Z_p^d inside this lattice.

        This is the largest elementary-divisor exponent of Z_p^d over the
        lattice, which can exceed the largest diagonal exponent of the
        triangular basis (the diagonal only bounds it from below).
        """
        exps, _, _, _ = smith_rows([list(r) for r in self.basis], self.p, self.N)
        if len(exps) != self.d:
            raise PrecisionExhausted("lower level not certifiable at this precision")
        return max(exps)

    def solve(self, vec) -> list | None:
        """Exact integer coordinates of vec in this basis, or None.

        vec is read as an integer lift; membership is well defined because
        the lattice contains p^N Z_p^d.
        """
        b = self.basis
        rem = [int(x) for x in vec]
        coords = [0] * self.d
        for j in range(self.d):
            q, r = divmod(rem[j], b[j][j])
            if r:
                return None
            coords[j] = q
            if q:
                bj = b[j]
                for t in range(j + 1, self.d):
                    rem[t] -= q * bj[t]
        return coords

    def contains_vector(self, vec) -> bool:
        return self.solve(vec) is not None

    def contains(self, other: "Lattice") -> bool:
        self._compat(other)
        return all(self.solve(row) is not None for row in other.basis)

    def scale(self, k: int) -> "Lattice":
        """The lattice p^k * self (k >= 0)."""
        if k < 0:
            raise ValueError("scale exponent must be nonnegative")
        if k == 0:
            return self
        f = self.p**k
        return Lattice.from_rows(
            self.p, self.N, self.d, [[f * x for x in row] for row in self.basis]
        )

    def _compat(self, other: "Lattice") -> None:
        if (self.p, self.N, self.d) != (other.p, other.N, other.d):
            raise ValueError("lattices live in different ambient contexts")


@dataclass(frozen=True)
class Levels:
    """u = largest k with M inside p^k L; ell = least k with p^k L inside M."""

    u: int
    ell: int


def lattice_sum(A: Lattice, B: Lattice) -> Lattice:
    A._compat(B)
    return Lattice.from_rows(A.p, A.N, A.d, list(A.basis) + list(B.basis))


def lattice_intersect(A: Lattice, B: Lattice) -> Lattice:
    """Intersection via the left kernel of the stacked bases.

    A row (u | v) with u @ A.basis == v @ B.basis mod p^N names an exact
    element of A n B, because both lattices absorb p^N Z_p^d; conversely
    every element of the intersection gives such a kernel row.
    """
    A._compat(B)
    d = A.d
    stacked = [list(r) for r in A.basis] + [list(r) for r in B.basis]
    pN = A.p**A.N
    gens = []
    for y in left_kernel_rows(stacked, A.p, A.N):
        row = [0] * d
        for j in range(d):
            c = y[j]
            if c:
                bj = A.basis[j]
                for t in range(d):
                    row[t] += c * bj[t]
        gens.append([x % pN for x in row])
    return Lattice.from_rows(A.p, A.N, d, gens)


def log_index(A: Lattice, B: Lattice) -> int:
    """log_p |A : B| for B inside A."""
    A._compat(B)
    if not A.contains(B):
        raise NotContained("log_index requires the second lattice inside the first")
    return B.log_det - A.log_det


def coords_in(M: Lattice, L: Lattice) -> list:
    """Exact integer coordinate matrix C with C @ L.basis == M.basis."""
    M._compat(L)
    out = []
    for row in M.basis:
        c = L.solve(row)
        if c is None:
            raise NotContained("lattice is not contained in the reference lattice")
        out.append(c)
    return out


def divisor_profile(M: Lattice, L: Lattice) -> tuple:
    """Ascending elementary-divisor exponents of L/M (requires M inside L)."""
    C = coords_in(M, L)
    exps, _, _, _ = smith_rows(C, M.p, M.N)
    if len(exps) != M.d:
        raise PrecisionExhausted("divisor profile not certifiable at this precision")
    return tuple(exps)


def levels(M: Lattice, L: Lattice) -> Levels:
    """Depth bracket of M inside L, computed from exact coordinates."""
    C = coords_in(M, L)
    u = min(
        int_valuation(abs(x), M.p, M.N) if x else M.N for row in C for x in row
    )
    ell = max(divisor_profile(M, L))
    return Levels(u=u, ell=ell)


# -- serialization -----------------------------------------------------


def lattice_to_json(L: Lattice) -> str:
    return json.dumps(
        {"p": L.p, "N": L.N, "d": L.d, "basis": [list(r) for r in L.basis]}, indent=2
    )


def lattice_from_json(text: str) -> Lattice:
    obj = json.loads(text)
    p, N, d = int(obj["p"]), int(obj["N"]), int(obj["d"])
    # canonical form enforced on load
    return Lattice.from_rows(p, N, d, obj["basis"])

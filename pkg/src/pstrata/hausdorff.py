"""Hausdorff dimensions of closed subgroups against a stratification.

In the split model the metric is controlled by the rate vector: the
coordinate along the k-th frame vector shrinks like p^(-i*rate_k) at
filtration depth i.  A closed subgroup generated by finitely many rows has
a well defined box dimension read off from the rightmost nonzero
coordinate of each row of an echelon basis (rates ascend left to right, so
the rightmost coordinate is the one that dominates the depth at which a
row enters the filtration).

hdim_exact evaluates the closed formula sum of pivot rates over the total
mass.  hdim_numeric forgets the model and measures the same quantity from
the computed series itself as index quotients, giving an independent
cross-check.  Extra weights account for direct factors carrying mass but
no lattice coordinates (they enlarge the denominator, and enter subset
sums in the spectrum).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EnumerationTooLarge, RankDeficient
from .gmodule import SeriesTrace
from .lattice import Lattice, log_index
from .padic import int_valuation
from .strata import RateVector, Stratification, _invert_unimodular, _row_image

__all__ = [
    "SubgroupSpec",
    "DimensionReport",
    "echelon_pivots",
    "hdim_exact",
    "hdim_numeric",
    "dimension_report",
    "spectrum",
]


@dataclass(frozen=True)
class SubgroupSpec:
    """Generators of a closed subgroup, as rows in frame coordinates.

    An empty row tuple names the trivial subgroup (dimension 0).
    """

    p: int
    N: int
    rows: tuple

    def __post_init__(self):
        frozen = tuple(tuple(int(x) for x in r) for r in self.rows)
        if frozen and len({len(r) for r in frozen}) != 1:
            raise ValueError("generator rows must share one length")
        object.__setattr__(self, "rows", frozen)

    @classmethod
    def from_ambient(cls, p: int, N: int, rows, strat: Stratification) -> "SubgroupSpec":
        """Convert ambient row vectors into the coordinates of a frame."""
        inv = _invert_unimodular([list(r) for r in strat.frame], p, N)
        pN = p**N
        return cls(p, N, tuple(tuple(_row_image(list(r), inv, pN)) for r in rows))

    def ambient_rows(self, strat: Stratification) -> list:
        pN = self.p**self.N
        return [_row_image(list(r), [list(f) for f in strat.frame], pN) for r in self.rows]


@dataclass(frozen=True)
class DimensionReport:
    """Exact dimension, its pivot set, and the numeric cross-check."""

    exact: Fraction
    pivots: tuple
    quotients: tuple
    strong: bool


def echelon_pivots(spec: SubgroupSpec) -> tuple:
    """Strictly increasing rightmost-pivot indices of an echelon basis.

    Rows are reduced from the right: when two rows share their rightmost
    nonzero coordinate, the one with higher valuation there is cleared by
    the other, pushing its pivot left.  A row that vanishes entirely makes
    the generators dependent and raises RankDeficient.
    """
    p, N = spec.p, spec.N
    pN = p**N
    queue = [[x % pN for x in row] for row in spec.rows]
    owners: dict[int, list] = {}
    while queue:
        row = queue.pop()
        t = next((j for j in range(len(row) - 1, -1, -1) if row[j]), -1)
        if t < 0:
            raise RankDeficient("generator rows are dependent at this precision")
        cur = owners.get(t)
        if cur is None:
            owners[t] = row
            continue
        if int_valuation(row[t], p, N) < int_valuation(cur[t], p, N):
            owners[t], row = row, cur
            cur = owners[t]
        a = int_valuation(cur[t], p, N)
        pa = p**a
        c = ((row[t] // pa) * pow(cur[t] // pa, -1, pN)) % pN
        queue.append([(x - c * y) % pN for x, y in zip(row, cur)])
    return tuple(sorted(owners))


def hdim_exact(H: SubgroupSpec, strat: Stratification, extra_weights=()) -> Fraction:
    """Dimension of the subgroup in the split model, as an exact fraction.

    Each echelon pivot contributes its stratum rate to the numerator; the
    denominator is the total rate mass including any extra weights from
    factors outside the lattice.
    """
    rates = strat.rates.rates
    pivots = echelon_pivots(H)
    if pivots and pivots[-1] >= len(rates):
        raise ValueError("subgroup rows are wider than the frame")
    extras = [Fraction(w) for w in extra_weights]
    if any(w < 0 for w in extras):
        raise ValueError("extra weights must be nonnegative")
    num = sum((rates[j] for j in pivots), Fraction(0))
    den = strat.rates.sigma + sum(extras, Fraction(0))
    return num / den


def hdim_numeric(H: SubgroupSpec, trace: SeriesTrace, strat: Stratification,
                 tolerance=Fraction(1, 100)):
    """Index quotients log|H + term_i : term_i| / log|L : term_i|.

    Works on the computed series directly, with the subgroup moved to
    ambient coordinates through the frame; no model term is involved.  The
    strong flag records whether the quotients settle: spread over the last
    third of the window at most the tolerance.
    """
    L = trace.ambient
    amb = H.ambient_rows(strat)
    quotients = []
    for i in range(1, trace.i_max + 1):
        lam = trace.terms[i]
        joined = Lattice.from_rows(L.p, L.N, L.d, amb + [list(r) for r in lam.basis])
        num = log_index(joined, lam)
        den = log_index(L, lam)
        quotients.append(Fraction(num, den))
    tail = quotients[-max(1, len(quotients) // 3):]
    strong = (max(tail) - min(tail)) <= Fraction(tolerance)
    return quotients, strong


def dimension_report(H: SubgroupSpec, trace: SeriesTrace, strat: Stratification,
                     extra_weights=(), tolerance=Fraction(1, 100)) -> DimensionReport:
    """Exact dimension with its numeric cross-check bundled together.

    The quotients ignore extra weights (they measure the lattice part
    only); with extra weights present the exact value is scaled down by
    the heavier denominator and the quotients converge to the lattice-only
    dimension instead.
    """
    exact = hdim_exact(H, strat, extra_weights)
    pivots = echelon_pivots(H)
    quotients, strong = hdim_numeric(H, trace, strat, tolerance)
    return DimensionReport(
        exact=exact, pivots=pivots, quotients=tuple(quotients), strong=strong
    )


def _subset_sums(weights, limit: int):
    sums = {Fraction(0)}
    for w in weights:
        sums |= {s + w for s in sums}
        if len(sums) > limit:
            raise EnumerationTooLarge(
                f"subset sums exceeded {limit} distinct values; "
                "the rate multiset is too rich to enumerate"
            )
    return sums


def spectrum(rates: RateVector, extra_weights=(), enumeration_cap: int = 24) -> tuple:
    """All dimensions of straight subgroups: subset sums over total mass.

    Every subset of the weighted coordinates (stratum rates plus extra
    weights) is a pivot set of some closed subgroup, so the spectrum is
    the set of subset sums divided by the total.  Up to enumeration_cap
    weights are accumulated directly; up to 40 the multiset is split in
    half and the halves cross-combined; beyond that EnumerationTooLarge.
    The result always contains 0 and 1.
    """
    weights = list(rates.rates) + [Fraction(w) for w in extra_weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    n = len(weights)
    if n > 40:
        raise EnumerationTooLarge(f"{n} weighted coordinates exceed the hard cap of 40")
    total = sum(weights, Fraction(0))
    if total == 0:
        raise ValueError("total weight must be positive")
    limit = 1_500_000
    if n <= enumeration_cap:
        sums = _subset_sums(weights, limit)
    else:
        half = n // 2
        left = _subset_sums(weights[:half], limit)
        right = _subset_sums(weights[half:], limit)
        if len(left) * len(right) > 4 * limit:
            raise EnumerationTooLarge(
                f"{len(left)} x {len(right)} combined subset sums exceed the budget"
            )
        sums = {a + b for a in left for b in right}
    return tuple(sorted(s / total for s in sums))

"""Independent brute-force reference implementations for small cases.

Everything here works by explicit enumeration over (Z/p^N)^d, so it is
slow and only usable for tiny dimensions, but it shares no code with the
library and serves as ground truth.
"""

from itertools import product


def span_set(rows, p, N):
    """All Z-combinations of the rows inside (Z/p^N)^d, as a set of tuples."""
    pN = p**N
    d = len(rows[0])
    out = set()
    for coeffs in product(range(pN), repeat=len(rows)):
        v = [0] * d
        for a, row in zip(coeffs, rows):
            if a:
                for j in range(d):
                    v[j] += a * row[j]
        out.add(tuple(x % pN for x in v))
    return out


def _val(x, p, N):
    if x % p**N == 0:
        return N
    v = 0
    x = x % p**N
    while x % p == 0:
        x //= p
        v += 1
    return v


def brute_smith_2x2(rows, p, N, span=None):
    """Elementary-divisor exponents (a1 <= a2) of a full-rank 2x2 matrix.

    a1+a2 comes from the size of the quotient group, a2 from its exponent
    (the least k with p^k * e_j in the span for both unit vectors).  Only
    valid when the quotient is finite, i.e. the span has full rank.  Pass a
    precomputed span to avoid enumerating the same matrix twice.
    """
    pN = p**N
    S = span_set(rows, p, N) if span is None else span
    size = len(S)
    total = 0
    q = (pN * pN) // size
    while q > 1:
        q //= p
        total += 1
    for k in range(N + 1):
        f = p**k
        if (f % pN, 0) in S and (0, f % pN) in S:
            a2 = k
            break
    else:
        raise AssertionError("span does not have full rank")
    return (total - a2, a2)


def echelon_span_size(rows, p, N):
    """Span size of an upper-triangular basis with p-power pivots."""
    pN = p**N
    size = 1
    for k, row in enumerate(rows):
        size *= pN // p ** _val(row[k], p, N)
    return size


def brute_intersect(rows_a, rows_b, p, N):
    """Intersection of two spans as a set, by enumerating both."""
    return span_set(rows_a, p, N) & span_set(rows_b, p, N)


def brute_sum(rows_a, rows_b, p, N):
    return span_set(list(rows_a) + list(rows_b), p, N)

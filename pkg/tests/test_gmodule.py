"""Group actions and the descending series they generate."""

import csv
import io

import pytest

from pstrata.errors import NotInvariant, PrecisionExhausted
from pstrata.gmodule import (
    GroupAction,
    action_from_json,
    action_to_json,
    check_invariance,
    lambda_step,
    lower_p_series,
    restrict_action,
    trace_to_csv,
)
from pstrata.lattice import Lattice, log_index


def test_build_validates_generators():
    with pytest.raises(ValueError):
        GroupAction.build(2, 8, [[[2, 0], [0, 1]]])  # not invertible
    with pytest.raises(ValueError):
        GroupAction.build(3, 8, [[[0, 1], [1, 0]]])  # eigenvalue -1, not pro-p
    with pytest.raises(ValueError):
        GroupAction.build(4, 8, [[[1, 0], [0, 1]]])  # p must be prime
    a = GroupAction.build(2, 8, [[[1, 1], [0, 1]]])
    assert a.d == 2


def test_trivial_action_series():
    L = Lattice.standard(2, 12, 3)
    act = GroupAction.build(2, 12, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    tr = lower_p_series(L, act, 10)
    for i in range(11):
        assert tr.profiles[i] == (i, i, i)
        assert tr.terms[i] == L.scale(i)


def test_unipotent_shear_profiles():
    # one Jordan block of size 2: lambda_i = span(p^(i-1) x1, p^(i-1)(p x2... ))
    # worked out by hand: profile (i-1, i) for i >= 1
    L = Lattice.standard(2, 14, 2)
    act = GroupAction.build(2, 14, [[[1, 1], [0, 1]]])
    tr = lower_p_series(L, act, 12)
    for i in range(1, 13):
        assert tr.profiles[i] == (i - 1, i)


def test_pi_multiplication_step():
    # multiplication by pi on Z_p[pi], pi^2 = p: one step multiplies by pi
    L = Lattice.standard(2, 12, 2)
    g = [[1, 1], [2, 1]]  # 1 + pi in the basis (1, pi)
    act = GroupAction.build(2, 12, [g])
    lam1 = lambda_step(L, act)
    assert lam1.basis == ((2, 0), (0, 1))  # = pi * L up to basis order
    lam2 = lambda_step(lam1, act)
    assert lam2 == L.scale(1)


def test_series_descends_and_is_invariant():
    L = Lattice.standard(2, 20, 2)
    act = GroupAction.build(2, 20, [[[1, 1], [2, 1]]])
    tr = lower_p_series(L, act, 16)
    for i in range(1, 17):
        assert tr.terms[i - 1].contains(tr.terms[i])
        assert check_invariance(tr.terms[i], act)
        assert sum(tr.profiles[i]) >= i  # index grows at least one digit a step
        # p * previous term sits inside the next term (elementary sections)
        nxt, cur = tr.terms[i], tr.terms[i - 1]
        assert all(nxt.solve([2 * x for x in row]) is not None for row in cur.basis)


def test_series_needs_precision_margin():
    L = Lattice.standard(2, 10, 2)
    act = GroupAction.build(2, 10, [[[1, 1], [0, 1]]])
    with pytest.raises(PrecisionExhausted):
        lower_p_series(L, act, 9)


def test_restrict_action_frozen_example():
    # span(x1, p x2) is invariant under x1 -> x1 + p x2; conjugating divides
    # the off-diagonal entry by p
    p, N = 2, 12
    act = GroupAction.build(p, N, [[[1, p], [0, 1]]])
    sub = Lattice.from_rows(p, N, 2, [[1, 0], [0, p]])
    res = restrict_action(sub, act)
    assert res.N == N - 1
    assert [list(r) for r in res.generators[0].grid] == [[1, 1], [0, 1]]


def test_restrict_action_requires_invariance():
    p, N = 2, 12
    act = GroupAction.build(p, N, [[[1, 1], [0, 1]]])
    bad = Lattice.from_rows(p, N, 2, [[1, 0], [0, p]])
    with pytest.raises(NotInvariant):
        restrict_action(bad, act)


def test_restricted_series_is_commensurable():
    # the series of an invariant finite-index sublattice interleaves the
    # ambient series: indexes per step agree up to a bounded constant
    p, N, imax = 2, 34, 24
    L = Lattice.standard(p, N, 2)
    act = GroupAction.build(p, N, [[[1, 1], [2, 1]]])
    tr = lower_p_series(L, act, imax)
    sub = tr.terms[2]
    res = restrict_action(sub, act)
    subL = Lattice.standard(p, res.N, 2)
    tr2 = lower_p_series(subL, res, imax)
    devs = {tr.log_indices[i] - tr2.log_indices[i] for i in range(1, imax + 1)}
    assert max(devs) - min(devs) <= 2


def test_action_json_round_trip():
    act = GroupAction.build(3, 9, [[[1, 3], [0, 1]], [[1, 0], [3, 1]]])
    again = action_from_json(action_to_json(act))
    assert again.p == act.p and again.N == act.N
    assert [g.grid for g in again.generators] == [g.grid for g in act.generators]


def test_trace_csv_shape():
    L = Lattice.standard(2, 10, 2)
    act = GroupAction.build(2, 10, [[[1, 1], [0, 1]]])
    tr = lower_p_series(L, act, 8)
    rows = list(csv.reader(io.StringIO(trace_to_csv(tr))))
    assert rows[0] == ["i", "m_1", "m_2", "log_index"]
    assert len(rows) == 10  # header + i = 0..8
    assert rows[3] == ["2", "1", "2", "3"]


def test_check_invariance_examples():
    act = GroupAction.build(2, 10, [[[1, 2], [0, 1]]])
    assert check_invariance(Lattice.from_rows(2, 10, 2, [[2, 0], [0, 1]]), act)
    assert not check_invariance(Lattice.from_rows(2, 10, 2, [[1, 0], [0, 4]]), act)

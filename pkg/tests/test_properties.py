"""Property tests for the frontier, intervals, certificates and momentum."""

import math
from datetime import date

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from momentum_rank.core import (
    DeltaSystem,
    ScoreSnapshot,
    build_frontier_report,
    compute_delta_system,
    dominance_bounds,
    frontier_mask,
    log_width_momentum,
    pareto_dominates,
)

from conftest import brute_force_frontier

# small integer grids force plenty of duplicate coordinates and exact ties
coord = st.integers(min_value=-5, max_value=5).map(float) | st.floats(-1e3, 1e3, allow_nan=False)
vectors = st.lists(st.tuples(coord, coord), min_size=1, max_size=60)


def system_of(vecs) -> DeltaSystem:
    return DeltaSystem.from_gains([(f"e{i}", g, r) for i, (g, r) in enumerate(vecs)])


@given(vectors)
def test_sweep_equals_brute_force(vecs):
    mask = frontier_mask([v[0] for v in vecs], [v[1] for v in vecs])
    assert set(np.flatnonzero(mask).tolist()) == brute_force_frontier(vecs)


@given(vectors)
def test_leaders_form_antichain_with_ascending_r(vecs):
    rep = build_frontier_report(system_of(vecs))
    for a in rep.leaders:
        for b in rep.leaders:
            assert not pareto_dominates(a.gains, b.gains)
    by_g = sorted(rep.leaders, key=lambda m: (-m.gains.g, m.gains.r))
    for hi, lo in zip(by_g, by_g[1:]):
        # exact ties in r are the only way two leaders with different g coexist without ascending r
        assert lo.gains.r >= hi.gains.r
        if hi.gains.g > lo.gains.g and len({m.gains.r for m in rep.leaders}) == len(rep.leaders):
            assert lo.gains.r > hi.gains.r
    assert len(rep.leaders) >= 1


@given(vectors)
def test_every_excluded_entity_has_a_dominating_certificate(vecs):
    sys = system_of(vecs)
    rep = build_frontier_report(sys)
    leaders = {m.entity for m in rep.leaders}
    assert set(rep.dominator_index) == set(sys.ids) - leaders
    for entity, leader in rep.dominator_index.items():
        assert pareto_dominates(rep.leader(leader).gains, sys.gains_of(entity))


@given(vectors)
def test_interval_soundness(vecs):
    sys = system_of(vecs)
    rep = build_frontier_report(sys)
    for m in rep.leaders:
        left, right = dominance_bounds(m.entity, sys)
        assert (left, right) == m.bounds
        assert left < m.rank < right
        for rank in range(left + 1, right):
            if rank != m.rank:
                assert pareto_dominates(m.gains, sys.entry(rank).gains)
        for rank in (left, right):
            if 1 <= rank <= sys.N:
                assert not pareto_dominates(m.gains, sys.entry(rank).gains)
        assert m.interval[0] <= m.rank <= m.interval[1]


@given(st.integers(2, 10**6), st.data())
def test_default_momentum_monotone(n, data):
    left = data.draw(st.integers(1, n))
    right = data.draw(st.integers(left, n))
    base = log_width_momentum(left, right, n)
    assert 0.0 <= base <= 100.0 + 1e-9
    if right < n:
        assert log_width_momentum(left, right + 1, n) >= base
    if left > 1:
        assert log_width_momentum(left - 1, right, n) >= base
    assert log_width_momentum(left, left, n) == 0.0
    assert math.isclose(log_width_momentum(1, n, n), 100.0)


scores = st.floats(min_value=1.0, max_value=1e6, allow_nan=False)


@settings(max_examples=60)
@given(
    st.dictionaries(st.text("abcdef", min_size=1, max_size=4), st.tuples(scores, scores), min_size=1, max_size=40),
    # powers of two scale exactly, so rounding cannot break or create ties
    st.sampled_from([2.0, 0.5, 1024.0, 2.0**-7]),
)
def test_scaling_scores_keeps_frontier_intervals_and_certificates(pairs, factor):
    before = ScoreSnapshot(date(2021, 1, 1), {k: v[0] for k, v in pairs.items()})
    after = ScoreSnapshot(date(2021, 4, 1), {k: v[1] for k, v in pairs.items()})
    # floor 0 keeps the eligible set identical under scaling
    a = build_frontier_report(compute_delta_system(before, after, floor=0.0))
    b = build_frontier_report(compute_delta_system(before.scaled(factor), after.scaled(factor), floor=0.0))
    assert {(m.entity, m.interval) for m in a.leaders} == {(m.entity, m.interval) for m in b.leaders}
    assert dict(a.dominator_index) == dict(b.dominator_index)


@given(st.dictionaries(st.text("xyz", min_size=1, max_size=3), st.tuples(scores, scores), min_size=1, max_size=30))
def test_gain_consistency(pairs):
    before = ScoreSnapshot(date(2021, 1, 1), {k: v[0] for k, v in pairs.items()})
    after = ScoreSnapshot(date(2021, 4, 1), {k: v[1] for k, v in pairs.items()})
    sys = compute_delta_system(before, after)
    for e in sys.entries:
        assert e.gains.g == e.after - e.before
        # one rounding in the subtraction; cancellation makes exact equality unattainable
        assert abs(e.before + e.gains.g - e.after) <= 2.3e-16 * max(e.before, e.after)
        assert math.isclose(e.gains.r * e.before, 100.0 * e.gains.g, rel_tol=1e-9, abs_tol=1e-9)
    finals = [e.after for e in sys.entries]
    assert finals == sorted(finals, reverse=True)

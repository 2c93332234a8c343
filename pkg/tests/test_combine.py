"""Normalization and weighted-combination tests."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from advmetrics.combine import (
    DEFAULT_WEIGHT_GRID,
    CombinedBatch,
    ScoreBatch,
    apply_stored_minmax,
    combine,
    min_max_normalize,
    sweep,
)
from advmetrics.errors import (
    DegenerateRange,
    EmptyBatch,
    EmptyIntersection,
    NotNormalized,
)


def batch(values, metric_id="m"):
    return ScoreBatch(metric_id, {f"i{k}": v for k, v in enumerate(values)})


def test_minmax_basic():
    out = min_max_normalize(batch([0, 5, 10]))
    assert list(out.entries.values()) == [0.0, 0.5, 1.0]
    assert out.minmax == (0, 10)


def test_minmax_negative_scores():
    # log-likelihood style metrics produce negatives such as -2.104 / -1.527
    out = min_max_normalize(batch([-2.104, -1.527]))
    assert sorted(out.entries.values()) == [0.0, 1.0]


def test_minmax_constant_batch():
    out = min_max_normalize(batch([3, 3, 3]))
    assert list(out.entries.values()) == [0.5, 0.5, 0.5]


def test_minmax_empty():
    with pytest.raises(EmptyBatch):
        min_max_normalize(ScoreBatch("m", {}))


# quantized floats: denormal-scale gaps would collapse under the affine map
quantized = st.integers(-10 ** 6, 10 ** 6).map(lambda v: v / 1000)


@given(st.lists(quantized, min_size=2, max_size=40))
def test_minmax_preserves_ranking(values):
    b = batch(values)
    out = min_max_normalize(b)
    if len(set(values)) == 1:
        return
    before = sorted(b.entries, key=lambda k: (b.entries[k], k))
    after = sorted(out.entries, key=lambda k: (out.entries[k], k))
    assert before == after


def test_apply_stored_minmax():
    stored = min_max_normalize(batch([0, 10]))
    lo, hi = stored.minmax
    held_out = apply_stored_minmax(batch([0, 5, 12, -3]), lo, hi)
    assert list(held_out.entries.values()) == [0.0, 0.5, 1.0, 0.0]


def test_apply_stored_matches_joint_for_inrange_values():
    training = [1.0, 9.0]
    held = [2.0, 5.0, 8.0]
    lo, hi = min_max_normalize(batch(training)).minmax
    stored = apply_stored_minmax(ScoreBatch("m", {f"h{i}": v for i, v in
                                                  enumerate(held)}), lo, hi)
    joint = min_max_normalize(batch(training + held))
    for i, v in enumerate(held):
        assert stored.entries[f"h{i}"] == pytest.approx(
            joint.entries[f"i{len(training) + i}"])


def test_apply_stored_degenerate_range():
    with pytest.raises(DegenerateRange):
        apply_stored_minmax(batch([1, 2]), 5, 5)


def test_combine_endpoints():
    n = min_max_normalize(batch([0.0, 1.0, 0.5], "nli"))
    m = min_max_normalize(batch([1.0, 0.0, 0.25], "base"))
    assert combine(n, m, 0.0).entries == dict(m.entries)
    assert combine(n, m, 1.0).entries == dict(n.entries)


def test_combine_hand_value():
    n = ScoreBatch("nli", {"x": 0.5}, minmax=(0, 1))
    m = ScoreBatch("base", {"x": 1.0}, minmax=(0, 1))
    assert combine(n, m, 0.2).entries["x"] == pytest.approx(0.9)


def test_combine_requires_normalized():
    with pytest.raises(NotNormalized):
        combine(batch([1, 2]), min_max_normalize(batch([1, 2])), 0.5)


def test_combine_intersection_and_dropped():
    n = ScoreBatch("nli", {"a": 0.1, "b": 0.2}, minmax=(0, 1))
    m = ScoreBatch("base", {"b": 0.3, "c": 0.4}, minmax=(0, 1))
    out = combine(n, m, 0.5)
    assert set(out.entries) == {"b"}
    assert out.dropped_ids == ("a", "c")
    with pytest.raises(EmptyIntersection):
        combine(n, ScoreBatch("base", {"z": 0.0}, minmax=(0, 1)), 0.5)


@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)),
                min_size=1, max_size=20),
       st.floats(0, 1))
def test_combine_affine_and_monotone(pairs, w):
    n = ScoreBatch("nli", {f"i{k}": a for k, (a, _) in enumerate(pairs)},
                   minmax=(0, 1))
    m = ScoreBatch("base", {f"i{k}": b for k, (_, b) in enumerate(pairs)},
                   minmax=(0, 1))
    out = combine(n, m, w)
    for key in out.entries:
        expected = m.entries[key] + w * (n.entries[key] - m.entries[key])
        assert abs(out.entries[key] - expected) < 1e-12
    ids = sorted(out.entries)
    for i in ids:
        for j in ids:
            if n.entries[i] >= n.entries[j] and m.entries[i] >= m.entries[j]:
                assert out.entries[i] >= out.entries[j] - 1e-12


def test_sweep_grid_and_endpoints():
    n = min_max_normalize(batch([1.0, 0.0], "nli"))
    m = min_max_normalize(batch([0.0, 1.0], "base"))

    def evaluator(cb: CombinedBatch):
        return cb.entries["i0"], cb.entries["i1"]

    points = sweep(n, m, evaluator)
    assert len(points) == 11
    assert [p.w_nli for p in points] == list(DEFAULT_WEIGHT_GRID)
    assert points[0].accuracy == 0.0 and points[0].correlation == 1.0
    assert points[-1].accuracy == 1.0 and points[-1].correlation == 0.0


def test_sweep_tradeoff_directions():
    # N scores the "good" item higher (adversarially perfect); M is the
    # opposite (correlation-perfect stand-in). Accuracy must not decrease
    # with w, the correlation proxy must not increase.
    rng = random.Random(0)
    ids = [f"i{k}" for k in range(50)]
    n = ScoreBatch("nli", {i: rng.random() * 0.5 + 0.5 for i in ids}, minmax=(0, 1))
    m = ScoreBatch("base", {i: rng.random() * 0.5 for i in ids}, minmax=(0, 1))

    def evaluator(cb: CombinedBatch):
        mean = sum(cb.entries.values()) / len(cb.entries)
        return mean, -mean

    points = sweep(n, m, evaluator)
    accuracies = [p.accuracy for p in points]
    correlations = [p.correlation for p in points]
    assert accuracies == sorted(accuracies)
    assert correlations == sorted(correlations, reverse=True)

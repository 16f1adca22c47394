import math

import numpy as np
import pytest
from scipy import stats

from crossflow.exceptions import NegativeGap, NonPositiveRate
from crossflow.model import (
    ArrivalEvent,
    ConflictGraph,
    DelayState,
    IntersectionParams,
    ParticleStreams,
    Policy,
    sample_arrival,
    sample_arrivals,
    validate,
)


def test_derived_fields(fig6):
    assert validate(fig6) is fig6
    assert fig6.lambda_total == pytest.approx(0.8)
    assert fig6.ratio == pytest.approx(0.6)
    assert fig6.lane_prob(1) == pytest.approx(0.375)


def test_symmetric_point():
    p = IntersectionParams(1, 1, 0, 0)
    assert p.ratio == 1 and p.lane_prob(1) == 0.5


@pytest.mark.parametrize(
    "args, exc",
    [
        ((0, 1, 2, 0), NonPositiveRate),
        ((1, -1, 2, 0), NonPositiveRate),
        ((1, 1, -0.1, 0), NegativeGap),
        ((1, 1, 2, -1), NegativeGap),
        ((1, math.nan, 2, 0), NonPositiveRate),
    ],
)
def test_rejects_bad_params(args, exc):
    with pytest.raises(exc):
        IntersectionParams(*args)


@pytest.mark.parametrize("l1, l2", [(0.1, 0.7), (1 / 3, 2 / 3), (0.3, 0.5), (1e-3, 5.0)])
def test_lane_probs_sum_to_one_exactly(l1, l2):
    p = IntersectionParams(l1, l2, 1.0)
    assert p.lane_prob(1) + p.lane_prob(2) == 1.0


def test_from_density_roundtrip():
    p = IntersectionParams.from_density(1.0, 0.5, 2.0)
    assert p.lambda1 == pytest.approx(1 / 3) and p.lambda2 == pytest.approx(2 / 3)
    assert p.ratio == pytest.approx(0.5)
    with pytest.raises(NonPositiveRate):
        IntersectionParams.from_density(1.0, 0.0, 2.0)


def test_floor_is_deeper_gap():
    assert IntersectionParams(1, 1, 2, 1).floor == -2
    assert IntersectionParams(1, 1, 0.5, 1.5).floor == -1.5


def test_state_clamps_on_construction():
    s = DelayState(-5, 1, floor=-2)
    assert s.as_tuple() == (-2, 1)
    assert s.swapped().as_tuple() == (1, -2)
    assert s[1] == -2 and s[2] == 1
    with pytest.raises(IndexError):
        s[3]


def test_empty_state(fig6):
    assert DelayState.empty(fig6).as_tuple() == (-2, -2)


def test_arrival_event_validation():
    with pytest.raises(NegativeGap):
        ArrivalEvent(-0.1, 1)
    with pytest.raises(ValueError):
        ArrivalEvent(1.0, 3)


def test_conflict_graph():
    g = ConflictGraph.two_lane()
    assert g.conflict(1, 2) and g.conflict(2, 1) and not g.conflict(1, 1)
    k4 = ConflictGraph.complete(4)
    assert len(k4.conflicts) == 6
    with pytest.raises(ValueError):
        ConflictGraph(2, frozenset({frozenset((1, 3))}))


def test_policy_coerce():
    assert Policy.coerce("FIFO") is Policy.FIFO
    assert Policy.coerce(Policy.FO) is Policy.FO
    with pytest.raises(ValueError):
        Policy.coerce("lifo")


def test_gap_mean_and_lane_share():
    p = IntersectionParams(0.3, 0.5, 2.0)
    streams = ParticleStreams(seed=11, n=1_000_000)
    gaps, lanes = sample_arrivals(streams, p)
    assert gaps.mean() == pytest.approx(1.25, abs=0.01)
    assert np.mean(lanes == 1) == pytest.approx(0.375, abs=0.002)


def test_gaps_pass_chi_square():
    p = IntersectionParams(0.3, 0.5, 2.0)
    gaps, _ = sample_arrivals(ParticleStreams(seed=3, n=100_000), p)
    # equiprobable bins under Exp(0.8)
    edges = stats.expon(scale=1 / 0.8).ppf(np.linspace(0, 1, 51))
    counts, _ = np.histogram(gaps, bins=edges)
    assert stats.chisquare(counts).pvalue > 0.01


def test_streams_are_deterministic_and_partition_free():
    a = ParticleStreams(5, 10)
    b = ParticleStreams(5, 10)
    np.testing.assert_array_equal(a.uniform(), b.uniform())
    whole = ParticleStreams(5, 10)
    tail = ParticleStreams(5, 4, offset=6)
    np.testing.assert_array_equal(whole.uniform()[6:], tail.uniform())
    assert not np.array_equal(ParticleStreams(6, 10).uniform(), ParticleStreams(5, 10).uniform())


def test_uniform_range():
    u = ParticleStreams(0, 100_000).uniform()
    assert u.min() >= 0 and u.max() < 1


def test_sample_arrival_accepts_generator_and_stream(fig6):
    e1 = sample_arrival(np.random.default_rng(0), fig6)
    e2 = sample_arrival(np.random.default_rng(0), fig6)
    assert e1 == e2 and e1.gap >= 0 and e1.lane in (1, 2)
    e3 = sample_arrival(ParticleStreams(1, 1), fig6)
    assert isinstance(e3, ArrivalEvent)

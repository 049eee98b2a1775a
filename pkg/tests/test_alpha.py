import math
import random

import pytest
from hypothesis import given, strategies as st

from relsim.backbone.alpha import AlphaCount, AlphaParams, AlphaTrack, alpha_run, alpha_update

import oracles


def test_zero_is_fixed_point():
    assert alpha_update(AlphaCount(0.0), False).score == 0.0


def test_decay_example():
    scores = [a.score for a in alpha_run([True, True, False], K=0.5)]
    assert scores == [1.0, 2.0, 1.0]


def test_three_errors_reach_threshold():
    a = alpha_run([True, True, True], K=0.9, T=3)[-1]
    assert a.score == 3.0 and a.permanent and not a.transient


def test_threshold_is_inclusive():
    assert AlphaCount(3.0, 0.9, 3.0).permanent
    assert not AlphaCount(math.nextafter(3.0, 0.0), 0.9, 3.0).permanent


@pytest.mark.parametrize("kw", [{"K": 1.0}, {"K": -0.1}, {"T": 0.0}, {"score": -1.0}])
def test_validation(kw):
    with pytest.raises(ValueError):
        AlphaCount(**kw)


def test_params_validation():
    with pytest.raises(ValueError):
        AlphaParams(period=0)


@given(st.lists(st.booleans(), max_size=60), st.floats(0.0, 0.999))
def test_monotonicity(stream, K):
    prev = 0.0
    for j, a in zip(stream, alpha_run(stream, K=K)):
        if j:
            assert a.score == pytest.approx(prev + 1.0, rel=1e-12)
        else:
            assert a.score <= prev
        prev = a.score


@given(st.lists(st.booleans(), max_size=50), st.floats(0.0, 0.99), st.floats(0.1, 10.0))
def test_matches_closed_form(stream, K, T):
    for a, ref in zip(alpha_run(stream, K, T), oracles.alpha_closed_form(stream, K)):
        assert math.isclose(a.score, ref, rel_tol=1e-12, abs_tol=1e-300)


class TestTrack:
    P = 100.0

    def test_first_error(self):
        t = AlphaTrack().feed_error(50.0, self.P)
        assert t.count.score == 1.0 and t.last_period == 0

    def test_same_period_adds_without_decay(self):
        t = AlphaTrack().feed_error(10.0, self.P).feed_error(90.0, self.P).feed_error(99.9, self.P)
        assert t.count.score == 3.0

    def test_adjacent_period_no_decay(self):
        t = AlphaTrack().feed_error(10.0, self.P).feed_error(110.0, self.P)
        assert t.count.score == 2.0

    def test_empty_periods_decay(self):
        # periods 1..4 empty between errors in 0 and 5
        t = AlphaTrack().feed_error(10.0, self.P).feed_error(510.0, self.P)
        assert t.count.score == pytest.approx(1.0 * 0.9 ** 4 + 1.0, rel=1e-12)

    def test_score_at(self):
        t = AlphaTrack().feed_error(10.0, self.P)
        assert t.score_at(150.0, self.P) == 1.0
        assert t.score_at(250.0, self.P) == pytest.approx(0.9)

    def test_out_of_order_stamp_does_not_rewind(self):
        t = AlphaTrack().feed_error(510.0, self.P).feed_error(10.0, self.P)
        assert t.last_period == 5 and t.count.score == 2.0

    def test_equivalent_to_judgment_stream(self):
        rng = random.Random(7)
        stamps = sorted(rng.uniform(0, 3000) for _ in range(12))
        t = AlphaTrack()
        for s in stamps:
            t = t.feed_error(s, self.P)
        # rebuild the per-period judgment stream: each error is a judgment, each empty period one more
        stream = []
        periods = [math.floor(s / self.P) for s in stamps]
        for i, p in enumerate(periods):
            if i:
                stream += [False] * max(p - periods[i - 1] - 1, 0)
            stream.append(True)
        assert t.count.score == pytest.approx(oracles.alpha_closed_form(stream, 0.9)[-1], rel=1e-12)

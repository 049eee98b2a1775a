import pytest

from relsim.backbone.tom import Timeout, TimeoutManager, UnknownTimeout
from relsim.sim.clock import ClockModel
from relsim.sim.kernel import Kernel


@pytest.fixture
def env():
    k = Kernel()
    tom = TimeoutManager(k, ClockModel(rho=0.0), node=0)
    fired = []
    return k, tom, fired


def test_fires_at_deadline(env):
    k, tom, fired = env
    tom.schedule(150.0, lambda t: fired.append((k.now, t.id)))
    k.run()
    assert fired == [(150.0, 1)]


def test_cancel(env):
    k, tom, fired = env
    t = tom.schedule(150.0, fired.append)
    tom.cancel(t.id)
    k.run()
    assert fired == [] and t.id not in tom


def test_renew_single_firing(env):
    k, tom, fired = env
    t = tom.schedule(150.0, lambda t: fired.append(k.now))
    k.run(until=100.0)
    tom.renew(t.id, 250.0)
    k.run()
    assert fired == [250.0]


def test_cyclic(env):
    k, tom, fired = env
    t = tom.schedule(100.0, lambda t: fired.append(t.deadline), period=100.0)
    k.run(until=450.0)
    assert fired == [100.0, 200.0, 300.0, 400.0]
    tom.cancel(t.id)
    k.run(until=1000.0)
    assert len(fired) == 4


def test_unknown_ids(env):
    _, tom, _ = env
    with pytest.raises(UnknownTimeout):
        tom.cancel(42)
    with pytest.raises(UnknownTimeout):
        tom.renew(42, 10.0)


def test_deadline_must_be_future(env):
    k, tom, _ = env
    k.run(until=50.0)
    with pytest.raises(ValueError):
        tom.schedule(50.0, print)
    t = tom.schedule(60.0, print)
    with pytest.raises(ValueError):
        tom.renew(t.id, 40.0)


def test_same_tick_order(env):
    k, tom, fired = env
    tom.schedule(100.6, lambda t: fired.append("late-deadline"), tag=0)
    tom.schedule(100.2, lambda t: fired.append("tag9"), tag=9)
    tom.schedule(100.2, lambda t: fired.append("tag1"), tag=1)
    k.run()
    assert fired == ["tag1", "tag9", "late-deadline"]
    assert k.now == 101.0  # one shared tick


def test_local_clock_drift():
    k = Kernel()
    tom = TimeoutManager(k, ClockModel(rho=0.01, drift={0: 0.01}), node=0)
    seen = []
    tom.schedule(101.0, lambda t: seen.append((k.now, tom.now())))
    k.run()
    (g, local), = seen
    assert local == pytest.approx(101.0) and g == pytest.approx(100.0)


def test_explicit_timeout_and_stop(env):
    k, tom, fired = env
    tom.schedule_timeout(Timeout(7, 20.0, tag=3), fired.append)
    with pytest.raises(ValueError):
        tom.schedule_timeout(Timeout(7, 30.0), fired.append)
    assert [t.id for t in tom.pending()] == [7]
    tom.stop()
    k.run()
    assert fired == []

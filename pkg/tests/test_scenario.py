import pytest

from relsim.entities import node, task
from relsim.sim.scenario import FaultSpec, ScenarioError, load_scenario, parse_scenario

TEXT = """# sample
[NODES] 3
[TASKS]
10 ON 1
8 ON 2 SPARE
[GROUPS] 3: 10 8
[NET] d_min=2 d_max=8 p_omit=0.1 rho=0.0005 drift.1=0.0002
[ALPHA] K=0.8 T=2 period=500
[BB] hb=30 ae=150
[FAULTS]
1000 CRASH_TASK T10
1500 HANG_TASK T10 400
2000 CRASH_NODE N2
[PARTITION] 100 200 0 1 | 2
[SCRIPT] rec.ariel
[CONSTANTS] defs.h
[RUN] until=3000
"""


def test_parse_all_sections(tmp_path):
    sc = parse_scenario(TEXT, tmp_path)
    assert sc.nodes == 3 and sc.tasks == {10: 1, 8: 2} and sc.spares == {8}
    assert sc.groups == {3: (10, 8)}
    assert sc.net == {"d_min": 2, "d_max": 8, "p_omit": 0.1, "rho": 0.0005} and sc.drift == {1: 0.0002}
    assert sc.alpha == {"K": 0.8, "T": 2, "period": 500}
    assert sc.bb == {"hb": 30, "ae": 150}
    assert sc.faults == [FaultSpec(1000, "CRASH_TASK", task(10)), FaultSpec(1500, "HANG_TASK", task(10), 400),
                         FaultSpec(2000, "CRASH_NODE", node(2))]
    assert sc.partitions[0][:2] == (100, 200)
    assert sc.script == tmp_path / "rec.ariel" and sc.constants == tmp_path / "defs.h"
    assert sc.until == 3000


@pytest.mark.parametrize("bad", [
    "[NODES] 2\n[FAULTS]\n10 CRASH_TASK T99\n",          # unknown target
    "[NODES] 2\n[FAULTS]\n10 CRASH_TASK N1\n",           # kind mismatch
    "[NODES] 2\n[TASKS]\n1 ON 1\n[FAULTS]\n10 HANG_TASK T1\n",  # missing duration
    "[NODES] 2\n[TASKS]\n1 ON 5\n",                      # unknown host
    "[NODES] 2\n[NET] bogus=1\n",
    "[NODES] 2\n[WHAT]\n",
    "10 ON 1\n",
    "[TASKS]\n1 ON 0\n",
    "[NODES] 2\n[PARTITION] 0 10 0 | 0 1\n",
    "[NODES] 3\n[PARTITION] 0 10 0 | 1\n",
    "[NODES] 2\n[FAULTS]\n-5 CRASH_NODE N1\n",
])
def test_errors(bad):
    with pytest.raises(ScenarioError):
        parse_scenario(bad)


def test_corpus_loads(scenarios_dir):
    for path in sorted(scenarios_dir.glob("*.scn")):
        sc = load_scenario(path)
        assert sc.script is not None and sc.script.exists(), path

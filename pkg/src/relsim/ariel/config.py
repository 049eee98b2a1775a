"""Text serialization of basic-tool configuration records.

One record per line::

    WATCHDOG <wid> <task-id> <period-ms> <warn-task-id>
    RGROUP <group-id> <member-id>...
"""

from __future__ import annotations

from relsim.ariel.ast import BTConfig, ReplicatedGroupConfig, WatchdogConfig
from relsim.entities import group, task


def format_config(configs: list[BTConfig]) -> str:
    lines = []
    for c in configs:
        if isinstance(c, WatchdogConfig):
            lines.append(f"WATCHDOG {c.wid} {c.watched.id} {c.period_ms} {c.warn_target.id}")
        else:
            lines.append("RGROUP " + " ".join(str(x) for x in [c.group.id, *(m.id for m in c.members)]))
    return "".join(line + "\n" for line in lines)


def parse_config(text: str) -> list[BTConfig]:
    configs: list[BTConfig] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields:
            continue
        try:
            nums = [int(x) for x in fields[1:]]
        except ValueError:
            raise ValueError(f"config line {lineno}: non-integer field in {raw!r}") from None
        if fields[0] == "WATCHDOG" and len(nums) == 4:
            wid, watched, period, warn = nums
            configs.append(WatchdogConfig(wid, task(watched), period, task(warn)))
        elif fields[0] == "RGROUP" and len(nums) >= 3:
            configs.append(ReplicatedGroupConfig(group(nums[0]), tuple(task(m) for m in nums[1:])))
        else:
            raise ValueError(f"config line {lineno}: unrecognized record {raw!r}")
    return configs

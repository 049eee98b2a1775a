"""Deterministic discrete-event simulation of a timed asynchronous system."""

from relsim.sim.clock import ClockModel, local_clock
from relsim.sim.kernel import EmptyQueue, Kernel, ScheduleInPast, SimEvent
from relsim.sim.net import Datagram, Decision, NetModel, Network, PartitionSchedule
from relsim.sim.scenario import FaultSpec, Scenario, ScenarioError, load_scenario, parse_scenario
from relsim.sim.trace import TraceLine, Tracer, read_trace

__all__ = [
    "ClockModel", "Datagram", "Decision", "EmptyQueue", "FaultSpec", "Kernel", "NetModel",
    "Network", "PartitionSchedule", "Scenario", "ScenarioError", "ScheduleInPast", "SimEvent",
    "TraceLine", "Tracer", "load_scenario", "local_clock", "parse_scenario", "read_trace",
]

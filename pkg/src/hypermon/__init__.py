"""Constraint-based runtime monitoring of forall-two HyperLTL specifications."""

from .formula import Spec, SpecError, parse_spec
from .monitor import MonitorConfig, MonitorSession, Stats, monitor_offline, new_session
from .semantics import NO_VIOLATION, Verdict, make_trace, oracle_monitor

__all__ = [
    "MonitorConfig",
    "MonitorSession",
    "NO_VIOLATION",
    "Spec",
    "SpecError",
    "Stats",
    "Verdict",
    "make_trace",
    "monitor_offline",
    "new_session",
    "oracle_monitor",
    "parse_spec",
]

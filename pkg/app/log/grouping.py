"""Grouping of original traces that share a reduced label sequence."""
from app.log.parsers import EventLog, Trace
from app.tandem.reduction import ReducedTrace


def distinct_reduced_traces(log: EventLog, reductions: dict[int, ReducedTrace]) -> dict[Trace, list[int]]:
    """Reduced label sequence -> ids of the original traces reducing to it.

    Groups appear in order of their first trace id; ids ascend within a group.
    """
    groups: dict[Trace, list[int]] = {}
    for tid in sorted(log.traces):
        groups.setdefault(reductions[tid].rt, []).append(tid)
    return groups

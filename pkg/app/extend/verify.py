"""Properness check for (extended) alignments."""
from collections.abc import Sequence
from dataclasses import dataclass

from app.align.synchronization import Synchronization
from app.model.fsm import Dafsa, ReachabilityGraph


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    clause: int | None = None  # 1: log labels, 2: model path
    index: int | None = None  # alignment index of the first violation
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def verify_proper(
    alignment: Sequence[Synchronization],
    t: Sequence[str],
    D: Dafsa | None,
    RG: ReachabilityGraph,
) -> VerificationReport:
    """Check that the DAFSA labels spell t and the RG arcs form a source-to-final path."""
    dafsa_arcs = set(D.arcs) if D is not None else None
    expected = list(t)
    consumed = 0
    for k, sync in enumerate(alignment, start=1):
        if sync.dafsa_arc is None:
            continue
        if dafsa_arcs is not None and sync.dafsa_arc not in dafsa_arcs:
            return VerificationReport(False, 1, k, f"arc {sync.dafsa_arc} is not a DAFSA arc")
        if consumed >= len(expected) or sync.dafsa_arc.label != expected[consumed]:
            want = expected[consumed] if consumed < len(expected) else "end of trace"
            return VerificationReport(False, 1, k, f"log label {sync.dafsa_arc.label!r} where {want!r} was expected")
        consumed += 1
    if consumed != len(expected):
        return VerificationReport(False, 1, len(alignment), f"only {consumed} of {len(expected)} labels aligned")

    rg_arcs = set(RG.arcs)
    node = RG.source
    for k, sync in enumerate(alignment, start=1):
        arc = sync.rg_arc
        if arc is None:
            continue
        if arc not in rg_arcs:
            return VerificationReport(False, 2, k, f"arc {arc} is not a reachability-graph arc")
        if arc.source != node:
            return VerificationReport(False, 2, k, f"arc {arc} does not leave node {node}")
        node = arc.target
    if not RG.is_final(node):
        return VerificationReport(False, 2, len(alignment), f"model run ends in non-final node {node}")
    return VerificationReport(True)

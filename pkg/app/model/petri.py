"""Labelled Petri nets, workflow-net validation and 1-bounded firing semantics."""
import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from app.errors import BoundViolation, NotEnabled

logger = logging.getLogger(__name__)

TAU = "τ"  # Silent label

# A 1-bounded marking is the set of marked places
Marking = frozenset[str]


@dataclass(frozen=True)
class PetriNet:
    places: frozenset[str]
    transitions: frozenset[str]
    flow: frozenset[tuple[str, str]]
    labels: dict[str, str] = field(hash=False)

    def __post_init__(self):
        overlap = self.places & self.transitions
        if overlap:
            raise ValueError(f"ids used as both place and transition: {sorted(overlap)}")
        for src, tgt in self.flow:
            place_to_transition = src in self.places and tgt in self.transitions
            transition_to_place = src in self.transitions and tgt in self.places
            if not (place_to_transition or transition_to_place):
                raise ValueError(f"flow pair ({src}, {tgt}) does not join a place and a transition")
        missing = self.transitions - self.labels.keys()
        if missing:
            raise ValueError(f"transitions without a label: {sorted(missing)}")

    @cached_property
    def _presets(self) -> dict[str, frozenset[str]]:
        pre: dict[str, set[str]] = {n: set() for n in self.places | self.transitions}
        for src, tgt in self.flow:
            pre[tgt].add(src)
        return {n: frozenset(s) for n, s in pre.items()}

    @cached_property
    def _postsets(self) -> dict[str, frozenset[str]]:
        post: dict[str, set[str]] = {n: set() for n in self.places | self.transitions}
        for src, tgt in self.flow:
            post[src].add(tgt)
        return {n: frozenset(s) for n, s in post.items()}

    def preset(self, node: str) -> frozenset[str]:
        return self._presets[node]

    def postset(self, node: str) -> frozenset[str]:
        return self._postsets[node]

    def label(self, transition: str) -> str:
        return self.labels[transition]

    def is_silent(self, transition: str) -> bool:
        return self.labels[transition] == TAU


####################################################################
# Validation report entries
####################################################################

@dataclass(frozen=True)
class DuplicateLabel:
    label: str
    first: str
    second: str

    def __str__(self) -> str:
        return f"label {self.label!r} shared by transitions {self.first!r} and {self.second!r}"


@dataclass(frozen=True)
class NotFreeChoice:
    place: str

    def __str__(self) -> str:
        return f"place {self.place!r} violates free-choice"


@dataclass(frozen=True)
class NotWorkflow:
    reason: str

    def __str__(self) -> str:
        return f"not a workflow net: {self.reason}"


@dataclass
class ValidationReport:
    violations: list[DuplicateLabel | NotFreeChoice | NotWorkflow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class WorkflowNet:
    net: PetriNet
    initial_place: str
    final_place: str

    @property
    def transitions(self) -> frozenset[str]:
        return self.net.transitions

    @property
    def places(self) -> frozenset[str]:
        return self.net.places

    @property
    def initial_marking(self) -> Marking:
        return frozenset({self.initial_place})

    def preset(self, node: str) -> frozenset[str]:
        return self.net.preset(node)

    def postset(self, node: str) -> frozenset[str]:
        return self.net.postset(node)

    def label(self, transition: str) -> str:
        return self.net.label(transition)


def check_workflow_net(net: PetriNet, i: str, o: str) -> ValidationReport:
    """Collect every workflow, labelling and free-choice violation of net."""
    report = ValidationReport()

    # Workflow structure
    for place, role in ((i, "initial"), (o, "final")):
        if place not in net.places:
            report.violations.append(NotWorkflow(f"{role} place {place!r} does not exist"))
    if report.violations:
        return report
    if net.preset(i):
        report.violations.append(NotWorkflow(f"initial place {i!r} has input transitions"))
    if net.postset(o):
        report.violations.append(NotWorkflow(f"final place {o!r} has output transitions"))

    graph = nx.DiGraph()
    graph.add_nodes_from(net.places | net.transitions)
    graph.add_edges_from(net.flow)
    # Short-circuit transition o -> i; the id cannot clash since it is not a str
    loop = ("short-circuit",)
    graph.add_edge(o, loop)
    graph.add_edge(loop, i)
    if not nx.is_strongly_connected(graph):
        report.violations.append(NotWorkflow("net is not strongly connected after adding o -> i"))

    # Unique labelling
    seen: dict[str, str] = {}
    for t in sorted(net.transitions):
        lbl = net.label(t)
        if lbl == TAU:
            continue
        if lbl in seen:
            report.violations.append(DuplicateLabel(lbl, seen[lbl], t))
        else:
            seen[lbl] = t

    # Free-choice: a shared input place forces identical singleton presets
    for p in sorted(net.places):
        consumers = net.postset(p)
        if len(consumers) > 1 and any(net.preset(t) != {p} for t in consumers):
            report.violations.append(NotFreeChoice(p))

    return report


def validate_workflow_net(net: PetriNet, i: str, o: str) -> WorkflowNet | ValidationReport:
    report = check_workflow_net(net, i, o)
    if not report.ok:
        logger.info("Workflow net rejected with %d violations", len(report.violations))
        return report
    return WorkflowNet(net=net, initial_place=i, final_place=o)


def enabled(net: WorkflowNet, m: Marking) -> set[str]:
    return {t for t in net.transitions if net.preset(t) <= m}


def fire(net: WorkflowNet, m: Marking, t: str) -> Marking:
    pre = net.preset(t)
    if not pre <= m:
        raise NotEnabled(t)
    remaining = m - pre
    for p in sorted(net.postset(t)):
        if p in remaining:
            raise BoundViolation(p)
    return remaining | net.postset(t)


@dataclass(frozen=True)
class ConcurrencyReport:
    concurrent: bool
    witness: str | None = None


def detect_concurrency(net: WorkflowNet) -> ConcurrencyReport:
    """AND-splits and AND-joins show up as transitions with several in/out places."""
    for t in sorted(net.transitions):
        if len(net.preset(t)) > 1 or len(net.postset(t)) > 1:
            return ConcurrencyReport(concurrent=True, witness=t)
    return ConcurrencyReport(concurrent=False)

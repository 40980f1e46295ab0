"""Finite state machines shared by the reachability graph and the DAFSA."""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx

from app.model.petri import Marking


@dataclass(frozen=True, order=True)
class Arc:
    source: int
    label: str
    target: int

    def __str__(self) -> str:
        return f"{self.source} -{self.label}-> {self.target}"


class Fsm:
    """Nodes, labelled arcs, a source node and a non-empty set of final nodes.

    Outgoing arcs of every node are kept sorted by (label, target) so that
    every traversal of the machine is deterministic.
    """

    def __init__(self, nodes: Iterable[int], arcs: Iterable[Arc], source: int, final_nodes: Iterable[int]):
        self.nodes: frozenset[int] = frozenset(nodes)
        self.arcs: tuple[Arc, ...] = tuple(dict.fromkeys(arcs))
        self.source = source
        self.final_nodes: frozenset[int] = frozenset(final_nodes)

        if not self.nodes:
            raise ValueError("FSM needs at least one node")
        if source not in self.nodes:
            raise ValueError(f"source node {source} is not a node")
        if not self.final_nodes:
            raise ValueError("FSM needs at least one final node")
        if not self.final_nodes <= self.nodes:
            raise ValueError("final nodes must be nodes")

        outgoing: dict[int, list[Arc]] = {n: [] for n in self.nodes}
        incoming: dict[int, list[Arc]] = {n: [] for n in self.nodes}
        for arc in self.arcs:
            if arc.source not in self.nodes or arc.target not in self.nodes:
                raise ValueError(f"arc {arc} references an unknown node")
            outgoing[arc.source].append(arc)
            incoming[arc.target].append(arc)
        self._outgoing = {n: tuple(sorted(a, key=lambda x: (x.label, x.target))) for n, a in outgoing.items()}
        self._incoming = {n: tuple(sorted(a, key=lambda x: (x.label, x.source))) for n, a in incoming.items()}

    def outgoing(self, node: int) -> tuple[Arc, ...]:
        """n ▶ : arcs leaving node."""
        return self._outgoing[node]

    def incoming(self, node: int) -> tuple[Arc, ...]:
        """▶ n : arcs entering node."""
        return self._incoming[node]

    def is_final(self, node: int) -> bool:
        return node in self.final_nodes

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(a.label for a in self.arcs)

    def to_digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(sorted(self.nodes))
        for arc in self.arcs:
            graph.add_edge(arc.source, arc.target, label=arc.label)
        return graph

    def is_deterministic(self) -> bool:
        for node in self.nodes:
            labels = [a.label for a in self._outgoing[node]]
            if len(labels) != len(set(labels)):
                return False
        return True

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_digraph())

    def accepts(self, labels: Sequence[str]) -> bool:
        current = {self.source}
        for lbl in labels:
            current = {a.target for n in current for a in self._outgoing[n] if a.label == lbl}
            if not current:
                return False
        return bool(current & self.final_nodes)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(nodes={len(self.nodes)}, arcs={len(self.arcs)}, finals={len(self.final_nodes)})"


class ReachabilityGraph(Fsm):
    """An FSM whose nodes stand for the reachable markings of a net."""

    def __init__(self, nodes, arcs, source, final_nodes, markings: dict[int, Marking]):
        super().__init__(nodes, arcs, source, final_nodes)
        self.markings = dict(markings)

    def marking(self, node: int) -> Marking:
        return self.markings[node]


class Dafsa(Fsm):
    pass

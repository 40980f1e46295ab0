"""Reachability-graph construction and silent-arc removal."""
import logging
from collections import deque

import networkx as nx

from app.config import DEFAULT_STATE_CAP
from app.errors import StateSpaceCap
from app.model.fsm import Arc, ReachabilityGraph
from app.model.petri import TAU, Marking, WorkflowNet, fire

logger = logging.getLogger(__name__)


def explore_markings(net: WorkflowNet, state_cap: int = DEFAULT_STATE_CAP) -> ReachabilityGraph:
    """Breadth-first marking exploration from {i}, τ arcs included.

    Nodes are numbered in discovery order; transitions are tried in sorted id
    order, so the numbering is reproducible.
    """
    initial = net.initial_marking
    index: dict[Marking, int] = {initial: 0}
    queue: deque[Marking] = deque([initial])
    arcs: dict[Arc, None] = {}
    order = sorted(net.transitions)

    while queue:
        m = queue.popleft()
        for t in order:
            if not net.preset(t) <= m:
                continue
            nxt = fire(net, m, t)
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            arcs[Arc(index[m], net.label(t), index[nxt])] = None
            if len(index) + len(arcs) > state_cap:
                raise StateSpaceCap(state_cap)

    markings = {n: m for m, n in index.items()}
    finals = [n for m, n in index.items() if net.final_place in m]
    return ReachabilityGraph(markings.keys(), arcs, 0, finals, markings)


def remove_tau_arcs(rg: ReachabilityGraph) -> ReachabilityGraph:
    """Replace τ arcs by their observable transitive closure.

    Every node inherits the observable arcs and the finality of the nodes it
    reaches through one or more τ arcs. τ arcs and nodes that become
    unreachable are then dropped and the survivors renumbered in their
    original order.
    """
    tau_graph = nx.DiGraph()
    tau_graph.add_nodes_from(rg.nodes)
    tau_graph.add_edges_from((a.source, a.target) for a in rg.arcs if a.label == TAU)
    if tau_graph.number_of_edges() == 0:
        return rg

    arcs: dict[Arc, None] = {}
    finals = set(rg.final_nodes)
    for node in sorted(rg.nodes):
        for arc in rg.outgoing(node):
            if arc.label != TAU:
                arcs[arc] = None
        # descendants() follows τ-cycles through their strongly connected components
        for reached in sorted(nx.descendants(tau_graph, node)):
            for arc in rg.outgoing(reached):
                if arc.label != TAU:
                    arcs[Arc(node, arc.label, arc.target)] = None
            if reached in rg.final_nodes:
                finals.add(node)

    observable = nx.DiGraph()
    observable.add_nodes_from(rg.nodes)
    observable.add_edges_from((a.source, a.target) for a in arcs)
    keep = sorted({rg.source} | nx.descendants(observable, rg.source))
    renumber = {old: new for new, old in enumerate(keep)}

    result = ReachabilityGraph(
        nodes=renumber.values(),
        arcs=[Arc(renumber[a.source], a.label, renumber[a.target]) for a in arcs if a.source in renumber],
        source=renumber[rg.source],
        final_nodes=[renumber[n] for n in finals if n in renumber],
        markings={renumber[n]: rg.markings[n] for n in keep},
    )
    logger.debug("τ-removal: %d -> %d nodes, %d -> %d arcs", len(rg.nodes), len(result.nodes), len(rg.arcs), len(result.arcs))
    return result


def build_reachability_graph(net: WorkflowNet, state_cap: int = DEFAULT_STATE_CAP) -> ReachabilityGraph:
    raw = explore_markings(net, state_cap)
    rg = remove_tau_arcs(raw)
    logger.info("Reachability graph: %d nodes, %d arcs (%d final)", len(rg.nodes), len(rg.arcs), len(rg.final_nodes))
    return rg


def shortest_path_length(rg: ReachabilityGraph) -> int:
    """Length of the shortest observable run from the source to a final node."""
    lengths = nx.single_source_shortest_path_length(rg.to_digraph(), rg.source)
    return min(lengths[n] for n in rg.final_nodes if n in lengths)

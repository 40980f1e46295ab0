"""Uniform-cost search over the product of DAFSA and reachability graph."""
import heapq
import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass

from app.align.cost import hide_cost
from app.align.synchronization import Alignment, Op, Synchronization
from app.config import DEFAULT_EXPANSION_CAP
from app.errors import CapExceeded, NoPath
from app.model.fsm import Dafsa, ReachabilityGraph
from app.tandem.reduction import ReducedTrace

logger = logging.getLogger(__name__)

# Tie-break on the last operation at equal cost and length
_OP_RANK = {None: 0, Op.MT: 0, Op.LH: 1, Op.RH: 2}


@dataclass
class SearchStats:
    calls: int = 0
    expansions: int = 0

    def merge(self, other: "SearchStats"):
        self.calls += other.calls
        self.expansions += other.expansions


class _Node:
    """Partial alignment stored as a parent-linked list."""
    __slots__ = ("sync", "parent", "length", "pos", "hidden")

    def __init__(self, sync: Synchronization | None, parent: "_Node | None", pos: int, hidden: frozenset[int]):
        self.sync = sync
        self.parent = parent
        self.length = parent.length + 1 if parent is not None else 0
        self.pos = pos  # trace positions consumed so far
        self.hidden = hidden  # first-copy positions hidden in the log whose complement is still ahead

    def alignment(self) -> Alignment:
        out: list[Synchronization] = []
        node = self
        while node.sync is not None:
            out.append(node.sync)
            node = node.parent
        return tuple(reversed(out))


def align_dijkstra(
    T: ReducedTrace,
    D: Dafsa,
    RG: ReachabilityGraph,
    expansion_cap: int = DEFAULT_EXPANSION_CAP,
    stats: SearchStats | None = None,
) -> Alignment:
    """ρ-minimal alignment of T.rt against RG.

    Search states are (DAFSA node, RG node, pending first-copy log hides);
    the last component is empty outside reduced repeats, so on unreduced
    traces this is the plain node-pair search. A popped state is expanded
    when its pair has no recorded cost or a recorded cost >= ρ, and an
    identical (state, ρ) is never expanded twice.
    """
    stats = stats if stats is not None else SearchStats()
    stats.calls += 1
    rt, p, tr_c = T.rt, T.p, T.tr_c
    n = len(rt)

    counter = itertools.count()
    root = _Node(None, None, 0, frozenset())
    heap: list[tuple] = [(0, 0, 0, next(counter), D.source, RG.source, root)]
    best: dict[tuple, int] = {}
    expanded: set[tuple] = set()
    expansions = 0

    def push(rho: int, n_d: int, n_rg: int, node: _Node):
        heapq.heappush(heap, (rho, node.length, _OP_RANK[node.sync.op], next(counter), n_d, n_rg, node))

    while heap:
        rho, _, _, _, n_d, n_rg, node = heapq.heappop(heap)
        key = (n_d, n_rg, node.hidden)
        recorded = best.get(key)
        if recorded is not None and recorded < rho:
            continue
        if (key, rho) in expanded:
            continue
        best[key] = rho
        expanded.add((key, rho))

        expansions += 1
        if expansions > expansion_cap:
            stats.expansions += expansions
            raise CapExceeded(expansion_cap)

        if node.pos == n and D.is_final(n_d) and RG.is_final(n_rg):
            stats.expansions += expansions
            logger.debug("Aligned %d labels: ρ=%d after %d expansions", n, rho, expansions)
            return node.alignment()

        if node.pos < n:
            j = node.pos + 1
            lbl = rt[j - 1]
            comp = tr_c.get(j)
            for a_d in D.outgoing(n_d):
                if a_d.label != lbl:
                    continue
                # Complement bookkeeping for the log hide
                hidden = node.hidden
                if comp is not None and comp < j:
                    complement_hidden = comp in hidden
                    hidden = hidden - {comp}
                else:
                    complement_hidden = False
                lh_hidden = hidden | {j} if comp is not None and comp > j and p.get(j, 0) >= 1 else hidden
                cost = hide_cost(Op.LH, j, p, tr_c, complement_hidden)
                push(rho + cost, a_d.target, n_rg, _Node(Synchronization.log_hide(a_d), node, j, lh_hidden))

                for a_rg in RG.outgoing(n_rg):
                    if a_rg.label == lbl:
                        push(rho, a_d.target, a_rg.target, _Node(Synchronization.match(a_d, a_rg), node, j, hidden))

        rh_cost = hide_cost(Op.RH, node.pos, p, tr_c, False)
        for a_rg in RG.outgoing(n_rg):
            push(rho + rh_cost, n_d, a_rg.target, _Node(Synchronization.model_hide(a_rg), node, node.pos, node.hidden))

    stats.expansions += expansions
    raise NoPath(f"no alignment reaches a final state for a trace of length {n}")


def align_optimal(
    t: Iterable[str],
    D: Dafsa,
    RG: ReachabilityGraph,
    expansion_cap: int = DEFAULT_EXPANSION_CAP,
    stats: SearchStats | None = None,
) -> Alignment:
    """Standard-cost optimal alignment of an unreduced trace."""
    return align_dijkstra(ReducedTrace.of(t), D, RG, expansion_cap=expansion_cap, stats=stats)

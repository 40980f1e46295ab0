"""Binary search over the members of a reduced-trace group.

Members of a group share their reduced labels and are ordered by k_red; when the two borders of
an interval align to the same synchronizations, every member in between
takes that alignment without being searched.
"""
import logging
from collections import deque

from app.align.search import SearchStats, align_dijkstra
from app.align.synchronization import Alignment, same_synchronizations
from app.config import DEFAULT_EXPANSION_CAP
from app.log.parsers import Trace
from app.model.fsm import Dafsa, ReachabilityGraph
from app.tandem.reduction import ReducedTrace

logger = logging.getLogger(__name__)


def align_group(
    ids: list[int],
    reductions: dict[int, ReducedTrace],
    D: Dafsa,
    RG: ReachabilityGraph,
    expansion_cap: int = DEFAULT_EXPANSION_CAP,
    stats: SearchStats | None = None,
) -> dict[int, Alignment]:
    stats = stats if stats is not None else SearchStats()

    # Identical original traces share one member
    owners: dict[tuple, list[int]] = {}
    members: dict[tuple, ReducedTrace] = {}
    for tid in ids:
        reduced = reductions[tid]
        members.setdefault(reduced.signature, reduced)
        owners.setdefault(reduced.signature, []).append(tid)
    order = sorted(members, key=lambda sig: (members[sig].k_red, owners[sig][0]))

    memo: dict[int, Alignment] = {}
    assigned: dict[int, Alignment] = {}

    def aligned(idx: int) -> Alignment:
        if idx not in memo:
            memo[idx] = align_dijkstra(members[order[idx]], D, RG, expansion_cap=expansion_cap, stats=stats)
        return memo[idx]

    pairs: deque[tuple[int, int]] = deque([(0, len(order) - 1)])
    while pairs:
        lo, up = pairs.popleft()
        lower, upper = aligned(lo), aligned(up)
        if same_synchronizations(lower, upper):
            for idx in range(lo, up + 1):
                assigned.setdefault(idx, memo.get(idx, lower))
        else:
            pairs.append((lo, (lo + up) // 2))
            pairs.append(((lo + up + 1) // 2, up))

    logger.debug("Group of %d members aligned with %d searches", len(order), len(memo))
    return {tid: assigned[idx] for idx, sig in enumerate(order) for tid in owners[sig]}


def binary_search_align(
    groups: dict[Trace, list[int]],
    reductions: dict[int, ReducedTrace],
    D: Dafsa,
    RG: ReachabilityGraph,
    expansion_cap: int = DEFAULT_EXPANSION_CAP,
    stats: SearchStats | None = None,
) -> dict[int, Alignment]:
    """Alignment table: trace id -> reduced alignment, for every grouped trace."""
    table: dict[int, Alignment] = {}
    for ids in groups.values():
        table.update(align_group(ids, reductions, D, RG, expansion_cap=expansion_cap, stats=stats))
    return table

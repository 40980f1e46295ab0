"""Extension of reduced alignments back to alignments of the original trace.

Scanning right to left, every reduced repeat is found at the end of its
second kept copy; a middle copy is then spliced p times between the two
kept copies.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass

from app.align.synchronization import Alignment, Op, Synchronization, position_index, trace_positions
from app.errors import InconsistentComplement
from app.tandem.reduction import ReducedTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CopyRange:
    start: int  # first alignment index, 1-based
    end: int  # last alignment index, inclusive

    def __iter__(self):
        return iter(range(self.start, self.end + 1))

    def __len__(self) -> int:
        return self.end - self.start + 1


@dataclass
class ExtensionState:
    alignment: list[Synchronization]
    tr_c: dict[int, int]
    p: dict[int, int]
    i: int

    def sync(self, k: int) -> Synchronization:
        return self.alignment[k - 1]

    def complement_index(self, k: int) -> int | None:
        """TR_c(ε, k): alignment index of the complement of the label consumed at k."""
        pos = trace_positions(self.alignment)[k - 1]
        comp = self.tr_c.get(pos)
        if comp is None:
            return None
        return position_index(self.alignment).get(comp)


def copy_bounds(state: ExtensionState, i: int) -> tuple[CopyRange, CopyRange]:
    """Alignment ranges of the two kept copies whose second copy ends at i."""
    positions = trace_positions(state.alignment)
    index = position_index(state.alignment)
    last = positions[i - 1]
    comp = state.tr_c.get(last)
    if comp is None or comp >= last:
        raise InconsistentComplement(f"trace position {last} does not end a second copy")

    width = last - comp
    second_first = comp + 1
    first_first = state.tr_c.get(second_first)
    if first_first != second_first - width:
        raise InconsistentComplement(f"complement of position {second_first} is {first_first}")
    for x in range(first_first, first_first + width):
        if state.tr_c.get(x) != x + width or state.tr_c.get(x + width) != x:
            raise InconsistentComplement(f"complement map is not an involution at position {x}")

    second_start = index[second_first]
    return CopyRange(index[first_first], second_start - 1), CopyRange(second_start, i)


def find_repeatable(state: ExtensionState, first: CopyRange) -> int | None:
    """Leftmost index of the first copy matched in both copies."""
    for k in first:
        if state.sync(k).op is not Op.MT:
            continue
        comp = state.complement_index(k)
        if comp is not None and state.sync(comp).op is Op.MT:
            return k
    return None


def build_middle_copy(
    state: ExtensionState,
    j: int | None,
    bounds: tuple[CopyRange, CopyRange] | None = None,
) -> list[Synchronization]:
    first, second = bounds if bounds is not None else copy_bounds(state, state.i)
    if j is None:
        return [Synchronization.log_hide(s.dafsa_arc) for s in state.alignment[first.start - 1:first.end] if s.moves_log]
    comp = state.complement_index(j)
    # Second copy up to the repeatable match, then the first copy after it
    return state.alignment[second.start - 1:comp] + state.alignment[j:second.start - 1]


def extend_alignment(alignment: Sequence[Synchronization], T: ReducedTrace) -> Alignment:
    state = ExtensionState(alignment=list(alignment), tr_c=dict(T.tr_c), p=dict(T.p), i=len(alignment))
    while state.i >= 1:
        positions = trace_positions(state.alignment)
        pos = positions[state.i - 1]
        comp = state.tr_c.get(pos)
        if comp is None:
            state.i -= 1
            continue

        first, second = copy_bounds(state, state.i)
        j = find_repeatable(state, first)
        middle = build_middle_copy(state, j, (first, second))
        reps = state.p.get(pos, 0)
        state.alignment[second.start - 1:second.start - 1] = middle * reps

        width = pos - comp
        for x in range(pos - 2 * width + 1, pos + 1):
            state.tr_c.pop(x, None)
            state.p.pop(x, None)
        logger.debug("Spliced %d x %d synchronizations before index %d", reps, len(middle), second.start)
        state.i = first.start - 1

    return tuple(state.alignment)

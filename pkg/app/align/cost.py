"""Reduced alignment cost.

A hide at a trace position with p reduced repetitions costs 1 + p. A log
hide in the second kept copy whose complement in the first copy is also a
log hide costs 1.
"""
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from app.align.synchronization import Op, Synchronization, position_index, trace_positions


@dataclass(frozen=True)
class CostRow:
    index: int
    op: Op
    pos_t: int
    complement_pos: int | None  # TR_c(pos_t)
    complement_index: int | None  # TR_c(ε, i)
    p: int
    f: int


def hide_cost(op: Op, pos: int, p: Mapping[int, int], tr_c: Mapping[int, int], complement_hidden: bool) -> int:
    """f for a single synchronization at trace position pos."""
    if op is Op.MT:
        return 0
    reps = p.get(pos, 0)
    if op is Op.LH and reps >= 1:
        comp = tr_c.get(pos)
        if comp is not None and comp < pos and complement_hidden:
            return 1
    return 1 + reps


def reduced_cost_rows(alignment: Sequence[Synchronization], p: Mapping[int, int], tr_c: Mapping[int, int]) -> list[CostRow]:
    positions = trace_positions(alignment)
    index = position_index(alignment)
    rows: list[CostRow] = []
    for i, (sync, pos) in enumerate(zip(alignment, positions), start=1):
        comp_pos = comp_idx = None
        if sync.moves_log:
            comp_pos = tr_c.get(pos)
            comp_idx = index.get(comp_pos) if comp_pos is not None else None
        hidden = comp_idx is not None and alignment[comp_idx - 1].op is Op.LH
        rows.append(CostRow(
            index=i,
            op=sync.op,
            pos_t=pos,
            complement_pos=comp_pos,
            complement_index=comp_idx,
            p=p.get(pos, 0),
            f=hide_cost(sync.op, pos, p, tr_c, hidden),
        ))
    return rows


def reduced_cost(alignment: Sequence[Synchronization], p: Mapping[int, int], tr_c: Mapping[int, int]) -> int:
    """ρ(ε, p, TR_c)."""
    return sum(row.f for row in reduced_cost_rows(alignment, p, tr_c))

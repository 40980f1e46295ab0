"""Synchronizations, alignments and their position bookkeeping."""
import enum
from collections.abc import Sequence
from dataclasses import dataclass

from app.model.fsm import Arc


class Op(str, enum.Enum):
    MT = "MT"  # match: log and model move together
    LH = "LH"  # log hide: log moves alone
    RH = "RH"  # model hide: model moves alone


@dataclass(frozen=True)
class Synchronization:
    op: Op
    dafsa_arc: Arc | None
    rg_arc: Arc | None

    def __post_init__(self):
        if self.op is Op.MT:
            if self.dafsa_arc is None or self.rg_arc is None or self.dafsa_arc.label != self.rg_arc.label:
                raise ValueError("MT needs two arcs with equal labels")
        elif self.op is Op.LH:
            if self.dafsa_arc is None or self.rg_arc is not None:
                raise ValueError("LH carries a DAFSA arc only")
        elif self.dafsa_arc is not None or self.rg_arc is None:
            raise ValueError("RH carries a reachability-graph arc only")

    @classmethod
    def match(cls, dafsa_arc: Arc, rg_arc: Arc) -> "Synchronization":
        return cls(Op.MT, dafsa_arc, rg_arc)

    @classmethod
    def log_hide(cls, dafsa_arc: Arc) -> "Synchronization":
        return cls(Op.LH, dafsa_arc, None)

    @classmethod
    def model_hide(cls, rg_arc: Arc) -> "Synchronization":
        return cls(Op.RH, None, rg_arc)

    @property
    def label(self) -> str:
        arc = self.dafsa_arc if self.dafsa_arc is not None else self.rg_arc
        return arc.label

    @property
    def moves_log(self) -> bool:
        return self.op is not Op.RH

    def key(self) -> tuple:
        """What "the same synchronization" means when comparing alignments."""
        return self.op, self.label, self.rg_arc

    def __str__(self) -> str:
        return f"{self.op.value}({self.label})"


Alignment = tuple[Synchronization, ...]


def render(alignment: Sequence[Synchronization]) -> str:
    return ",".join(str(s) for s in alignment)


def same_synchronizations(a: Sequence[Synchronization], b: Sequence[Synchronization]) -> bool:
    return len(a) == len(b) and all(x.key() == y.key() for x, y in zip(a, b))


def dafsa_projection(alignment: Sequence[Synchronization]) -> list[Arc]:
    """ε|_D: the DAFSA arcs of the synchronizations that carry one."""
    return [s.dafsa_arc for s in alignment if s.dafsa_arc is not None]


def rg_projection(alignment: Sequence[Synchronization]) -> list[Arc]:
    """ε|_RG: the reachability-graph arcs of the synchronizations that carry one."""
    return [s.rg_arc for s in alignment if s.rg_arc is not None]


def trace_positions(alignment: Sequence[Synchronization]) -> list[int]:
    """pos_t for every index at once; element i-1 holds pos_t(ε, i)."""
    out: list[int] = []
    count = 0
    for s in alignment:
        if s.moves_log:
            count += 1
        out.append(count)
    return out


def pos_t(alignment: Sequence[Synchronization], i: int) -> int:
    """Number of log-moving synchronizations among the first i."""
    if not 1 <= i <= len(alignment):
        raise IndexError(f"alignment index {i} out of range 1..{len(alignment)}")
    return sum(1 for s in alignment[:i] if s.moves_log)


def pos_eps(alignment: Sequence[Synchronization], j: int) -> int:
    """Smallest alignment index i with pos_t(ε, i) = j."""
    count = 0
    for i, s in enumerate(alignment, start=1):
        if s.moves_log:
            count += 1
            if count == j:
                return i
    raise IndexError(f"trace position {j} is not covered by the alignment")


def position_index(alignment: Sequence[Synchronization]) -> dict[int, int]:
    """pos_eps for every covered trace position."""
    index: dict[int, int] = {}
    count = 0
    for i, s in enumerate(alignment, start=1):
        if s.moves_log:
            count += 1
            index[count] = i
    return index


def standard_cost(alignment: Sequence[Synchronization]) -> int:
    return sum(1 for s in alignment if s.op is not Op.MT)

"""Lossless trace reduction: every reducible tandem repeat keeps two copies."""
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field, replace

from app.errors import InconsistentReduction
from app.log.parsers import EventLog, Trace
from app.tandem.repeats import TandemRepeat, find_tandem_repeats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedTrace:
    """A reduced trace plus the bookkeeping needed to expand it again.

    p and tr_c are keyed by 1-based positions of rt. p only stores the
    positions inside reduced windows; every other position has 0 reduced
    repetitions (see p_at).
    """
    rt: Trace
    p: dict[int, int] = field(default_factory=dict, hash=False)
    k_red: int = 0
    tr_c: dict[int, int] = field(default_factory=dict, hash=False)
    pos: int = 1

    @classmethod
    def of(cls, trace: Iterable[str]) -> "ReducedTrace":
        return cls(rt=tuple(trace))

    def p_at(self, j: int) -> int:
        return self.p.get(j, 0)

    def complement(self, j: int) -> int | None:
        return self.tr_c.get(j)

    @property
    def signature(self) -> tuple:
        """Identity of the reduction; equal signatures expand to equal traces."""
        return self.rt, tuple(sorted(self.p.items())), tuple(sorted(self.tr_c.items()))

    def __len__(self) -> int:
        return len(self.rt)


def _pick(candidates: Iterable[TandemRepeat]) -> TandemRepeat | None:
    best = None
    for r in candidates:
        if best is None or (r.span, r.width) > (best.span, best.width):
            best = r
    return best


def reduce_step(T: ReducedTrace, repeats: Iterable[TandemRepeat] | None = None) -> ReducedTrace:
    """Collapse the largest repeat starting at T.pos to two copies.

    `repeats` are the candidates starting at T.pos in detection order; they
    are looked up on T.rt when omitted. Returns T itself when nothing is
    reduced, including the k = 2 case where collapsing would be a no-op.
    """
    i = T.pos
    if i > len(T.rt):
        return T
    if repeats is None:
        repeats = [r for r in find_tandem_repeats(T.rt) if r.start == i]
    best = _pick(repeats)
    if best is None or best.repetitions <= 2:
        return T

    width, k = best.width, best.repetitions
    removed = (k - 2) * width
    window_end = i + 2 * width - 1
    old_end = i + best.span - 1

    if any(i <= j <= old_end for j in T.p) or any(i <= j <= old_end for j in T.tr_c):
        raise InconsistentReduction(f"position {i} is already part of a reduced window")

    def shift(j: int) -> int:
        return j - removed if j > old_end else j

    p = {shift(j): c for j, c in T.p.items()}
    tr_c = {shift(j): shift(c) for j, c in T.tr_c.items()}
    for j in range(i, window_end + 1):
        p[j] = k - 2
    for j in range(i, i + width):
        tr_c[j] = j + width
        tr_c[j + width] = j

    rt = T.rt[:i - 1] + best.repeat_type * 2 + T.rt[old_end:]
    return ReducedTrace(rt=rt, p=p, k_red=T.k_red + removed, tr_c=tr_c, pos=i + 2 * width)


def reduce_trace(trace: Iterable[str]) -> ReducedTrace:
    T = ReducedTrace.of(trace)
    repeats = find_tandem_repeats(T.rt)
    while T.pos <= len(T.rt):
        step = reduce_step(T, [r for r in repeats if r.start == T.pos])
        if step is T:
            T = replace(T, pos=T.pos + 1)
        else:
            T = step
            repeats = find_tandem_repeats(T.rt)
    return T


def reduce_log(log: EventLog) -> tuple[list[Trace], dict[int, ReducedTrace]]:
    """Reduce every trace; identical traces share one ReducedTrace.

    Returns the distinct reduced label sequences (first-appearance order) and
    the map from trace id to its reduction.
    """
    reductions: dict[int, ReducedTrace] = {}
    distinct: dict[Trace, None] = {}
    for trace, ids in log.variants.items():
        reduced = reduce_trace(trace)
        distinct.setdefault(reduced.rt, None)
        for tid in ids:
            reductions[tid] = reduced

    logger.info(
        "Reduced %d traces (%d distinct) to %d distinct reduced traces",
        len(log), len(log.variants), len(distinct),
    )
    return list(distinct), reductions


def expand_trace(T: ReducedTrace) -> Trace:
    """Re-insert the removed copies of every reduced repeat."""
    out: list[str] = []
    covered: set[int] = set()
    n = len(T.rt)
    j = 1
    while j <= n:
        comp = T.tr_c.get(j)
        if comp is None:
            out.append(T.rt[j - 1])
            j += 1
            continue
        if comp < j:
            raise InconsistentReduction(f"position {j} is a second copy without a first copy")
        width = comp - j
        reps = T.p_at(j)
        if reps < 1 or j + 2 * width - 1 > n:
            raise InconsistentReduction(f"window at {j} has no valid repetition count")
        for x in range(j, j + width):
            if T.tr_c.get(x) != x + width or T.tr_c.get(x + width) != x:
                raise InconsistentReduction(f"complement map is not an involution at {x}")
            if T.p_at(x) != reps or T.p_at(x + width) != reps:
                raise InconsistentReduction(f"repetition count varies inside the window at {j}")
            if T.rt[x - 1] != T.rt[x + width - 1]:
                raise InconsistentReduction(f"copies differ at position {x}")
        copy = T.rt[j - 1:j - 1 + width]
        out.extend(copy * (reps + 2))
        covered.update(range(j, j + 2 * width))
        j += 2 * width

    stray = set(T.p) - covered
    if stray:
        raise InconsistentReduction(f"repetitions recorded outside reduced windows: {sorted(stray)}")
    if len(out) != n + T.k_red:
        raise InconsistentReduction(f"expanded length {len(out)} != {n} + {T.k_red}")
    return tuple(out)

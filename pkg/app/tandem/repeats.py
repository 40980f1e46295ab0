"""Maximal primitive tandem repeats of a trace."""
from dataclasses import dataclass

from app.log.parsers import Trace


@dataclass(frozen=True)
class TandemRepeat:
    start: int  # 1-based trace position s
    repeat_type: Trace  # α
    repetitions: int  # k >= 2

    @property
    def width(self) -> int:
        return len(self.repeat_type)

    @property
    def span(self) -> int:
        return self.width * self.repetitions

    @property
    def end(self) -> int:
        return self.start + self.span - 1

    def __str__(self) -> str:
        return f"({self.start}, {' '.join(self.repeat_type)}, {self.repetitions})"


def is_primitive(alpha: Trace) -> bool:
    """True when alpha is not a power u^m (m >= 2) of a shorter sequence."""
    n = len(alpha)
    for d in range(1, n // 2 + 1):
        if n % d == 0 and alpha == alpha[:d] * (n // d):
            return False
    return True


def _runs(t: Trace) -> list[TandemRepeat]:
    """Left-maximal periodic runs of length >= 2 periods, one repeat per run.

    A run starting at x with period L is the longest stretch where
    t[z] == t[z+L]; repeats shifted right inside the same run are rotations
    of the run's first repeat and are not reported.
    """
    n = len(t)
    found: list[TandemRepeat] = []
    for width in range(1, n // 2 + 1):
        x = 0
        while x + width < n:
            if t[x] != t[x + width]:
                x += 1
                continue
            y = x
            while y + width < n and t[y] == t[y + width]:
                y += 1
            length = y - x + width
            alpha = t[x:x + width]
            if length >= 2 * width and is_primitive(alpha):
                found.append(TandemRepeat(x + 1, alpha, length // width))
            x = y
    return found


def find_tandem_repeats(t: Trace) -> list[TandemRepeat]:
    """Maximal primitive tandem repeats, leftmost first.

    A repeat lying entirely inside the first copy of an enclosing repeat is
    reported through the enclosing repeat only, whatever its own k. The
    result is therefore a subset of all maximal primitive repeats: for
    AAABAAAB it holds (1, AAAB, 2) and (5, A, 3) but not (1, A, 3).
    Reductions are unaffected since the enclosing repeat outranks the
    nested one at its start position.
    """
    runs = _runs(tuple(t))
    kept = [
        r for r in runs
        if not any(
            q is not r and q.start <= r.start and r.end <= q.start + q.width - 1
            for q in runs
        )
    ]
    return sorted(kept, key=lambda r: (r.start, r.width))


def repeats_starting_at(t: Trace, i: int) -> frozenset[TandemRepeat]:
    """TR(t, i): the reported repeats whose first copy starts exactly at i."""
    return frozenset(r for r in find_tandem_repeats(t) if r.start == i)

"""Log-level statistics about traces, tandem repeats and reductions."""
from pydantic import BaseModel

from app.log.parsers import EventLog
from app.tandem.reduction import ReducedTrace
from app.tandem.repeats import find_tandem_repeats


class LogStatistics(BaseModel):
    events: int
    distinct_labels: int
    traces: int
    distinct_traces: int
    avg_trace_length: float
    max_trace_length: int
    avg_repeats_per_trace: float | None = None  # nested repeats count through their enclosing repeat
    avg_repetitions: float | None = None
    avg_repeat_type_length: float | None = None
    distinct_reduced_traces: int | None = None
    avg_reduced_length: float | None = None
    max_reduced_length: int | None = None


def _mean(values: list[float]) -> float:
    return round(sum(values) / len(values), 4) if values else 0.0


def log_statistics(log: EventLog, reductions: dict[int, ReducedTrace] | None = None) -> LogStatistics:
    """Counts over all traces; repeat and reduction figures only when reductions are given."""
    lengths = [len(t) for t in log.traces.values()]
    stats = LogStatistics(
        events=log.event_count,
        distinct_labels=len(log.alphabet),
        traces=len(log),
        distinct_traces=len(log.variants),
        avg_trace_length=_mean(lengths),
        max_trace_length=max(lengths, default=0),
    )
    if reductions is None:
        return stats

    # Repeats are detected once per distinct trace and weighted by multiplicity
    per_trace: list[int] = []
    reps: list[int] = []
    widths: list[int] = []
    for trace, ids in log.variants.items():
        found = find_tandem_repeats(trace)
        per_trace.extend([len(found)] * len(ids))
        for r in found:
            reps.extend([r.repetitions] * len(ids))
            widths.extend([r.width] * len(ids))

    reduced_lengths = [len(reductions[tid].rt) for tid in log.traces]
    stats.avg_repeats_per_trace = _mean(per_trace)
    stats.avg_repetitions = _mean(reps)
    stats.avg_repeat_type_length = _mean(widths)
    stats.distinct_reduced_traces = len({reductions[tid].rt for tid in log.traces})
    stats.avg_reduced_length = _mean(reduced_lengths)
    stats.max_reduced_length = max(reduced_lengths, default=0)
    return stats

"""Conformance report model and its JSON / CSV / text renderings."""
import csv
import enum
from typing import TextIO

from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel

from app.tandem.statistics import LogStatistics


class OutputFormat(str, enum.Enum):
    json = "json"
    csv = "csv"
    text = "text"


class TraceResult(BaseModel):
    """Result for one distinct original trace."""
    trace_ids: list[int]
    original_length: int
    reduced_length: int
    k_red: int
    cost: int
    fitness: float
    reduced_cost: int | None = None
    verified: bool | None = None
    alignment: str | None = None

    @property
    def multiplicity(self) -> int:
        return len(self.trace_ids)


class SearchSummary(BaseModel):
    calls: int = 0
    expansions: int = 0


class ConformanceReport(BaseModel):
    approach_requested: str
    approach_used: str
    traces: int
    distinct_traces: int
    distinct_reduced_traces: int
    total_cost: int
    average_cost: float
    average_fitness: float
    average_reduction: float
    shortest_model_path: int
    search: SearchSummary
    statistics: LogStatistics
    timings_ms: dict[str, float] | None = None
    results: list[TraceResult]


def summarize(results: list[TraceResult]) -> dict:
    """Multiplicity-weighted aggregates over per-trace rows."""
    traces = sum(r.multiplicity for r in results)
    total = sum(r.cost * r.multiplicity for r in results)
    if not traces:
        return {"traces": 0, "total_cost": 0, "average_cost": 0.0, "average_fitness": 0.0, "average_reduction": 0.0}
    return {
        "traces": traces,
        "total_cost": total,
        "average_cost": round(total / traces, 6),
        "average_fitness": round(sum(r.fitness * r.multiplicity for r in results) / traces, 6),
        "average_reduction": round(sum(r.k_red * r.multiplicity for r in results) / traces, 6),
    }


_CSV_COLUMNS = ["row", "trace_ids", "original_length", "reduced_length", "k_red", "cost", "fitness", "alignment"]

_env = Environment(
    loader=PackageLoader("app.pipeline", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def render_text(report: ConformanceReport) -> str:
    return _env.get_template("report.txt.j2").render(report=report)


def emit_report(report: ConformanceReport, fmt: OutputFormat | str, sink: TextIO):
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.json:
        sink.write(report.model_dump_json(indent=2, exclude_none=True))
        sink.write("\n")
    elif fmt is OutputFormat.csv:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for r in report.results:
            writer.writerow([
                "trace", " ".join(str(t) for t in r.trace_ids), r.original_length, r.reduced_length,
                r.k_red, r.cost, r.fitness, r.alignment or "",
            ])
        writer.writerow([
            "summary", report.traces, "", "", report.average_reduction,
            report.total_cost, report.average_fitness, "",
        ])
    else:
        sink.write(render_text(report))

"""Event-log model and the XES / plain-text readers."""
import gzip
import logging
import xml.etree.ElementTree as ET
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import IO

from app.errors import EmptyLabel, MalformedXml, MissingConceptName

logger = logging.getLogger(__name__)

# A trace is a non-empty label sequence; positions handed to other modules are 1-based
Trace = tuple[str, ...]

CONCEPT_NAME = "concept:name"


@dataclass(frozen=True)
class EventLog:
    traces: dict[int, Trace]  # trace id (1-based, document order) -> labels
    case_names: dict[int, str] = field(default_factory=dict)
    dropped_empty: int = 0

    def __len__(self) -> int:
        return len(self.traces)

    @cached_property
    def variants(self) -> dict[Trace, list[int]]:
        """Distinct traces in first-appearance order with the ids carrying them."""
        groups: dict[Trace, list[int]] = {}
        for tid, trace in self.traces.items():
            groups.setdefault(trace, []).append(tid)
        return groups

    @property
    def distinct(self) -> dict[Trace, int]:
        return {trace: len(ids) for trace, ids in self.variants.items()}

    @property
    def event_count(self) -> int:
        return sum(len(t) for t in self.traces.values())

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(lbl for t in self.traces.values() for lbl in t)


def event_log(traces: Iterable[Iterable[str]]) -> EventLog:
    """Build a log from plain label sequences (ids assigned from 1)."""
    return EventLog(traces={n: tuple(t) for n, t in enumerate(traces, start=1)})


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _concept_name(elem: ET.Element) -> str | None:
    for attr in elem:
        if _local(attr.tag) == "string" and attr.attrib.get("key") == CONCEPT_NAME:
            return attr.attrib.get("value")
    return None


def parse_xes(stream: str | Path | IO) -> EventLog:
    """Read <trace>/<event> elements; lifecycle and other extensions are ignored."""
    try:
        root = ET.parse(stream).getroot()
    except ET.ParseError as exc:
        raise MalformedXml(getattr(exc, "position", None), str(exc)) from exc

    traces: dict[int, Trace] = {}
    names: dict[int, str] = {}
    dropped = 0
    for trace_index, trace_elem in enumerate((e for e in root.iter() if _local(e.tag) == "trace"), start=1):
        labels: list[str] = []
        for event_index, event in enumerate((e for e in trace_elem if _local(e.tag) == "event"), start=1):
            name = _concept_name(event)
            if name is None:
                raise MissingConceptName(trace_index, event_index)
            labels.append(name)
        if not labels:
            dropped += 1
            continue
        tid = len(traces) + 1
        traces[tid] = tuple(labels)
        case = _concept_name(trace_elem)
        if case is not None:
            names[tid] = case

    if dropped:
        logger.warning("Dropped %d traces without events", dropped)
    logger.info("Parsed XES log: %d traces", len(traces))
    return EventLog(traces=traces, case_names=names, dropped_empty=dropped)


def parse_text_log(stream: Iterable[str]) -> EventLog:
    """One trace per non-empty line, labels separated by commas."""
    traces: list[Trace] = []
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        labels = [part.strip() for part in line.rstrip("\r\n").split(",")]
        for column, lbl in enumerate(labels, start=1):
            if not lbl:
                raise EmptyLabel(line_no, column)
        traces.append(tuple(labels))
    logger.info("Parsed text log: %d traces", len(traces))
    return event_log(traces)


def load_log(path: str | Path) -> EventLog:
    """Pick the reader from the file extension (.xes, .xes.gz, .txt, .csv)."""
    path = Path(path)
    name = path.name.lower()
    if name.endswith(".xes.gz"):
        with gzip.open(path, "rb") as fh:
            return parse_xes(fh)
    if name.endswith(".xes"):
        return parse_xes(path)
    if name.endswith((".txt", ".csv")):
        with open(path, encoding="utf-8") as fh:
            return parse_text_log(fh)
    raise ValueError(f"unsupported log format: {path.name}")

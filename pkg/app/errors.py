"""Exception hierarchy shared by every pipeline phase."""


class ConformanceError(Exception):
    """Base class for all conformance-checking failures."""


class InvalidWorkflowNet(ConformanceError):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations))


class NotEnabled(ConformanceError):
    def __init__(self, transition: str):
        self.transition = transition
        super().__init__(f"transition {transition!r} is not enabled")


class BoundViolation(ConformanceError):
    def __init__(self, place: str):
        self.place = place
        super().__init__(f"place {place!r} would hold a second token")


class StateSpaceCap(ConformanceError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"reachability graph exceeds {cap} nodes and arcs")


class MalformedXml(ConformanceError):
    def __init__(self, position: tuple[int, int] | None, detail: str = ""):
        self.position = position
        where = f"line {position[0]}, column {position[1]}" if position else "unknown position"
        super().__init__(f"malformed XML at {where}" + (f": {detail}" if detail else ""))


class MissingConceptName(ConformanceError):
    def __init__(self, trace_index: int, event_index: int):
        self.trace_index = trace_index
        self.event_index = event_index
        super().__init__(f"event {event_index} of trace {trace_index} has no concept:name")


class EmptyLabel(ConformanceError):
    def __init__(self, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"empty label at line {line}, label {column}")


class InconsistentReduction(ConformanceError):
    pass


class InconsistentComplement(ConformanceError):
    pass


class NoPath(ConformanceError):
    pass


class CapExceeded(ConformanceError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"alignment search exceeded {cap} expansions")


class ConcurrentModelUnsupported(ConformanceError):
    def __init__(self, transition: str):
        self.transition = transition
        super().__init__(f"model contains concurrency at transition {transition!r}")


class ImproperAlignment(ConformanceError):
    pass


class PipelineError(ConformanceError):
    """A failure tagged with the pipeline phase it happened in."""

    def __init__(self, phase: str, cause: Exception):
        self.phase = phase
        self.cause = cause
        super().__init__(f"[{phase}] {cause}")

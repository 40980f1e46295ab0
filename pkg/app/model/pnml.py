"""PNML reader for the place/transition subset used by process-mining exporters."""
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from app.errors import InvalidWorkflowNet, MalformedXml
from app.model.petri import TAU, NotWorkflow, PetriNet, ValidationReport, WorkflowNet, validate_workflow_net

logger = logging.getLogger(__name__)


def _local(tag: str) -> str:
    """Strip the XML namespace: '{http://www.pnml.org/...}place' -> 'place'."""
    return tag.rsplit("}", 1)[-1]


def _child(elem: ET.Element, name: str) -> ET.Element | None:
    for c in elem:
        if _local(c.tag) == name:
            return c
    return None


def _text(elem: ET.Element | None) -> str:
    """Text of a PNML <x><text>..</text></x> annotation."""
    if elem is None:
        return ""
    node = _child(elem, "text")
    return (node.text or "").strip() if node is not None else ""


def _is_invisible(transition: ET.Element) -> bool:
    for c in transition:
        if _local(c.tag) == "toolspecific":
            if any("invisible" in v.lower() for v in c.attrib.values()):
                return True
    return False


def _tokens(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        return 0


@dataclass
class PnmlModel:
    net: PetriNet
    initial_place: str | None
    final_place: str | None


def parse_pnml(source: str | Path | IO) -> PnmlModel:
    try:
        root = ET.parse(source).getroot()
    except ET.ParseError as exc:
        raise MalformedXml(getattr(exc, "position", None), str(exc)) from exc

    net_elem = next((e for e in root.iter() if _local(e.tag) == "net"), root)

    places: list[str] = []
    marked: list[str] = []
    labels: dict[str, str] = {}
    flow: list[tuple[str, str]] = []
    final_marked: list[str] = []

    for elem in net_elem.iter():
        kind = _local(elem.tag)
        if kind == "place" and "id" in elem.attrib:
            pid = elem.attrib["id"]
            places.append(pid)
            if _tokens(_text(_child(elem, "initialMarking"))) > 0:
                marked.append(pid)
        elif kind == "transition" and "id" in elem.attrib:
            name = _text(_child(elem, "name"))
            labels[elem.attrib["id"]] = TAU if not name or _is_invisible(elem) else name
        elif kind == "arc":
            flow.append((elem.attrib["source"], elem.attrib["target"]))
        elif kind == "finalmarkings":
            for place in elem.iter():
                if _local(place.tag) == "place" and _tokens(_text(place)) > 0:
                    final_marked.append(place.attrib.get("idref", ""))

    try:
        net = PetriNet(
            places=frozenset(places),
            transitions=frozenset(labels),
            flow=frozenset(flow),
            labels=labels,
        )
    except ValueError as exc:
        raise InvalidWorkflowNet(ValidationReport([NotWorkflow(str(exc))])) from exc

    if len(marked) == 1:
        initial = marked[0]
    else:
        sources = [p for p in sorted(net.places) if not net.preset(p)]
        initial = sources[0] if len(sources) == 1 else None
    if len(final_marked) == 1:
        final = final_marked[0]
    else:
        sinks = [p for p in sorted(net.places) if not net.postset(p)]
        final = sinks[0] if len(sinks) == 1 else None

    logger.info("Parsed PNML: %d places, %d transitions, %d arcs", len(places), len(labels), len(flow))
    return PnmlModel(net=net, initial_place=initial, final_place=final)


def load_pnml(source: str | Path | IO) -> WorkflowNet:
    """Parse and validate a PNML workflow net; raise InvalidWorkflowNet on failure."""
    model = parse_pnml(source)
    if model.initial_place is None or model.final_place is None:
        missing = "initial" if model.initial_place is None else "final"
        raise InvalidWorkflowNet(ValidationReport([NotWorkflow(f"no unique {missing} place")]))
    result = validate_workflow_net(model.net, model.initial_place, model.final_place)
    if isinstance(result, ValidationReport):
        raise InvalidWorkflowNet(result)
    return result

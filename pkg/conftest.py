"""Shared fixtures: the running-example net and log, plus net builders for tests."""
import os
import random
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

# Keep the service database away from the working tree during tests
os.environ.setdefault("DATA_DIR", tempfile.mkdtemp(prefix="conformance-test-"))

import pytest  # noqa: E402

from app.model.petri import TAU, PetriNet, WorkflowNet, validate_workflow_net  # noqa: E402
from app.model.reachability import build_reachability_graph  # noqa: E402


def make_net(arcs: dict[str, tuple[str, str, str]], i: str = "i", o: str = "o") -> WorkflowNet:
    """Build a state-machine workflow net from {transition id: (label, input place, output place)}."""
    places = {i, o}
    flow = set()
    labels = {}
    for t, (label, pre, post) in arcs.items():
        places.update((pre, post))
        flow.add((pre, t))
        flow.add((t, post))
        labels[t] = label
    net = PetriNet(frozenset(places), frozenset(arcs), frozenset(flow), labels)
    result = validate_workflow_net(net, i, o)
    assert isinstance(result, WorkflowNet), result
    return result


# Running example: the BDEF loop with a silent exit after D
RUNNING_NET_ARCS = {
    "A": ("A", "i", "p1"),
    "B": ("B", "p1", "p2"),
    "C": ("C", "p2", "o"),
    "D": ("D", "p2", "p3"),
    "E": ("E", "p3", "p4"),
    "F": ("F", "p4", "p1"),
    "tau": (TAU, "p3", "o"),
}

RUNNING_LOG = [
    tuple("ABCCCC"),
    tuple("ABDEEFBDEEFBDEEFBC"),
    ("A",) + tuple("BDF") * 3 + ("B", "D"),
    ("A",) + tuple("BDF") * 4 + ("B", "D"),
    ("A",) + tuple("BDF") * 5 + ("B", "D"),
]

# Optional skip path, otherwise four model-only steps before a self-looping X
DETOUR_NET_ARCS = {
    "S": ("S", "i", "p1"),
    "skip": (TAU, "p1", "p6"),
    "W1": ("W1", "p1", "q1"),
    "W2": ("W2", "q1", "q2"),
    "W3": ("W3", "q2", "q3"),
    "W4": ("W4", "q3", "p5"),
    "X": ("X", "p5", "p5"),
    "leave": (TAU, "p5", "p6"),
    "E": ("E", "p6", "o"),
}

# R loops before a single C: traces repeating "C R" cross the model order
REVERSED_LOOP_ARCS = {
    "S": ("S", "i", "p1"),
    "R": ("R", "p1", "p1"),
    "C": ("C", "p1", "p2"),
    "E": ("E", "p2", "o"),
}

# (A B C)+ through silent loop-back and exit
ABC_LOOP_ARCS = {
    "enter": (TAU, "i", "q"),
    "A": ("A", "q", "p1"),
    "B": ("B", "p1", "p2"),
    "C": ("C", "p2", "p3"),
    "back": (TAU, "p3", "q"),
    "exit": (TAU, "p3", "o"),
}


def write_pnml(net: WorkflowNet, path: Path, namespace: str = "http://www.pnml.org/version-2009/grammar/pnml") -> Path:
    ns = f"{{{namespace}}}" if namespace else ""
    root = ET.Element(f"{ns}pnml")
    net_elem = ET.SubElement(root, f"{ns}net", id="net1", type="http://www.pnml.org/version-2009/grammar/ptnet")
    page = ET.SubElement(net_elem, f"{ns}page", id="page1")
    for p in sorted(net.places):
        place = ET.SubElement(page, f"{ns}place", id=p)
        if p == net.initial_place:
            marking = ET.SubElement(place, f"{ns}initialMarking")
            ET.SubElement(marking, f"{ns}text").text = "1"
    for t in sorted(net.transitions):
        trans = ET.SubElement(page, f"{ns}transition", id=t)
        if net.label(t) != TAU:
            name = ET.SubElement(trans, f"{ns}name")
            ET.SubElement(name, f"{ns}text").text = net.label(t)
        else:
            ET.SubElement(trans, f"{ns}toolspecific", tool="ProM", version="6.4", activity="$invisible$")
    for n, (src, tgt) in enumerate(sorted(net.net.flow)):
        ET.SubElement(page, f"{ns}arc", id=f"a{n}", source=src, target=tgt)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    return path


def write_text_log(traces, path: Path) -> Path:
    path.write_text("\n".join(",".join(t) for t in traces) + "\n", encoding="utf-8")
    return path


def random_workflow_net(rng: random.Random, max_places: int = 8) -> WorkflowNet:
    """Random concurrency-free workflow net: a spine from i to o plus random extra transitions.

    Every transition has one input and one output place and its own label;
    a few transitions are silent.
    """
    inner = [f"p{k}" for k in range(rng.randint(1, max_places - 2))]
    spine = ["i"] + inner + ["o"]
    arcs: dict[str, tuple[str, str, str]] = {}
    names = iter("ABCDEFGHJKLMNPQRSTUVWXYZ")
    for src, tgt in zip(spine, spine[1:]):
        lbl = next(names)
        arcs[lbl] = (lbl, src, tgt)
    for _ in range(rng.randint(0, 5)):
        src = rng.choice(spine[:-1])
        tgt = rng.choice(spine[1:])
        lbl = next(names, None)
        if lbl is None:
            break
        if rng.random() < 0.15 and src != tgt:
            arcs[f"t_{lbl}"] = (TAU, src, tgt)
        else:
            arcs[lbl] = (lbl, src, tgt)
    return make_net(arcs)


def random_run(rng: random.Random, rg, max_len: int) -> tuple[str, ...]:
    """Labels of a random walk through rg, stopping at a final node when possible."""
    node = rg.source
    labels: list[str] = []
    while len(labels) < max_len:
        out = rg.outgoing(node)
        if not out or (rg.is_final(node) and rng.random() < 0.3):
            break
        arc = rng.choice(out)
        labels.append(arc.label)
        node = arc.target
    return tuple(labels)


def noisy_trace(rng: random.Random, rg, alphabet: list[str], max_len: int = 12) -> tuple[str, ...]:
    """A model run with an injected tandem repeat and some label noise, at most max_len long."""
    base = list(random_run(rng, rg, max_len // 2))
    if base:
        start = rng.randrange(len(base))
        width = rng.randint(1, min(3, len(base) - start))
        segment = base[start:start + width]
        base[start:start + width] = segment * rng.randint(2, 4)
    for _ in range(rng.randint(0, 2)):
        if base and rng.random() < 0.5:
            del base[rng.randrange(len(base))]
        else:
            base.insert(rng.randint(0, len(base)), rng.choice(alphabet))
    trace = tuple(base[:max_len])
    return trace or (rng.choice(alphabet),)


@pytest.fixture
def running_net() -> WorkflowNet:
    return make_net(RUNNING_NET_ARCS)


@pytest.fixture
def running_rg(running_net):
    return build_reachability_graph(running_net)


@pytest.fixture
def running_log():
    from app.log.parsers import event_log
    return event_log(RUNNING_LOG)


@pytest.fixture
def running_files(tmp_path, running_net):
    """PNML model and text log of the running example on disk."""
    return write_pnml(running_net, tmp_path / "running.pnml"), write_text_log(RUNNING_LOG, tmp_path / "running.txt")

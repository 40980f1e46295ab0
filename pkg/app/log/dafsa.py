"""Minimal DAFSA construction over a set of distinct traces.

Incremental construction over lexicographically sorted words: after each
insertion the part of the previous word that is no longer shared is
minimised against a register of equivalent states, so common suffixes end
up sharing nodes.
"""
import logging
from collections import deque
from collections.abc import Iterable

from app.log.parsers import Trace
from app.model.fsm import Arc, Dafsa

logger = logging.getLogger(__name__)


class _State:
    __slots__ = ("uid", "edges", "final")

    def __init__(self, uid: int):
        self.uid = uid
        self.edges: dict[str, "_State"] = {}
        self.final = False

    def signature(self) -> tuple:
        return self.final, tuple((lbl, child.uid) for lbl, child in sorted(self.edges.items()))


class _Builder:
    def __init__(self):
        self._next_uid = 0
        self.root = self._new_state()
        self._register: dict[tuple, _State] = {}
        self._unchecked: list[tuple[_State, str, _State]] = []
        self._previous: Trace = ()

    def _new_state(self) -> _State:
        state = _State(self._next_uid)
        self._next_uid += 1
        return state

    def insert(self, word: Trace):
        if word <= self._previous and self._previous:
            raise ValueError("words must be inserted in strictly increasing order")
        common = 0
        for a, b in zip(word, self._previous):
            if a != b:
                break
            common += 1

        self._minimise(common)

        node = self._unchecked[-1][2] if self._unchecked else self.root
        for lbl in word[common:]:
            child = self._new_state()
            node.edges[lbl] = child
            self._unchecked.append((node, lbl, child))
            node = child
        node.final = True
        self._previous = word

    def _minimise(self, down_to: int):
        while len(self._unchecked) > down_to:
            parent, lbl, child = self._unchecked.pop()
            key = child.signature()
            if key in self._register:
                parent.edges[lbl] = self._register[key]
            else:
                self._register[key] = child

    def finish(self) -> _State:
        self._minimise(0)
        return self.root


def build_dafsa(traces: Iterable[Trace]) -> Dafsa:
    words = sorted(set(traces))
    if not words:
        raise ValueError("cannot build a DAFSA from an empty trace set")

    builder = _Builder()
    for word in words:
        builder.insert(word)
    root = builder.finish()

    # Number nodes breadth-first, following labels in sorted order
    ids: dict[int, int] = {root.uid: 0}
    queue: deque[_State] = deque([root])
    arcs: list[Arc] = []
    finals: list[int] = []
    while queue:
        state = queue.popleft()
        if state.final:
            finals.append(ids[state.uid])
        for lbl, child in sorted(state.edges.items()):
            if child.uid not in ids:
                ids[child.uid] = len(ids)
                queue.append(child)
            arcs.append(Arc(ids[state.uid], lbl, ids[child.uid]))

    dafsa = Dafsa(range(len(ids)), arcs, 0, finals)
    logger.info("DAFSA: %d traces -> %d nodes, %d arcs", len(words), len(ids), len(arcs))
    return dafsa

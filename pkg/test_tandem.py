"""Tandem repeat detection, maximal reduction, expansion and log statistics."""
import random
from dataclasses import replace

import pytest

from app.errors import InconsistentReduction
from app.log.parsers import event_log
from app.tandem.reduction import ReducedTrace, expand_trace, reduce_log, reduce_step, reduce_trace
from app.tandem.repeats import TandemRepeat, find_tandem_repeats, is_primitive, repeats_starting_at
from app.tandem.statistics import log_statistics
from conftest import RUNNING_LOG


def _found(trace):
    return [(r.start, "".join(r.repeat_type), r.repetitions) for r in find_tandem_repeats(trace)]


def _pairs(first: range, width: int) -> dict[int, int]:
    out = {}
    for j in first:
        out[j] = j + width
        out[j + width] = j
    return out


def test_running_log_repeats():
    assert [_found(t) for t in RUNNING_LOG] == [
        [(3, "C", 4)],
        [(2, "BDEEF", 3), (9, "E", 2), (14, "E", 2)],
        [(2, "BDF", 3)],
        [(2, "BDF", 4)],
        [(2, "BDF", 5)],
    ]


def test_no_repeats():
    assert find_tandem_repeats(tuple("ABCD")) == []
    assert find_tandem_repeats(("A",)) == []


def test_rotations_are_not_reported():
    # CDCDC holds (1,CD,2) and its rotation (2,DC,2)
    assert _found(tuple("CDCDC")) == [(1, "CD", 2)]


def test_nested_repeats_report_through_enclosing_repeat():
    assert _found(tuple("AAABAAAB")) == [(1, "AAAB", 2), (5, "A", 3)]
    T = reduce_trace(tuple("AAABAAAB"))
    assert T.rt == tuple("AAABAAB")
    assert T.k_red == 1
    assert T.p == {5: 1, 6: 1}


def test_non_primitive_types_are_not_reported():
    assert _found(tuple("AAAA")) == [(1, "A", 4)]
    assert not is_primitive(tuple("ABAB"))
    assert is_primitive(tuple("ABA"))


def test_repeats_starting_at():
    trace2 = RUNNING_LOG[1]
    assert repeats_starting_at(trace2, 2) == {TandemRepeat(2, tuple("BDEEF"), 3)}
    assert repeats_starting_at(RUNNING_LOG[2], 2) == {TandemRepeat(2, tuple("BDF"), 3)}
    assert repeats_starting_at(trace2, 1) == frozenset()


def test_repeat_geometry():
    r = TandemRepeat(2, tuple("BDF"), 3)
    assert (r.width, r.span, r.end) == (3, 9, 10)
    assert str(r) == "(2, B D F, 3)"


def test_reduce_step_trace_one():
    T = replace(ReducedTrace.of(RUNNING_LOG[0]), pos=3)
    out = reduce_step(T)
    assert out.rt == tuple("ABCC")
    assert out.p == {3: 2, 4: 2}
    assert out.k_red == 2
    assert out.tr_c == {3: 4, 4: 3}
    assert out.pos == 5


def test_reduce_step_trace_three():
    T = replace(ReducedTrace.of(RUNNING_LOG[2]), pos=2)
    out = reduce_step(T)
    assert out.rt == ("A",) + tuple("BDF") * 2 + ("B", "D")
    assert out.p == {j: 1 for j in range(2, 8)}
    assert out.k_red == 3
    assert out.tr_c == {2: 5, 3: 6, 4: 7, 5: 2, 6: 3, 7: 4}
    assert out.pos == 8


def test_reduce_step_without_repeat_is_identity():
    T = ReducedTrace.of(RUNNING_LOG[0])
    assert reduce_step(T) is T
    T = ReducedTrace.of(tuple("ABAB"))
    assert reduce_step(T) is T


def test_reduce_step_picks_largest_span():
    candidates = [TandemRepeat(1, ("A",), 3), TandemRepeat(1, ("A", "B"), 3)]
    T = ReducedTrace.of(tuple("ABABAB"))
    out = reduce_step(T, candidates)
    assert out.rt == tuple("ABAB")
    assert out.k_red == 2
    assert out.pos == 5


def test_reduce_step_rejects_overlap():
    T = ReducedTrace(rt=tuple("AAAA"), p={1: 1}, k_red=1, tr_c={}, pos=1)
    with pytest.raises(InconsistentReduction):
        reduce_step(T)


def test_reduce_log_matches_reduced_table(running_log):
    distinct, reductions = reduce_log(running_log)
    assert len(distinct) == 3
    assert [reductions[t].k_red for t in range(1, 6)] == [2, 5, 3, 6, 9]

    one, two, three, four, five = (reductions[t] for t in range(1, 6))
    assert one.rt == tuple("ABCC")
    assert one.tr_c == {3: 4, 4: 3}

    assert two.rt == ("A",) + tuple("BDEEF") * 2 + ("B", "C")
    assert two.p == {j: 1 for j in range(2, 12)}
    # copies occupy 2-6 and 7-11
    assert two.tr_c == _pairs(range(2, 7), 5)

    reduced = ("A",) + tuple("BDF") * 2 + ("B", "D")
    for T, reps in ((three, 1), (four, 2), (five, 3)):
        assert T.rt == reduced
        assert T.p == {j: reps for j in range(2, 8)}
        assert T.tr_c == _pairs(range(2, 5), 3)


def test_reduce_long_repetition():
    T = reduce_trace(tuple("ABC") * 10)
    assert T.rt == tuple("ABCABC")
    assert T.k_red == 24
    assert T.p == {j: 8 for j in range(1, 7)}


def test_reduce_several_windows():
    T = reduce_trace(tuple("XAAAYBBBBZ"))
    assert T.rt == tuple("XAAYBBZ")
    assert T.p == {2: 1, 3: 1, 5: 2, 6: 2}
    assert T.tr_c == {2: 3, 3: 2, 5: 6, 6: 5}
    assert expand_trace(T) == tuple("XAAAYBBBBZ")


def test_reduce_log_shares_identical_traces():
    log = event_log([tuple("ACCC"), tuple("ACCC")])
    _, reductions = reduce_log(log)
    assert reductions[1] is reductions[2]


def test_expand_running_log():
    for trace in RUNNING_LOG:
        assert expand_trace(reduce_trace(trace)) == trace


def test_expand_identity_on_random_traces():
    rng = random.Random(11)
    for _ in range(1000):
        trace = tuple(rng.choice("ABC") for _ in range(rng.randint(1, 40)))
        reduced = reduce_trace(trace)
        assert expand_trace(reduced) == trace
        assert len(reduced.rt) + reduced.k_red == len(trace)


def test_expand_detects_broken_complement():
    T = reduce_trace(RUNNING_LOG[2])
    broken = replace(T, tr_c={**T.tr_c, 3: 7})
    with pytest.raises(InconsistentReduction):
        expand_trace(broken)


def test_expand_detects_stray_repetitions():
    T = reduce_trace(RUNNING_LOG[0])
    with pytest.raises(InconsistentReduction):
        expand_trace(replace(T, p={**T.p, 1: 1}))


def test_signature_separates_repetition_counts(running_log):
    _, reductions = reduce_log(running_log)
    assert reductions[3].rt == reductions[4].rt
    assert reductions[3].signature != reductions[4].signature


def test_log_statistics(running_log):
    _, reductions = reduce_log(running_log)
    stats = log_statistics(running_log, reductions)
    assert stats.events == 69
    assert stats.distinct_labels == 6
    assert stats.traces == stats.distinct_traces == 5
    assert stats.avg_trace_length == 13.8
    assert stats.max_trace_length == 18
    assert stats.avg_repeats_per_trace == 1.4
    assert stats.avg_repetitions == round(23 / 7, 4)
    assert stats.avg_repeat_type_length == round(17 / 7, 4)
    assert stats.distinct_reduced_traces == 3
    assert stats.avg_reduced_length == 8.8
    assert stats.max_reduced_length == 13


def test_log_statistics_without_reductions(running_log):
    stats = log_statistics(running_log)
    assert stats.avg_repeats_per_trace is None
    assert stats.distinct_reduced_traces is None

import io
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from dgmatch.graph import new_graph, random_corpus
from dgmatch.node import NodeState
from dgmatch.reference import is_valid_matching, sequential_greedy
from dgmatch.sim import (
    POLICIES,
    AsymmetricPartnersError,
    Scheduler,
    Trace,
    TraceMismatchError,
    all_passed,
    check_trace,
    extract_matching,
    simulate,
)

from conftest import graphs

SCHEDULERS = [Scheduler(p, s) for p in POLICIES for s in (0, 1, 2)]


def verdicts_by_name(g, trace):
    return {v.name: v for v in check_trace(g, trace)}


def test_scheduler_validation():
    with pytest.raises(ValueError):
        Scheduler("round_robin")
    assert Scheduler("adversarial").policy == "adversarial_heavy_last"


@pytest.mark.parametrize("sched", SCHEDULERS, ids=str)
def test_single_edge(sched):
    g = new_graph(2, [(0, 1, 7)])
    m, trace, stats = simulate(g, sched)
    assert m.pairs == [(0, 1)] and stats.messages_total == 2
    assert stats.messages_req == 2 and stats.messages_drop == 0
    assert all_passed(check_trace(g, trace))


@pytest.mark.parametrize("sched", SCHEDULERS, ids=str)
def test_star_uses_every_edge_twice(star3, sched):
    m, trace, stats = simulate(star3, sched)
    assert m.pairs == [(0, 3)]
    # three leaf proposals, the hub's proposal to leaf 3, two drops
    assert (stats.messages_total, stats.messages_req, stats.messages_drop) == (6, 4, 2)
    assert stats.messages_total == 2 * star3.edge_count
    assert all_passed(check_trace(star3, trace))


@pytest.mark.parametrize("sched", SCHEDULERS, ids=str)
def test_p4(p4, sched):
    m, trace, stats = simulate(p4, sched)
    assert m.pairs == [(1, 2)] and m.total_weight == 3


def test_empty_graph():
    g = new_graph(0, [])
    m, trace, stats = simulate(g)
    assert len(m) == 0 and stats.messages_total == 0 and trace.matches == []
    assert all_passed(check_trace(g, trace))


def test_isolated_vertices_terminate():
    g = new_graph(4, [(1, 2, 3)])
    m, trace, stats = simulate(g)
    assert m.pairs == [(1, 2)]
    assert {ev.src for ev in trace.of_kind("terminate")} == {0, 1, 2, 3}


def test_late_messages_are_absorbed(star3):
    # lifo delivers the hub's proposal before the light leaves' proposals arrive
    _, trace, stats = simulate(star3, Scheduler("lifo"))
    assert stats.absorbed == len(trace.of_kind("absorb")) > 0
    assert stats.steps == stats.messages_total


def test_determinism_byte_identical():
    g = random_corpus(1, 12, 5)[0]
    runs = [simulate(g, Scheduler("random", 11)) for _ in range(3)]
    texts = {r[1].to_jsonl() for r in runs}
    assert len(texts) == 1
    assert len({r[2] for r in runs}) == 1


def test_match_records_are_disjoint_and_ordered():
    g = random_corpus(8, 12, 1)[6]
    _, trace, _ = simulate(g, Scheduler("random", 3))
    recs = trace.matches
    assert [r.index for r in recs] == list(range(1, len(recs) + 1))
    ends = [x for r in recs for x in (r.u, r.v)]
    assert len(ends) == len(set(ends))


def test_residual_sets_shrink(p4):
    _, trace, _ = simulate(p4)
    es = trace.residual_sets(p4)
    assert es[0] == frozenset(p4.edges) and es[-1] == frozenset()
    assert all(a >= b for a, b in zip(es, es[1:]))


def test_continuous_snapshots(p4):
    _, trace, stats = simulate(p4, continuous=True)
    assert len(trace.snapshots) == 1 + stats.steps
    assert all_passed(check_trace(p4, trace))


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=9), st.sampled_from(POLICIES), st.integers(0, 2**16))
def test_every_run_checks_out(g, policy, seed):
    m, trace, stats = simulate(g, Scheduler(policy, seed), continuous=True)
    assert all_passed(check_trace(g, trace)), check_trace(g, trace)
    assert is_valid_matching(g, m)
    assert m == sequential_greedy(g)
    assert stats.messages_total <= 2 * g.edge_count
    sends = Counter((ev.src, ev.dst) for ev in trace.of_kind("send"))
    assert all(k == 1 for k in sends.values())


def test_trace_jsonl_roundtrip():
    g = random_corpus(3, 12, 4)[2]
    _, trace, _ = simulate(g, Scheduler("random", 2))
    buf = io.StringIO()
    trace.dump(buf)
    back = Trace.from_jsonl(buf.getvalue())
    assert back.events == trace.events
    assert back.to_jsonl() == trace.to_jsonl()
    assert all_passed(check_trace(g, back))


def test_trace_jsonl_schema(star3):
    import json
    _, trace, _ = simulate(star3, Scheduler("fifo"))
    rows = [json.loads(line) for line in trace.to_jsonl().splitlines()]
    assert rows[0] == {"kind": "header", "vertex_count": 4}
    assert all(set(r) == {"step", "kind", "src", "dst", "payload"} for r in rows[1:])
    assert {r["kind"] for r in rows[1:]} <= {"send", "deliver", "absorb", "match", "terminate", "snapshot"}


def test_from_jsonl_needs_header():
    with pytest.raises(ValueError):
        Trace.from_jsonl('{"step": 0}\n')


# checker self-tests on corrupted traces

def _corrupt_match(trace, u, v, w):
    events = []
    for ev in trace.events:
        if ev.kind == "match":
            ev = ev._replace(src=u, dst=v, payload={**ev.payload, "weight": str(w)})
        events.append(ev)
    return Trace(trace.vertex_count, events)


def test_p5_fails_on_non_locally_heaviest(p4):
    _, trace, _ = simulate(p4)
    bad = _corrupt_match(trace, 0, 1, 2)
    v = verdicts_by_name(p4, bad)
    assert not v["P5"].passed
    assert v["P3"].passed


def test_p3_fails_when_edge_already_removed():
    g = new_graph(4, [(0, 1, 5), (1, 2, 4), (2, 3, 3)])
    _, trace, _ = simulate(g)
    # (2,3) can only match after 1 has matched 0 and dropped 2
    assert [r.edge.pair for r in trace.matches] == [(0, 1), (2, 3)]
    events, k = [], 0
    for ev in trace.events:
        if ev.kind == "match":
            k += 1
            if k == 2:
                ev = ev._replace(src=1, dst=2, payload={**ev.payload, "weight": "4"})
        events.append(ev)
    v = verdicts_by_name(g, Trace(4, events))
    assert not v["P3"].passed and not v["P5"].passed


def test_p1_fails_on_duplicate_send(star3):
    _, trace, _ = simulate(star3, Scheduler("fifo"))
    dup = next(ev for ev in trace.events if ev.kind == "send")
    bad = Trace(trace.vertex_count, trace.events + [dup])
    assert not verdicts_by_name(star3, bad)["P1"].passed


def test_p4_fails_without_termination(star3):
    _, trace, _ = simulate(star3, Scheduler("fifo"))
    bad = Trace(4, [ev for ev in trace.events if not (ev.kind == "terminate" and ev.src == 2)])
    assert not verdicts_by_name(star3, bad)["P4"].passed


def test_p4_fails_with_residual_edges(p4):
    _, trace, _ = simulate(p4)
    bad = Trace(4, [ev for ev in trace.events
                    if ev.kind != "match" and not (ev.kind == "snapshot" and ev.payload["index"])])
    assert not verdicts_by_name(p4, bad)["P4"].passed


def test_p2_fails_on_stale_live_set(p4):
    _, trace, _ = simulate(p4)
    events = []
    for ev in trace.events:
        if ev.kind == "snapshot" and ev.payload["index"] == 0:
            live = dict(ev.payload["live"])
            live[1] = []
            ev = ev._replace(payload={"index": 0, "live": live})
        events.append(ev)
    assert not verdicts_by_name(p4, Trace(4, events))["P2"].passed


def test_empty_trace_vacuous():
    g = new_graph(0, [])
    assert all_passed(check_trace(g, Trace(0, [])))


def test_trace_graph_mismatch(p4, star3):
    _, trace, _ = simulate(p4)
    with pytest.raises(TraceMismatchError):
        check_trace(new_graph(5, []), trace)
    other = new_graph(4, [(0, 3, 1)])
    with pytest.raises(TraceMismatchError):
        check_trace(other, trace)


def test_extract_matching():
    g = new_graph(4, [(0, 1, 1), (2, 3, 1)])
    none = [NodeState(x, frozenset(), frozenset(), None, True, None) for x in range(4)]
    assert len(extract_matching(none, g)) == 0
    one = [NodeState(0, frozenset(), frozenset(), 1, True, 1),
           NodeState(1, frozenset(), frozenset(), 0, True, 0)] + none[2:]
    assert extract_matching(one, g).pairs == [(0, 1)]
    bad = [NodeState(0, frozenset(), frozenset(), 1, True, 1)] + none[1:]
    with pytest.raises(AsymmetricPartnersError):
        extract_matching(bad, g)

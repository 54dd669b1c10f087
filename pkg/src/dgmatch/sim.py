"""Deterministic discrete-event simulation of the distributed protocol.

One message is delivered per step, chosen from the in-flight set by a
:class:`Scheduler`.  Every run is recorded as a :class:`Trace` of flat
events, from which :func:`check_trace` re-derives the matching events, the
residual edge sets ``E_0 ⊇ E_1 ⊇ ...`` and the per-node message counts, and
checks the protocol's correctness properties against them.

A message may reach a node that has already stopped (for example a leaf's
proposal arriving at a hub that matched elsewhere).  Such a message is
*absorbed*: recorded, counted, and not handed to the state machine.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple

from .graph import Edge, WeightedGraph, format_weight, order_key
from .node import Message, MsgKind, NodeState, ProtocolViolation, init, on_receive
from .reference import Matching, is_valid_matching, locally_heaviest

POLICIES = ("random", "fifo", "lifo", "adversarial_heavy_last")


class DuplicateSendError(ProtocolViolation):
    pass


class AsymmetricPartnersError(ProtocolViolation):
    pass


class NonTerminationError(ProtocolViolation):
    pass


class TraceMismatchError(ValueError):
    """The trace does not belong to the graph it is checked against."""


class InFlight(NamedTuple):
    src: int
    dst: int
    msg: Message
    send_step: int


@dataclass(frozen=True)
class Scheduler:
    """Delivery-order policy; the asynchrony adversary.

    ``random`` picks uniformly from the in-flight set using ``seed``;
    ``fifo``/``lifo`` deliver the oldest/newest message;
    ``adversarial_heavy_last`` always delivers the message on the lightest
    edge, holding back traffic on heavy edges as long as possible.
    """

    policy: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.policy == "adversarial":
            object.__setattr__(self, "policy", "adversarial_heavy_last")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown scheduler policy {self.policy!r}; expected one of {POLICIES}")

    def picker(self, g: WeightedGraph) -> Callable[[Sequence[InFlight]], int]:
        """A fresh selection function; each call returns an index into the in-flight list."""
        if self.policy == "random":
            rng = random.Random(self.seed)
            return lambda q: rng.randrange(len(q))
        if self.policy == "fifo":
            return lambda q: 0
        if self.policy == "lifo":
            return lambda q: len(q) - 1

        def lightest(q):
            return max(range(len(q)), key=lambda i: (order_key(g.edge(q[i].src, q[i].dst)), -i))
        return lightest


class TraceEvent(NamedTuple):
    step: int
    kind: str  # send | deliver | absorb | match | terminate | snapshot
    src: Optional[int]
    dst: Optional[int]
    payload: dict


class MatchEventRecord(NamedTuple):
    index: int
    u: int
    v: int
    edge: Edge
    step: int


class Snapshot(NamedTuple):
    """Live neighbour sets of every node, taken after matching event ``index``."""
    index: int
    step: int
    live: Tuple[FrozenSet[int], ...]


@dataclass
class Trace:
    vertex_count: int
    events: List[TraceEvent] = field(default_factory=list)

    def of_kind(self, kind: str) -> List[TraceEvent]:
        return [ev for ev in self.events if ev.kind == kind]

    @property
    def matches(self) -> List[MatchEventRecord]:
        out = []
        for ev in self.of_kind("match"):
            w = _weight_from_json(ev.payload["weight"])
            out.append(MatchEventRecord(ev.payload["index"], ev.src, ev.dst,
                                        Edge.make(ev.src, ev.dst, w), ev.step))
        return out

    @property
    def snapshots(self) -> List[Snapshot]:
        out = []
        for ev in self.of_kind("snapshot"):
            live = ev.payload["live"]
            out.append(Snapshot(ev.payload["index"], ev.step,
                                tuple(frozenset(live[x]) for x in range(self.vertex_count))))
        return out

    def residual_sets(self, g: WeightedGraph) -> List[FrozenSet[Edge]]:
        """``E_0 = E`` and ``E_i`` = ``E_{i-1}`` minus every edge touching ``u_i`` or ``v_i``."""
        cur = frozenset(g.edges)
        out = [cur]
        for rec in self.matches:
            cur = frozenset(e for e in cur if not (e.touches(rec.u) or e.touches(rec.v)))
            out.append(cur)
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps({"vertex_count": self.vertex_count, "kind": "header"}, sort_keys=True)]
        lines += [json.dumps(ev._asdict(), sort_keys=True) for ev in self.events]
        return "\n".join(lines) + "\n"

    def dump(self, fp: TextIO) -> None:
        fp.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Trace":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not rows or rows[0].get("kind") != "header":
            raise ValueError("trace is missing its header record")
        trace = cls(rows[0]["vertex_count"])
        for r in rows[1:]:
            payload = r["payload"]
            if r["kind"] == "snapshot":
                payload = {"index": payload["index"],
                           "live": {int(k): v for k, v in payload["live"].items()}}
            trace.events.append(TraceEvent(r["step"], r["kind"], r["src"], r["dst"], payload))
        return trace


def _weight_from_json(s: str):
    f = Fraction(s)
    return f.numerator if f.denominator == 1 else f


@dataclass(frozen=True)
class RunStats:
    messages_total: int
    messages_req: int
    messages_drop: int
    absorbed: int
    matched_pairs: int
    matching_weight: object
    steps: int


def extract_matching(states: Iterable[NodeState], g: WeightedGraph) -> Matching:
    """Collect ``{v, partner_v}`` over all nodes; partners must be mutual."""
    states = list(states)
    by_id = {s.me: s for s in states}
    edges = set()
    for s in states:
        if not s.terminated:
            raise ProtocolViolation(f"node {s.me} has not terminated")
        if s.partner is None:
            continue
        other = by_id.get(s.partner)
        if other is None or other.partner != s.me:
            raise AsymmetricPartnersError(
                f"node {s.me} names partner {s.partner}, which names "
                f"{None if other is None else other.partner}")
        edges.add(g.edge(s.me, s.partner))
    m = Matching.of(edges)
    if not is_valid_matching(g, m):
        raise ProtocolViolation(f"extracted edge set is not a matching: {m.pairs}")
    return m


def _snapshot(states: List[NodeState], index: int, step: int) -> TraceEvent:
    live = {s.me: sorted(s.live) for s in states}
    return TraceEvent(step, "snapshot", None, None, {"index": index, "live": live})


def simulate(g: WeightedGraph, scheduler: Optional[Scheduler] = None, *,
             continuous: bool = False) -> Tuple[Matching, Trace, RunStats]:
    """Run the protocol on ``g`` until no message is in flight.

    Live-set snapshots are recorded after start-up and after every matching
    event; with ``continuous=True`` also after every delivery.  Raises a
    :class:`ProtocolViolation` subclass if a node sends twice over an edge,
    partners disagree, deliveries exceed ``2|E|``, or some node never stops.
    """
    scheduler = scheduler or Scheduler()
    pick = scheduler.picker(g)
    trace = Trace(g.vertex_count)
    ev = trace.events
    states: List[NodeState] = []
    queue: List[InFlight] = []
    sent = set()
    kinds = Counter()
    step = 0

    def post(src: int, out, step: int):
        for msg, dst in out:
            if (src, dst) in sent:
                raise DuplicateSendError(f"node {src} sent a second message to {dst}")
            sent.add((src, dst))
            kinds[msg.kind] += 1
            queue.append(InFlight(src, dst, msg, step))
            ev.append(TraceEvent(step, "send", src, dst, {"msg": msg.kind.value}))

    for x in g.vertices():
        state, out = init(x, g.neighbors(x), g)
        states.append(state)
        post(x, out, 0)
        if state.terminated:
            ev.append(TraceEvent(0, "terminate", x, None, {"partner": None}))
    ev.append(_snapshot(states, 0, 0))

    matched: Dict[int, int] = {}
    n_matches = 0
    absorbed = 0
    limit = 2 * g.edge_count
    while queue:
        if step >= limit:
            raise NonTerminationError(f"more than 2|E| = {limit} deliveries")
        item = queue.pop(pick(queue))
        step += 1
        dst = states[item.dst]
        if dst.terminated:
            absorbed += 1
            ev.append(TraceEvent(step, "absorb", item.src, item.dst, {"msg": item.msg.kind.value}))
            continue
        ev.append(TraceEvent(step, "deliver", item.src, item.dst, {"msg": item.msg.kind.value}))
        new, out, hit = on_receive(dst, item.msg, g)
        states[item.dst] = new
        post(item.dst, out, step)
        new_match = False
        if hit is not None:
            a, b = hit
            if a in matched or b in matched:
                if matched.get(a) != b or matched.get(b) != a:
                    raise AsymmetricPartnersError(f"node {a} matched {b}, which is bound elsewhere")
            else:
                n_matches += 1
                new_match = True
                matched[a], matched[b] = b, a
                ev.append(TraceEvent(step, "match", a, b, {
                    "index": n_matches, "weight": format_weight(g.weight(a, b))}))
        if new.terminated:
            ev.append(TraceEvent(step, "terminate", new.me, None, {"partner": new.partner}))
        if new_match or continuous:
            ev.append(_snapshot(states, n_matches, step))

    stuck = [s.me for s in states if not s.terminated]
    if stuck:
        raise NonTerminationError(f"nodes {stuck} still running with no message in flight")
    m = extract_matching(states, g)
    stats = RunStats(
        messages_total=len(sent),
        messages_req=kinds[MsgKind.REQ],
        messages_drop=kinds[MsgKind.DROP],
        absorbed=absorbed,
        matched_pairs=len(m),
        matching_weight=m.total_weight,
        steps=step,
    )
    return m, trace, stats


# ---------------------------------------------------------------------------
# trace checkers

class Verdict(NamedTuple):
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.name}: {'pass' if self.passed else 'FAIL'}" + (f" ({self.detail})" if self.detail else "")


def _check_one_message_per_edge(g: WeightedGraph, trace: Trace) -> Verdict:
    counts = Counter((ev.src, ev.dst) for ev in trace.of_kind("send"))
    for (a, b), k in sorted(counts.items()):
        if not g.has_edge(a, b):
            raise TraceMismatchError(f"send {a}->{b} is not along a graph edge")
        if k > 1:
            return Verdict("P1", False, f"node {a} sent {k} messages to {b}")
    total = sum(counts.values())
    if total > 2 * g.edge_count:
        return Verdict("P1", False, f"{total} messages exceed 2|E| = {2 * g.edge_count}")
    return Verdict("P1", True, f"{total} messages, 2|E| = {2 * g.edge_count}")


def _check_live_covers_residual(g: WeightedGraph, trace: Trace,
                                residual: List[FrozenSet[Edge]]) -> Verdict:
    snaps = trace.snapshots
    for snap in snaps:
        if snap.index >= len(residual):
            raise TraceMismatchError(f"snapshot refers to matching event {snap.index}, trace has {len(residual) - 1}")
        for e in residual[snap.index]:
            if e.v not in snap.live[e.u] or e.u not in snap.live[e.v]:
                return Verdict("P2", False, f"edge {e.pair} in E_{snap.index} but missing from a live set at step {snap.step}")
    return Verdict("P2", True, f"{len(snaps)} snapshots")


def _check_edge_in_previous_residual(g: WeightedGraph, matches: List[MatchEventRecord],
                                     residual: List[FrozenSet[Edge]]) -> Verdict:
    for rec in matches:
        if rec.edge not in residual[rec.index - 1]:
            return Verdict("P3", False, f"e_{rec.index} = {rec.edge.pair} not in E_{rec.index - 1}")
    return Verdict("P3", True, f"{len(matches)} matching events")


def _check_termination(g: WeightedGraph, trace: Trace, residual: List[FrozenSet[Edge]]) -> Verdict:
    done = {ev.src for ev in trace.of_kind("terminate")}
    missing = sorted(set(g.vertices()) - done)
    if missing:
        return Verdict("P4", False, f"nodes {missing} never terminated")
    if residual[-1]:
        return Verdict("P4", False, f"E_t still holds {sorted(e.pair for e in residual[-1])}")
    return Verdict("P4", True, f"t = {len(residual) - 1}")


def _check_locally_heaviest(g: WeightedGraph, matches: List[MatchEventRecord],
                            residual: List[FrozenSet[Edge]]) -> Verdict:
    for rec in matches:
        prev = residual[rec.index - 1]
        if rec.edge not in prev or rec.edge not in locally_heaviest(prev):
            rivals = [e.pair for e in prev
                      if e != rec.edge and (e.touches(rec.u) or e.touches(rec.v))
                      and order_key(e) < order_key(rec.edge)]
            return Verdict("P5", False, f"e_{rec.index} = {rec.edge.pair} beaten in E_{rec.index - 1} by {rivals}")
    return Verdict("P5", True, f"{len(matches)} matching events")


def check_trace(g: WeightedGraph, trace: Trace) -> List[Verdict]:
    """Check a recorded run against the protocol's five correctness properties.

    P1  each node sends at most one message over each incident edge
    P2  at every snapshot after event ``x_i``, each edge of ``E_i`` has both
        endpoints in each other's live set
    P3  each matched edge ``e_i`` lies in ``E_{i-1}``
    P4  every node terminated and the final residual set is empty
    P5  each ``e_i`` is locally heaviest in ``E_{i-1}``
    """
    if trace.vertex_count != g.vertex_count:
        raise TraceMismatchError(f"trace has {trace.vertex_count} nodes, graph has {g.vertex_count}")
    matches = trace.matches
    for k, rec in enumerate(matches, 1):
        if rec.index != k:
            raise TraceMismatchError(f"matching events out of order at {rec.index}")
        if not g.has_edge(rec.u, rec.v) or g.edge(rec.u, rec.v).w != rec.edge.w:
            raise TraceMismatchError(f"matched edge {rec.edge} is not in the graph")
    residual = trace.residual_sets(g)
    return [
        _check_one_message_per_edge(g, trace),
        _check_live_covers_residual(g, trace, residual),
        _check_edge_in_previous_residual(g, matches, residual),
        _check_termination(g, trace, residual),
        _check_locally_heaviest(g, matches, residual),
    ]


def all_passed(verdicts: Iterable[Verdict]) -> bool:
    return all(v.passed for v in verdicts)

"""Per-node state machine of the distributed greedy matching protocol.

Each node proposes (``req``) along its heaviest live edge.  Two nodes that
proposed to each other match; the matched node then withdraws (``drop``) all
its other live edges.  A node that receives a ``drop`` from its candidate
re-proposes along its next heaviest live edge.  A node stops once its live
set is empty.

The transitions here are pure: they take a state and return a new state plus
the messages to send.  Delivery belongs to :mod:`dgmatch.sim`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import FrozenSet, List, NamedTuple, Optional, Tuple

from .graph import WeightedGraph
from .reference import candidate


class ProtocolViolation(RuntimeError):
    """A protocol invariant failed; always an implementation bug."""


class MsgKind(enum.Enum):
    REQ = "req"
    DROP = "drop"

    def __str__(self) -> str:
        return self.value


class Message(NamedTuple):
    kind: MsgKind
    sender: int


class MatchEvent(NamedTuple):
    node: int
    partner: int


Outbound = List[Tuple[Message, int]]


@dataclass(frozen=True)
class NodeState:
    me: int
    requests: FrozenSet[int]
    live: FrozenSet[int]
    cand: Optional[int]
    terminated: bool = False
    partner: Optional[int] = None


def init(me: int, neighbors: FrozenSet[int], g: WeightedGraph) -> Tuple[NodeState, Outbound]:
    live = frozenset(neighbors)
    c = candidate(me, live, g)
    state = NodeState(me, frozenset(), live, c, terminated=not live)
    out = [] if c is None else [(Message(MsgKind.REQ, me), c)]
    return state, out


def on_receive(state: NodeState, msg: Message,
               g: WeightedGraph) -> Tuple[NodeState, Outbound, Optional[MatchEvent]]:
    if state.terminated:
        raise ProtocolViolation(f"node {state.me} received {msg.kind} from {msg.sender} after terminating")
    me, u = state.me, msg.sender
    if not g.has_edge(me, u):
        raise ProtocolViolation(f"node {me} received a message from non-neighbour {u}")

    requests, live, c = state.requests, state.live, state.cand
    out: Outbound = []
    if msg.kind is MsgKind.REQ:
        requests = requests | {u}
    elif msg.kind is MsgKind.DROP:
        if u not in live:
            raise ProtocolViolation(f"node {me} got drop from {u}, which is not live")
        live = live - {u}
        if u == c:
            c = candidate(me, live, g)
            if c is not None:
                out.append((Message(MsgKind.REQ, me), c))
    else:
        raise ProtocolViolation(f"unknown message kind {msg.kind!r}")

    if c is not None and c in requests:
        out.extend((Message(MsgKind.DROP, me), w) for w in sorted(live - {c}))
        new = replace(state, requests=requests, live=frozenset(), cand=c,
                      terminated=True, partner=c)
        return new, out, MatchEvent(me, c)

    new = replace(state, requests=requests, live=live, cand=c, terminated=not live)
    return new, out, None

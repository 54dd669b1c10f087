"""Weighted undirected graphs with exact weights and a strict total edge order.

Weights are ``int`` or :class:`fractions.Fraction`, never ``float``.  Every
edge is stored canonically with ``u < v``.  Edges are compared by
:func:`order_key`: heavier weight first, then smaller low endpoint, then
smaller high endpoint, which gives a strict total order even when weights
repeat.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

Weight = Union[int, Fraction]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class NonPositiveWeightError(GraphError):
    pass


class EndpointRangeError(GraphError):
    pass


class GraphFormatError(GraphError):
    """Malformed graph text."""


def _normalize_weight(w) -> Weight:
    if isinstance(w, bool) or isinstance(w, float):
        raise TypeError(f"edge weight must be int or Fraction, got {type(w).__name__}")
    if isinstance(w, Fraction):
        return w.numerator if w.denominator == 1 else w
    if isinstance(w, int):
        return w
    raise TypeError(f"edge weight must be int or Fraction, got {type(w).__name__}")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    w: Weight

    @classmethod
    def make(cls, a: int, b: int, w: Weight) -> "Edge":
        """Build the canonical edge (smaller endpoint first)."""
        return cls(a, b, w) if a < b else cls(b, a, w)

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"{x} is not an endpoint of {self}")

    def touches(self, x: int) -> bool:
        return x == self.u or x == self.v

    def __str__(self) -> str:
        return f"({self.u},{self.v},w={self.w})"


def order_key(e: Edge) -> Tuple[Weight, int, int]:
    """Sort key placing heavier edges first; ascending sort = heaviest first."""
    return (-e.w, e.u, e.v)


def heavier(e1: Edge, e2: Edge) -> bool:
    """True iff ``e1`` precedes ``e2`` in the total edge order."""
    return order_key(e1) < order_key(e2)


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices ``0 .. vertex_count-1``.

    Build through :func:`new_graph`, which validates input.  Instances are
    immutable; ``edges`` is sorted by endpoint pair.
    """

    vertex_count: int
    edges: Tuple[Edge, ...]
    _adj: Dict[int, Dict[int, Edge]] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def __post_init__(self):
        adj: Dict[int, Dict[int, Edge]] = {x: {} for x in range(self.vertex_count)}
        for e in self.edges:
            adj[e.u][e.v] = e
            adj[e.v][e.u] = e
        object.__setattr__(self, "_adj", adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, x: int) -> FrozenSet[int]:
        return frozenset(self._adj[x])

    def degree(self, x: int) -> int:
        return len(self._adj[x])

    def has_edge(self, a: int, b: int) -> bool:
        return a in self._adj and b in self._adj[a]

    def edge(self, a: int, b: int) -> Edge:
        try:
            return self._adj[a][b]
        except KeyError:
            raise KeyError(f"no edge between {a} and {b}") from None

    def weight(self, a: int, b: int) -> Weight:
        return self.edge(a, b).w

    def incident(self, x: int) -> List[Edge]:
        return list(self._adj[x].values())

    def total_weight(self) -> Weight:
        return sum((e.w for e in self.edges), 0)

    def has_distinct_weights(self) -> bool:
        ws = [e.w for e in self.edges]
        return len(set(ws)) == len(ws)


def new_graph(vertex_count: int, edge_list: Iterable[Sequence]) -> WeightedGraph:
    """Validate ``(u, v, w)`` triples and build a graph.

    Raises a distinct :class:`GraphError` subclass for self-loops, duplicate
    edges, non-positive weights and out-of-range endpoints.
    """
    if isinstance(vertex_count, bool) or not isinstance(vertex_count, int) or vertex_count < 0:
        raise GraphError(f"vertex count must be a non-negative integer, got {vertex_count!r}")
    seen = set()
    edges = []
    for item in edge_list:
        a, b, w = item
        if not (0 <= a < vertex_count and 0 <= b < vertex_count):
            raise EndpointRangeError(
                f"edge ({a},{b}) has an endpoint outside 0..{vertex_count - 1}"
            )
        if a == b:
            raise SelfLoopError(f"self-loop at vertex {a}")
        w = _normalize_weight(w)
        if w <= 0:
            raise NonPositiveWeightError(f"edge ({a},{b}) has non-positive weight {w}")
        e = Edge.make(a, b, w)
        if e.pair in seen:
            raise DuplicateEdgeError(f"duplicate edge {e.pair}")
        seen.add(e.pair)
        edges.append(e)
    edges.sort(key=lambda e: e.pair)
    return WeightedGraph(vertex_count, tuple(edges))


# ---------------------------------------------------------------------------
# generators

KINDS = ("path", "cycle", "star", "complete", "random_gnp", "random_tree", "bipartite")
WEIGHT_POLICIES = ("distinct_random", "uniform_random", "all_equal", "adversarial_half_ratio")


def _shape(kind: str, n: int, rng: random.Random, p: float,
           parts: Optional[Tuple[int, int]]) -> Tuple[int, List[Tuple[int, int]]]:
    if kind == "path":
        return n, [(i, i + 1) for i in range(n - 1)]
    if kind == "cycle":
        if n < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        return n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    if kind == "star":
        return n, [(0, i) for i in range(1, n)]
    if kind == "complete":
        return n, [(i, j) for i in range(n) for j in range(i + 1, n)]
    if kind == "random_gnp":
        if not 0 <= p <= 1:
            raise GraphError(f"edge probability must be in [0, 1], got {p}")
        return n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if kind == "random_tree":
        # random recursive tree: vertex i attaches to a uniform earlier vertex
        return n, [(rng.randrange(i), i) for i in range(1, n)]
    if kind == "bipartite":
        if not 0 <= p <= 1:
            raise GraphError(f"edge probability must be in [0, 1], got {p}")
        a, b = parts if parts is not None else (n // 2, n - n // 2)
        if a < 0 or b < 0 or a + b != n:
            raise GraphError(f"bipartition {a}+{b} does not add up to {n}")
        return n, [(i, a + j) for i in range(a) for j in range(b) if rng.random() < p]
    raise GraphError(f"unknown graph kind {kind!r}; expected one of {KINDS}")


def _weights(policy, m: int, rng: random.Random, kind: str, base: int) -> List[Weight]:
    if not isinstance(policy, str):
        ws = [_normalize_weight(w) for w in policy]
        if len(ws) != m:
            raise GraphError(f"{len(ws)} explicit weights given for {m} edges")
        return ws
    if policy == "distinct_random":
        return rng.sample(range(1, 10 * m + 1), m) if m else []
    if policy == "uniform_random":
        return [rng.randint(1, 10) for _ in range(m)]
    if policy == "all_equal":
        return [1] * m
    if policy == "adversarial_half_ratio":
        # chained blocks share vertices and lose tightness, so only the 4-path qualifies
        if kind != "path" or m != 3:
            raise GraphError("adversarial_half_ratio weights are defined for the 4-vertex path only")
        if base < 1:
            raise GraphError("adversarial base weight must be >= 1")
        # greedy takes the middle edge (w+1), the optimum both outer edges (2w)
        return [base, base + 1, base]
    raise GraphError(f"unknown weight policy {policy!r}; expected one of {WEIGHT_POLICIES}")


def generate(kind: str, n: int, seed: int = 0, weights="distinct_random", *,
             p: float = 0.5, parts: Optional[Tuple[int, int]] = None,
             base: int = 1000) -> WeightedGraph:
    """Generate a weighted graph deterministically from ``(kind, n, seed, weights)``.

    ``weights`` is a policy name from :data:`WEIGHT_POLICIES` or an explicit
    sequence with one weight per edge, in the generator's edge order (for a
    path, edge ``i`` joins ``i`` and ``i+1``).  ``p`` is the edge probability
    for ``random_gnp`` and ``bipartite``; ``parts`` the bipartition sizes;
    ``base`` the ``w`` of the ``(w, w+1, w)`` weights that
    ``adversarial_half_ratio`` puts on the 4-vertex path.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise GraphError(f"vertex count must be a non-negative integer, got {n!r}")
    rng = random.Random(seed)
    n, pairs = _shape(kind, n, rng, p, parts)
    ws = _weights(weights, len(pairs), rng, kind, base)
    return new_graph(n, [(a, b, w) for (a, b), w in zip(pairs, ws)])


def random_corpus(count: int, max_n: int = 12, seed: int = 0,
                  policies: Sequence[str] = ("distinct_random", "uniform_random", "all_equal"),
                  ) -> List[WeightedGraph]:
    """A deterministic mixed-family corpus of small random graphs."""
    rng = random.Random(seed)
    kinds = list(KINDS)
    out = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        policy = policies[(i // len(kinds)) % len(policies)]
        lo = 3 if kind == "cycle" else 1
        n = rng.randint(lo, max(lo, max_n))
        p = rng.choice((0.2, 0.35, 0.5, 0.8))
        out.append(generate(kind, n, rng.randrange(2**31), policy, p=p))
    return out


# ---------------------------------------------------------------------------
# text format

_INT = re.compile(r"[+-]?\d+\Z")
_RATIO = re.compile(r"([+-]?\d+)/(\d+)\Z")


def _parse_weight(tok: str, lineno: int) -> Weight:
    if _INT.match(tok):
        return int(tok)
    m = _RATIO.match(tok)
    if m:
        q = int(m.group(2))
        if q == 0:
            raise GraphFormatError(f"line {lineno}: zero denominator in {tok!r}")
        return _normalize_weight(Fraction(int(m.group(1)), q))
    raise GraphFormatError(f"line {lineno}: bad weight {tok!r}")


def format_weight(w: Weight) -> str:
    # str(Fraction) already yields "p/q", or "p" for whole numbers
    return str(w)


def parse_graph(text: str) -> WeightedGraph:
    """Parse ``n m`` followed by ``m`` lines of ``u v w``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphFormatError("empty input: missing 'n m' header")
    lineno, head = rows[0]
    if len(head) != 2 or not all(_INT.match(t) for t in head):
        raise GraphFormatError(f"line {lineno}: header must be 'n m', got {' '.join(head)!r}")
    n, m = int(head[0]), int(head[1])
    if n < 0 or m < 0:
        raise GraphFormatError(f"line {lineno}: negative count in header")
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}")
    triples = []
    for lineno, toks in body:
        if len(toks) != 3 or not (_INT.match(toks[0]) and _INT.match(toks[1])):
            raise GraphFormatError(f"line {lineno}: expected 'u v w', got {' '.join(toks)!r}")
        triples.append((int(toks[0]), int(toks[1]), _parse_weight(toks[2], lineno)))
    return new_graph(n, triples)


def serialize_graph(g: WeightedGraph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines += [f"{e.u} {e.v} {format_weight(e.w)}" for e in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> WeightedGraph:
    with open(path) as f:
        return parse_graph(f.read())


def write_graph(g: WeightedGraph, path) -> None:
    with open(path, "w") as f:
        f.write(serialize_graph(g))



"""Sequential matchers: the greedy locally-heaviest-edge algorithm and an
exact maximum-weight oracle for small graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Dict, Iterable, Iterator, List, Optional, Tuple

from .graph import Edge, Weight, WeightedGraph, order_key

DEFAULT_ORACLE_LIMIT = 20


class OracleLimitError(ValueError):
    """Graph too large for exhaustive search."""


@dataclass(frozen=True)
class Matching:
    """A set of edges, kept sorted by endpoint pair so equality is structural."""

    edges: Tuple[Edge, ...] = ()

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "Matching":
        return cls(tuple(sorted(set(edges), key=lambda e: e.pair)))

    @property
    def total_weight(self) -> Weight:
        return matching_weight(self)

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [e.pair for e in self.edges]

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)


def matching_weight(m: Iterable[Edge]) -> Weight:
    return sum((e.w for e in m), 0)


def is_valid_matching(g: WeightedGraph, m: Iterable[Edge]) -> bool:
    """True iff every edge of ``m`` is an edge of ``g`` and no vertex repeats."""
    used = set()
    for e in m:
        if not g.has_edge(e.u, e.v) or g.edge(e.u, e.v) != e:
            return False
        if e.u in used or e.v in used:
            return False
        used.update(e.pair)
    return True


def candidate(u: int, live: AbstractSet[int], g: WeightedGraph) -> Optional[int]:
    """Neighbour in ``live`` across ``u``'s heaviest edge, or ``None`` if ``live`` is empty."""
    best = None
    for v in live:
        if not g.has_edge(u, v):
            raise ValueError(f"{v} is not a neighbour of {u}")
        e = g.edge(u, v)
        if best is None or order_key(e) < order_key(best):
            best = e
    return None if best is None else best.other(u)


def locally_heaviest(edges: Iterable[Edge]) -> List[Edge]:
    """Edges heavier than every other edge in the collection that shares an endpoint.

    Returned in total-order sequence (heaviest first).
    """
    top: Dict[int, Edge] = {}
    edges = list(edges)
    for e in edges:
        for x in e.pair:
            cur = top.get(x)
            if cur is None or order_key(e) < order_key(cur):
                top[x] = e
    out = [e for e in edges if top[e.u] == e and top[e.v] == e]
    out.sort(key=order_key)
    return out


def sequential_greedy(g: WeightedGraph, pick: str = "first") -> Matching:
    """Repeatedly take a locally heaviest remaining edge and delete its neighbourhood.

    ``pick`` chooses among the locally heaviest edges of a round: ``"first"``
    (the default, heaviest in the total order) or ``"last"``.  Under a strict
    edge order the result does not depend on this choice.
    """
    if pick not in ("first", "last"):
        raise ValueError(f"pick must be 'first' or 'last', got {pick!r}")
    remaining = set(g.edges)
    chosen = []
    while remaining:
        cands = locally_heaviest(remaining)
        e = cands[0] if pick == "first" else cands[-1]
        chosen.append(e)
        remaining = {f for f in remaining if not (f.touches(e.u) or f.touches(e.v))}
    return Matching.of(chosen)


def optimal_matching(g: WeightedGraph, limit: int = DEFAULT_ORACLE_LIMIT) -> Matching:
    """Exact maximum-weight matching by dynamic programming over vertex subsets.

    ``best(S)`` is the heaviest matching inside vertex set ``S``: the lowest
    vertex of ``S`` is either left unmatched or paired with a neighbour in
    ``S``.  Exponential in ``|V|``; refuses graphs above ``limit`` vertices.
    """
    n = g.vertex_count
    if n > limit:
        raise OracleLimitError(f"{n} vertices exceeds the exact-search limit of {limit}")
    # only vertices with edges matter
    active = [x for x in g.vertices() if g.degree(x)]
    index = {x: i for i, x in enumerate(active)}
    nbrs = [[(index[y], g.edge(x, y)) for y in sorted(g.neighbors(x))] for x in active]
    full = (1 << len(active)) - 1
    value: List[Weight] = [0] * (full + 1)
    choice: List[Optional[Tuple[int, Optional[Edge]]]] = [None] * (full + 1)
    for mask in range(1, full + 1):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        best, arg = value[rest], (rest, None)
        for j, e in nbrs[low]:
            if rest >> j & 1:
                sub = rest & ~(1 << j)
                cand = value[sub] + e.w
                if cand > best:
                    best, arg = cand, (sub, e)
        value[mask], choice[mask] = best, arg
    edges = []
    mask = full
    while mask:
        mask, e = choice[mask]
        if e is not None:
            edges.append(e)
    return Matching.of(edges)


def all_matchings(g: WeightedGraph) -> Iterator[Matching]:
    """Enumerate every matching of ``g`` (including the empty one)."""
    edges = list(g.edges)

    def rec(i: int, used: frozenset, acc: List[Edge]):
        if i == len(edges):
            yield Matching.of(acc)
            return
        yield from rec(i + 1, used, acc)
        e = edges[i]
        if e.u not in used and e.v not in used:
            acc.append(e)
            yield from rec(i + 1, used | {e.u, e.v}, acc)
            acc.pop()

    return rec(0, frozenset(), [])


def brute_force_matching(g: WeightedGraph) -> Matching:
    """Heaviest matching by plain enumeration; an independent check on :func:`optimal_matching`."""
    return max(all_matchings(g), key=matching_weight)

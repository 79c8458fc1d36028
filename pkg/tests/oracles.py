"""Brute-force oracles, independent of the library's kernels.

Everything here is deliberately naive: 4-subset enumeration plus plain BFS
connectivity, pure Python, no numpy.  Used to freeze expected values for the
vectorized implementations.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, List, Set, Tuple

Pair = Tuple[int, int]


def _pairings(quad: Tuple[int, int, int, int]) -> List[Tuple[Pair, Pair]]:
    w, x, y, z = quad
    return [((w, x), (y, z)), ((w, y), (x, z)), ((w, z), (x, y))]


def brute_square_edges(edges: Set[Pair], n: int, induced: bool) -> Set[FrozenSet[Pair]]:
    """Auxiliary-graph edges as sets {diagonal1, diagonal2} of vertex pairs."""

    def has(u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in edges

    out: Set[FrozenSet[Pair]] = set()
    for quad in combinations(range(n), 4):
        for (p, q) in _pairings(quad):
            a, b = p
            c, d = q
            # 4-cycle with diagonals p, q: a-c-b-d
            if has(a, c) and has(c, b) and has(b, d) and has(d, a):
                if induced and (has(a, b) or has(c, d)):
                    continue
                out.add(frozenset((p, q)))
    return out


def brute_partition(edges: Set[Pair], n: int, induced: bool) -> Set[FrozenSet[Pair]]:
    """Component partition of the auxiliary graph (pairs as (u, v), u < v)."""
    if induced:
        universe = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    else:
        universe = [(u, v) for u in range(n) for v in range(u + 1, n)]
    adj: Dict[Pair, Set[Pair]] = {p: set() for p in universe}
    for e in brute_square_edges(edges, n, induced):
        p, q = tuple(e)
        adj[p].add(q)
        adj[q].add(p)
    seen: Set[Pair] = set()
    parts: Set[FrozenSet[Pair]] = set()
    for p in universe:
        if p in seen:
            continue
        comp = {p}
        frontier = [p]
        while frontier:
            cur = frontier.pop()
            for q in adj[cur]:
                if q not in comp:
                    comp.add(q)
                    frontier.append(q)
        seen |= comp
        parts.add(frozenset(comp))
    return parts


def brute_count_induced_squares(edges: Set[Pair], n: int) -> int:
    return len(brute_square_edges(edges, n, induced=True))


def brute_supports(edges: Set[Pair], n: int, induced: bool) -> List[Tuple[int, int]]:
    """(order, support_size) per component, sorted."""
    out = []
    for comp in brute_partition(edges, n, induced):
        verts = set()
        for (u, v) in comp:
            verts.add(u)
            verts.add(v)
        out.append((len(comp), len(verts)))
    return sorted(out)


def graph_edges(g) -> Set[Pair]:
    """Edge set of a squareperc Graph as sorted tuples."""
    return {(u, v) for u, v in g.edges()}

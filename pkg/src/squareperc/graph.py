"""Simple undirected graphs with bitset adjacency rows.

Vertices are integers 0..n-1.  Each adjacency row is a Python int used as a
bitset, so neighborhood intersections are single word-parallel AND operations
and neighborhood sizes are popcounts.
"""
from __future__ import annotations

from typing import Iterable, Iterator, List, NamedTuple, Tuple

import numpy as np


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list text; message carries the line number."""


class VertexPair(NamedTuple):
    """An unordered vertex pair stored with u < v."""

    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int) -> "VertexPair":
        if a == b:
            raise ValueError(f"degenerate pair ({a}, {b})")
        return cls(a, b) if a < b else cls(b, a)


def pair_index(u: int, v: int, n: int) -> int:
    """Map an unordered pair {u, v} to its id in [0, C(n, 2)), row-major."""
    if u > v:
        u, v = v, u
    if not (0 <= u < v < n):
        raise ValueError(f"pair ({u}, {v}) out of range for n={n}")
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_from_index(pid: int, n: int) -> VertexPair:
    """Inverse of pair_index."""
    total = n * (n - 1) // 2
    if not (0 <= pid < total):
        raise ValueError(f"pair id {pid} out of range for n={n}")
    # Solve for the row u: smallest u with row_start(u+1) > pid.
    u = int((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * pid)) // 2)
    while u * (2 * n - u - 1) // 2 > pid:
        u -= 1
    while (u + 1) * (2 * n - u - 2) // 2 <= pid:
        u += 1
    v = pid - u * (2 * n - u - 1) // 2 + u + 1
    return VertexPair(u, v)


def bits_to_list(mask: int) -> List[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """Immutable simple graph over vertices 0..n-1."""

    __slots__ = ("n", "_adj", "_packed", "_edge_mask")

    def __init__(self, n: int, adj: List[int]):
        if n < 0:
            raise ValueError("n must be nonnegative")
        if len(adj) != n:
            raise ValueError("adjacency must have one row per vertex")
        self.n = n
        self._adj = tuple(adj)
        self._packed = None
        self._edge_mask = None
        for u, row in enumerate(self._adj):
            if row >> n:
                raise ValueError(f"adjacency row {u} has bits beyond n")
            if (row >> u) & 1:
                raise ValueError(f"self-loop at vertex {u}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << u) for u in range(n)])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def from_bool_matrix(cls, mat: np.ndarray) -> "Graph":
        """Build from a symmetric boolean adjacency matrix (no diagonal)."""
        n = mat.shape[0]
        packed = np.packbits(mat.astype(np.uint8), axis=1, bitorder="little")
        rows = [int.from_bytes(packed[u].tobytes(), "little") for u in range(n)]
        return cls(n, rows)

    # -- queries -----------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def neighbors_bits(self, u: int) -> int:
        return self._adj[u]

    def neighbors(self, u: int) -> List[int]:
        return bits_to_list(self._adj[u])

    def degree(self, u: int) -> int:
        return self._adj[u].bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._adj) // 2

    def edges(self) -> Iterator[VertexPair]:
        for u in range(self.n):
            rest = self._adj[u] >> (u + 1)
            while rest:
                low = rest & -rest
                yield VertexPair(u, u + 1 + low.bit_length() - 1)
                rest ^= low

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"

    # -- packed views for vectorized kernels --------------------------------

    def packed_rows(self) -> np.ndarray:
        """Adjacency as an (n, ceil(n/64)) uint64 array; cached."""
        if self._packed is None:
            n = self.n
            words = max(1, (n + 63) // 64)
            out = np.zeros((n, words), dtype=np.uint64)
            nbytes = words * 8
            for u in range(n):
                row = self._adj[u].to_bytes(nbytes, "little")
                out[u] = np.frombuffer(row, dtype=np.uint64)
            self._packed = out
        return self._packed

    def bit_matrix(self) -> np.ndarray:
        """Adjacency as a dense (n, n) uint8 0/1 matrix."""
        n = self.n
        if n == 0:
            return np.zeros((0, 0), dtype=np.uint8)
        packed = self.packed_rows().view(np.uint8)
        return np.unpackbits(packed, axis=1, bitorder="little")[:, :n]

    def edge_mask(self) -> np.ndarray:
        """Boolean mask over pair ids: True where the pair is an edge; cached."""
        if self._edge_mask is None:
            n = self.n
            bm = self.bit_matrix()
            parts = [bm[u, u + 1:] for u in range(n)]
            if parts:
                self._edge_mask = np.concatenate(parts).astype(bool)
            else:
                self._edge_mask = np.zeros(0, dtype=bool)
        return self._edge_mask


# -- parsing ----------------------------------------------------------------

def from_edge_list(text: str) -> Graph:
    """Parse the edge-list wire format.

    First significant line is "n m"; then exactly m lines "u v".  Lines whose
    first non-blank character is '#' are comments; blank lines are skipped.
    Duplicate edges and either endpoint order are tolerated.
    """
    n = None
    m = None
    adj: List[int] = []
    seen_edges = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2:
                raise EdgeListParseError(f"line {lineno}: expected header 'n m'")
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise EdgeListParseError(f"line {lineno}: non-integer header") from None
            if n < 0 or m < 0:
                raise EdgeListParseError(f"line {lineno}: negative header values")
            adj = [0] * n
            continue
        if seen_edges >= m:
            raise EdgeListParseError(f"line {lineno}: more than {m} edge lines")
        if len(fields) != 2:
            raise EdgeListParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: non-integer endpoints") from None
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListParseError(f"line {lineno}: vertex out of range [0, {n})")
        if u == v:
            raise EdgeListParseError(f"line {lineno}: self-loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        seen_edges += 1
    if n is None:
        raise EdgeListParseError("line 1: missing header 'n m'")
    if seen_edges != m:
        raise EdgeListParseError(f"expected {m} edges, found {seen_edges}")
    return Graph(n, adj)


def to_edge_list(g: Graph) -> str:
    """Serialize to the edge-list wire format (deterministic order)."""
    lines = [f"{g.n} {g.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -- operations --------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, [(~g.neighbors_bits(u)) & full & ~(1 << u) for u in range(g.n)])


def common_neighbors(g: Graph, u: int, v: int) -> int:
    """Bitset of vertices adjacent to both u and v."""
    return g.neighbors_bits(u) & g.neighbors_bits(v)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Tuple[Graph, dict]:
    """Subgraph induced on the given vertices plus the old->new index map."""
    xs = sorted(set(vertices))
    if xs and not (0 <= xs[0] and xs[-1] < g.n):
        raise ValueError("vertex out of range")
    index = {old: new for new, old in enumerate(xs)}
    sub = Graph.empty(len(xs))
    adj = [0] * len(xs)
    for old_u, new_u in index.items():
        row = g.neighbors_bits(old_u)
        acc = 0
        for old_v, new_v in index.items():
            acc |= ((row >> old_v) & 1) << new_v
        adj[new_u] = acc
    return Graph(len(xs), adj), index


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    xs = sorted(set(vertices))
    mask = 0
    for x in xs:
        if not 0 <= x < g.n:
            raise ValueError("vertex out of range")
        mask |= 1 << x
    return all((g.neighbors_bits(x) & mask) == mask ^ (1 << x) for x in xs)


def connected_components(g: Graph) -> List[List[int]]:
    """Vertex partition into connected components, each sorted, ordered by minimum."""
    seen = 0
    out: List[List[int]] = []
    full = (1 << g.n) - 1
    while seen != full:
        start = (~seen & full) & -(~seen & full)
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            rest = frontier
            while rest:
                low = rest & -rest
                nxt |= g.neighbors_bits(low.bit_length() - 1)
                rest ^= low
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(bits_to_list(comp))
    return out


def universal_vertices(g: Graph) -> List[int]:
    """Vertices adjacent to every other vertex."""
    full = (1 << g.n) - 1
    return [u for u in range(g.n) if g.neighbors_bits(u) == full ^ (1 << u)]


def is_complete(g: Graph) -> bool:
    return g.edge_count() == g.n * (g.n - 1) // 2

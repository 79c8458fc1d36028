"""Components of the auxiliary square-graph of a graph.

The auxiliary graph has one vertex per pair of graph vertices: all pairs for
the relaxed variant, non-edges only for the induced variant.  Two pairs {a,c}
and {b,d} are adjacent when a-b-c-d is a 4-cycle of the underlying graph
(an induced one for the induced variant, i.e. the diagonals {a,c},{b,d} are
both non-edges).

Components are computed without materializing the auxiliary edge set: for
every pair we enumerate the pairs inside its common neighborhood and feed
bounded chunks of unions into a union-find (path halving + union by size).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .graph import (
    Graph,
    VertexPair,
    bits_to_list,
    induced_subgraph,
    pair_from_index,
    pair_index,
    universal_vertices,
)

_CHUNK = 1 << 20
_MAX_N = 60000  # keeps pair ids inside int32


class Variant(Enum):
    INDUCED = "induced"
    RELAXED = "relaxed"


@dataclass(frozen=True)
class ComponentSummary:
    id: int
    order: int
    support: int  # vertex bitset
    support_size: int
    full_support: bool


@njit(cache=True)
def _uf_unite(parent, size, us, vs):  # pragma: no cover - exercised via wrapper
    for i in range(us.shape[0]):
        a = us[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]


@njit(cache=True)
def _uf_roots(parent, idx):  # pragma: no cover - exercised via wrapper
    out = np.empty(idx.shape[0], dtype=np.int64)
    for i in range(idx.shape[0]):
        a = idx[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        out[i] = a
    return out


def _pair_ids(a: np.ndarray, c: np.ndarray, n: int) -> np.ndarray:
    a = a.astype(np.int64, copy=False)
    c = c.astype(np.int64, copy=False)
    return a * (2 * n - a - 1) // 2 + (c - a - 1)


def _cherries(g: Graph) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All (a, c, b) with a < c both adjacent to b ("cherries" centered at b)."""
    n = g.n
    bm = g.bit_matrix()
    rows, cols = np.nonzero(bm)
    start = np.searchsorted(rows, np.arange(n + 1))
    deg = np.diff(start)
    a_parts: List[np.ndarray] = []
    c_parts: List[np.ndarray] = []
    b_parts: List[np.ndarray] = []
    for d in np.unique(deg):
        if d < 2:
            continue
        centers = np.flatnonzero(deg == d)
        # neighbor lists of all degree-d vertices, one row each, ascending
        nb = cols[start[centers][:, None] + np.arange(d)[None, :]]
        ii, jj = np.triu_indices(d, 1)
        a_parts.append(nb[:, ii].ravel())
        c_parts.append(nb[:, jj].ravel())
        b_parts.append(np.repeat(centers, ii.shape[0]))
    if not a_parts:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z.astype(np.int32)
    return (
        np.concatenate(a_parts),
        np.concatenate(c_parts),
        np.concatenate(b_parts).astype(np.int32),
    )


class ComponentLabeling:
    """Connected components of the auxiliary square-graph.

    Component ids are assigned by ascending minimum pair id, so the labeling
    is deterministic and independent of union order.
    """

    def __init__(
        self,
        n: int,
        variant: Variant,
        universe: np.ndarray,
        comp_index: np.ndarray,
        comp_order: np.ndarray,
        comp_support_size: np.ndarray,
        comp_squares: Optional[np.ndarray],
    ):
        self.n = n
        self.variant = variant
        self.universe = universe  # ascending pair ids, int64
        self._comp_index = comp_index  # per universe entry, int64
        self.comp_order = comp_order
        self.comp_support_size = comp_support_size
        self.comp_squares = comp_squares  # induced variant only
        self._summaries: Optional[List[ComponentSummary]] = None

    # -- basic queries -------------------------------------------------------

    @property
    def n_components(self) -> int:
        return int(self.comp_order.shape[0])

    def component_id_of(self, u: int, v: int) -> int:
        pid = pair_index(u, v, self.n)
        pos = np.searchsorted(self.universe, pid)
        if pos >= self.universe.shape[0] or self.universe[pos] != pid:
            raise KeyError(f"pair ({u}, {v}) is not a vertex of the {self.variant.value} square-graph")
        return int(self._comp_index[pos])

    def component_pairs(self, cid: int) -> np.ndarray:
        """Pair ids belonging to component cid, ascending."""
        return self.universe[self._comp_index == cid]

    def support_bits(self, cid: int) -> int:
        pids = self.component_pairs(cid)
        if pids.shape[0] == 0:
            return 0
        rows = np.arange(self.n, dtype=np.int64)
        row_starts = rows * (2 * self.n - rows - 1) // 2
        u = np.searchsorted(row_starts, pids, side="right") - 1
        v = pids - row_starts[u] + u + 1
        mask = 0
        for w in np.unique(np.concatenate([u, v])).tolist():
            mask |= 1 << w
        return mask

    def partition(self) -> set:
        """The component partition as a set of frozensets of pair ids."""
        out = {}
        for pid, cid in zip(self.universe.tolist(), self._comp_index.tolist()):
            out.setdefault(cid, []).append(pid)
        return {frozenset(v) for v in out.values()}

    # -- aggregates ----------------------------------------------------------

    def has_full_support(self) -> bool:
        return bool(self.comp_support_size.shape[0]) and int(self.comp_support_size.max()) == self.n

    def largest_support_size(self) -> int:
        if self.comp_support_size.shape[0] == 0:
            return 0
        return int(self.comp_support_size.max())

    def largest_order(self) -> int:
        if self.comp_order.shape[0] == 0:
            return 0
        return int(self.comp_order.max())

    def squares_in_components_of_order(self, min_order: int) -> int:
        if self.comp_squares is None:
            raise ValueError("square counts are tracked for the induced variant only")
        return int(self.comp_squares[self.comp_order >= min_order].sum())

    @property
    def components(self) -> List[ComponentSummary]:
        if self._summaries is None:
            self._summaries = self.summaries(min_order=1)
        return self._summaries

    def summaries(self, min_order: int = 1, with_support: bool = True) -> List[ComponentSummary]:
        out = []
        for cid in np.flatnonzero(self.comp_order >= min_order):
            cid = int(cid)
            support = self.support_bits(cid) if with_support else 0
            out.append(
                ComponentSummary(
                    id=cid,
                    order=int(self.comp_order[cid]),
                    support=support,
                    support_size=int(self.comp_support_size[cid]),
                    full_support=int(self.comp_support_size[cid]) == self.n,
                )
            )
        return out


def square_components(g: Graph, variant: Variant) -> ComponentLabeling:
    """Label the components of the auxiliary square-graph of g."""
    n = g.n
    if n > _MAX_N:
        raise ValueError(f"n={n} exceeds the supported maximum {_MAX_N}")
    total = n * (n - 1) // 2
    induced = variant is Variant.INDUCED
    if total == 0:
        empty64 = np.zeros(0, dtype=np.int64)
        return ComponentLabeling(
            n, variant, empty64, empty64.copy(), empty64.copy(), empty64.copy(),
            empty64.copy() if induced else None,
        )

    edge_mask = g.edge_mask()
    parent = np.arange(total, dtype=np.int32)
    size = np.ones(total, dtype=np.int32)

    a_arr, c_arr, b_arr = _cherries(g)
    key = _pair_ids(a_arr, c_arr, n)
    if induced and key.shape[0]:
        keep = ~edge_mask[key]
        key, b_arr = key[keep], b_arr[keep]

    squares_keys: List[np.ndarray] = []
    n_squares = 0
    if key.shape[0]:
        order = np.lexsort((b_arr, key))
        key_s = key[order]
        b_s = b_arr[order]
        uniq_key, gstart, gcount = np.unique(key_s, return_index=True, return_counts=True)
        for s in np.unique(gcount):
            if s < 2:
                continue
            sel = gcount == s
            keys_g = uniq_key[sel]
            members = b_s[gstart[sel][:, None] + np.arange(s)[None, :]]
            ii, jj = np.triu_indices(int(s), 1)
            bb = members[:, ii]
            dd = members[:, jj]
            mpid = _pair_ids(bb.ravel(), dd.ravel(), n)
            kpid = np.repeat(keys_g, ii.shape[0])
            keep = kpid < mpid
            if induced:
                keep &= ~edge_mask[mpid]
            us, vs = kpid[keep], mpid[keep]
            if induced:
                n_squares += int(us.shape[0])
                squares_keys.append(us)
            for lo in range(0, us.shape[0], _CHUNK):
                _uf_unite(parent, size, us[lo:lo + _CHUNK], vs[lo:lo + _CHUNK])

    if induced:
        universe = np.flatnonzero(~edge_mask).astype(np.int64)
    else:
        universe = np.arange(total, dtype=np.int64)

    if universe.shape[0] == 0:
        empty64 = np.zeros(0, dtype=np.int64)
        return ComponentLabeling(
            n, variant, universe, empty64, empty64.copy(), empty64.copy(),
            empty64.copy() if induced else None,
        )

    roots = _uf_roots(parent, universe)
    distinct_roots, first_idx, inverse = np.unique(roots, return_index=True, return_inverse=True)
    # canonical component order: ascending minimum pair id (= first occurrence,
    # since universe is ascending)
    min_pid = universe[first_idx]
    perm = np.argsort(min_pid)
    relabel = np.empty_like(perm)
    relabel[perm] = np.arange(perm.shape[0])
    comp_index = relabel[inverse].astype(np.int64)
    k = distinct_roots.shape[0]

    comp_order = np.bincount(comp_index, minlength=k).astype(np.int64)

    # supports: distinct (component, endpoint) incidences; singleton components
    # always have support exactly 2, so only larger ones need the scatter pass
    comp_support_size = np.full(k, 2, dtype=np.int64)
    multi = comp_order[comp_index] >= 2
    if multi.any():
        row_starts = np.arange(n, dtype=np.int64) * (2 * n - np.arange(n, dtype=np.int64) - 1) // 2
        pids_m = universe[multi]
        cidx_m = comp_index[multi]
        us = np.searchsorted(row_starts, pids_m, side="right") - 1
        vs = pids_m - row_starts[us] + us + 1
        inc = np.unique(np.concatenate([cidx_m * n + us, cidx_m * n + vs]))
        sizes = np.bincount(inc // n, minlength=k).astype(np.int64)
        touched = sizes > 0
        comp_support_size[touched] = sizes[touched]

    comp_squares = None
    if induced:
        comp_squares = np.zeros(k, dtype=np.int64)
        if n_squares:
            sq_keys = np.concatenate(squares_keys)
            sq_roots = _uf_roots(parent, sq_keys)
            old_idx = np.searchsorted(distinct_roots, sq_roots)
            comp_squares = np.bincount(relabel[old_idx], minlength=k).astype(np.int64)

    return ComponentLabeling(n, variant, universe, comp_index, comp_order, comp_support_size, comp_squares)


# -- derived operations --------------------------------------------------------


def has_full_support_component(g: Graph, variant: Variant, labeling: Optional[ComponentLabeling] = None) -> bool:
    """True iff some component of the auxiliary graph covers every vertex of g."""
    lab = labeling if labeling is not None else square_components(g, variant)
    return lab.has_full_support()


def largest_support_size(g: Graph, variant: Variant, labeling: Optional[ComponentLabeling] = None) -> int:
    """Maximum support size over components; 0 when the auxiliary graph is empty."""
    if g.n < 2:
        raise ValueError("largest_support_size requires n >= 2")
    lab = labeling if labeling is not None else square_components(g, variant)
    return lab.largest_support_size()


def count_induced_squares(g: Graph, labeling: Optional[ComponentLabeling] = None) -> int:
    """Number of 4-subsets of vertices inducing a 4-cycle."""
    lab = labeling if labeling is not None else square_components(g, Variant.INDUCED)
    if lab.comp_squares is None:
        raise ValueError("labeling must use the induced variant")
    return int(lab.comp_squares.sum())


def squares_in_large_components(g: Graph, M: int, labeling: Optional[ComponentLabeling] = None) -> int:
    """Induced squares whose diagonals lie in components of order >= M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    lab = labeling if labeling is not None else square_components(g, Variant.INDUCED)
    return lab.squares_in_components_of_order(M)


@dataclass(frozen=True)
class CfsWitness:
    clique: Tuple[int, ...]  # peeled universal vertices, original labels
    component_id: Optional[int]  # component of the peeled graph, None if it is empty
    support: Tuple[int, ...]  # support of that component, original labels


def cfs_witness(g: Graph) -> Optional[CfsWitness]:
    """Witness that g is a clique joined with a graph whose square-graph has a
    component covering all its vertices; None when g is not of this form."""
    clique = universal_vertices(g)
    rest = [v for v in range(g.n) if v not in set(clique)]
    if not rest:
        return CfsWitness(clique=tuple(clique), component_id=None, support=())
    if clique:
        sub, index = induced_subgraph(g, rest)
        back = {new: old for old, new in index.items()}
    else:
        sub, back = g, {v: v for v in rest}
    lab = square_components(sub, Variant.INDUCED)
    sizes = lab.comp_support_size
    if sizes.shape[0] == 0 or int(sizes.max()) != sub.n:
        return None
    cid = int(np.flatnonzero(sizes == sub.n)[0])
    support = tuple(sorted(back[v] for v in bits_to_list(lab.support_bits(cid))))
    return CfsWitness(clique=tuple(clique), component_id=cid, support=support)


def is_cfs(g: Graph) -> bool:
    """True iff g = (clique of universal vertices) joined with a graph whose
    square-graph has a full-support component (trivially true for complete g)."""
    return cfs_witness(g) is not None


def find_connecting_triples(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    S: Iterable[int],
) -> List[Tuple[int, int, int]]:
    """Triples (a, b, s) from A x B x S such that both endpoints of the a-pair
    and of the b-pair are adjacent to both endpoints of the s-pair.

    Each returned triple certifies that the a-pair and b-pair lie in the same
    component of the induced square-graph: both form induced squares with the
    s-pair as the other diagonal.
    """
    a_set, b_set, s_set = set(A), set(B), set(S)
    if a_set & b_set or a_set & s_set or b_set & s_set:
        raise ValueError("A, B, S must be pairwise disjoint")
    for name, pids in (("A", a_set), ("B", b_set), ("S", s_set)):
        for pid in pids:
            u, v = pair_from_index(pid, g.n)
            if g.has_edge(u, v):
                raise ValueError(f"{name} contains the edge ({u}, {v}); pairs must be non-edges")

    def endpoints_mask(pid: int) -> int:
        u, v = pair_from_index(pid, g.n)
        return (1 << u) | (1 << v)

    out: List[Tuple[int, int, int]] = []
    a_masks = [(pid, endpoints_mask(pid)) for pid in sorted(a_set)]
    b_masks = [(pid, endpoints_mask(pid)) for pid in sorted(b_set)]
    for s_pid in sorted(s_set):
        z1, z2 = pair_from_index(s_pid, g.n)
        common = g.neighbors_bits(z1) & g.neighbors_bits(z2)
        a_ok = [pid for pid, m in a_masks if m & common == m]
        b_ok = [pid for pid, m in b_masks if m & common == m]
        out.extend((a, b, s_pid) for a in a_ok for b in b_ok)
    out.sort()
    return out

"""Exploration processes over pair space for component bounds.

Two reference processes:

- explore_subcritical walks the relaxed pair-adjacency from an arbitrary
  seed pair, bookkeeping discovered vertices/pairs, an explored edge set,
  and an epoch counter that charges hidden edges found during
  reconciliation phases. Its guarantee: on an extinction stop the true
  relaxed square-component of the seed is contained in the discovered
  pair set (check_superset tests exactly this).

- explore_supercritical grows from an induced 4-cycle through non-edge
  pairs only; everything it reaches stays inside the induced
  square-component of the starting diagonals.

Both maintain a per-step invariant on active pairs, asserted inside the
loop: subcritical active pairs have exactly 0 or 2 common neighbors in
the explored graph; supercritical active pairs have at least 2 common
neighbors among discovered vertices in the host graph.

Two bookkeeping rules are deliberate choices where naive alternatives
break the invariants on small reachable instances: when a reconciliation
phase uncovers hidden edges, the discovered-pair set is topped up to all
pairs of discovered vertices; and degree-2 absorption does not push the
absorbed vertices' edges into the explored edge set (they are charged to
a later reconciliation instead).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .graph import Graph, VertexPair, bits_to_list, pair_from_index, pair_index
from .squares import Variant, square_components

__all__ = [
    "ExplorationVariant",
    "StopReason",
    "ExplorationConfig",
    "ExplorationState",
    "explore_subcritical",
    "explore_supercritical",
    "check_superset",
]


class ExplorationVariant(enum.Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"


class StopReason(enum.Enum):
    LARGE_STOP = "large_stop"
    EXCEPTIONAL_STOP = "exceptional_stop"
    EXTINCTION_STOP = "extinction_stop"


@dataclass(frozen=True)
class ExplorationConfig:
    """Caps for an exploration run.

    large_cap bounds |D| (subcritical, stop once |D| >= cap) or |R|+|A|
    (supercritical, stop once the sum exceeds cap); None resolves to n+1
    for subcritical (never reachable, effectively uncapped) and
    ceil((ln n)^4) for supercritical. epoch_cap bounds the hidden-edge
    budget (subcritical only).
    """

    variant: ExplorationVariant
    large_cap: Optional[int] = None
    epoch_cap: int = 5

    def __post_init__(self) -> None:
        if self.epoch_cap < 1:
            raise ValueError(f"epoch_cap must be >= 1, got {self.epoch_cap}")
        if self.large_cap is not None:
            floor = 4 if self.variant is ExplorationVariant.SUBCRITICAL else 1
            if self.large_cap < floor:
                raise ValueError(
                    f"large_cap must be >= {floor} for {self.variant.value}, got {self.large_cap}"
                )

    def resolved_large_cap(self, n: int) -> int:
        if self.large_cap is not None:
            return self.large_cap
        if self.variant is ExplorationVariant.SUBCRITICAL:
            return max(4, n + 1)
        return max(1, math.ceil(math.log(max(n, 2)) ** 4))


@dataclass(frozen=True)
class ExplorationState:
    """Final snapshot of an exploration.

    pairs is the discovered-pair set S_T (subcritical) or the reached set
    R_T union the still-active pairs (supercritical). explored_edges and
    epoch are None for the supercritical variant.
    """

    variant: ExplorationVariant
    discovered: Tuple[int, ...]
    active: Tuple[VertexPair, ...]
    pairs: FrozenSet[VertexPair]
    explored_edges: Optional[FrozenSet[VertexPair]]
    epoch: Optional[int]
    t: int


def _pair_key(pos: Dict[int, int], pair: VertexPair) -> Tuple[int, int]:
    i, j = pos[pair.u], pos[pair.v]
    return (i, j) if i < j else (j, i)


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class _SubcriticalRun:
    def __init__(self, g: Graph, start: VertexPair, cfg: ExplorationConfig):
        if not (0 <= start.u < g.n and 0 <= start.v < g.n):
            raise ValueError(f"start pair {start} out of range for n={g.n}")
        self.g = g
        self.cap = cfg.resolved_large_cap(g.n)
        self.epoch_cap = cfg.epoch_cap
        self.discovered: List[int] = [start.u, start.v]
        self.pos: Dict[int, int] = {start.u: 0, start.v: 1}
        self.d_mask = _mask(self.discovered)
        self.active: set = {start}
        self.s_pairs: set = {start}
        self.e_adj: Dict[int, int] = {start.u: 0, start.v: 0}
        self.e_count = 0
        self.epoch = 0
        self.t = 0
        self.trace_sink: Optional[List[dict]] = None

    # -- explored-graph helpers -------------------------------------------

    def _explored_common(self, pair: VertexPair) -> int:
        return self.e_adj.get(pair.u, 0) & self.e_adj.get(pair.v, 0)

    def _assert_star(self, pairs) -> None:
        for pair in pairs:
            c = bin(self._explored_common(pair)).count("1")
            assert c in (0, 2), f"active pair {pair} has {c} explored common neighbors"

    def _edges_within_d(self) -> int:
        return sum(
            bin(self.g.neighbors_bits(v) & self.d_mask).count("1")
            for v in self.discovered
        ) // 2

    def _reconcile_edges(self) -> None:
        """Set the explored edge set to every host-graph edge within D."""
        for v in self.discovered:
            self.e_adj[v] = self.g.neighbors_bits(v) & self.d_mask
        self.e_count = self._edges_within_d()

    def _absorb(self, vertices: List[int]) -> None:
        for z in vertices:
            self.pos[z] = len(self.discovered)
            self.discovered.append(z)
            self.d_mask |= 1 << z
            self.e_adj.setdefault(z, 0)

    def all_discovered_pairs(self) -> set:
        return {
            VertexPair.of(u, v)
            for i, u in enumerate(self.discovered)
            for v in self.discovered[i + 1 :]
        }

    def first_active(self) -> VertexPair:
        return min(self.active, key=lambda pair: _pair_key(self.pos, pair))

    # -- the three-step loop ----------------------------------------------

    def run(self, trace_sink: Optional[List[dict]] = None) -> Tuple[StopReason, ExplorationState]:
        self.trace_sink = trace_sink
        while True:
            self._assert_star(self.active)
            if trace_sink is not None:
                trace_sink.append(
                    {
                        "t": self.t,
                        "discovered": len(self.discovered),
                        "active": len(self.active),
                        "pairs": len(self.s_pairs),
                        "epoch": self.epoch,
                    }
                )
            if len(self.discovered) >= self.cap:
                return self._stop(StopReason.LARGE_STOP)
            if self.active:
                self._expand()
            else:
                outcome = self._reconcile_phase()
                if outcome is not None:
                    return self._stop(outcome)
            self.t += 1

    def _expand(self) -> None:
        pair = self.first_active()
        x, y = pair
        fresh_bits = (
            self.g.neighbors_bits(x) & self.g.neighbors_bits(y) & ~self.d_mask
        )
        fresh = bits_to_list(fresh_bits)
        joint = bits_to_list(self._explored_common(pair))
        assert len(joint) in (0, 2)
        self._absorb(fresh)
        cluster = joint + fresh
        new_pairs = {
            VertexPair.of(u, v)
            for i, u in enumerate(cluster)
            for v in cluster[i + 1 :]
        }
        drop = {pair}
        if len(joint) == 2:
            drop.add(VertexPair.of(joint[0], joint[1]))
        self.active = (self.active | new_pairs) - drop
        for z in fresh:
            for w in (x, y):
                self.e_adj[z] |= 1 << w
                self.e_adj[w] |= 1 << z
            self.e_count += 2
        self.s_pairs |= self.active
        self._assert_star(new_pairs - drop)

    def _reconcile_phase(self) -> Optional[StopReason]:
        hidden = self._edges_within_d() - self.e_count
        event = None
        if self.trace_sink is not None and self.trace_sink:
            event = {"hidden": hidden, "heavy": 0, "light": 0}
            self.trace_sink[-1]["reconcile"] = event
        if hidden == 0:
            return StopReason.EXTINCTION_STOP
        if self.epoch + hidden >= self.epoch_cap:
            return StopReason.EXCEPTIONAL_STOP
        self.epoch += hidden
        self._reconcile_edges()
        # Hidden edges may join previously separate discoveries; every pair
        # of discovered vertices counts as discovered from here on.
        self.s_pairs |= self.all_discovered_pairs()

        while True:  # absorb high-degree outsiders, re-checking the budget
            heavy = [
                z
                for z in range(self.g.n)
                if not (self.d_mask >> z) & 1
                and bin(self.g.neighbors_bits(z) & self.d_mask).count("1") >= 3
            ]
            if not heavy:
                break
            if self.epoch + len(heavy) > self.epoch_cap:
                return StopReason.EXCEPTIONAL_STOP
            self._absorb(heavy)
            self._reconcile_edges()
            self.s_pairs |= self.all_discovered_pairs()
            self.epoch += len(heavy)
            if event is not None:
                event["heavy"] += len(heavy)

        degree_two = [
            z
            for z in range(self.g.n)
            if not (self.d_mask >> z) & 1
            and bin(self.g.neighbors_bits(z) & self.d_mask).count("1") >= 2
        ]
        for z in degree_two:
            assert bin(self.g.neighbors_bits(z) & self.d_mask).count("1") == 2
        old = list(self.discovered)
        self._absorb(degree_two)
        # Their edges stay unexplored until the next reconciliation; adding
        # them now would let an active pair see exactly one common neighbor.
        new_active = {
            VertexPair.of(z, u)
            for z in degree_two
            for u in old + [w for w in degree_two if w != z]
            if z != u
        }
        self.active = set(new_active)
        self.s_pairs |= self.active
        if event is not None:
            event["light"] = len(degree_two)
        return None

    def _stop(self, reason: StopReason) -> Tuple[StopReason, ExplorationState]:
        edges = frozenset(
            VertexPair.of(u, v)
            for u in self.e_adj
            for v in bits_to_list(self.e_adj[u])
            if u < v
        )
        ordered_active = tuple(
            sorted(self.active, key=lambda pair: _pair_key(self.pos, pair))
        )
        state = ExplorationState(
            variant=ExplorationVariant.SUBCRITICAL,
            discovered=tuple(self.discovered),
            active=ordered_active,
            pairs=frozenset(self.s_pairs),
            explored_edges=edges,
            epoch=self.epoch,
            t=self.t,
        )
        return reason, state


def explore_subcritical(
    g: Graph,
    start: VertexPair,
    cfg: ExplorationConfig,
    trace_sink: Optional[List[dict]] = None,
) -> Tuple[StopReason, ExplorationState]:
    """Run the seeded pair exploration to one of its three stops.

    The start may be an edge or a non-edge. On an extinction stop the
    final pair set contains the entire relaxed square-component of the
    start pair.
    """
    if cfg.variant is not ExplorationVariant.SUBCRITICAL:
        raise ValueError("config variant must be SUBCRITICAL")
    return _SubcriticalRun(g, start, cfg).run(trace_sink)


def explore_supercritical(
    g: Graph,
    start: Tuple[int, int, int, int],
    cfg: ExplorationConfig,
    trace_sink: Optional[List[dict]] = None,
) -> Tuple[StopReason, FrozenSet[VertexPair]]:
    """Grow non-edge pairs from an induced 4-cycle (v1, v2, v3, v4).

    Cycle edges are v1v2, v2v3, v3v4, v4v1; the diagonals v1v3 and v2v4
    must be non-edges and seed the active set. Returns the accumulated
    reached-or-active pairs, a subset of the induced square-component of
    the diagonals.
    """
    if cfg.variant is not ExplorationVariant.SUPERCRITICAL:
        raise ValueError("config variant must be SUPERCRITICAL")
    v1, v2, v3, v4 = start
    quad = (v1, v2, v3, v4)
    if len(set(quad)) != 4 or not all(0 <= v < g.n for v in quad):
        raise ValueError(f"start {start} is not four distinct vertices of the graph")
    cycle = [(v1, v2), (v2, v3), (v3, v4), (v4, v1)]
    if not all(g.has_edge(u, v) for u, v in cycle):
        raise ValueError(f"start {start} is missing a cycle edge")
    if g.has_edge(v1, v3) or g.has_edge(v2, v4):
        raise ValueError(f"start {start} has a chord; the 4-cycle must be induced")

    cap = cfg.resolved_large_cap(g.n)
    discovered: List[int] = [v1, v2, v3, v4]
    pos = {v: i for i, v in enumerate(discovered)}
    d_mask = _mask(discovered)
    active: set = {VertexPair.of(v1, v3), VertexPair.of(v2, v4)}
    reached: set = set()
    t = 0

    def assert_star(pairs) -> None:
        for pair in pairs:
            common = g.neighbors_bits(pair.u) & g.neighbors_bits(pair.v) & d_mask
            c = bin(common).count("1")
            assert c >= 2, f"active pair {pair} has {c} common neighbors among discovered"

    while True:
        assert_star(active)
        if trace_sink is not None:
            trace_sink.append(
                {
                    "t": t,
                    "discovered": len(discovered),
                    "active": len(active),
                    "pairs": len(reached) + len(active),
                }
            )
        if len(reached) + len(active) > cap:
            return StopReason.LARGE_STOP, frozenset(reached | active)
        if not active:
            return StopReason.EXTINCTION_STOP, frozenset(reached)
        pair = min(active, key=lambda q: _pair_key(pos, q))
        x, y = pair
        joint_bits = g.neighbors_bits(x) & g.neighbors_bits(y)
        fresh = bits_to_list(joint_bits & ~d_mask)
        joint_in_d = bits_to_list(joint_bits & d_mask)
        assert len(joint_in_d) >= 2
        for z in fresh:
            pos[z] = len(discovered)
            discovered.append(z)
            d_mask |= 1 << z
        joint_set = set(joint_in_d)
        cluster = joint_in_d + fresh
        new_pairs = {
            VertexPair.of(u, v)
            for i, u in enumerate(cluster)
            for v in cluster[i + 1 :]
            if not (u in joint_set and v in joint_set) and not g.has_edge(u, v)
        }
        active = (active - {pair}) | new_pairs
        reached.add(pair)
        t += 1


def check_superset(g: Graph, start: VertexPair, cfg: ExplorationConfig) -> bool:
    """On an extinction stop, is the true relaxed component inside S_T?

    Vacuously true for large and exceptional stops.
    """
    reason, state = explore_subcritical(g, start, cfg)
    if reason is not StopReason.EXTINCTION_STOP:
        return True
    labeling = square_components(g, Variant.RELAXED)
    component = labeling.component_pairs(labeling.component_id_of(start.u, start.v))
    component_pairs = {pair_from_index(int(q), g.n) for q in component}
    return component_pairs <= state.pairs

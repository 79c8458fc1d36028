"""Divergence classification for right-angled Coxeter groups.

The group attached to a finite simple graph falls into one of four
graph-detectable divergence classes:

- the complete graph (finite or near-finite group);
- a join of two non-complete graphs (linear divergence);
- otherwise, a graph with the constructed-from-squares property
  (quadratic divergence);
- otherwise, at least cubic divergence.

Join structure is read off the complement: the graph is the join of the
subgraphs induced on the complement's connected components. A side of a
candidate bipartition is non-complete exactly when it contains at least
one non-complete factor, so linearity reduces to counting non-complete
factors. Universal vertices are only peeled inside the CFS check, never
before join detection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .graph import Graph, complement, connected_components, induced_subgraph, is_complete
from .squares import cfs_witness

__all__ = [
    "DivergenceKind",
    "DivergenceClass",
    "join_factors",
    "classify_divergence",
]


class DivergenceKind(enum.Enum):
    FINITE_OR_NEAR_FINITE = "finite_or_near_finite"
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    AT_LEAST_CUBIC = "at_least_cubic"


@dataclass(frozen=True)
class DivergenceClass:
    """A divergence class together with a JSON-friendly witness.

    The witness carries the evidence for the class: the join bipartition
    for Linear, the peeled clique and full-support component for
    Quadratic, and counts certifying absence for AtLeastCubic.
    """

    kind: DivergenceKind
    witness: Dict[str, object]


def join_factors(g: Graph) -> List[List[int]]:
    """Vertex sets of the maximal join decomposition, sorted by minimum.

    These are the connected components of the complement; the graph is a
    nontrivial join exactly when there are at least two factors.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    return connected_components(complement(g))


def _factor_is_complete(g: Graph, factor: List[int]) -> bool:
    sub, _ = induced_subgraph(g, factor)
    return is_complete(sub)


def classify_divergence(g: Graph) -> DivergenceClass:
    """Classify the divergence of the right-angled Coxeter group on g.

    Complete graphs get their own class; a join of two non-complete
    graphs is Linear; otherwise CFS means Quadratic and its absence
    means AtLeastCubic.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if is_complete(g):
        return DivergenceClass(
            kind=DivergenceKind.FINITE_OR_NEAR_FINITE,
            witness={"complete_graph_on": g.n},
        )

    factors = join_factors(g)
    non_complete = [f for f in factors if not _factor_is_complete(g, f)]
    if len(non_complete) >= 2:
        # one non-complete factor anchors each side; remaining factors can
        # go anywhere, so pile them on the second side
        side_a = non_complete[0]
        side_b = sorted(v for f in factors for v in f if f != non_complete[0])
        return DivergenceClass(
            kind=DivergenceKind.LINEAR,
            witness={"join_side_a": list(side_a), "join_side_b": side_b},
        )

    witness = cfs_witness(g)
    if witness is not None:
        return DivergenceClass(
            kind=DivergenceKind.QUADRATIC,
            witness={
                "peeled_clique": list(witness.clique),
                "full_support_component": witness.component_id,
                "support": list(witness.support),
            },
        )

    return DivergenceClass(
        kind=DivergenceKind.AT_LEAST_CUBIC,
        witness={
            "join_factors": len(factors),
            "non_complete_factors": len(non_complete),
            "cfs": False,
        },
    )

"""Seeded samplers for G(n, p) and p-random bipartite graphs.

Every sampler is a pure function of (params, seed): the same inputs give a
bit-identical graph regardless of call order or process, because each trial
draws from its own PCG64 substream and consumes uniforms in a documented
order (ascending row, then ascending column within the row).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .graph import Graph

__all__ = [
    "DENSE_SAMPLING_MIN_P",
    "GnpParams",
    "SeedSpec",
    "sample_gnp",
    "sample_bipartite",
]

# Below this density geometric skipping beats drawing one uniform per pair.
DENSE_SAMPLING_MIN_P = 1e-3

_MASTER_SEED_BITS = 64


@dataclass(frozen=True)
class SeedSpec:
    """Names one trial's random substream.

    The substream is SeedSequence(master_seed, spawn_key=(trial_index,)),
    so distinct trial indices give structurally disjoint streams and the
    result does not depend on which worker or in what order trials run.
    """

    master_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed < (1 << _MASTER_SEED_BITS):
            raise ValueError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if self.trial_index < 0:
            raise ValueError(f"trial_index must be >= 0, got {self.trial_index}")

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.trial_index,)
        )

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))


@dataclass(frozen=True)
class GnpParams:
    """Parameters of the binomial random graph G(n, p).

    When built via from_lambda, p is evaluated exactly as lam / math.sqrt(n)
    (sqrt first, one IEEE division) and lam is recorded for reporting.
    """

    n: int
    p: float
    lam: float | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.lam is not None:
            expected = self.lam / math.sqrt(self.n)
            if self.p != expected:
                raise ValueError(
                    f"p={self.p!r} does not equal lam/sqrt(n)={expected!r}"
                )

    @classmethod
    def from_lambda(cls, n: int, lam: float) -> "GnpParams":
        if n < 1:
            raise ValueError(f"n must be >= 1 to derive p from lambda, got {n}")
        if lam < 0:
            raise ValueError(f"lambda must be >= 0, got {lam}")
        p = lam / math.sqrt(n)
        if p > 1.0:
            raise ValueError(f"lambda={lam} gives p={p} > 1 at n={n}")
        return cls(n=n, p=p, lam=lam)


def _skip_indices(rng: np.random.Generator, p: float, total: int) -> List[int]:
    """Indices of successes in `total` Bernoulli(p) trials, by geometric skipping.

    Consumes one uniform per success (plus one terminal miss), so it wins
    over per-pair draws only when p is small. Gap lengths use log1p, the
    standard inversion of the geometric distribution.
    """
    out: List[int] = []
    log_q = math.log1p(-p)
    idx = -1
    while True:
        u = rng.random()
        idx += int(math.log1p(-u) / log_q) + 1
        if idx >= total:
            return out
        out.append(idx)


def _pairs_from_linear(indices: List[int], n: int) -> List[Tuple[int, int]]:
    """Invert the row-major upper-triangle enumeration of vertex pairs."""
    if not indices:
        return []
    ids = np.asarray(indices, dtype=np.int64)
    rows = np.arange(n, dtype=np.int64)
    row_starts = rows * (2 * n - rows - 1) // 2
    us = np.searchsorted(row_starts, ids, side="right") - 1
    vs = ids - row_starts[us] + us + 1
    return list(zip(us.tolist(), vs.tolist()))


def sample_gnp(params: GnpParams, seed: SeedSpec) -> Graph:
    """Sample G(n, p): each of the n(n-1)/2 pairs appears independently.

    Dense regime (p >= DENSE_SAMPLING_MIN_P): one uniform per pair, rows in
    ascending order. Sparse regime: geometric skipping over the row-major
    pair enumeration.
    """
    n, p = params.n, params.p
    if p == 0.0 or n < 2:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)
    rng = seed.generator()
    if p >= DENSE_SAMPLING_MIN_P:
        mat = np.zeros((n, n), dtype=np.uint8)
        for u in range(n - 1):
            row = rng.random(n - u - 1) < p
            mat[u, u + 1 :] = row
        mat |= mat.T
        return Graph.from_bool_matrix(mat)
    total = n * (n - 1) // 2
    hits = _skip_indices(rng, p, total)
    return Graph.from_edges(n, _pairs_from_linear(hits, n))


def sample_bipartite(
    size_v: int, size_w: int, p: float, seed: SeedSpec
) -> List[Tuple[int, int]]:
    """Sample a p-random bipartite edge set between [0, size_v) and [0, size_w).

    Each of the size_v * size_w cross pairs appears independently with
    probability p. Returned pairs (i, j) index into the two sides separately
    and are sorted row-major.
    """
    if size_v < 0 or size_w < 0:
        raise ValueError(f"sizes must be >= 0, got ({size_v}, {size_w})")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if p == 0.0 or size_v == 0 or size_w == 0:
        return []
    if p == 1.0:
        return [(i, j) for i in range(size_v) for j in range(size_w)]
    rng = seed.generator()
    if p >= DENSE_SAMPLING_MIN_P:
        out: List[Tuple[int, int]] = []
        for i in range(size_v):
            row = np.nonzero(rng.random(size_w) < p)[0]
            out.extend((i, int(j)) for j in row)
        return out
    hits = _skip_indices(rng, p, size_v * size_w)
    return [(idx // size_w, idx % size_w) for idx in hits]

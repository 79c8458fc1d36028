"""Galton-Watson machinery for the square-percolation offspring law.

The offspring count is X = (Z^2 + 3Z)/2 with Z ~ Binomial(n, p^2); note
(Z+2 choose 2) - 1 is the same quantity. Criticality for p = lambda/sqrt(n)
sits at the positive root of (1/2)lambda^4 + 2 lambda^2 = 1.

Laws are finite vectors over {0..cap} plus an explicit overflow bucket, so
every downstream computation (extinction, Dwass, simulation) is an exact
finite calculation with certified truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from .random_graphs import SeedSpec

__all__ = [
    "OffspringLaw",
    "BranchingResult",
    "lambda_critical",
    "lambda_critical_numeric",
    "offspring_mean",
    "offspring_pmf",
    "suggest_cap",
    "extinction_probability",
    "simulate_gw",
    "simulate_gw_batch",
    "dwass_progeny_pmf",
    "binomial_tail",
]

_NORMALIZATION_TOL = 1e-12
_MAX_FIXED_POINT_ITERATIONS = 10**6


@dataclass(frozen=True)
class OffspringLaw:
    """Finite offspring distribution over {0..cap} with an overflow bucket.

    pmf[x] = P(X = x) for x <= cap; `overflow` holds the mass of {X > cap}.
    The vector plus overflow must sum to 1 within 1e-12.
    """

    pmf: np.ndarray
    overflow: float = 0.0

    def __post_init__(self) -> None:
        arr = np.array(self.pmf, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("pmf must be a nonempty 1-d vector")
        if (arr < 0).any() or self.overflow < 0:
            raise ValueError("probabilities must be nonnegative")
        total = float(arr.sum()) + self.overflow
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"law must sum to 1 within 1e-12, got {total!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "pmf", arr)
        support = np.nonzero(arr)[0]
        object.__setattr__(self, "_xs", support)
        object.__setattr__(self, "_ps", arr[support])

    @property
    def cap(self) -> int:
        return self.pmf.size - 1

    def mean(self) -> float:
        """Mean with overflow mass counted at x = cap (a floor on the true mean)."""
        xs: np.ndarray = self._xs  # type: ignore[attr-defined]
        ps: np.ndarray = self._ps  # type: ignore[attr-defined]
        return float(ps @ xs) + self.cap * self.overflow

    def pgf(self, theta: float) -> float:
        """Generating function f(theta); overflow contributes theta^cap."""
        xs: np.ndarray = self._xs  # type: ignore[attr-defined]
        ps: np.ndarray = self._ps  # type: ignore[attr-defined]
        value = float(ps @ np.power(theta, xs))
        if self.overflow:
            value += self.overflow * theta**self.cap
        return value


@dataclass(frozen=True)
class BranchingResult:
    """Outcome of one simulated branching process."""

    extinct: bool
    generations: int
    total_progeny: int
    truncated: bool

    def __post_init__(self) -> None:
        if self.total_progeny < 1:
            raise ValueError("total progeny counts the root, so is >= 1")
        if self.extinct and self.truncated:
            raise ValueError("an extinct process cannot also be truncated")


def lambda_critical() -> float:
    """Positive root of (1/2)lambda^4 + 2 lambda^2 = 1, in closed form."""
    return math.sqrt(math.sqrt(6.0) - 2.0)


def lambda_critical_numeric() -> float:
    """Same root found numerically; agrees with the closed form to 1e-12."""
    return float(brentq(lambda x: 0.5 * x**4 + 2.0 * x**2 - 1.0, 0.0, 1.0, xtol=1e-15))


def offspring_mean(n: int, p: float) -> float:
    """Exact E[(Z^2+3Z)/2] for Z ~ Binomial(n, p^2)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    q = p * p
    ez = n * q
    ez2 = ez * (1.0 - q) + ez * ez
    return (ez2 + 3.0 * ez) / 2.0


def _binomial_logpmf(n: int, q: float) -> np.ndarray:
    """log P(Z=k) for k = 0..n, Z ~ Binomial(n, q) with 0 < q < 1."""
    ks = np.arange(n + 1, dtype=np.float64)
    return (
        gammaln(n + 1.0)
        - gammaln(ks + 1.0)
        - gammaln(n - ks + 1.0)
        + ks * math.log(q)
        + (n - ks) * math.log1p(-q)
    )


def _offspring_value(z: int) -> int:
    return z * (z + 3) // 2


def _max_z_for_cap(cap: int) -> int:
    """Largest z with z(z+3)/2 <= cap."""
    z = int((math.sqrt(9.0 + 8.0 * cap) - 3.0) / 2.0)
    while _offspring_value(z + 1) <= cap:
        z += 1
    while z > 0 and _offspring_value(z) > cap:
        z -= 1
    return z


def offspring_pmf(n: int, p: float, cap: int) -> OffspringLaw:
    """Law of X = (Z^2+3Z)/2, Z ~ Binomial(n, p^2), truncated at cap.

    Masses at values above cap go to the overflow bucket. Binomial
    probabilities are computed in log space, so n up to 10^6 is fine.
    """
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    q = p * p
    pmf = np.zeros(cap + 1, dtype=np.float64)
    if n == 0 or q == 0.0:
        pmf[0] = 1.0
        return OffspringLaw(pmf=pmf, overflow=0.0)
    if q == 1.0:
        x = _offspring_value(n)
        if x <= cap:
            pmf[x] = 1.0
            return OffspringLaw(pmf=pmf, overflow=0.0)
        return OffspringLaw(pmf=pmf, overflow=1.0)
    probs = np.exp(_binomial_logpmf(n, q))
    z_max = min(_max_z_for_cap(cap), n)
    zs = np.arange(z_max + 1)
    pmf[zs * (zs + 3) // 2] = probs[: z_max + 1]
    overflow = float(probs[z_max + 1 :].sum())
    # Log-gamma rounding leaves the total off 1 by ~n*eps; rescale so the
    # law meets its normalization contract. Exact zeros stay exact.
    total = float(pmf.sum()) + overflow
    pmf /= total
    return OffspringLaw(pmf=pmf, overflow=overflow / total)


def suggest_cap(n: int, p: float, max_overflow: float = 1e-10) -> int:
    """Smallest truncation cap keeping overflow mass <= max_overflow.

    With max_overflow=0.0 the cap lands where the binomial tail underflows
    to exact float zero, so the resulting law has overflow == 0.0 and is
    eligible for dwass_progeny_pmf.
    """
    if max_overflow < 0:
        raise ValueError(f"max_overflow must be >= 0, got {max_overflow}")
    q = p * p
    if n == 0 or q == 0.0:
        return 0
    if q == 1.0:
        return _offspring_value(n)
    probs = np.exp(_binomial_logpmf(n, q))
    # tail_beyond[z] = P(Z > z), summed from the top so underflowed terms
    # contribute exact zeros.
    tail_beyond = np.concatenate(
        [np.cumsum(probs[::-1])[::-1][1:], np.zeros(1)]
    )
    z0 = int(np.argmax(tail_beyond <= max_overflow))
    return _offspring_value(z0)


def extinction_probability(law: OffspringLaw, tol: float = 1e-12) -> float:
    """Smallest fixed point of the generating function in [0, 1].

    Monotone fixed-point iteration from 0. When the (overflow-augmented)
    mean is <= 1 and the law is not concentrated on {1}, the smallest fixed
    point is exactly 1 and is returned directly; the concentrated-on-{1}
    law has every theta fixed, and iteration from 0 returns 0.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    total = float(law.pmf.sum()) + law.overflow
    if abs(total - 1.0) > _NORMALIZATION_TOL:
        raise ValueError(f"law must sum to 1 within 1e-12, got {total!r}")
    degenerate_one = law.cap >= 1 and law.pmf[1] == 1.0
    if not degenerate_one and law.mean() <= 1.0:
        return 1.0
    theta = 0.0
    for _ in range(_MAX_FIXED_POINT_ITERATIONS):
        advanced = law.pgf(theta)
        if advanced - theta < tol:
            return advanced
        theta = advanced
    raise ArithmeticError(
        f"fixed-point iteration did not converge within {_MAX_FIXED_POINT_ITERATIONS} steps"
    )


def _draw_counts(rng: np.random.Generator, cdf: np.ndarray, m: int, cap: int) -> np.ndarray:
    """Inverse-CDF offspring draws; overflow-region draws realize as cap."""
    counts = np.searchsorted(cdf, rng.random(m), side="right")
    return np.minimum(counts, cap)


def simulate_gw(law: OffspringLaw, max_progeny: int, seed: SeedSpec) -> BranchingResult:
    """Breadth-first realization of the branching process.

    Stops extinct when a generation is empty, or truncated once cumulative
    progeny exceeds max_progeny. Draws consume one uniform per individual
    in generation order.
    """
    if max_progeny < 1:
        raise ValueError(f"max_progeny must be >= 1, got {max_progeny}")
    rng = seed.generator()
    cdf = np.cumsum(law.pmf)
    alive, total, gen = 1, 1, 0
    while True:
        next_alive = int(_draw_counts(rng, cdf, alive, law.cap).sum())
        if next_alive == 0:
            return BranchingResult(extinct=True, generations=gen, total_progeny=total, truncated=False)
        total += next_alive
        gen += 1
        if total > max_progeny:
            return BranchingResult(extinct=False, generations=gen, total_progeny=total, truncated=True)
        alive = next_alive


def simulate_gw_batch(
    law: OffspringLaw, runs: int, max_progeny: int, seed: SeedSpec
) -> list[BranchingResult]:
    """Simulate `runs` independent processes in lockstep generations.

    Equivalent in distribution to repeated simulate_gw but draws each
    generation's offspring for all still-active runs in one vectorized pass
    (uniforms consumed by ascending run index within a generation).
    """
    if max_progeny < 1:
        raise ValueError(f"max_progeny must be >= 1, got {max_progeny}")
    if runs < 0:
        raise ValueError(f"runs must be >= 0, got {runs}")
    rng = seed.generator()
    cdf = np.cumsum(law.pmf)
    alive = np.ones(runs, dtype=np.int64)
    total = np.ones(runs, dtype=np.int64)
    generations = np.zeros(runs, dtype=np.int64)
    extinct = np.zeros(runs, dtype=bool)
    truncated = np.zeros(runs, dtype=bool)
    active = np.arange(runs)
    gen = 0
    while active.size:
        owners = np.repeat(active, alive[active])
        counts = _draw_counts(rng, cdf, owners.size, law.cap)
        next_alive = np.bincount(owners, weights=counts, minlength=runs).astype(np.int64)
        w = next_alive[active]
        died = w == 0
        extinct[active[died]] = True
        live = active[~died]
        w_live = w[~died]
        total[live] += w_live
        generations[live] = gen + 1
        over = total[live] > max_progeny
        truncated[live[over]] = True
        alive[live] = w_live
        active = live[~over]
        gen += 1
    return [
        BranchingResult(
            extinct=bool(extinct[i]),
            generations=int(generations[i]),
            total_progeny=int(total[i]),
            truncated=bool(truncated[i]),
        )
        for i in range(runs)
    ]


def dwass_progeny_pmf(law: OffspringLaw, k_max: int) -> np.ndarray:
    """P(W=k) for k = 1..k_max via Dwass: P(W=k) = (1/k) P(X_1+...+X_k = k-1).

    Requires a law with an empty overflow bucket (finite support). The
    k-fold convolutions are truncated above k_max-1, which cannot affect
    the returned entries.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if law.overflow != 0.0:
        raise ValueError("law has overflow mass; rebuild with a larger cap")
    out = np.zeros(k_max, dtype=np.float64)
    conv = np.ones(1, dtype=np.float64)
    for k in range(1, k_max + 1):
        conv = np.convolve(conv, law.pmf)[:k_max]
        if k - 1 < conv.size:
            out[k - 1] = conv[k - 1] / k
    return out


def binomial_tail(n: int, q: float, t: float) -> float:
    """Exact P(Z >= t) for Z ~ Binomial(n, q), summed in log space."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    k_min = max(0, math.ceil(t))
    if k_min > n:
        return 0.0
    if k_min == 0:
        return 1.0
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    ks = np.arange(k_min, n + 1, dtype=np.float64)
    logp = (
        gammaln(n + 1.0)
        - gammaln(ks + 1.0)
        - gammaln(n - ks + 1.0)
        + ks * math.log(q)
        + (n - ks) * math.log1p(-q)
    )
    return min(1.0, float(np.exp(logsumexp(logp))))

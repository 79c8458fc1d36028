"""Monte Carlo driver for the square-percolation phase transition.

Per-trial measurements of the induced square-graph of G(n, lambda/sqrt(n)),
lambda-sweeps with Wilson confidence intervals, bisection threshold
estimation, and the many-squares lower-bound report.

Randomness discipline: every trial's generator is derived from
(master_seed, n, lambda-bits, trial_index), so a trial's outcome depends
only on those four values. Sweep aggregation sorts by trial index before
any floating-point accumulation, which makes output bytes independent of
the order trials actually complete in (and of the worker count).
"""

from __future__ import annotations

import json
import math
import struct
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .branching import extinction_probability, lambda_critical, offspring_pmf, suggest_cap
from .random_graphs import GnpParams, SeedSpec, sample_gnp
from .squares import Variant, square_components

__all__ = [
    "TrialResult",
    "SweepRow",
    "CSV_HEADER",
    "default_min_order",
    "wilson_interval",
    "run_trial",
    "sweep",
    "write_sweep_csv",
    "estimate_threshold",
    "many_squares_check",
]

CSV_HEADER = (
    "n,lambda,p,trials,frac_full_support,mean_largest_support,"
    "sd_largest_support,wilson_ci_low,wilson_ci_high,master_seed"
)

# z for a central 95% normal interval
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class TrialResult:
    """Measurements of one sampled graph.

    lam is the lambda coefficient (p = lam/sqrt(n)); seed is the master
    seed the substream was derived from. Large components are those of
    order >= the M passed to run_trial.
    """

    n: int
    lam: float
    p: float
    seed: int
    trial_index: int
    full_support: bool
    largest_support: int
    largest_order: int
    n_components_ge_M: int
    squares_in_large: int
    wall_time_ms: float

    def __post_init__(self) -> None:
        if self.largest_support > self.n:
            raise ValueError("largest_support cannot exceed n")
        if self.full_support and self.largest_support != self.n:
            raise ValueError("full support requires largest_support == n")

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "lambda": self.lam,
            "p": self.p,
            "seed": self.seed,
            "trial_index": self.trial_index,
            "full_support": self.full_support,
            "largest_support": self.largest_support,
            "largest_order": self.largest_order,
            "n_components_ge_M": self.n_components_ge_M,
            "squares_in_large": self.squares_in_large,
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass(frozen=True)
class SweepRow:
    n: int
    lam: float
    p: float
    trials: int
    frac_full_support: float
    mean_largest_support: float
    sd_largest_support: float
    wilson_ci_low: float
    wilson_ci_high: float
    master_seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.frac_full_support <= 1.0:
            raise ValueError("frac_full_support must lie in [0, 1]")
        if not self.wilson_ci_low <= self.frac_full_support <= self.wilson_ci_high:
            raise ValueError("Wilson interval must bracket the fraction")

    def to_csv_line(self) -> str:
        return ",".join(
            str(x)
            for x in (
                self.n,
                self.lam,
                self.p,
                self.trials,
                self.frac_full_support,
                self.mean_largest_support,
                self.sd_largest_support,
                self.wilson_ci_low,
                self.wilson_ci_high,
                self.master_seed,
            )
        )


def default_min_order(n: int) -> int:
    """The large-component cutoff M = ceil((ln n)^4)."""
    return math.ceil(math.log(n) ** 4)


def _lambda_bits(lam: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(lam)))[0]


def _mix64(*parts: int) -> int:
    # splitmix64 absorption; keeps cell substreams decorrelated without
    # consuming draws from any generator
    state = 0x9E3779B97F4A7C15
    for part in parts:
        state = (state + (part & 0xFFFFFFFFFFFFFFFF)) & 0xFFFFFFFFFFFFFFFF
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        state = z ^ (z >> 31)
    return state


def cell_seed(master_seed: int, n: int, lam: float) -> int:
    """Substream family seed for one (n, lambda) cell."""
    return _mix64(master_seed, n, _lambda_bits(lam))


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> Tuple[float, float]:
    """Wilson score interval for a binomial fraction; sane at 0 and 1."""
    if trials <= 0:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes}")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
    # at phat in {0, 1} one endpoint is exactly the fraction; do not let
    # rounding pull it inside the bracket
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return (low, high)


def run_trial(
    n: int,
    lam: float,
    master_seed: int,
    trial_index: int,
    M: Optional[int] = None,
) -> TrialResult:
    """Sample G(n, lam/sqrt(n)) and measure its induced square-graph."""
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    if M is None:
        M = default_min_order(n)
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    params = GnpParams.from_lambda(n, lam)
    spec = SeedSpec(master_seed=cell_seed(master_seed, n, lam), trial_index=trial_index)
    t0 = time.perf_counter()
    g = sample_gnp(params, spec)
    labeling = square_components(g, Variant.INDUCED)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return TrialResult(
        n=n,
        lam=lam,
        p=params.p,
        seed=master_seed,
        trial_index=trial_index,
        full_support=labeling.has_full_support(),
        largest_support=labeling.largest_support_size(),
        largest_order=labeling.largest_order(),
        n_components_ge_M=int((labeling.comp_order >= M).sum()),
        squares_in_large=labeling.squares_in_components_of_order(M),
        wall_time_ms=wall_ms,
    )


def _run_trial_item(item: Tuple[int, float, int, int, Optional[int]]) -> TrialResult:
    n, lam, master_seed, trial_index, M = item
    return run_trial(n, lam, master_seed, trial_index, M)


def _aggregate_cell(
    n: int,
    lam: float,
    trials: int,
    master_seed: int,
    results: List[TrialResult],
) -> SweepRow:
    ordered = sorted(results, key=lambda r: r.trial_index)
    fulls = sum(1 for r in ordered if r.full_support)
    supports = [r.largest_support for r in ordered]
    mean_ls = math.fsum(supports) / len(supports)
    if len(supports) > 1:
        var = math.fsum((s - mean_ls) ** 2 for s in supports) / (len(supports) - 1)
        sd_ls = math.sqrt(var)
    else:
        sd_ls = 0.0
    low, high = wilson_interval(fulls, trials)
    return SweepRow(
        n=n,
        lam=lam,
        p=ordered[0].p,
        trials=trials,
        frac_full_support=fulls / trials,
        mean_largest_support=mean_ls,
        sd_largest_support=sd_ls,
        wilson_ci_low=low,
        wilson_ci_high=high,
        master_seed=master_seed,
    )


def sweep(
    n_list: Sequence[int],
    lambda_grid: Sequence[float],
    trials: int,
    master_seed: int,
    out: Optional[str] = None,
    jobs: int = 1,
    log_trials: Optional[str] = None,
    M: Optional[int] = None,
) -> List[SweepRow]:
    """One SweepRow per (n, lambda), n-major order; optionally write CSV.

    Output is a pure function of the arguments: trials are keyed by
    (n, lambda, trial_index) and aggregation order is canonical, so the
    worker count and completion order cannot change any byte.
    """
    if not n_list or not lambda_grid:
        raise ValueError("n_list and lambda_grid must be nonempty")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    items = [
        (n, lam, master_seed, t, M)
        for n in n_list
        for lam in lambda_grid
        for t in range(trials)
    ]
    if jobs == 1:
        results = [_run_trial_item(item) for item in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial_item, items, chunksize=8))

    by_cell: Dict[Tuple[int, int], List[TrialResult]] = {}
    for r in results:
        by_cell.setdefault((r.n, _lambda_bits(r.lam)), []).append(r)

    rows = [
        _aggregate_cell(n, lam, trials, master_seed, by_cell[(n, _lambda_bits(lam))])
        for n in n_list
        for lam in lambda_grid
    ]

    if log_trials is not None:
        try:
            with open(log_trials, "w", encoding="utf-8", newline="\n") as fh:
                for n in n_list:
                    for lam in lambda_grid:
                        for r in sorted(
                            by_cell[(n, _lambda_bits(lam))], key=lambda r: r.trial_index
                        ):
                            fh.write(json.dumps(r.to_json_dict()) + "\n")
        except OSError as e:
            raise OSError(f"cannot write trial log {log_trials!r}: {e}") from e
    if out is not None:
        write_sweep_csv(rows, out)
    return rows


def write_sweep_csv(rows: Iterable[SweepRow], path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in rows:
                fh.write(row.to_csv_line() + "\n")
    except OSError as e:
        raise OSError(f"cannot write sweep CSV {path!r}: {e}") from e


def _measure_frac(n: int, lam: float, trials: int, master_seed: int) -> float:
    fulls = 0
    for t in range(trials):
        fulls += run_trial(n, lam, master_seed, t).full_support
    return fulls / trials


def estimate_threshold(
    n: int,
    trials: int,
    master_seed: int,
    target: float = 0.5,
    tol: float = 0.02,
    lam_lo: float = 0.2,
    lam_hi: float = 3.0,
) -> Dict[str, object]:
    """Bisect lambda against the Monte Carlo full-support fraction.

    Returns the bracket midpoint, the endpoint measurements, and the full
    bisection trace; a bracket that fails to straddle the target or
    non-monotone measurements along the way produce a warning annotation,
    never a failure.
    """
    if n < 100:
        raise ValueError(f"n must be >= 100, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must be inside (0, 1), got {target}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")

    trace: List[Dict[str, object]] = []

    def measured(lam: float) -> float:
        frac = _measure_frac(n, lam, trials, master_seed)
        trace.append({"lambda": lam, "frac_full_support": frac, "trials": trials})
        return frac

    lo, hi = lam_lo, lam_hi
    f_lo, f_hi = measured(lo), measured(hi)
    warnings: List[str] = []
    if not (f_lo <= target <= f_hi):
        warnings.append(
            f"bracket does not straddle target: frac({lo})={f_lo}, frac({hi})={f_hi}"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if measured(mid) < target:
            lo = mid
        else:
            hi = mid
    by_lambda = sorted(trace, key=lambda e: e["lambda"])
    if any(
        a["frac_full_support"] > b["frac_full_support"]
        for a, b in zip(by_lambda, by_lambda[1:])
    ):
        warnings.append("measurements are not monotone in lambda (Monte Carlo noise)")
    return {
        "n": n,
        "trials": trials,
        "master_seed": master_seed,
        "target": target,
        "tol": tol,
        "lambda_hat": (lo + hi) / 2.0,
        "bracket": [lo, hi],
        "bracket_measurements": {"lo": f_lo, "hi": f_hi},
        "trace": trace,
        "warning": "; ".join(warnings) if warnings else None,
    }


def many_squares_check(
    n: int,
    lam: float,
    trials: int,
    master_seed: int,
) -> Dict[str, object]:
    """Per-trial squares-in-large-components vs the analytic lower bound.

    The bound is 3 p^4 (1-p)^2 C(n,4) (1-theta_e) with theta_e the
    extinction probability of the matching offspring law; the asymptotic
    statement is a ratio >= 1, so the report carries per-trial ratios for
    the caller to threshold.
    """
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if lam <= lambda_critical():
        raise ValueError(
            f"many-squares check requires lambda > lambda_c = {lambda_critical()}, got {lam}"
        )
    p = GnpParams.from_lambda(n, lam).p
    theta = extinction_probability(offspring_pmf(n, p, suggest_cap(n, p)))
    bound = 3.0 * p**4 * (1.0 - p) ** 2 * math.comb(n, 4) * (1.0 - theta)
    M = default_min_order(n)
    trial_reports = []
    for t in range(trials):
        r = run_trial(n, lam, master_seed, t, M)
        ratio = (r.squares_in_large / bound) if bound > 0 else math.inf
        trial_reports.append(
            {
                "trial_index": t,
                "squares_in_large": r.squares_in_large,
                "n_components_ge_M": r.n_components_ge_M,
                "ratio": ratio,
            }
        )
    return {
        "n": n,
        "lambda": lam,
        "p": p,
        "theta_e": theta,
        "analytic_lower_bound": bound,
        "M": M,
        "trials": trial_reports,
    }

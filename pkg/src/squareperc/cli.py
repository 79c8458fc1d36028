"""Command-line interface.

Subcommands mirror the library layers: gen (random graphs), components
(square-graph analysis), branching (sim / extinction / dwass / lambda-c),
explore (the two pair-space processes), classify (divergence of the
right-angled Coxeter group), and the Monte Carlo harness (sweep,
threshold, many-squares).

Exit codes: 0 success, 2 argument errors (including semantically bad
values), 1 runtime failures such as unreadable input or malformed
edge lists.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

from .branching import (
    dwass_progeny_pmf,
    extinction_probability,
    lambda_critical,
    offspring_pmf,
    simulate_gw_batch,
    suggest_cap,
)
from .exploration import (
    ExplorationConfig,
    ExplorationVariant,
    explore_subcritical,
    explore_supercritical,
)
from .graph import EdgeListParseError, Graph, VertexPair, from_edge_list, to_edge_list
from .harness import estimate_threshold, many_squares_check, sweep
from .racg import classify_divergence
from .random_graphs import GnpParams, SeedSpec, sample_gnp
from .squares import Variant, square_components

__all__ = ["main"]


def _read_graph(path: Optional[str]) -> Graph:
    if path is None:
        return from_edge_list(sys.stdin.read())
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return from_edge_list(fh.read())
    except OSError as e:
        raise EdgeListParseError(f"cannot read {path!r}: {e}") from e


def _sampled_graph(n: int, lam: float, seed: int, trial: int) -> Graph:
    return sample_gnp(GnpParams.from_lambda(n, lam), SeedSpec(master_seed=seed, trial_index=trial))


def _graph_from_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> Graph:
    if args.input is not None:
        if args.n is not None or args.lam is not None:
            parser.error("--input excludes --n/--lambda")
        return _read_graph(args.input)
    if args.n is None or args.lam is None:
        parser.error("either --input or both --n and --lambda are required")
    return _sampled_graph(args.n, args.lam, args.seed, args.trial)


def _law_from(n: int, lam: float, exact_overflow: bool = False):
    p = GnpParams.from_lambda(n, lam).p
    cap = suggest_cap(n, p, 0.0 if exact_overflow else 1e-10)
    return offspring_pmf(n, p, cap)


def _parse_lambda_grid(text: str) -> List[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ValueError(f"grid step must be > 0, got {step}")
        out, i = [], 0
        while True:
            val = start + i * step
            if val > stop + step * 1e-9:
                break
            out.append(val)
            i += 1
        if not out:
            raise ValueError(f"grid {text!r} is empty")
        return out
    return [float(x) for x in text.split(",") if x != ""]


def _parse_int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x != ""]


def _parse_start(text: str) -> List[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError as e:
        raise ValueError(f"--start must be comma-separated integers, got {text!r}") from e
    if len(vals) not in (2, 4):
        raise ValueError(f"--start takes 2 vertices (subcritical) or 4 (supercritical), got {len(vals)}")
    return vals


def _emit(obj: object) -> None:
    print(json.dumps(obj))


# -- subcommand handlers ----------------------------------------------------


def _cmd_gen(parser, args) -> int:
    if (args.p is None) == (args.lam is None):
        parser.error("exactly one of --p or --lambda is required")
    if args.p is not None:
        params = GnpParams(n=args.n, p=args.p)
    else:
        params = GnpParams.from_lambda(args.n, args.lam)
    g = sample_gnp(params, SeedSpec(master_seed=args.seed, trial_index=args.trial))
    text = to_edge_list(g)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def _cmd_components(parser, args) -> int:
    g = _read_graph(args.input)
    variant = Variant.INDUCED if args.variant == "induced" else Variant.RELAXED
    labeling = square_components(g, variant)
    shown = 0
    for s in labeling.summaries(min_order=args.min_order, with_support=False):
        _emit(
            {
                "id": s.id,
                "order": s.order,
                "support_size": s.support_size,
                "full_support": s.full_support,
            }
        )
        shown += 1
    _emit(
        {
            "summary": {
                "n": g.n,
                "variant": variant.value,
                "n_components": labeling.n_components,
                "shown": shown,
                "min_order": args.min_order,
                "largest_order": labeling.largest_order(),
                "largest_support": labeling.largest_support_size(),
                "has_full_support": labeling.has_full_support(),
            }
        }
    )
    return 0


def _cmd_branching(parser, args) -> int:
    if args.branching_cmd == "lambda-c":
        _emit({"lambda_c": lambda_critical()})
        return 0
    if args.branching_cmd == "sim":
        law = _law_from(args.n, args.lam)
        results = simulate_gw_batch(
            law, args.trials, args.max_progeny, SeedSpec(master_seed=args.seed, trial_index=0)
        )
        _emit(
            {
                "n": args.n,
                "lambda": args.lam,
                "trials": args.trials,
                "max_progeny": args.max_progeny,
                "totals": [r.total_progeny for r in results],
                "extinct": sum(r.extinct for r in results),
                "truncated": sum(r.truncated for r in results),
            }
        )
        return 0
    if args.branching_cmd == "extinction":
        law = _law_from(args.n, args.lam)
        theta = extinction_probability(law, tol=args.tol)
        _emit({"n": args.n, "lambda": args.lam, "tol": args.tol, "theta_e": theta})
        return 0
    if args.branching_cmd == "dwass":
        law = _law_from(args.n, args.lam, exact_overflow=True)
        pmf = dwass_progeny_pmf(law, args.kmax)
        _emit(
            {
                "n": args.n,
                "lambda": args.lam,
                "k": list(range(1, args.kmax + 1)),
                "pmf": [float(x) for x in pmf],
            }
        )
        return 0
    parser.error("unknown branching subcommand")
    return 2


def _cmd_explore(parser, args) -> int:
    g = _graph_from_args(parser, args)
    start = _parse_start(args.start)
    trace: Optional[List[dict]] = [] if args.trace else None
    if args.variant == "subcritical":
        if len(start) != 2:
            parser.error("subcritical exploration takes --start u,v")
        cfg = ExplorationConfig(
            variant=ExplorationVariant.SUBCRITICAL,
            large_cap=args.large_cap,
            epoch_cap=args.epoch_cap if args.epoch_cap is not None else 5,
        )
        reason, state = explore_subcritical(g, VertexPair.of(*start), cfg, trace_sink=trace)
        out = {
            "variant": "subcritical",
            "stop_reason": reason.value,
            "t": state.t,
            "discovered": list(state.discovered),
            "epoch": state.epoch,
            "n_pairs": len(state.pairs),
            "pairs": sorted([p.u, p.v] for p in state.pairs),
        }
    else:
        if len(start) != 4:
            parser.error("supercritical exploration takes --start v1,v2,v3,v4")
        if args.epoch_cap is not None:
            parser.error("--epoch-cap applies to the subcritical variant only")
        cfg = ExplorationConfig(
            variant=ExplorationVariant.SUPERCRITICAL, large_cap=args.large_cap
        )
        reason, pairs = explore_supercritical(g, tuple(start), cfg, trace_sink=trace)
        out = {
            "variant": "supercritical",
            "stop_reason": reason.value,
            "n_pairs": len(pairs),
            "pairs": sorted([p.u, p.v] for p in pairs),
        }
    if args.trace:
        out["trace"] = trace
    _emit(out)
    return 0


def _cmd_classify(parser, args) -> int:
    g = _read_graph(args.input)
    result = classify_divergence(g)
    _emit({"class": result.kind.value, "witness": result.witness})
    return 0


def _cmd_sweep(parser, args) -> int:
    n_list = _parse_int_list(args.n)
    grid = _parse_lambda_grid(args.lam)
    sweep(
        n_list,
        grid,
        trials=args.trials,
        master_seed=args.seed,
        out=args.out,
        jobs=args.jobs,
        log_trials=args.log_trials,
        M=args.min_order,
    )
    return 0


def _cmd_threshold(parser, args) -> int:
    est = estimate_threshold(
        args.n, trials=args.trials, master_seed=args.seed, target=args.target, tol=args.tol
    )
    _emit(est)
    return 0


def _cmd_many_squares(parser, args) -> int:
    _emit(many_squares_check(args.n, args.lam, trials=args.trials, master_seed=args.seed))
    return 0


# -- parser wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squareperc",
        description="Square percolation on random graphs: components, branching, exploration, divergence, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="sample G(n, p) and write the edge-list format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="p = lambda/sqrt(n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("components", help="square-graph component summary of an edge list")
    p.add_argument("--input", default=None, help="edge-list file (default: stdin)")
    p.add_argument("--variant", choices=("induced", "relaxed"), default="induced")
    p.add_argument("--min-order", type=int, default=1)

    p = sub.add_parser("branching", help="offspring-law analysis")
    bsub = p.add_subparsers(dest="branching_cmd", required=True)
    b = bsub.add_parser("sim", help="simulate total progeny")
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--trials", type=int, default=1000)
    b.add_argument("--max-progeny", type=int, default=10**6)
    b.add_argument("--seed", type=int, default=0)
    b = bsub.add_parser("extinction", help="extinction probability")
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--tol", type=float, default=1e-12)
    b = bsub.add_parser("dwass", help="exact total-progeny pmf")
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--kmax", type=int, default=50)
    bsub.add_parser("lambda-c", help="critical coefficient")

    p = sub.add_parser("explore", help="run a pair-space exploration")
    p.add_argument("--variant", choices=("subcritical", "supercritical"), required=True)
    p.add_argument("--input", default=None, help="edge-list file (default with --n/--lambda: sampled)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--start", required=True, help='"u,v" or "v1,v2,v3,v4"')
    p.add_argument("--large-cap", type=int, default=None)
    p.add_argument("--epoch-cap", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="include the per-step trace")

    p = sub.add_parser("classify", help="divergence class of the RACG on an edge list")
    p.add_argument("--input", default=None, help="edge-list file (default: stdin)")

    p = sub.add_parser("sweep", help="Monte Carlo sweep over (n, lambda) writing CSV")
    p.add_argument("--n", required=True, help="comma-separated sizes, e.g. 500,1000")
    p.add_argument("--lambda", dest="lam", required=True, help='grid "start:stop:step" or comma list')
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--log-trials", default=None, help="write per-trial JSONL here")
    p.add_argument("--min-order", type=int, default=None)

    p = sub.add_parser("threshold", help="bisect the full-support transition in lambda")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--tol", type=float, default=0.02)
    p.add_argument("--target", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("many-squares", help="squares-in-large-components vs the analytic bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "components": _cmd_components,
    "branching": _cmd_branching,
    "explore": _cmd_explore,
    "classify": _cmd_classify,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "many-squares": _cmd_many_squares,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.cmd](parser, args)
    except (EdgeListParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

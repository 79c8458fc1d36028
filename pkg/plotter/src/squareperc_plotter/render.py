"""Render phase-transition and total-progeny figures.

Inputs are the simulation package's wire formats only: the sweep CSV
(header n,lambda,p,trials,frac_full_support,mean_largest_support,
sd_largest_support,wilson_ci_low,wilson_ci_high,master_seed) and the
JSON objects printed by `branching dwass` ({"k": [...], "pmf": [...]})
and `branching sim` ({"totals": [...]}).

Figures are rendered with the Agg backend and a pinned svg hash salt, so
re-rendering identical inputs writes identical bytes (PNG embeds no
timestamps; SVG date metadata is stripped).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "squareperc-plotter"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

LAMBDA_C_DEFAULT = math.sqrt(math.sqrt(6.0) - 2.0)

SWEEP_COLUMNS = [
    "n",
    "lambda",
    "p",
    "trials",
    "frac_full_support",
    "mean_largest_support",
    "sd_largest_support",
    "wilson_ci_low",
    "wilson_ci_high",
    "master_seed",
]


class SchemaError(ValueError):
    """Input does not match the documented wire format; names what is missing."""


@dataclass(frozen=True)
class PlotSpec:
    """One rendering job.

    input_path is the sweep CSV for kind="phase" and the dwass JSON for
    kind="progeny"; progeny additionally needs sim_path. Output format
    follows the output_path extension (svg or png).
    """

    input_path: str
    output_path: str
    kind: str
    lambda_c: float = LAMBDA_C_DEFAULT
    sim_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in ("phase", "progeny"):
            raise ValueError(f"kind must be 'phase' or 'progeny', got {self.kind!r}")


def _read_sweep_csv(path: str) -> List[Dict[str, float]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, expected sweep CSV")
        missing = [c for c in SWEEP_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns: {', '.join(missing)}")
        rows = []
        for i, raw in enumerate(reader, start=2):
            try:
                rows.append(
                    {
                        "n": int(raw["n"]),
                        "lambda": float(raw["lambda"]),
                        "frac": float(raw["frac_full_support"]),
                        "lo": float(raw["wilson_ci_low"]),
                        "hi": float(raw["wilson_ci_high"]),
                    }
                )
            except (TypeError, ValueError) as e:
                raise SchemaError(f"{path}: line {i}: {e}") from e
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _save(fig, path: str) -> int:
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)
    with open(path, "rb") as fh:
        return len(fh.read())


def render_phase(spec: PlotSpec) -> Dict[str, object]:
    """Fraction-with-full-support curves per n, Wilson bands, lambda_c line."""
    rows = _read_sweep_csv(spec.input_path)
    by_n: Dict[int, List[Dict[str, float]]] = {}
    for row in rows:
        by_n.setdefault(row["n"], []).append(row)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for n in sorted(by_n):
        pts = sorted(by_n[n], key=lambda r: r["lambda"])
        lams = [r["lambda"] for r in pts]
        fracs = [r["frac"] for r in pts]
        ax.plot(lams, fracs, marker="o", markersize=3.5, label=f"n = {n}")
        ax.fill_between(lams, [r["lo"] for r in pts], [r["hi"] for r in pts], alpha=0.2)
    ax.axvline(spec.lambda_c, linestyle="--", linewidth=1.0, color="gray")
    ax.text(spec.lambda_c, 1.02, r"$\lambda_c$", ha="center", transform=ax.get_xaxis_transform())
    ax.set_xlabel(r"$\lambda$  (edge probability $\lambda/\sqrt{n}$)")
    ax.set_ylabel("fraction of trials with a full-support component")
    ax.set_ylim(-0.04, 1.09)
    ax.legend(loc="best")
    fig.tight_layout()
    size = _save(fig, spec.output_path)
    return {
        "path": spec.output_path,
        "bytes": size,
        "curves": {n: len(v) for n, v in by_n.items()},
        "lambda_c": spec.lambda_c,
    }


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return obj


def render_progeny(spec: PlotSpec) -> Dict[str, object]:
    """Simulated total-progeny histogram with exact pmf markers on top."""
    if spec.sim_path is None:
        raise ValueError("progeny rendering needs sim_path")
    dwass = _read_json(spec.input_path)
    missing = [k for k in ("k", "pmf") if k not in dwass]
    if missing:
        raise SchemaError(f"{spec.input_path}: missing keys: {', '.join(missing)}")
    ks = [int(k) for k in dwass["k"]]
    pmf = [float(x) for x in dwass["pmf"]]
    if len(ks) != len(pmf) or not ks:
        raise SchemaError(f"{spec.input_path}: k and pmf must be nonempty and aligned")

    sim = _read_json(spec.sim_path)
    if "totals" not in sim:
        raise SchemaError(f"{spec.sim_path}: missing keys: totals")
    totals = [int(t) for t in sim["totals"]]
    if not totals:
        raise SchemaError(f"{spec.sim_path}: totals is empty")

    k_hi = max(ks)
    counts: Dict[int, int] = {}
    for t in totals:
        if 1 <= t <= k_hi:
            counts[t] = counts.get(t, 0) + 1
    xs = sorted(counts)
    freqs = [counts[x] / len(totals) for x in xs]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.bar(xs, freqs, width=0.8, alpha=0.45, label=f"simulated ({len(totals)} runs)")
    ax.plot(ks, pmf, "kx", markersize=8.0, label="exact (Dwass)")
    ax.set_xlabel("total progeny W")
    ax.set_ylabel("probability")
    ax.legend(loc="best")
    fig.tight_layout()
    size = _save(fig, spec.output_path)
    return {
        "path": spec.output_path,
        "bytes": size,
        "markers": list(zip(ks, pmf)),
        "n_sim": len(totals),
    }

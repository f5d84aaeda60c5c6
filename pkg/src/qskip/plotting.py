"""Figure rendering for sweep results (headless, PNG files)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_STYLE = {
    "FIXED": {"color": "#888888", "marker": "s"},
    "QSG_SWAPOUT": {"color": "#1f77b4", "marker": "o"},
    "QSG_CONTROLLED": {"color": "#d62728", "marker": "^"},
}

_PANELS = (
    ("p_succ", "success probability", "psucc_vs_R.png"),
    ("expected_ub", "expected expensive calls", "expected_calls_vs_R.png"),
    ("efficiency", "success per expensive call", "efficiency_vs_R.png"),
    ("depth", "transpiled depth (layers)", "depth_vs_R.png"),
)


def render_report(rows, outdir: str) -> list[str]:
    """Render one PNG per metric, lines indexed by variant over R."""
    os.makedirs(outdir, exist_ok=True)
    variants = []
    for row in rows:
        if row.variant not in variants:
            variants.append(row.variant)
    paths = []
    for attr, ylabel, fname in _PANELS:
        fig, ax = plt.subplots(figsize=(5.0, 3.4), dpi=130)
        for variant in variants:
            pts = [(row.r, getattr(row, attr), row.stderr)
                   for row in rows
                   if row.variant == variant and getattr(row, attr) is not None]
            if not pts:
                continue
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            style = _STYLE.get(variant, {})
            if attr == "p_succ":
                ax.errorbar(xs, ys, yerr=[p[2] for p in pts], label=variant,
                            capsize=3, **style)
            else:
                ax.plot(xs, ys, label=variant, **style)
        ax.set_xlabel("padding depth R")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(outdir, fname)
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths

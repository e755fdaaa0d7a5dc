"""Companion figures for scenario reports.

Two files per run: per-point certification and probe residuals on a log
scale, and the minimum pinch margin of every certificate.  Rendering is
headless; the delimited output stays the canonical machine artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402

_FLOOR = 1e-18  # log-scale placeholder for exact zeros


def _residual_series(report) -> list[tuple[str, list[int], list[float], float]]:
    out = []
    for task in report.tasks:
        rows = task.get("results", ())
        idx, vals = [], []
        for r in rows:
            if r["status"] in ("certified", "ok"):
                idx.append(r["point_index"])
                vals.append(max(float(r["residual"]), _FLOOR))
        n_failed = sum(1 for r in rows if r["status"] not in ("certified", "ok"))
        if rows:
            out.append((task["label"], idx, vals, n_failed))
    return out


def render_figures(report, prefix: str) -> list[str]:
    scn = report.scenario
    tol = scn.cert_tol
    res_path = prefix + ".residuals.png"
    mar_path = prefix + ".margins.png"

    fig, ax = plt.subplots(figsize=(7, 4))
    series = _residual_series(report)
    plotted = False
    for label, idx, vals, n_failed in series:
        tag = label if not n_failed else f"{label} ({n_failed} failed)"
        if idx:
            ax.plot(idx, vals, "o", label=tag, alpha=0.8)
            plotted = True
        elif n_failed:
            ax.plot([], [], "x", label=tag)
    ax.axhline(tol, color="tab:red", ls="--", lw=1,
               label=f"tolerance {tol:g}")
    ax.set_yscale("log")
    ax.set_xlabel("point index")
    ax.set_ylabel("residual (zeros shown at floor)")
    ax.set_title(f"{scn.name}: per-point residuals")
    if series or plotted:
        ax.legend(loc="best", fontsize=8)
    if not plotted:
        ax.text(0.5, 0.5, "no located or certified points",
                ha="center", va="center", transform=ax.transAxes)
    fig.tight_layout()
    fig.savefig(res_path, dpi=110)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    idx, vals, labels = [], [], []
    k = 0
    for task in report.tasks:
        for r in task.get("results", ()):
            if r["status"] == "certified":
                idx.append(k)
                vals.append(float(r["margin_min"]))
                labels.append(f"{task['label']}[{r['point_index']}]")
                k += 1
    if vals:
        ax.bar(idx, vals, color="tab:blue")
        ax.set_xticks(idx)
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("min pinch margin")
    else:
        ax.text(0.5, 0.5, "no certificates emitted",
                ha="center", va="center", transform=ax.transAxes)
    ax.set_title(f"{scn.name}: certificate pinch margins")
    fig.tight_layout()
    fig.savefig(mar_path, dpi=110)
    plt.close(fig)
    return [res_path, mar_path]

"""Static figures written next to the tabular CLI output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed ids and no timestamps so repeated runs write identical SVG
plt.rcParams["svg.hashsalt"] = "momentum-rank"
_META = {
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None, "ModDate": None},
    ".png": {"Software": None},
}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, metadata=_META.get(path.suffix.lower()))
    plt.close(fig)
    return path


def plot_frontier(report, path):
    """Scatter of (absolute gain, relative gain) with the leaders highlighted."""
    sys = report.system
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.scatter(sys.g, sys.r, s=6, c="0.6", lw=0, label="dominated")
    leaders = sorted(report.leaders, key=lambda m: -m.gains.g)
    xs = [m.gains.g for m in leaders]
    ys = [m.gains.r for m in leaders]
    ax.step(xs, ys, where="post", c="tab:red", lw=0.8)
    ax.scatter(xs, ys, s=24, c="tab:red", label="momentum leaders", zorder=3)
    for m in leaders:
        ax.annotate(m.entity, (m.gains.g, m.gains.r), fontsize=7, xytext=(3, 3), textcoords="offset points")
    if sys.g.min() > 0:
        ax.set_xscale("log")
    if sys.r.min() > 0:
        ax.set_yscale("log")
    ax.set_xlabel("absolute gain")
    ax.set_ylabel("relative gain (%)")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def plot_intervals(report, path):
    """Dominance interval of each leader on the rank axis, leaders ordered by rank."""
    leaders = sorted(report.leaders, key=lambda m: m.rank)
    fig, ax = plt.subplots(figsize=(6.4, 0.4 * len(leaders) + 1.2))
    for y, m in enumerate(leaders):
        lo, hi = m.interval
        ax.plot([lo, hi], [y, y], c="0.4", lw=2)
        ax.scatter([lo], [y], c="tab:blue", s=18, zorder=3)
        ax.scatter([hi], [y], c="tab:green", s=18, zorder=3)
        ax.scatter([m.rank], [y], c="tab:red", s=28, zorder=4)
    ax.set_yticks(range(len(leaders)))
    ax.set_yticklabels([f"{m.entity} ({m.rank}*)" for m in leaders], fontsize=7)
    ax.set_xscale("log")
    ax.set_xlabel("rank")
    return _save(fig, path)


def plot_curves(relative, absolute, path):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if relative.points:
        ax.plot(relative.ks, relative.ranks, "o-", c="tab:blue", label="min rank with relative gain > 2^k")
    if absolute.points:
        ax.plot(absolute.ks, absolute.ranks, "s-", c="tab:orange", label="max rank with absolute gain > 2^k")
    ax.set_xlabel("k")
    ax.set_ylabel("rank")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def plot_boxstats(stats, path):
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    colors = {"absolute": "black", "relative": "tab:blue"}
    for x, s in enumerate(stats):
        lo, hi = s.inner
        c = colors.get(s.criterion, "0.3")
        ax.add_patch(plt.Rectangle((x - 0.3, lo), 0.6, max(hi - lo, 1), fill=False, ec=c))
        ax.scatter([x], [s.mean_rank], c="tab:red", marker="_", s=200, zorder=3)
        if s.outliers:
            ax.scatter([x] * len(s.outliers), [r for _, r in s.outliers], facecolors="none", edgecolors=c, s=30)
    ax.set_xticks(range(len(stats)))
    ax.set_xticklabels([f"top {s.k}\n{s.criterion[:3]}" for s in stats], fontsize=7)
    ax.set_xlim(-0.7, len(stats) - 0.3)
    top = max([s.inner[1] for s in stats] + [r for s in stats for _, r in s.outliers])
    ax.set_ylim(0.8, top * 1.3)
    ax.set_yscale("log")
    ax.set_ylabel("overall rank")
    return _save(fig, path)


def plot_histogram(hist, path):
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    ax.bar(np.arange(len(hist.counts)), hist.counts, color="0.5")
    ax.set_xticks(np.arange(len(hist.counts)))
    ax.set_xticklabels(hist.labels)
    ax.set_xlabel("frontier size")
    ax.set_ylabel("windows")
    return _save(fig, path)

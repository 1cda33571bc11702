"""Figures for orbit runs and corpus reports (matplotlib, Agg backend, stable SVG)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .maps import INF  # noqa: E402
from .scalar import embed  # noqa: E402

# fixed hash salt and no date so that repeated runs give identical files
plt.rcParams["svg.hashsalt"] = "sharedpre"
plt.rcParams["svg.fonttype"] = "none"
_META = {"Date": None, "Creator": "sharedpre"}


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    meta = _META if fmt in ("svg", "pdf") else None
    fig.savefig(path, metadata=meta)
    plt.close(fig)


def orbit_scatter(S, path, title=None, precision=53):
    """Scatter plot of the finite points of an orbit, colored by word length."""
    xs, ys, wl = [], [], []
    skipped = 0
    for p in S.points:
        if p is INF:
            skipped += 1
            continue
        z = complex(embed(p, precision).mid)
        xs.append(z.real)
        ys.append(z.imag)
        wl.append(S.word_length[p])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    sc = ax.scatter(xs, ys, c=wl, cmap="viridis", s=14)
    fig.colorbar(sc, ax=ax, label="word length")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title or f"orbit of {S.base}, depth {S.depth}, {len(S)} points")
    if skipped:
        ax.text(0.01, 0.01, "inf in orbit (not drawn)", transform=ax.transAxes, fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    return path


def chi_chart(rows, path):
    """Bar chart of orbifold Euler characteristics; rows are (name, chi as Fraction)."""
    names = [r[0] for r in rows]
    vals = [float(r[1]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    colors = ["tab:blue" if v >= 0 else "tab:red" for v in vals]
    ax.bar(range(len(vals)), vals, color=colors)
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("chi of the ramification orbifold")
    fig.tight_layout()
    _save(fig, path)
    return path


def orbit_growth(runs, path):
    """Points per word length for several orbit runs; runs are (name, OrbitSet)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, S in runs:
        counts = [0] * (S.depth + 1)
        for n in S.word_length.values():
            counts[n] += 1
        ax.plot(range(S.depth + 1), counts, marker="o", label=name)
    ax.set_xlabel("word length")
    ax.set_ylabel("new points")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
    return path

"""Figure rendering for sweep reports (headless, files only)."""

from __future__ import annotations

import math
import os
from collections import defaultdict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_g_curve(rows: Sequence[Sequence], out_path: str) -> str:
    """Profile g(q) per a value, with the stationary point marked."""
    by_a = defaultdict(list)
    for a, qv, g, q_star in rows:
        by_a[a].append((qv, g, q_star))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for a, pts in by_a.items():
        qs = [p[0] for p in pts]
        gs = [p[1] for p in pts]
        ax.plot(qs, gs, label=f"a = {a}")
        q_star = pts[0][2]
        if q_star != "":
            ax.axvline(float(q_star), linestyle=":", linewidth=0.8, color="gray")
    ax.set_xlabel("q")
    ax.set_ylabel("g(q) = a^(1/q) / q")
    ax.set_title("relaxation profile; dotted lines at q = log(1/a)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.basename(out_path)


def render_schmidt_curve(rows: Sequence[Sequence], out_path: str) -> str:
    """Rewritten bound vs C per d, normalized so the curves collapse."""
    by_d = defaultdict(list)
    for d, c_val, value, c_star in rows:
        by_d[d].append((c_val, value, c_star))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for d, pts in sorted(by_d.items()):
        c_star = pts[0][2]
        xs = [p[0] / c_star for p in pts]
        ys = [p[1] / d for p in pts]
        ax.plot(xs, ys, label=f"d = {d}")
    ax.axvline(1.0, linestyle=":", linewidth=0.8, color="gray")
    ax.set_xscale("log")
    ax.set_xlabel("C / C*")
    ax.set_ylabel("bound / d")
    ax.set_title("variance-proxy curve; minimum at C = C*")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.basename(out_path)


def render_bound_surface(rows: Sequence[Sequence], out_path: str) -> str:
    """M vs sigma2 (log-log), one line per n, one panel per d."""
    by_d = defaultdict(lambda: defaultdict(list))
    for n, d, s2_text, m_unit, *_ in rows:
        num, den = s2_text.split("/")
        by_d[d][n].append((int(num) / int(den), m_unit))
    d_values = sorted(by_d)
    cols = min(2, len(d_values))
    rows_fig = math.ceil(len(d_values) / cols)
    fig, axes = plt.subplots(rows_fig, cols, squeeze=False,
                             figsize=(6.0 * cols, 3.6 * rows_fig))
    for idx, d in enumerate(d_values):
        ax = axes[idx // cols][idx % cols]
        for n, pts in sorted(by_d[d].items()):
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"n = {n}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("sigma2")
        ax.set_ylabel("M (unit)")
        ax.set_title(f"d = {d}")
    if d_values:
        axes[0][0].legend(fontsize="x-small")
    for idx in range(len(d_values), rows_fig * cols):
        axes[idx // cols][idx % cols].axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return os.path.basename(out_path)

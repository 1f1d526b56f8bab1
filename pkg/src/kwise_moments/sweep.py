"""Grid sweeps: delimited bound surfaces plus the curve data behind them.

Each writer emits one CSV per surface with a leading "# columns: ..."
comment line; the figure renderers in figures.py draw from the same rows.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .baselines import schmidt_find_Cstar, schmidt_rewritten
from .combinatorics import as_fraction
from .sharp_bounds import (
    BoundQuery,
    continuous_relaxation_max,
    discrete_max_bound,
    moment_bound,
    relaxation_profile,
)


@dataclass(frozen=True)
class SweepGrid:
    n_values: tuple[int, ...]
    d_values: tuple[int, ...]
    sigma2_values: tuple[Fraction, ...]
    a_values: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 16),
                                      Fraction(1, 256))
    q_points: int = 400
    c_points: int = 160


def parse_grid(spec: str) -> SweepGrid:
    """Parse a grid spec: inline JSON or a path to a JSON file.

    Keys: n (list of ints), d (list of even ints), sigma2 (list of rationals
    or {"exp_min", "exp_max", "points"} for a log2-spaced grid), and optional
    a_values / q_points / c_points for the curve surfaces.
    """
    text = spec
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"grid spec is neither a file nor valid JSON: {exc}")
    try:
        n_values = tuple(int(v) for v in obj["n"])
        d_values = tuple(int(v) for v in obj["d"])
        raw_s2 = obj["sigma2"]
    except KeyError as exc:
        raise ValueError(f"grid spec missing key {exc}")
    if isinstance(raw_s2, dict):
        lo, hi = int(raw_s2["exp_min"]), int(raw_s2["exp_max"])
        points = int(raw_s2.get("points", hi - lo + 1))
        if points < 1 or hi < lo:
            raise ValueError("sigma2 exponent range is empty")
        if points == 1:
            exponents = [Fraction(lo)]
        else:
            stepnum = hi - lo
            exponents = [Fraction(lo) + Fraction(stepnum * i, points - 1)
                         for i in range(points)]
        s2_values = tuple(_pow2(e) for e in exponents)
    else:
        s2_values = tuple(as_fraction(v) for v in raw_s2)
    if not n_values or not d_values or not s2_values:
        raise ValueError("grid spec has an empty axis")
    if any(n < 1 for n in n_values):
        raise ValueError("n values must be >= 1")
    if any(d < 2 or d % 2 for d in d_values):
        raise ValueError("d values must be even and >= 2")
    if any(not 0 < s <= 1 for s in s2_values):
        raise ValueError("sigma2 values must lie in (0, 1]")
    kwargs = {}
    if "a_values" in obj:
        kwargs["a_values"] = tuple(as_fraction(v) for v in obj["a_values"])
    if "q_points" in obj:
        kwargs["q_points"] = int(obj["q_points"])
    if "c_points" in obj:
        kwargs["c_points"] = int(obj["c_points"])
    return SweepGrid(n_values=n_values, d_values=d_values,
                     sigma2_values=s2_values, **kwargs)


def _pow2(e: Fraction) -> Fraction:
    if e.denominator == 1:
        n = e.numerator
        return Fraction(2) ** n if n >= 0 else Fraction(1, 2 ** (-n))
    # fractional exponents only occur for interpolated grids; round the value
    # to a nearby rational so downstream stays exact
    return Fraction(2.0 ** float(e)).limit_denominator(10 ** 12)


def _write_csv(path: str, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("# columns: " + ", ".join(columns) + "\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def bound_surface_rows(grid: SweepGrid) -> list[list]:
    rows = []
    for n in grid.n_values:
        for d in grid.d_values:
            for s2 in grid.sigma2_values:
                q = BoundQuery(n=n, sigma2=float(s2), d=d)
                res = moment_bound(q)
                disc = discrete_max_bound(q)
                rows.append([n, d, f"{s2.numerator}/{s2.denominator}",
                             res.value, res.regime.value, res.branch,
                             disc.value, disc.argmax,
                             continuous_relaxation_max(q)])
    return rows


def regime_boundary_rows(grid: SweepGrid) -> list[list]:
    """Variances at which each (n, d) crosses between branches."""
    rows = []
    for n in grid.n_values:
        for d in grid.d_values:
            gate = max(d / n, 2.0)
            s2_gate = d * math.exp(-gate) / n
            s2_small = d * math.exp(-float(d)) / n
            rows.append([n, d, gate,
                         s2_gate if s2_gate <= 1.0 else "",
                         s2_small if s2_small <= 1.0 else ""])
    return rows


def g_curve_rows(grid: SweepGrid) -> list[list]:
    rows = []
    for a in grid.a_values:
        af = float(a)
        if af <= 0:
            raise ValueError("a values must be positive")
        q_star = math.log(1.0 / af) if af < 1.0 else None
        q_hi = max(8.0, (2.0 * q_star if q_star else 0.0))
        q_lo = 0.25
        step = (q_hi - q_lo) / (grid.q_points - 1)
        for i in range(grid.q_points):
            qv = q_lo + step * i
            rows.append([f"{a.numerator}/{a.denominator}", qv,
                         relaxation_profile(qv, af),
                         q_star if q_star is not None else ""])
    return rows


def schmidt_curve_rows(grid: SweepGrid) -> list[list]:
    rows = []
    for d in grid.d_values:
        c_star = schmidt_find_Cstar(d)
        lo, hi = math.log(c_star / 8.0), math.log(c_star * 8.0)
        step = (hi - lo) / (grid.c_points - 1)
        for i in range(grid.c_points):
            c_val = math.exp(lo + step * i)
            rows.append([d, c_val, schmidt_rewritten(d, c_val), c_star])
    return rows


BOUND_SURFACE_COLUMNS = ["n", "d", "sigma2", "M_unit", "regime", "branch",
                         "discrete_max", "argmax_ell", "continuous_max"]
REGIME_BOUNDARY_COLUMNS = ["n", "d", "gate", "sigma2_at_gate", "sigma2_at_small"]
G_CURVE_COLUMNS = ["a", "q", "g", "q_star"]
SCHMIDT_CURVE_COLUMNS = ["d", "C", "value", "C_star"]


def run_sweep(grid: SweepGrid, out_dir: str, figures: bool = True) -> list[str]:
    """Write every surface CSV (and, unless disabled, a rendered PNG next to
    each curve CSV).  Returns the list of files written, relative to out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    surfaces = [
        ("bound_surface.csv", BOUND_SURFACE_COLUMNS, bound_surface_rows(grid)),
        ("regime_boundary.csv", REGIME_BOUNDARY_COLUMNS, regime_boundary_rows(grid)),
        ("g_curve.csv", G_CURVE_COLUMNS, g_curve_rows(grid)),
        ("schmidt_curve.csv", SCHMIDT_CURVE_COLUMNS, schmidt_curve_rows(grid)),
    ]
    written = []
    for name, columns, rows in surfaces:
        _write_csv(os.path.join(out_dir, name), columns, rows)
        written.append(name)
    if figures:
        from . import figures as fig

        written.append(fig.render_g_curve(
            g_curve_rows(grid), os.path.join(out_dir, "g_curve.png")))
        written.append(fig.render_schmidt_curve(
            schmidt_curve_rows(grid), os.path.join(out_dir, "schmidt_curve.png")))
        written.append(fig.render_bound_surface(
            bound_surface_rows(grid), os.path.join(out_dir, "bound_surface.png")))
    return written

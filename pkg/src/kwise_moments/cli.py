"""Command-line interface.

Exit codes: 0 on success, 1 when a verification suite reports failures,
2 on usage or domain errors.  stdout carries machine-readable JSON only;
diagnostics go to stderr.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__
from .baselines import BaselineQuery, compare_all, rows_to_csv
from .combinatorics import as_fraction, format_rational
from .distributions import bernoulli_p_from_sigma2
from .exact_moments import (
    dth_root_decimal,
    exact_moment_het_threepoint,
    exact_moment_iid_threepoint,
    exact_moment_symmetrized_binomial,
    to_decimal,
)
from .kwise_sim import run_simulation
from .sharp_bounds import (
    BoundQuery,
    fit_calibration,
    load_calibration,
    moment_bound,
    save_calibration,
    tail_bound,
)
from .sweep import parse_grid, run_sweep
from .verify import SUITES, run_suite


class RationalParam(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return as_fraction(str(value))
        except (ValueError, ZeroDivisionError, TypeError):
            self.fail(f"{value!r} is not a rational (use num/den or a decimal)",
                      param, ctx)


RATIONAL = RationalParam()


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _domain(check: bool, message: str) -> None:
    if not check:
        raise click.UsageError(message)


@click.group()
@click.version_option(version=__version__, prog_name="kwm")
def main():
    """Sharp moment and tail bounds for k-wise independent bounded sums."""


@main.command()
@click.option("--n", type=int, required=True, help="number of summands")
@click.option("--sigma2", type=RATIONAL, required=True,
              help="per-summand variance, rational or decimal")
@click.option("--d", "d", type=int, required=True, help="even moment order")
@click.option("--k", type=int, default=None, help="independence order (>= d)")
@click.option("--t", "t", type=RATIONAL, default=None,
              help="also report the tail bound at threshold t")
@click.option("--mode", type=click.Choice(["unit", "calibrated"]),
              default="unit", show_default=True)
def bound(n, sigma2, d, k, t, mode):
    """Closed-form moment bound (and optionally the tail bound at t)."""
    _domain(d % 2 == 0 and d >= 2, "d must be even and >= 2")
    _domain(k is None or d <= k, f"d <= k required, got d={d}, k={k}")
    _domain(n >= 1, "n must be >= 1")
    _domain(0 < sigma2 <= 1, "sigma2 must lie in (0, 1]")
    q = BoundQuery(n=n, sigma2=float(sigma2), d=d, k=k)
    cal = load_calibration() if mode == "calibrated" else None
    result = moment_bound(q, mode=mode, calibration=cal)
    out = result.to_dict()
    if t is not None:
        _domain(t > 0, "t must be positive")
        c = None if result.mode == "calibrated" else 1.0
        out["tail_at_t"] = tail_bound(q, float(t), c=c, calibration=cal)
    _emit(out)


@main.command()
@click.option("--dist", type=click.Choice(["threepoint", "het", "symbinom"]),
              required=True, help="which exact moment to evaluate")
@click.option("--n", type=int, default=None)
@click.option("--d", "d", type=int, required=True)
@click.option("--sigma2", type=RATIONAL, default=None)
@click.option("--sigma2-list", type=str, default=None,
              help="comma-separated per-summand variances (het only)")
@click.option("--p", "p", type=RATIONAL, default=None,
              help="Bernoulli parameter (symbinom only)")
@click.option("--digits", type=int, default=12, show_default=True)
def exact(dist, n, d, sigma2, sigma2_list, p, digits):
    """Exact rational moments of the reference sums."""
    _domain(d % 2 == 0 and d >= 2, "d must be even and >= 2")
    _domain(digits >= 1, "digits must be >= 1")
    if dist == "threepoint":
        _domain(n is not None and n >= 1, "threepoint requires --n >= 1")
        _domain(sigma2 is not None, "threepoint requires --sigma2")
        _domain(0 <= sigma2 <= 1, "sigma2 must lie in [0, 1]")
        value = exact_moment_iid_threepoint(n, d, sigma2)
    elif dist == "het":
        _domain(sigma2_list is not None, "het requires --sigma2-list")
        try:
            variances = [as_fraction(tok.strip())
                         for tok in sigma2_list.split(",") if tok.strip()]
        except (ValueError, ZeroDivisionError):
            raise click.UsageError(f"cannot parse --sigma2-list {sigma2_list!r}")
        _domain(len(variances) >= 1, "sigma2-list must be nonempty")
        _domain(all(0 <= v <= 1 for v in variances),
                "every variance must lie in [0, 1]")
        value = exact_moment_het_threepoint(d, variances)
    else:
        _domain(n is not None and n >= 1, "symbinom requires --n >= 1")
        _domain(p is not None, "symbinom requires --p")
        _domain(0 <= p <= Fraction(1, 2), "p must lie in [0, 1/2]")
        value = exact_moment_symmetrized_binomial(n, p, d)
    _emit({"exact": format_rational(value),
           "decimal": to_decimal(value, digits),
           "dth_root_decimal": dth_root_decimal(value, d, digits)})


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--sigma2", type=RATIONAL, required=True)
@click.option("--mu", type=RATIONAL, default=None,
              help="mean parameter for the mean-based baseline")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False),
              default=None, help="also append the row to a CSV file")
def compare(n, d, sigma2, mu, csv_path):
    """All bounds side by side; unavailable entries are absent fields."""
    _domain(d % 2 == 0 and d >= 2, "d must be even and >= 2")
    _domain(n >= 1, "n must be >= 1")
    _domain(0 < sigma2 <= 1, "sigma2 must lie in (0, 1]")
    if mu is not None:
        _domain(sigma2 <= mu <= 1, "need sigma2 <= mu <= 1")
    q = BaselineQuery(n=n, d=d, sigma2=float(sigma2),
                      mu=None if mu is None else float(mu))
    row = compare_all(q)
    if csv_path:
        rows_to_csv([row], csv_path)
    _emit(row.to_dict())


@main.command()
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--cases", type=int, default=None,
              help="case count for the randomized suites")
def verify(suite, seed, cases):
    """Run a verification suite; exit 1 if it reports failures."""
    _domain(cases is None or cases >= 1, "cases must be >= 1")
    report = run_suite(suite, seed=seed, cases=cases)
    _emit(report)
    if report["failures"]:
        sys.exit(1)


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file: {n, k, sigma2, p, trials, t_list, seed}")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
def simulate(config_path, csv_path):
    """Tail estimates for a k-wise family described by a config file."""
    import jsonschema

    with open(config_path, "r", encoding="utf-8") as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"config is not valid JSON: {exc}")
    schema = _load_schema("simulate_config")
    try:
        jsonschema.validate(config, schema)
    except jsonschema.ValidationError as exc:
        raise click.UsageError(f"config violates the schema: {exc.message}")
    try:
        rows = run_simulation(config, calibration=load_calibration())
    except ValueError as exc:
        raise click.UsageError(str(exc))
    payload = [row.to_dict() for row in rows]
    if csv_path:
        import csv as csvmod

        columns = ["t", "empirical", "trials", "wilson_halfwidth", "bound",
                   "d", "sigma2_hat", "exact"]
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csvmod.writer(fh)
            writer.writerow(columns)
            for record in payload:
                writer.writerow([record[c] for c in columns])
    _emit(payload)


@main.command()
@click.option("--grid", "grid_spec", required=True,
              help="grid spec: inline JSON or a path to a JSON file")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="render PNG figures alongside the CSV surfaces")
def sweep(grid_spec, out_dir, figures):
    """Write bound/curve surfaces as CSV (plus rendered figures) to a directory."""
    try:
        grid = parse_grid(grid_spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    written = run_sweep(grid, out_dir, figures=figures)
    _emit({"out_dir": out_dir, "written": written})


@main.command()
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="calibration.json", show_default=True)
def calibrate(out_path):
    """Refit the per-regime constants and write a fresh calibration file."""
    cal = fit_calibration()
    save_calibration(cal, out_path)
    _emit({"constants": cal.constants})


def _load_schema(name: str) -> dict:
    # canonical schemas are package data; docs/schemas mirrors them for
    # repo browsing and the tests keep the two in sync
    from importlib import resources

    ref = resources.files("kwise_moments").joinpath(f"schemas/{name}.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


if __name__ == "__main__":
    main()

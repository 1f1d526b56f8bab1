import csv
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from kwise_moments.cli import _load_schema, main
from kwise_moments.sharp_bounds import load_calibration

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture()
def runner():
    return CliRunner()


def invoke_json(runner, args, schema=None, exit_code=0):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == exit_code, result.output
    payload = json.loads(result.output)
    if schema is not None:
        jsonschema.validate(payload, _load_schema(schema))
    return payload


# ---------------------------------------------------------------- bound

def test_bound_basic(runner):
    payload = invoke_json(runner, ["bound", "--n", "100", "--sigma2", "1/4",
                                   "--d", "4"], schema="bound_result")
    assert payload["M"] == pytest.approx(10.0)
    assert payload["regime"] == "SubGaussian"
    assert payload["mode"] == "unit"


def test_bound_rational_forms_agree(runner):
    a = runner.invoke(main, ["bound", "--n", "7", "--sigma2", "1/4", "--d", "6"])
    b = runner.invoke(main, ["bound", "--n", "7", "--sigma2", "0.25", "--d", "6"])
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output


def test_bound_with_tail(runner):
    payload = invoke_json(runner, ["bound", "--n", "100", "--sigma2", "1/4",
                                   "--d", "4", "--t", "20"],
                          schema="bound_result")
    # unit mode pins c = 1: (M/t)^d = (10/20)^4
    assert payload["tail_at_t"] == pytest.approx(0.0625)


def test_bound_calibrated(runner):
    payload = invoke_json(runner, ["bound", "--n", "100", "--sigma2", "1/4",
                                   "--d", "4", "--mode", "calibrated"],
                          schema="bound_result")
    constant = load_calibration().constants["SubGaussian"]
    assert payload["mode"] == "calibrated"
    assert payload["M"] == pytest.approx(10.0 * constant)


@pytest.mark.parametrize("args", [
    ["bound", "--n", "10", "--sigma2", "1/4", "--d", "3"],
    ["bound", "--n", "10", "--sigma2", "1/4", "--d", "6", "--k", "4"],
    ["bound", "--n", "0", "--sigma2", "1/4", "--d", "4"],
    ["bound", "--n", "10", "--sigma2", "0", "--d", "4"],
    ["bound", "--n", "10", "--sigma2", "x/y", "--d", "4"],
])
def test_bound_usage_errors(runner, args):
    assert runner.invoke(main, args).exit_code == 2


# ---------------------------------------------------------------- exact

def test_exact_threepoint(runner):
    payload = invoke_json(runner, ["exact", "--dist", "threepoint", "--n", "3",
                                   "--d", "4", "--sigma2", "1/2"],
                          schema="exact_result")
    assert payload["exact"] == "6/1"
    assert float(payload["decimal"]) == pytest.approx(6.0)
    assert float(payload["dth_root_decimal"]) == pytest.approx(6 ** 0.25)


def test_exact_symbinom(runner):
    payload = invoke_json(runner, ["exact", "--dist", "symbinom", "--n", "2",
                                   "--p", "1/2", "--d", "4"],
                          schema="exact_result")
    assert payload["exact"] == "5/2"
    assert float(payload["decimal"]) == pytest.approx(2.5)


def test_exact_het(runner):
    payload = invoke_json(runner, ["exact", "--dist", "het", "--d", "4",
                                   "--sigma2-list", "1/2, 1/3"],
                          schema="exact_result")
    assert payload["exact"] == "11/6"


@pytest.mark.parametrize("args", [
    ["exact", "--dist", "het", "--d", "4"],                     # missing list
    ["exact", "--dist", "het", "--d", "4", "--sigma2-list", "1/2,junk"],
    ["exact", "--dist", "symbinom", "--n", "2", "--d", "4", "--p", "2/3"],
    ["exact", "--dist", "threepoint", "--d", "4", "--sigma2", "1/2"],  # no n
    ["exact", "--dist", "threepoint", "--n", "3", "--d", "5",
     "--sigma2", "1/2"],
])
def test_exact_usage_errors(runner, args):
    assert runner.invoke(main, args).exit_code == 2


# ---------------------------------------------------------------- compare

def test_compare_without_mu(runner):
    payload = invoke_json(runner, ["compare", "--n", "100", "--d", "4",
                                   "--sigma2", "1/4"], schema="comparison_row")
    assert "bellare" not in payload
    assert payload["ours"] == pytest.approx(10.0)
    assert payload["best"] in ("ours", "schmidt_raw", "schmidt_opt",
                               "bernstein", "rosenthal")


def test_compare_small_variance_prefers_ours(runner):
    payload = invoke_json(runner, ["compare", "--n", "1", "--d", "4",
                                   "--sigma2", "1/65536"],
                          schema="comparison_row")
    assert payload["best"] == "ours"


def test_compare_with_mu_and_csv(runner, tmp_path):
    out = tmp_path / "row.csv"
    payload = invoke_json(runner, ["compare", "--n", "100", "--d", "4",
                                   "--sigma2", "1/4", "--mu", "1/2",
                                   "--csv", str(out)],
                          schema="comparison_row")
    assert payload["bellare"] == pytest.approx(216 ** 0.5)
    with open(out, newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0][0] == "n" and len(table) == 2


def test_compare_rejects_mu_below_sigma2(runner):
    args = ["compare", "--n", "10", "--d", "4", "--sigma2", "1/2",
            "--mu", "1/4"]
    assert runner.invoke(main, args).exit_code == 2


# ---------------------------------------------------------------- verify

def test_verify_success(runner):
    payload = invoke_json(runner, ["verify", "--suite", "kwise-exact"],
                          schema="verify_report")
    assert payload["failures"] == []


def test_verify_seeded_cases(runner):
    payload = invoke_json(runner, ["verify", "--suite", "formula",
                                   "--cases", "5"], schema="verify_report")
    assert payload["cases"] == 245


def test_verify_failure_exits_one(runner, monkeypatch):
    import kwise_moments.cli as cli_mod

    def fake(name, seed=42, cases=None):
        return {"suite": "formula", "seed": seed, "cases": 1,
                "failures": [{"kind": "synthetic"}], "extremal_ratios": {}}

    monkeypatch.setattr(cli_mod, "run_suite", fake)
    result = runner.invoke(main, ["verify", "--suite", "formula"])
    assert result.exit_code == 1
    assert json.loads(result.output)["failures"]


def test_verify_unknown_suite(runner):
    assert runner.invoke(main, ["verify", "--suite", "nope"]).exit_code == 2


# ---------------------------------------------------------------- simulate

BASE_CONFIG = {"n": 5, "k": 3, "sigma2": "1/2", "p": 5, "trials": 40,
               "t_list": [0.5, 1.5], "seed": 1}


def _write_config(tmp_path, **overrides):
    config = {**BASE_CONFIG, **overrides}
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(config))
    return str(path)


def test_simulate_exhaustive(runner, tmp_path):
    path = _write_config(tmp_path, exhaustive=True)
    payload = invoke_json(runner, ["simulate", "--config", path],
                          schema="tail_estimates")
    assert [row["t"] for row in payload] == [0.5, 1.5]
    for row in payload:
        assert row["exact"] is True
        assert row["trials"] == 125
        assert row["wilson_halfwidth"] == 0.0
        assert row["sigma2_hat"] == "2/5"


def test_simulate_monte_carlo_with_csv(runner, tmp_path):
    path = _write_config(tmp_path)
    out = tmp_path / "tails.csv"
    payload = invoke_json(runner, ["simulate", "--config", path,
                                   "--csv", str(out)],
                          schema="tail_estimates")
    assert all(row["exact"] is False for row in payload)
    with open(out, newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["t", "empirical", "trials", "wilson_halfwidth",
                        "bound", "d", "sigma2_hat", "exact"]
    assert len(table) == 3


def test_simulate_schema_violation(runner, tmp_path):
    path = _write_config(tmp_path, bogus=1)
    assert runner.invoke(main, ["simulate", "--config", path]).exit_code == 2


def test_simulate_nonprime_rejected(runner, tmp_path):
    # 9 passes the schema's integer check; the family constructor catches it
    path = _write_config(tmp_path, p=9)
    assert runner.invoke(main, ["simulate", "--config", path]).exit_code == 2


def test_simulate_bad_json(runner, tmp_path):
    path = tmp_path / "sim.json"
    path.write_text("{not json")
    assert runner.invoke(main, ["simulate", "--config", str(path)]).exit_code == 2


# ---------------------------------------------------------------- sweep

TINY_GRID = ('{"n": [1, 4], "d": [2, 4], "sigma2": ["1/4", "1/16"], '
             '"q_points": 30, "c_points": 24}')


def test_sweep_no_figures(runner, tmp_path):
    out = tmp_path / "out"
    payload = invoke_json(runner, ["sweep", "--grid", TINY_GRID, "--out",
                                   str(out), "--no-figures"],
                          schema="sweep_manifest")
    assert payload["written"] == ["bound_surface.csv", "regime_boundary.csv",
                                  "g_curve.csv", "schmidt_curve.csv"]
    for name in payload["written"]:
        assert (out / name).exists()


def test_sweep_with_figures(runner, tmp_path):
    out = tmp_path / "out"
    payload = invoke_json(runner, ["sweep", "--grid", TINY_GRID, "--out",
                                   str(out)], schema="sweep_manifest")
    pngs = [name for name in payload["written"] if name.endswith(".png")]
    assert sorted(pngs) == ["bound_surface.png", "g_curve.png",
                            "schmidt_curve.png"]
    for name in pngs:
        assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_sweep_bad_grid(runner, tmp_path):
    result = runner.invoke(main, ["sweep", "--grid", '{"n": []}',
                                  "--out", str(tmp_path / "x")])
    assert result.exit_code == 2


# ---------------------------------------------------------------- calibrate

def test_calibrate_reproduces_packaged_constants(runner, tmp_path):
    out = tmp_path / "cal.json"
    payload = invoke_json(runner, ["calibrate", "--out", str(out)])
    with open(out) as fh:
        written = json.load(fh)
    jsonschema.validate(written, _load_schema("calibration"))
    packaged = load_calibration().constants
    for tag, value in packaged.items():
        assert payload["constants"][tag] == pytest.approx(value, abs=1e-12)
        assert written["constants"][tag] == pytest.approx(value, abs=1e-12)


# ---------------------------------------------------------------- hygiene

def test_packaged_calibration_validates_against_schema():
    blob = resources.files("kwise_moments").joinpath(
        "data/calibration.json").read_text(encoding="utf-8")
    jsonschema.validate(json.loads(blob), _load_schema("calibration"))


def test_docs_schemas_mirror_package_schemas():
    docs_dir = REPO_ROOT / "docs" / "schemas"
    pkg_dir = resources.files("kwise_moments").joinpath("schemas")
    docs_names = sorted(p.name for p in docs_dir.iterdir())
    pkg_names = sorted(p.name for p in pkg_dir.iterdir())
    assert docs_names == pkg_names and docs_names
    for name in docs_names:
        assert (docs_dir / name).read_bytes() \
            == pkg_dir.joinpath(name).read_bytes()


def test_console_script_output_is_deterministic():
    args = ["kwm", "exact", "--dist", "threepoint", "--n", "5", "--d", "6",
            "--sigma2", "1/3"]
    first = subprocess.run(args, capture_output=True, check=True)
    second = subprocess.run(args, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert json.loads(first.stdout.decode())["exact"]


def test_module_invocation_matches_console_script():
    args = ["exact", "--dist", "symbinom", "--n", "3", "--p", "1/4", "--d", "4"]
    script = subprocess.run(["kwm", *args], capture_output=True, check=True)
    module = subprocess.run([sys.executable, "-m", "kwise_moments.cli", *args],
                            capture_output=True, check=True)
    assert script.stdout == module.stdout

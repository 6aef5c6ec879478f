import json
import shutil
import subprocess

import numpy as np
import pytest

from usbp_dg import __version__
from usbp_dg.errors import ConfigError
from usbp_dg.harness import (
    DEFAULTS,
    Experiment,
    collect_rows,
    free_stream_residual,
    load_config,
    load_operator_bundle,
    make_config,
    read_csv,
    run,
)
from usbp_dg.harness.cli import EXIT_OK, EXIT_USAGE, main
from usbp_dg.harness.experiments import local_stability_state
from usbp_dg.operators import lgl_usbp


def test_every_experiment_has_valid_defaults():
    for exp in Experiment:
        cfg = make_config(exp)
        assert cfg.experiment is exp
        assert set(DEFAULTS[exp]) <= set(cfg.to_json()) | {"lam"}


def test_defaults_match_reference_sweeps():
    cfg = make_config("local-stability")
    assert (cfg.N, cfg.lam, cfg.J, cfg.samples) == ([3, 4, 5], [0.0, -1e-2, -1.0], [2, 4, 8, 16], 10)
    kh = make_config("kelvin-helmholtz")
    assert (kh.scheme, kh.t_end, kh.J) == ("ssp33", 15.0, [16, 64])


@pytest.mark.parametrize("overrides", [
    {"lam": [0.5]}, {"N": [1]}, {"J": [4, 2]}, {"cfl": 0.0}, {"t_end": -1.0},
    {"splitting": ["roe"]}, {"seed": -1}, {"scheme": "euler"}, {"n_geo": [5]},
    {"amplitude": 0.3}, {"samples": 0}, {"lam": ["nan"]}, {"N": [2.5]},
])
def test_invalid_overrides_rejected(overrides):
    exp = "free-stream" if "n_geo" in overrides or "amplitude" in overrides else "convergence-advection"
    with pytest.raises(ConfigError):
        make_config(exp, **overrides)


def test_two_d_needs_perfect_squares():
    with pytest.raises(ConfigError, match="perfect square"):
        make_config("kelvin-helmholtz", J=[20])


def test_config_file_and_flags(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "spectrum", "N": [5], "lambda": [-0.5], "seed": 3}))
    cfg = load_config(path, lam="-1e-3,-1")
    assert cfg.experiment is Experiment.SPECTRUM
    assert cfg.N == [5] and cfg.lam == [-1e-3, -1.0] and cfg.seed == 3
    path.write_text(json.dumps({"experiment": "spectrum", "colour": "blue"}))
    with pytest.raises(ConfigError, match="unknown field"):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json", experiment="spectrum")
    with pytest.raises(ConfigError):
        load_config()


def test_to_json_round_trips_through_config_file(tmp_path):
    cfg = make_config("free-stream", N=[3], n_geo=[2], seed=9)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_json()))
    assert load_config(path) == cfg


def test_local_stability_states_are_reproducible():
    a = local_stability_state((4, 3), 0, 3, 4, 7)
    b = local_stability_state((4, 3), 0, 3, 4, 7)
    c = local_stability_state((4, 3), 0, 3, 4, 8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.min() >= 0.1 and a.max() < 1.1


def test_free_stream_residual_dichotomy():
    # exactness degree 3 covers bilinear geometry but not degree-2 geometry
    assert free_stream_residual(5, -1.0, 1, "vlh", 16, 0.08, 8.0) < 1e-11
    assert free_stream_residual(5, -1.0, 2, "vlh", 16, 0.08, 8.0) > 1e-8
    assert free_stream_residual(5, -1.0, 2, "lf", 16, 0.08, 8.0) < 1e-11


def test_collect_rows_spectrum():
    cfg = make_config("spectrum", N=[3], lam=[-1.0], J=[4])
    columns, rows = collect_rows(cfg)
    assert len(rows) == 3 * 4
    assert all(r["max_real_part"] <= 1e-10 * r["norm2"] for r in rows)
    assert columns[:3] == ["N", "lambda", "J"]


def test_parallel_matches_serial():
    cfg = make_config("local-stability", N=[3], lam=[-1.0, 0.0], J=[2], samples=2)
    serial = collect_rows(cfg)[1]
    parallel = collect_rows(make_config("local-stability", N=[3], lam=[-1.0, 0.0], J=[2],
                                        samples=2, parallel=True))[1]
    assert serial == parallel


def test_run_writes_header_and_rows(tmp_path):
    out = tmp_path / "adv.csv"
    cfg = make_config("convergence-advection", J=[4, 8], t_end=0.5, out=str(out))
    res = run(cfg)
    meta, rows = read_csv(out)
    assert meta["version"] == __version__ and meta["seed"] == 0
    assert meta["config"]["lambda"] == [-1.0] and meta["config"]["J"] == [4, 8]
    assert [r["J"] for r in rows] == ["4", "8"]
    assert rows[0]["eoc"] == "" and float(rows[1]["eoc"]) > 1.0
    assert res.path == out and len(res.rows) == 2


def test_run_is_byte_identical(tmp_path):
    cfg = make_config("local-stability", N=[3], lam=[-1e-2], J=[2, 4], samples=2,
                      out=str(tmp_path / "a.csv"))
    first = run(cfg).path.read_bytes()
    assert run(cfg).path.read_bytes() == first


def test_operator_dump_round_trip(tmp_path):
    out = tmp_path / "ops.json"
    run(make_config("operator-dump", N=[3, 5], lam=[-1.0], out=str(out)))
    pairs = load_operator_bundle(out)
    assert [p.N for p in pairs] == [3, 5]
    for p in pairs:
        ref = lgl_usbp(p.N, -1.0)
        np.testing.assert_array_equal(p.Dplus, ref.Dplus)
        np.testing.assert_array_equal(p.S, ref.S)
    assert json.loads(out.read_text())["header"]["config"]["experiment"] == "operator-dump"


def test_kelvin_helmholtz_small_run_finishes(tmp_path):
    cfg = make_config("kelvin-helmholtz", lam=[-0.1], splitting=["vlh"], J=[16], t_end=1.0,
                      out=str(tmp_path / "kh.csv"))
    rows = run(cfg).rows
    assert rows[0]["status"] == "finished" and rows[0]["final_time"] == 1.0


def test_vortex_short_run_with_baseline(tmp_path):
    cfg = make_config("isentropic-vortex", J=[16], t_end=0.5, out=str(tmp_path / "v.csv"))
    rows = run(cfg).rows
    assert [r["scheme"] for r in rows] == ["usbp", "central"]
    assert all(r["status"] == "finished" and r["density_l2"] < 0.1 for r in rows)


# ---------------------------------------------------------------------------
# Command line


def test_cli_runs_with_flags(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    code = main(["spectrum", "--N", "3", "--lambda", "-1e-3", "--J", "2", "--out", str(out)])
    assert code == EXIT_OK
    assert f"wrote {out}" in capsys.readouterr().out
    meta, rows = read_csv(out)
    assert meta["config"]["lambda"] == [-1e-3] and len(rows) == 6


def test_cli_negative_list_and_experiment_option(tmp_path):
    out = tmp_path / "ops.json"
    assert main(["--experiment", "operator-dump", "--lambda", "-1,-0.1", "--out", str(out)]) == 0
    assert len(load_operator_bundle(out)) == 2


@pytest.mark.parametrize("argv", [
    ["nonsense"], ["spectrum", "--lambda", "1"], ["spectrum", "--cfl", "abc"],
    ["spectrum", "--experiment", "free-stream"], [], ["free-stream", "--J", "5"],
])
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_cli_config_file_overridden_by_flag(tmp_path):
    cfg = tmp_path / "c.json"
    out = tmp_path / "o.csv"
    cfg.write_text(json.dumps({"experiment": "spectrum", "N": [4], "J": [2], "lambda": [-1.0]}))
    assert main(["--config", str(cfg), "--N", "3", "--out", str(out)]) == 0
    meta, rows = read_csv(out)
    assert meta["config"]["N"] == [3] and {r["N"] for r in rows} == {"3"}


@pytest.mark.skipif(shutil.which("usbp-dg") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["usbp-dg", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "kelvin-helmholtz" in res.stdout
    res = subprocess.run(["usbp-dg", "spectrum", "--N", "0"], capture_output=True, text=True)
    assert res.returncode == 2

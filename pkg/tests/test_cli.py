import subprocess
import sys
import time

import numpy as np
import pytest

from dwelltime import cli
from dwelltime.config import DEFAULT_TEXT, ConfigError, SweepConfig, parse_config
from dwelltime.quantities import CS133_MASS, height_from_velocity

SMALL = "grid_points = 40\nfig2_points = 21\n"


def read_csv(path):
    lines = path.read_text().splitlines()
    header = [l for l in lines if l.startswith("#")]
    names = header[-1][2:].split(",")
    data = np.loadtxt([l for l in lines if not l.startswith("#")], delimiter=",", ndmin=2)
    return header, names, data


def run(tmp_path, cmd, config=SMALL, extra=()):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(config)
    out = tmp_path / f"{cmd}.csv"
    code = cli.main([cmd, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


# -- configuration -------------------------------------------------------------------


def test_default_text_matches_defaults():
    assert parse_config(DEFAULT_TEXT) == SweepConfig()
    assert parse_config("") == SweepConfig()


def test_default_barrier():
    cfg = SweepConfig()
    assert cfg.barrier_height == pytest.approx(height_from_velocity(0.28e-2, CS133_MASS))
    assert cfg.velocities()[0] == pytest.approx(0.05e-2)
    assert cfg.velocities().size == 400


def test_natural_units_defaults():
    cfg = parse_config("units = natural\n")
    assert (cfg.mass, cfg.region_length, cfg.barrier_height, cfg.hbar) == (1.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize(
    "text, key, line",
    [
        ("region_length = -1\n", "region_length", 1),
        ("# c\nfoo = 1\n", "foo", 2),
        ("gamma = 1\ngamma = 2\n", "gamma", 2),
        ("grid_min = abc\n", "grid_min", 1),
        ("grid_points = 1\n", "grid_points", 1),
        ("lasers = 1:2, 3\n", "lasers", 1),
        ("lasers = 1:-2\n", "lasers", 1),
        ("convention = sideways\n", "convention", 1),
        ("units = cgs\n", "units", 1),
        ("grid_min = 2\ngrid_max = 1\n", "grid_max", 2),
        ("mass = inf\n", "mass", 1),
    ],
)
def test_config_errors_locate_problem(text, key, line):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key and exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_missing_equals():
    with pytest.raises(ConfigError) as exc:
        parse_config("\n\ngrid_points 3\n")
    assert exc.value.line == 3


def test_config_overrides():
    cfg = parse_config(
        "mass = 1e-26\nbarrier_height = 1e-30\ngrid_units = m/s\nlasers = 10:1\n"
    )
    assert cfg.species == "custom" and cfg.mass == 1e-26
    assert cfg.barrier_height == 1e-30 and cfg.lasers == ((10.0, 1.0),)
    assert cfg.velocity_scale == 1.0


# -- commands -------------------------------------------------------------------------


def test_bad_config_exits_1_without_file(tmp_path, capsys):
    code, out = run(tmp_path, "eigen", "region_length = -2e-6\n")
    assert code == 1
    assert not out.exists()
    assert list(tmp_path.iterdir()) == [tmp_path / "run.cfg"]
    assert "region_length" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert cli.main(["eigen", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_eigen_free_natural_degeneracies(tmp_path):
    text = f"units = natural\ngrid_min = {np.pi}\ngrid_max = {10 * np.pi}\ngrid_points = 10\n"
    code, out = run(tmp_path, "eigen", text)
    assert code == 0
    header, names, data = read_csv(out)
    assert names == ["velocity", "momentum", "t_plus", "t_minus", "average", "splitting_ratio"]
    assert np.all(np.abs(data[:, 5]) < 1e-10)
    np.testing.assert_allclose(data[:, 4], 1 / data[:, 1], rtol=1e-10)


def test_eigen_barrier_bounded(tmp_path):
    code, out = run(tmp_path, "eigen", "")
    assert code == 0
    header, names, data = read_csv(out)
    assert data.shape == (400, 9)
    tp = data[:, names.index("t_plus")]
    assert np.all(np.isfinite(tp)) and np.max(tp) < 0.011
    assert np.all(data[:, 2] >= data[:, 3]) and np.all(data[:, 3] > 0)
    assert any("max t_plus" in h for h in header)


def test_fig1_shape_and_units(tmp_path):
    code, out = run(tmp_path, "fig1")
    assert code == 0
    header, names, data = read_csv(out)
    assert names[:6] == ["velocity", "exact_dwell"] + [f"tau_approx_{j}" for j in range(1, 5)]
    assert data.shape == (40, 2 + 4 + 1 + 4 * 4)
    cols = [h for h in header if h.startswith("# columns:")][0]
    assert cols.count("[") == len(names)
    assert "velocity [cm/s]" in cols and "exact_dwell [s]" in cols and "[1/gamma]" in cols
    assert np.all(data[:, 1:6] >= 0)
    # tau_approx for the largest detuning is the closest to the exact curve
    err = np.abs(data[:, 2:6] - data[:, [1]])
    assert np.all(np.argmin(err, axis=1) == 0)
    assert any("peak of exact_dwell" in h for h in header)
    assert any("gamma implied" in h for h in header)


def test_fig1_plus_convention(tmp_path):
    code, out = run(tmp_path, "fig1", SMALL + "gamma = 3.3e7\n", ["--convention", "barrier-plus-lightshift"])
    assert code == 0
    header, _, data = read_csv(out)
    assert any("convention=barrier-plus-lightshift" in h for h in header)
    assert np.all(np.isfinite(data))


def test_fig2_sorted_and_anchor(tmp_path):
    code, out = run(tmp_path, "fig2", "fig2_points = 61\nfig2_ratio_min = 1e-4\nfig2_ratio_max = 1e-2\n")
    assert code == 0
    header, names, data = read_csv(out)
    assert names[:3] == ["absorption", "relative_error", "dwell_over_delay"]
    a, err, ratio = data[:, 0], data[:, 1], data[:, 2]
    assert np.all(np.diff(a) > 0)
    assert np.all(np.diff(ratio) > 0)
    band = np.abs(a - 0.2) <= 0.02
    assert band.any() and np.all((err[band] >= 0.02) & (err[band] <= 0.6))
    assert abs(err[0]) < 0.02


def test_outputs_are_deterministic(tmp_path):
    _, first = run(tmp_path, "fig1")
    a = first.read_bytes()
    _, second = run(tmp_path, "fig1")
    assert second.read_bytes() == a


def test_number_format(tmp_path):
    _, out = run(tmp_path, "eigen")
    row = [l for l in out.read_text().splitlines() if not l.startswith("#")][0]
    for field in row.split(","):
        mantissa = field.split("e")[0].lstrip("-")
        assert len(mantissa.replace(".", "")) == 12


def test_stdout_when_no_out(capsys):
    assert cli.main(["eigen", "--config", "/dev/null"]) == 0
    assert capsys.readouterr().out.startswith("# dwelltime eigen")


def test_verify_passes_and_is_fast(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "verify.txt"
    assert cli.main(["verify", "--out", str(out)]) == 0
    assert time.perf_counter() - start < 60
    lines = out.read_text().splitlines()
    assert len(lines) == 10
    assert all(l.startswith("PASS") for l in lines)


def test_verify_canary_fails(tmp_path):
    out = tmp_path / "verify.txt"
    assert cli.main(["verify", "--hbar-scale", "1.01", "--out", str(out)]) == 2
    text = out.read_text()
    assert "FAIL oracle_agreement" in text
    assert text.splitlines()[-1].startswith("FAIL summary")


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "dwelltime", "eigen", "--config", "/dev/null"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.startswith("#")


def test_usage_error():
    with pytest.raises(SystemExit):
        cli.main(["bogus"])


def test_numerical_failure_exits_2(tmp_path, capsys):
    # a grid point exactly at the threshold velocity has a zero wavenumber
    text = "units = natural\nbarrier_velocity = 1\ngrid_min = 0.5\ngrid_max = 1.5\ngrid_points = 3\n"
    code, out = run(tmp_path, "fig1", text)
    assert code == 2 and not out.exists()
    assert "DegenerateWavenumberError" in capsys.readouterr().err

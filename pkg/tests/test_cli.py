import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracdelay.cli import PRESETS, RunConfig, main, parse_config, run_experiment
from fracdelay.conformable import series_trajectory
from fracdelay.errors import ConfigError


def test_minimal_defaults():
    rc = parse_config("{}")
    assert rc.problem.h == 0.001
    assert rc.problem.b.K == 2
    assert rc.problem.t_max == 120.0
    assert rc.schemes == ["euler", "rk4", "rk4-interp"]


def test_b_coeffs_sets_K():
    rc = parse_config(json.dumps({"b_coeffs": [1.0, 0.2, -0.05]}))
    assert rc.problem.forcing.K == 2


def test_incompatible_pair_named():
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps({"family": "caputo", "schemes": ["rk4"], "T": 1.0}))
    assert any("rk4" in p and "caputo" in p for p in info.value.problems)


def test_all_errors_listed():
    doc = {"alpha": 3.0, "h": -1.0, "bogus": 1, "schemes": ["nope"], "y0": "one"}
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    text = " | ".join(info.value.problems)
    for key in ("bogus", "nope", "y0"):
        assert key in text
    assert len(info.value.problems) >= 3


def test_json_error_position():
    with pytest.raises(ConfigError) as info:
        parse_config('{\n  "alpha": 0.5,\n  "a": ,\n}')
    assert "line 3" in str(info.value)


def test_overrides_win():
    rc = parse_config(json.dumps({"preset": "ex2", "t_max": 50.0}), {"t_max": 8.0, "alpha": 0.9})
    assert rc.problem.T == 2.0 and rc.problem.t_max == 8.0 and rc.problem.alpha == 0.9


@settings(deadline=None, max_examples=30)
@given(
    preset=st.sampled_from(sorted(PRESETS)),
    t_max=st.floats(0.0, 50.0),
    K=st.one_of(st.none(), st.integers(0, 4)),
    plot=st.booleans(),
)
def test_roundtrip(preset, t_max, K, plot):
    rc = parse_config(json.dumps({"preset": preset, "t_max": t_max, "K": K, "plot_data": plot}))
    assert parse_config(rc.to_json()) == rc


def test_series_only_matches_direct(tmp_path):
    rc = parse_config(json.dumps({"preset": "ex1", "t_max": 2.0, "schemes": ["series"], "output_dir": str(tmp_path)}))
    run_experiment(rc)
    data = np.loadtxt(tmp_path / "series.csv", delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 1], series_trajectory(rc.problem).values)


def _first_departure(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    rel = data[:, [i for i, h in enumerate(header) if h.startswith("rel_")]]
    # early regime: errors from the t^(alpha-1) start-up, small and settling
    base = rel[: len(rel) // 8].max()
    row = np.argmax(np.any(rel > 2 * base, axis=1))
    return data[row, 0]


def test_epoch_boundary_shifts(tmp_path):
    t1 = t2 = None
    for name in ("ex1", "ex2"):
        out = tmp_path / name
        code = main(["--preset", name, "--tmax", str(4 * PRESETS[name]["T"]), "--out", str(out), "--plot-data"])
        assert code == 0
        if name == "ex1":
            t1 = _first_departure(out / "plotdata.csv")
        else:
            t2 = _first_departure(out / "plotdata.csv")
    assert 0.7 <= t1 < 0.8
    assert 2.0 <= t2 < 2.1


def test_outputs_and_columns(tmp_path):
    code = main(["--preset", "caputo-bench", "--tmax", "2", "--h", "0.01", "--out", str(tmp_path), "--plot-data"])
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == sorted(["caputo-l1.csv", "caputo-l21sigma.csv", "caputo-pc.csv", "errors.csv", "plotdata.csv"])
    header = (tmp_path / "plotdata.csv").read_text().splitlines()[0]
    assert header == "t,series,caputo-l1,caputo-l21sigma,caputo-pc,rel_caputo-l1,rel_caputo-l21sigma,rel_caputo-pc"
    lines = (tmp_path / "errors.csv").read_text().splitlines()
    assert lines[0] == "scheme,max_rel,rms_rel,max_abs,n_points,diverged_at"
    assert len(lines) == 4


def test_exit_codes(tmp_path, capsys):
    assert main(["--preset", "ex1", "--alpha", "2"]) == 2
    assert main(["--preset", "ex1", "--schemes", "caputo-pc"]) == 2
    assert main(["--b-coeffs", "1,x"]) == 2
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["--preset", "ex1", "--tmax", "1", "--out", str(blocker / "sub")]) == 4
    assert main(["--config", str(tmp_path / "missing.json")]) == 4
    # a = -1e306 overflows within a few steps; files are still written
    out = tmp_path / "div"
    code = main(["--a=-1e306", "--delay", "0.1", "--h", "0.1", "--tmax", "2", "--alpha", "1",
                 "--schemes", "euler", "--out", str(out)])
    assert code == 3
    assert (out / "errors.csv").exists()
    assert (out / "errors.csv").read_text().splitlines()[1].split(",")[-1] != ""


def test_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"preset": "ex3", "t_max": 3.5, "schemes": ["euler"], "output_dir": str(tmp_path / "o")}))
    assert main(["--config", str(cfg)]) == 0
    assert (tmp_path / "o" / "euler.csv").exists()

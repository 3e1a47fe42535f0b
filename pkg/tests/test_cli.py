import json

import pytest

from solaropt.cli import main
from solaropt.trace import Trace


@pytest.fixture
def config_file(tmp_path):
    doc = {
        "instance": {"type": "quadratic", "n": 4, "scale": 1.0, "seed": 7, "half_width": 5.0},
        "algorithms": [{"name": "solar", "b": 2, "K": 10}, {"name": "mtp"}],
        "seeds": [0, 1],
        "budget": 300,
    }
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(doc))
    return path


def test_catalogue_prints_json(capsys):
    assert main(["catalogue"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [e["name"] for e in doc][:2] == ["quad-10", "quad-25"]


def test_run_and_aggregate_and_fit(tmp_path, config_file, capsys):
    out = tmp_path / "traces"
    assert main(["run", "--config", str(config_file), "--out", str(out), "--seed", "5"]) == 0
    printed = capsys.readouterr().out.strip().splitlines()
    assert len(printed) == 4
    csvs = sorted(out.glob("*.csv"))
    assert len(csvs) == 4

    assert main(["aggregate", str(out), "--mode", "minmax"]) == 0
    capsys.readouterr()
    index = json.loads((out / "summary.json").read_text())
    assert set(index["algorithms"]) == {"solar-vanilla", "mtp"}
    assert index["mode"] == "minmax"

    solar_trace = next(p for p in csvs if p.name.startswith("solar"))
    assert main(["fit-rate", "--trace", str(solar_trace), "--window", "0:5"]) == 0
    line = capsys.readouterr().out
    assert "alpha=" in line and "r_squared=" in line


def test_run_missing_config_is_config_error(tmp_path):
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 2


def test_run_bad_config_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"instance": "quad-10", "algorithms": [], "seeds": [0], "budget": 10}))
    assert main(["run", "--config", str(path)]) == 2
    path.write_text(json.dumps({"instance": "quad-10", "algorithms": [{"name": "sa"}],
                                "seeds": [0], "budget": 10, "surprise": 1}))
    assert main(["run", "--config", str(path)]) == 2


def test_run_unknown_instance_is_run_failure(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"instance": "quad-404", "algorithms": [{"name": "sa"}],
                                "seeds": [0], "budget": 10}))
    assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == 1


def test_sweep_b_cli(tmp_path, capsys):
    code = main([
        "sweep-b", "--instance", "quad-10", "--b-grid", "0.2,0.5",
        "--budget", "40", "--seeds", "0", "--out", str(tmp_path),
    ])
    assert code == 0
    out = capsys.readouterr().out
    table = (tmp_path / "sweep_b__quad-10.csv").read_text().splitlines()
    assert table[0].startswith("b,b_over_n")
    assert len(table) == 3
    assert "relative suboptimality" in out


def test_sweep_b_bad_grid_is_config_error(tmp_path):
    assert main(["sweep-b", "--instance", "quad-10", "--b-grid", "a,b",
                 "--budget", "10", "--out", str(tmp_path)]) == 2


def test_fit_rate_without_fstar_anywhere(tmp_path):
    t = Trace(meta={})  # no metadata sidecar -> no f_star
    for k in range(6):
        t.append(k + 1, k, 4.0 + 2.0 ** (-k))
    p = tmp_path / "t.csv"
    t.to_csv(p)
    assert main(["fit-rate", "--trace", str(p), "--window", "0:6"]) == 2
    assert main(["fit-rate", "--trace", str(p), "--window", "0:6", "--fstar", "4.0"]) == 0
    assert main(["fit-rate", "--trace", str(p), "--window", "junk", "--fstar", "4.0"]) == 2


def test_aggregate_empty_dir_fails(tmp_path):
    assert main(["aggregate", str(tmp_path)]) == 1

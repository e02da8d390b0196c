import csv
import json

import numpy as np
import pytest

from mflica.cli import main
from mflica.dynet import read_tensor
from mflica.timeseries import TimeSeriesSet, load_timeseries, write_timeseries


@pytest.fixture
def small_csv(tmp_path):
    rng = np.random.default_rng(5)
    x = np.cumsum(rng.normal(size=(1, 60, 2)), axis=1)
    values = np.concatenate([x, np.roll(x, 3, axis=1), np.roll(x, 6, axis=1)])
    values[1, :3] = x[0, 0]
    values[2, :6] = x[0, 0]
    path = tmp_path / "ts.csv"
    write_timeseries(TimeSeriesSet.from_array(values, ["a", "b", "c"]), path)
    return path


def test_simulate(tmp_path):
    ts, gt = tmp_path / "ts.csv", tmp_path / "gt.json"
    assert main(["simulate", "--seed", "42", "--out", str(ts), "--truth", str(gt)]) == 0
    assert load_timeseries(ts).shape == (30, 800, 2)
    assert len(json.loads(gt.read_text())["events"]) == 3


def test_follow_stdout(small_csv, capsys):
    rc = main(["follow", "--input", str(small_csv), "--leader", "a", "--follower", "c",
               "--from", "1", "--to", "50", "--lag-window", "0.2"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["leader"] == "a" and doc["follower"] == "c"
    assert doc["foll_val"] > 0.8
    assert doc["mean_lag"] > 0


def test_follow_file(small_csv, tmp_path, capsys):
    out = tmp_path / "f.json"
    assert main(["follow", "--input", str(small_csv), "--leader", "c", "--follower", "a",
                 "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["foll_val"] < 0


def test_net(small_csv, tmp_path):
    out = tmp_path / "net"
    assert main(["net", "--input", str(small_csv), "--out-dir", str(out), "--lag-window", "0.2"]) == 0
    with open(out / "weighted.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["leader", "a", "b", "c"]
    assert float(rows[1][3]) > 0.5
    factions = json.loads((out / "factions.json").read_text())
    assert factions["t"] is None
    assert factions["factions"][0]["leader"] == "a"
    assert 0 < json.loads((out / "network.json").read_text())["density"] <= 1


def test_run(small_csv, tmp_path):
    out = tmp_path / "res"
    rc = main(["run", "--input", str(small_csv), "--time-window", "20", "--out-dir", str(out),
               "--dump-tensor", str(tmp_path / "w.bin")])
    assert rc == 0
    for name in ("density.csv", "faction_ratios.csv", "leaders.csv", "params.json",
                 "factions.json", "density_plot.svg", "faction_ratios_plot.svg"):
        assert (out / name).exists(), name
    params = json.loads((out / "params.json").read_text())
    assert params["time_shift"] == 2 and params["sigma"] == 0.5 and params["lag_window"] == 0.1
    with open(out / "faction_ratios.csv") as fh:
        header = next(csv.reader(fh))
    assert header == ["t", "a", "b", "c"]
    with open(out / "leaders.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "leader_ids"] and len(rows) == 61
    assert read_tensor(tmp_path / "w.bin").shape == (3, 3, 60)


def test_plot(tmp_path):
    src = tmp_path / "s.csv"
    src.write_text("t,x,y\n1,0.1,0.2\n2,0.3,0.4\n")
    assert main(["plot", "--input", str(src), "--out", str(tmp_path / "p.svg"), "--title", "T"]) == 0
    assert (tmp_path / "p.svg").read_text().startswith("<?xml")


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["run", "--input", "x.csv", "--time-window", "1", "--out-dir", "o"],
        ["run", "--input", "x.csv", "--time-window", "60", "--sigma", "1.5", "--out-dir", "o"],
        ["follow", "--input", "x.csv", "--leader", "1", "--follower", "2", "--lag-window", "-1"],
        ["net", "--input", "x.csv", "--out-dir", "o", "--threads", "0"],
        ["simulate", "--out", "x.csv", "--unknown"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_validation_errors(small_csv, tmp_path, capsys):
    assert main(["run", "--input", str(small_csv), "--time-window", "100",
                 "--out-dir", str(tmp_path / "o")]) == 1
    assert main(["follow", "--input", str(small_csv), "--leader", "zz", "--follower", "a"]) == 1
    assert main(["follow", "--input", str(small_csv), "--leader", "a", "--follower", "b",
                 "--from", "50", "--to", "70"]) == 1
    assert "error" not in capsys.readouterr().out


def test_io_errors(tmp_path):
    assert main(["run", "--input", str(tmp_path / "nope.csv"), "--time-window", "10",
                 "--out-dir", str(tmp_path / "o")]) == 2
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["simulate", "--out", str(blocker / "ts.csv")]) == 2


def test_threads_env(small_csv, tmp_path, monkeypatch):
    monkeypatch.setenv("MFLICA_THREADS", "bad")
    assert main(["net", "--input", str(small_csv), "--out-dir", str(tmp_path / "o")]) == 1
    monkeypatch.setenv("MFLICA_THREADS", "3")
    assert main(["net", "--input", str(small_csv), "--out-dir", str(tmp_path / "o")]) == 0


def test_byte_identical_reruns(small_csv, tmp_path):
    for k in ("1", "4"):
        assert main(["run", "--input", str(small_csv), "--time-window", "20", "--time-shift", "3",
                     "--out-dir", str(tmp_path / k), "--threads", k]) == 0
    for f in sorted((tmp_path / "1").iterdir()):
        assert f.read_bytes() == (tmp_path / "4" / f.name).read_bytes(), f.name

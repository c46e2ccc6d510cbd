import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from netchange.cli import main

from conftest import setting_data


@pytest.fixture
def series_file(tmp_path):
    _, Y = setting_data(1, 16, 160, seed=0)
    path = tmp_path / "y.csv"
    np.savetxt(path, Y, delimiter=",")
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    return json.loads(lines[0][len("# config: "):]), list(csv.reader(lines[1:]))


def test_detect_writes_report_and_trace(series_file, tmp_path):
    out = tmp_path / "out"
    rc = main(["detect", "-i", str(series_file), "-o", str(out), "--k", "2", "--n-min", "40", "--resamples", "30"])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["n_rows"] == 160
    assert report["config"]["detection"]["k"] == 2
    assert report["config"]["bootstrap"]["n_resamples"] == 30
    cfg, rows = read_csv(out / "gamma_trace.csv")
    assert rows[0] == ["segment_start", "segment_end", "position", "gamma", "eta", "outlier"]
    assert rows[1][:3] == ["1", "160", "40"]
    assert not [p for p in out.iterdir() if p.name.endswith(".tmp")]


def test_detect_csv_format(series_file, tmp_path):
    out = tmp_path / "out"
    main(["detect", "-i", str(series_file), "-o", str(out), "--k", "2", "--n-min", "40", "--resamples", "10", "--format", "csv"])
    _, rows = read_csv(out / "report.csv")
    assert rows[0][0] == "position"


def test_detect_byte_identical(series_file, tmp_path):
    args = ["detect", "-i", str(series_file), "--k", "3", "--n-min", "40", "--resamples", "20", "--seed", "5"]
    main(args + ["-o", str(tmp_path / "a")])
    main(args + ["-o", str(tmp_path / "b")])
    for name in ("report.json", "gamma_trace.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_short_series_is_config_error(tmp_path, capsys):
    path = tmp_path / "short.csv"
    np.savetxt(path, np.random.default_rng(0).standard_normal((60, 4)), delimiter=",")
    assert main(["detect", "-i", str(path), "-o", str(tmp_path / "o")]) == 2
    assert "2 * n_min" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_parse_error_exit_code(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,x\n")
    assert main(["detect", "-i", str(path), "-o", str(tmp_path)]) == 3


def test_block_options_exclusive(series_file):
    with pytest.raises(SystemExit) as err:
        main(["detect", "-i", str(series_file), "--block-len", "5", "--block-frac", "0.1"])
    assert err.value.code == 2


def test_simulate_outputs(tmp_path):
    out = tmp_path / "sim"
    rc = main(["simulate", "--setting", "1", "--p", "12", "--t", "120", "--reps", "2", "--k", "2",
               "--n-min", "30", "--resamples", "10", "-o", str(out)])
    assert rc == 0
    _, reps = read_csv(out / "repetitions.csv")
    assert len(reps) == 3
    cfg, summary = read_csv(out / "summary.csv")
    assert summary[0][:4] == ["setting", "p", "T", "k"]
    assert "tp1_sd" in summary[0]
    _, kde = read_csv(out / "kde.csv")
    assert len(kde) == 121
    assert cfg["detection"]["n_min"] == 30


def test_simulate_single_rep_has_no_sd(tmp_path):
    out = tmp_path / "sim"
    main(["simulate", "--setting", "1", "--p", "12", "--t", "120", "--reps", "1", "--k", "2",
          "--n-min", "30", "--resamples", "10", "-o", str(out)])
    _, rows = read_csv(out / "summary.csv")
    assert rows[1][rows[0].index("tp1_sd")] == ""


def test_similarity_seven_networks(series_file, tmp_path):
    nets = [f"N{i}={series_file}:{20 * i + 1}-{20 * i + 40}" for i in range(7)]
    args = ["similarity", "-o", str(tmp_path), "--k", "2"]
    for n in nets:
        args += ["-n", n]
    assert main(args) == 0
    _, rows = read_csv(tmp_path / "similarity.csv")
    assert rows[0] == ["network"] + [f"N{i}" for i in range(7)]
    values = [v for r in rows[1:] for v in r[1:] if v]
    assert len(values) == 21


def test_similarity_needs_two(series_file, tmp_path):
    assert main(["similarity", "-n", str(series_file), "-o", str(tmp_path)]) == 2


def test_export_graph_json_and_dot(series_file, tmp_path):
    assert main(["export-graph", "-i", str(series_file), "--segment", "1-80", "--k", "2", "-o", str(tmp_path)]) == 0
    g = json.loads((tmp_path / "graph.json").read_text())
    assert g["segment"] == [1, 80] and len(g["nodes"]) == 16
    assert main(["export-graph", "-i", str(series_file), "--format", "dot", "--threshold", "1", "-o", str(tmp_path)]) == 0
    assert " -- " not in (tmp_path / "graph.dot").read_text()


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "netchange.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "netchange" in proc.stdout

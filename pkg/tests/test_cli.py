from datetime import date

import numpy as np
import pytest

from chaintrends import synthetic
from chaintrends.cli import main
from chaintrends.ingest import TrendsWindow, format_series, format_trends
from chaintrends.series import DailySeries


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    synthetic.write_shards(synthetic.transactions(2000, seed=5), d / "shards", 4)
    rng = np.random.default_rng(12)
    start = date(2017, 1, 1)
    for name, scale in (("eth", 300), ("btc", 8000)):
        walk = scale * np.exp(np.cumsum(rng.normal(0, 0.03, size=500)))
        (d / f"{name}.csv").write_text(
            format_series(DailySeries(name, start, tuple(walk)), 6, header=["date", "close"]))
    truth = synthetic.smooth_series(500, rng)
    (d / "trends.csv").write_text(format_trends(synthetic.cut_windows(truth, start, rng=rng)))
    (d / "gap.csv").write_text(format_trends([
        TrendsWindow("early", date(2017, 1, 1), (100.0, 40.0)),
        TrendsWindow("late", date(2017, 3, 1), (100.0, 40.0)),
    ]))
    return d


def run(*argv):
    return main([str(a) for a in argv])


def test_aggregate(workspace, tmp_path, capsys):
    out = tmp_path / "monthly.csv"
    assert run("aggregate", "--input", workspace / "shards" / "*.csv", "--workers", 4, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "month,tx_count,contract_count,mean_gas,mean_gas_price_gwei"
    assert sum(int(row.split(",")[1]) for row in lines[1:]) == 2000
    assert "2000 rows ok" in capsys.readouterr().err


def test_aggregate_gas_difficulty(workspace, capsys):
    assert run("aggregate", "--input", workspace / "shards" / "*.csv", "--workers", 1,
               "--kind", "gas-difficulty") == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "pairs,pearson" and -1 <= float(row.split(",")[1]) <= 1


def test_xcorr_writes_both_tables(workspace, tmp_path):
    matrix, lags = tmp_path / "matrix.csv", tmp_path / "lags.csv"
    assert run("xcorr", "--inputs", f"{workspace / 'eth.csv'},{workspace / 'btc.csv'}",
               "--max-lag", 60, "--out", matrix, "--lags-out", lags) == 0
    assert matrix.read_text().splitlines()[0] == ",eth,btc"
    lag_rows = [r.split(",") for r in lags.read_text().splitlines()[1:]]
    assert all(1 <= int(r[i + 1]) <= 60 for i, r in enumerate(lag_rows))


def test_xcorr_curve(workspace, capsys):
    assert run("xcorr", "--inputs", f"{workspace / 'eth.csv'},{workspace / 'btc.csv'}",
               "--max-lag", 5, "--kind", "curve") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "lag,coefficient" and len(lines) == 7
    assert run("xcorr", "--inputs", workspace / "eth.csv", "--kind", "curve") == 2


def test_stitch_ok_and_gap(workspace, tmp_path, capsys):
    out = tmp_path / "series.csv"
    assert run("stitch", "--input", workspace / "trends.csv", "--out", out) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "date,value" and len(rows) == 501
    assert max(float(r.split(",")[1]) for r in rows[1:]) == 100.0
    assert rows[1].split(",")[1].count(".") == 1 and len(rows[1].split(".")[1]) == 4
    capsys.readouterr()
    assert run("stitch", "--input", workspace / "gap.csv", "--out", tmp_path / "x.csv") == 2
    err = capsys.readouterr().err
    assert "'early'" in err and "'late'" in err
    assert not (tmp_path / "x.csv").exists()


def test_returns_and_histogram(workspace, capsys):
    assert run("returns", "--input", workspace / "eth.csv") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "date,value" and len(lines) == 500
    assert run("returns", "--input", workspace / "eth.csv", "--kind", "histogram", "--bins", 20) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "bin_left,bin_right,count,density" and len(lines) == 21
    assert sum(int(r.split(",")[2]) for r in lines[1:]) == 499


def test_describe_table(workspace, capsys):
    assert run("describe", "--inputs", f"{workspace / 'eth.csv'},{workspace / 'btc.csv'}") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "stat,eth,btc"
    assert [r.split(",")[0] for r in lines[1:]] == ["mean", "std", "min", "q1", "median", "q3", "max"]
    assert all(len(cell.split(".")[1]) == 2 for r in lines[1:] for cell in r.split(",")[1:])
    assert run("describe", "--inputs", workspace / "eth.csv", "--kind", "returns") == 0


def test_render_kinds(workspace, tmp_path):
    inputs = f"{workspace / 'eth.csv'},{workspace / 'btc.csv'}"
    for kind in ("lines", "overlay", "heatmap"):
        out = tmp_path / f"{kind}.svg"
        assert run("render", "--inputs", inputs, "--kind", kind, "--title", kind, "--out", out) == 0
        assert out.read_text().startswith("<?xml")


def test_render_monthly_overlay(workspace, tmp_path):
    monthly = tmp_path / "monthly.csv"
    assert run("aggregate", "--input", workspace / "shards" / "*.csv", "--workers", 1, "--out", monthly) == 0
    stitched = tmp_path / "trends.csv"
    assert run("stitch", "--input", workspace / "trends.csv", "--out", stitched) == 0
    out = tmp_path / "fig.svg"
    assert run("render", "--inputs", f"{monthly},{stitched}", "--kind", "overlay", "--out", out) == 0
    assert out.read_text().count("<polyline") == 2


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["aggregate"],
    ["aggregate", "--input", "x", "--workers", "0"],
    ["aggregate", "--input", "x", "--policy", "ignore"],
    ["stitch", "--input", "x", "--unknown", "1"],
    ["xcorr", "--inputs", "a,b", "--max-lag", "-1"],
    ["render", "--inputs", "a", "--kind", "pie"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_data_errors_exit_2(tmp_path, capsys):
    assert main(["returns", "--input", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("date,close\n2020-01-01,0\n")
    assert main(["returns", "--input", str(bad)]) == 2
    assert "non-positive price" in capsys.readouterr().err
    assert main(["aggregate", "--input", str(tmp_path / "none-*.csv")]) == 2
    odd = tmp_path / "odd.csv"
    odd.write_text("when,what\n")
    assert main(["describe", "--inputs", str(odd)]) == 2


def test_help_exits_zero():
    assert main(["--help"]) == 0

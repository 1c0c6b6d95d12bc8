"""Fixed inputs for the golden SVGs and CLI runs.

Run ``python tests/fixtures.py`` to regenerate ``tests/golden/``.
"""
import math
from datetime import date
from pathlib import Path

from chaintrends.report import render_heatmap, render_lines
from chaintrends.series import DailySeries
from chaintrends.xcorr import XCorrMatrix

GOLDEN = Path(__file__).parent / "golden"


def line_series():
    t = range(400)
    prices = DailySeries("ETH/USD", date(2017, 6, 1), tuple(300 + 200 * math.sin(i / 40) + i for i in t))
    searches = DailySeries("GoogleETH", date(2017, 6, 1), tuple(50 + 45 * math.cos(i / 55) for i in t))
    return [prices, searches]


def heatmap_matrix():
    # symmetric 4x4 table of two-decimal coefficients
    names = ("ETH/USD", "GoogleETH", "BTC/USD", "GoogleBTC")
    corr = (
        (0.75, 0.75, 0.84, 0.79),
        (0.75, 0.59, 0.59, 0.83),
        (0.84, 0.59, 0.67, 0.67),
        (0.79, 0.83, 0.67, 0.67),
    )
    lags = ((1, 5, 2, 31), (5, 1, 0, 3), (2, 0, 1, 7), (31, 3, 7, 1))
    return XCorrMatrix(names, corr, lags)


def render_golden():
    return {
        "lines.svg": render_lines(line_series(), title="Prices vs. search interest"),
        "heatmap.svg": render_heatmap(heatmap_matrix(), title="Max cross-correlations"),
    }


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name, doc in render_golden().items():
        (GOLDEN / name).write_text(doc, encoding="utf-8", newline="\n")
        print("wrote", GOLDEN / name)

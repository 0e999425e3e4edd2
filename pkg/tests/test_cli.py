import csv
import io

import numpy as np
import pytest

from growthtrend.cli import main, run
from growthtrend.dataio import CountrySeries, serialize
from growthtrend.growth import build_grid
from growthtrend.report import fmt_num

from conftest import exponential_series, linear_series

FAST = ["--grid-points", "5", "--max-p", "1", "--max-q", "1"]


@pytest.fixture
def data(tmp_path):
    path = tmp_path / "gdp.csv"
    exact = CountrySeries("exact", range(1960, 2014), 100 + 5 * np.arange(54.0))
    path.write_text(serialize([exact, linear_series(1, sid="noisy"), exponential_series(1)]))
    return str(path)


def _run(argv):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


def _exit_code(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code


@pytest.mark.parametrize(
    "x, digits, text",
    [
        (0.00005, 4, "0.0001"),
        (-0.00005, 4, "-0.0001"),
        (1.00015, 4, "1.0002"),
        (2.5, 0, "3"),
        (-0.00001, 4, "0.0000"),
        (0.0, 4, "0.0000"),
        (0.06, 4, "0.0600"),
        (float("nan"), 4, "NA"),
        (None, 4, "NA"),
        (123.456789, 2, "123.46"),
    ],
)
def test_fmt_num(x, digits, text):
    assert fmt_num(x, digits) == text


def test_r2_table(data):
    code, out = _run(["r2", "--input", data])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["id", "r2_exp", "r2_lin", "diff"]
    assert [r[0] for r in rows[1:]] == ["exact", "noisy", "exp"]
    assert rows[1][2] == "1.0000" and float(rows[1][3]) > 0
    assert float(rows[3][3]) < 0
    assert all(len(cell.split(".")[1]) == 4 for r in rows[1:] for cell in r[1:])


def test_r2_constant_series_is_na(tmp_path):
    path = tmp_path / "flat.csv"
    flat = CountrySeries("flat", range(1960, 2014), [7.0] * 54)
    path.write_text(serialize([flat, linear_series(0)]))
    code, out = _run(["r2", "--input", str(path)])
    assert out.splitlines()[1] == "flat,NA,NA,NA"
    assert code == 3


def test_select_table(data):
    code, out = _run(["select", "--input", data, *FAST])
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["id", "aic", "aicc", "bic", "order_aic", "order_aicc", "order_bic", "warnings"]
    exact_row, noisy_row = rows[1], rows[2]
    # differences of an exact line are constant: nothing to fit, so the row is NA
    assert exact_row[1:7] == ["NA"] * 6 and "all_fits_failed" in exact_row[7]
    assert code == 3
    assert noisy_row[1:4] == ["0.0000"] * 3
    assert all(o.startswith("(") and o.endswith(")") for o in noisy_row[4:7])
    assert '"(' in out  # orders contain commas and are quoted


def test_warnings_do_not_change_exit_status(tmp_path):
    path = tmp_path / "ok.csv"
    path.write_text(serialize([linear_series(1, sid="a"), exponential_series(2, sid="b")]))
    code, out = _run(["select", "--input", str(path), *FAST])
    assert code == 0
    assert "NA" not in out


def test_select_markdown_mirrors_csv(data):
    _, text = _run(["select", "--input", data, *FAST])
    _, md = _run(["select", "--input", data, *FAST, "--format", "markdown"])
    csv_rows = list(csv.reader(io.StringIO(text)))
    md_rows = [
        [cell.strip() for cell in line.strip("|").split("|")]
        for line in md.splitlines()
        if not line.startswith("|---")
    ]
    assert md_rows == csv_rows


def test_curve(data):
    code, out = _run(["curve", "--input", data, "--id", "exp", *FAST, "--criterion", "bic"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["rate", "aic", "aicc", "bic", "p", "q"]
    assert [r[0] for r in rows[1:]] == [fmt_num(r, 4) for r in build_grid(5, 0.06).rates]
    assert all(r[4].isdigit() and r[5].isdigit() for r in rows[1:])


def test_output_is_reproducible(data):
    first = _run(["select", "--input", data, *FAST, "--seed", "3"])
    assert _run(["select", "--input", data, *FAST, "--seed", "3"]) == first


def test_exit_codes(data, tmp_path, capsys):
    assert _exit_code(["curve", "--input", data, "--id", "nope", *FAST]) == 2
    assert _exit_code(["r2", "--input", str(tmp_path / "missing.csv")]) == 2
    assert _exit_code(["frobnicate"]) == 1
    assert _exit_code(["r2"]) == 1
    assert _exit_code(["select", "--input", data, "--format", "xml"]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("id,year,value\nA,1960,1\nA,1960,2\n")
    assert _exit_code(["r2", "--input", str(bad)]) == 2
    # the default 1960-2013 window is not covered by this data
    short = tmp_path / "short.csv"
    short.write_text(serialize([CountrySeries("s", range(1990, 2014), range(1, 25))]))
    assert _exit_code(["select", "--input", str(short), *FAST]) == 2
    assert _exit_code(["r2", "--input", str(short), "--start-year", "1990"]) == 0
    capsys.readouterr()

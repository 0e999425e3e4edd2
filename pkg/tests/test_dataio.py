import pytest
from hypothesis import given, strategies as st

from growthtrend.dataio import (
    CountrySeries,
    SampleWindow,
    parse_csv,
    read_csv,
    serialize,
    window,
)
from growthtrend.errors import (
    DuplicateYear,
    GapInYears,
    MalformedRow,
    NonPositiveValue,
    SeriesTooShort,
    WindowOutOfRange,
)


def _rows(sid, start, values):
    return "".join(f"{sid},{start + i},{v}\n" for i, v in enumerate(values))


def test_parse_groups_and_sorts():
    text = "id,year,value\n" + "A,1961,103\nA,1960,100\n" + _rows("A", 1962, range(1, 9))
    (s,) = parse_csv(text)
    assert s.id == "A"
    assert s.years[:2] == (1960, 1961)
    assert s.values[:2] == (100.0, 103.0)
    assert len(s) == 10


def test_two_ids_keep_first_appearance_order():
    text = "id,year,value\n" + _rows("Z", 2000, range(1, 11)) + _rows("A", 2000, range(1, 11))
    assert [s.id for s in parse_csv(text)] == ["Z", "A"]


def test_bytes_and_blank_lines(tmp_path):
    text = "id,year,value\n\n" + _rows("A", 1990, range(1, 11)) + "\n"
    path = tmp_path / "in.csv"
    path.write_bytes(text.encode())
    assert read_csv(path) == parse_csv(text.encode())


@pytest.mark.parametrize(
    "body, exc",
    [
        ("A,1960,100\nA,1962,101\n", GapInYears),
        ("A,1960,100\nA,1960,101\n", DuplicateYear),
        ("A,1960\n", MalformedRow),
        ("A,1960,abc\n", MalformedRow),
        ("A,19x0,1\n", MalformedRow),
        ("A,1960,-1\n", NonPositiveValue),
        ("A,1960,0\n", NonPositiveValue),
        ("A,1960,nan\n", NonPositiveValue),
        ("A,1960,1\n", SeriesTooShort),
    ],
)
def test_bad_rows(body, exc):
    with pytest.raises(exc):
        parse_csv("id,year,value\n" + body)


def test_bad_header():
    with pytest.raises(MalformedRow):
        parse_csv("country,year,value\nA,1960,1\n")
    with pytest.raises(MalformedRow):
        parse_csv("")


def test_input_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse_csv("id,year,value\nA,1960,1\nA,1960,2\n")


def _full():
    return CountrySeries("A", range(1960, 2014), [100.0 + i for i in range(54)])


def test_window_lengths():
    s = _full()
    assert len(window(s, SampleWindow(1960, 2007))) == 48
    assert len(window(s, SampleWindow(1970, 2013))) == 44
    assert window(s, s.span) == s


def test_window_errors():
    s = _full()
    with pytest.raises(WindowOutOfRange):
        window(s, SampleWindow(1950, 2000))
    with pytest.raises(WindowOutOfRange):
        SampleWindow(2000, 2000)
    with pytest.raises(SeriesTooShort):
        window(s, SampleWindow(2005, 2013))


values = st.floats(min_value=1e-6, max_value=1e12, allow_nan=False, allow_infinity=False)


@given(
    st.lists(
        st.tuples(
            st.text(alphabet="abcXYZ_ ,\"", min_size=1, max_size=6).filter(lambda s: s.strip() == s),
            st.integers(1800, 2100),
            st.lists(values, min_size=10, max_size=30),
        ),
        min_size=1,
        max_size=4,
        unique_by=lambda t: t[0],
    )
)
def test_serialize_round_trip(specs):
    series = [CountrySeries(sid, range(y0, y0 + len(v)), v) for sid, y0, v in specs]
    assert parse_csv(serialize(series)) == series

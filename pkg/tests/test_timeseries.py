import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mflica.errors import (
    IoFailure,
    MissingFile,
    NonContiguousTime,
    NonNumericCell,
    RaggedSeries,
    ValidationError,
    WindowOutOfRange,
)
from mflica.timeseries import (
    TimeSeriesSet,
    WindowSpec,
    load_timeseries,
    quantize,
    slice_window,
    write_timeseries,
)


def write_csv(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_small(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1\na,1,0.5\na,2,1\na,3,2\nb,1,0\nb,2,0\nb,3,1\n")
    tss = load_timeseries(p)
    assert tss.shape == (2, 3, 1)
    assert tss.ids == ("a", "b")
    assert tss.values[0, :, 0].tolist() == [0.5, 1.0, 2.0]


def test_rows_in_any_order(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1,d2\nb,2,3,4\na,1,1,1\nb,1,5,6\na,2,2,2\n")
    tss = load_timeseries(p)
    assert tss.ids == ("b", "a")
    np.testing.assert_array_equal(tss.values[0], [[5, 6], [3, 4]])


def test_ragged(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1\na,1,0\na,2,0\na,3,0\nb,1,0\nb,2,0\n")
    with pytest.raises(RaggedSeries, match="'b'"):
        load_timeseries(p)


def test_ragged_dims(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1,d2\na,1,0,0\nb,1,0\n")
    with pytest.raises(RaggedSeries, match="'b'"):
        load_timeseries(p)


def test_non_contiguous(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1\na,1,0\na,3,0\n")
    with pytest.raises(NonContiguousTime, match="'a'"):
        load_timeseries(p)


def test_duplicate_time(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1\na,1,0\na,1,0\n")
    with pytest.raises(NonContiguousTime):
        load_timeseries(p)


@pytest.mark.parametrize("cell", ["x", "nan", "inf", ""])
def test_non_numeric(tmp_path, cell):
    p = write_csv(tmp_path / "a.csv", f"id,t,d1\na,1,0\na,2,{cell}\n")
    with pytest.raises(NonNumericCell, match="'a'"):
        load_timeseries(p)


def test_bad_header(tmp_path):
    p = write_csv(tmp_path / "a.csv", "name,time,x\na,1,0\n")
    with pytest.raises(ValidationError):
        load_timeseries(p)


def test_expected_dims(tmp_path):
    p = write_csv(tmp_path / "a.csv", "id,t,d1\na,1,0\n")
    with pytest.raises(ValidationError):
        load_timeseries(p, expected_dims=2)


def test_missing_file(tmp_path):
    with pytest.raises(MissingFile):
        load_timeseries(tmp_path / "nope.csv")


def test_roundtrip_small(tmp_path):
    tss = TimeSeriesSet.from_array([[[0.1], [0.2], [0.3]], [[1.5], [-2.25], [3e-7]]])
    write_timeseries(tss, tmp_path / "x.csv")
    assert load_timeseries(tmp_path / "x.csv") == tss


def test_roundtrip_full_scale(tmp_path, benchmark_scenario):
    tss, _ = benchmark_scenario
    assert tss.shape == (30, 800, 2)
    write_timeseries(tss, tmp_path / "ts.csv")
    back = load_timeseries(tmp_path / "ts.csv", expected_dims=2)
    assert back.shape == (30, 800, 2)
    assert back == tss


@pytest.mark.skipif(os.geteuid() == 0, reason="root can write anywhere")
def test_write_unwritable(tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    with pytest.raises(IoFailure):
        write_timeseries(TimeSeriesSet.from_array(np.zeros((1, 2, 1))), d / "x.csv")


def test_write_into_missing_directory(tmp_path):
    with pytest.raises(IoFailure):
        write_timeseries(TimeSeriesSet.from_array(np.zeros((1, 2, 1))), tmp_path / "no" / "x.csv")


def test_invalid_sets():
    with pytest.raises(ValidationError):
        TimeSeriesSet.from_array(np.full((2, 3, 1), np.nan))
    with pytest.raises(ValidationError):
        TimeSeriesSet(np.zeros((2, 3, 1)), ("a", "a"))
    with pytest.raises(ValidationError):
        TimeSeriesSet(np.zeros((2, 3, 1)), ("a",))


def test_immutable():
    tss = TimeSeriesSet.from_array(np.zeros((2, 3, 1)))
    with pytest.raises(ValueError):
        tss.values[0, 0, 0] = 1.0


def test_slice_first_hundred(benchmark_scenario):
    tss, _ = benchmark_scenario
    w = slice_window(tss, WindowSpec(1, 100))
    assert w.n_steps == 100
    np.testing.assert_array_equal(w.values, tss.values[:, :100])
    assert w.ids == tss.ids


def test_slice_full_is_identity(benchmark_scenario):
    tss, _ = benchmark_scenario
    assert slice_window(tss, WindowSpec(1, tss.n_steps)) == tss


@pytest.mark.parametrize("w", [WindowSpec(8, 5), WindowSpec(0, 3), WindowSpec(1, 0), WindowSpec(11, 1)])
def test_slice_out_of_range(w):
    tss = TimeSeriesSet.from_array(np.zeros((2, 10, 1)))
    with pytest.raises(WindowOutOfRange):
        slice_window(tss, w)


@given(
    t=st.integers(1, 30),
    data=st.data(),
)
def test_slice_composition(t, data):
    tss = TimeSeriesSet.from_array(np.arange(2 * t, dtype=float).reshape(2, t, 1))
    a = data.draw(st.integers(1, t))
    big = data.draw(st.integers(1, t - a + 1))
    b = data.draw(st.integers(1, big))
    small = data.draw(st.integers(1, big - b + 1))
    inner = slice_window(slice_window(tss, WindowSpec(a, big)), WindowSpec(b, small))
    assert inner == slice_window(tss, WindowSpec(a + b - 1, small))


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.integers(1, 6).flatmap(
            lambda t: st.integers(1, 3).flatmap(
                lambda d: st.lists(finite, min_size=n * t * d, max_size=n * t * d).map(
                    lambda v: np.array(v).reshape(n, t, d)
                )
            )
        )
    )
)
def test_roundtrip_property(tmp_path_factory, values):
    tss = TimeSeriesSet.from_array(quantize(values))
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    write_timeseries(tss, path)
    assert load_timeseries(path) == tss

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetamoments.series import (
    GridMismatchError,
    LineSeries,
    TGrid,
    check_same_grid,
    constant_series,
    pow_line,
    read_line_binary,
    read_line_csv,
)
from zetamoments.zeros import IntervalSet


def test_grid_count_and_points():
    g = TGrid(0.75, 1.0, 2.0, 0.1)
    assert g.count == 11
    assert g.t[-1] == pytest.approx(2.0)
    assert g.length == pytest.approx(1.0)


@pytest.mark.parametrize(
    "args",
    [(0.0, 1, 2, 0.1), (0.75, 1, 2, 0.0), (0.75, 2, 1, 0.1), (0.75, 0.5, 2, 0.1), (2.5, 1, 2, 0.1)],
)
def test_grid_rejects(args):
    with pytest.raises(ValueError):
        TGrid(*args)


def test_grid_mismatch():
    a = TGrid(0.75, 1, 10, 0.1)
    with pytest.raises(GridMismatchError):
        check_same_grid(a, TGrid(0.75, 1, 10, 0.05))
    with pytest.raises(GridMismatchError):
        check_same_grid(a, TGrid(0.8, 1, 10, 0.1))


def test_nonfinite_only_inside_mask():
    g = TGrid(0.75, 1, 2, 0.25)
    s = np.ones(g.count, dtype=complex)
    s[2] = np.nan
    with pytest.raises(ValueError):
        LineSeries(g, s)
    LineSeries(g, s, mask=IntervalSet(((1.4, 1.6),)))


def test_pow_line():
    g = TGrid(0.75, 1, 2, 0.1)
    c = constant_series(g, 1 + 1j)
    assert np.allclose(pow_line(c, 3).samples, (1 + 1j) ** 3)
    assert pow_line(c, 1) is c
    rng = np.random.default_rng(0)
    f = LineSeries(g, rng.normal(size=g.count) + 1j * rng.normal(size=g.count))
    assert np.allclose(np.abs(pow_line(f, 4).samples), np.abs(f.samples) ** 4, rtol=1e-14)


@settings(max_examples=20, deadline=None)
@given(vals=st.lists(st.complex_numbers(max_magnitude=1e300, allow_nan=False, allow_infinity=False), min_size=1, max_size=30))
def test_csv_roundtrip_bit_exact(vals, tmp_path_factory):
    g = TGrid(0.75, 1.0, 1.0 + 0.1 * len(vals) - 0.05, 0.1)
    s = LineSeries(g, np.array(vals, dtype=complex))
    path = tmp_path_factory.mktemp("csv") / "s.csv"
    s.to_csv(path)
    t, back = read_line_csv(path)
    assert np.array_equal(back, s.samples)
    assert np.array_equal(t, g.t)


def test_binary_roundtrip(tmp_path):
    g = TGrid(0.75, 1, 3, 0.01)
    rng = np.random.default_rng(1)
    s = LineSeries(g, rng.normal(size=g.count) + 1j * rng.normal(size=g.count))
    s.to_binary(tmp_path / "s.bin")
    raw = (tmp_path / "s.bin").read_bytes()
    assert raw[:4] == b"ZLS1" and len(raw) == 16 + 16 * g.count
    assert np.array_equal(read_line_binary(tmp_path / "s.bin"), s.samples)
    (tmp_path / "bad.bin").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(ValueError):
        read_line_binary(tmp_path / "bad.bin")

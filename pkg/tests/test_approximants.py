import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetamoments.approximants import (
    PhaseSeries,
    p_n_line,
    partial_sum_line,
    pn_exponent_line,
    theta_p_line,
    wrap_phase,
    z_n_line,
)
from zetamoments.arith import CoeffTable, dirichlet_exp, smoothed_mangoldt_table
from zetamoments.meanvalue import fourier_coeff, mean_square
from zetamoments.series import GridMismatchError, LineSeries, TGrid, constant_series
from zetamoments.zeros import IntervalSet
from zetamoments.zeta_eval import zeta_line


def test_wrap_phase_examples():
    assert wrap_phase(math.pi) == math.pi
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
    assert wrap_phase(0.0) == 0.0
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)


@settings(max_examples=200)
@given(st.floats(-1e6, 1e6), st.integers(-1000, 1000))
def test_wrap_phase_periodic(x, m):
    a, b = wrap_phase(x), wrap_phase(x + 2 * math.pi * m)
    assert -math.pi < a <= math.pi
    # equal modulo rounding, possibly on opposite sides of the cut at pi
    d = abs(a - b)
    assert min(d, 2 * math.pi - d) < 1e-8 * max(1.0, abs(x))


def test_pn_at_t0_real_and_above_one():
    g = TGrid(0.75, 1.0, 2.0, 0.01)
    # shift the grid to start at t = 0 to evaluate P_N(sigma)
    g0 = TGrid(0.75, 0.0, 1.0, 0.01, allow_low=True)
    for N in (2, 5, 20):
        v = p_n_line(N, 1, g0).samples[0]
        assert abs(v.imag) < 1e-15 and v.real > 1
        assert theta_p_line(N, 3, g0).theta[0] == 0.0
    assert np.all(np.abs(p_n_line(7, 2, g).samples) > 0)


def test_pn_n2_closed_form():
    sigma = 0.75
    g0 = TGrid(sigma, 0.0, 1.0, 0.5, allow_low=True)
    expected = math.exp(2**-sigma + (2 - math.log(3) / math.log(2)) * 3**-sigma)
    assert p_n_line(2, 1, g0).samples[0].real == pytest.approx(expected, rel=1e-14)


def test_theta_matches_arg_of_product():
    g = TGrid(0.7, 1.0, 5000.0, 0.05)
    for N, k in ((10, 1), (50, 2)):
        pn = p_n_line(N, k, g)
        th = theta_p_line(N, k, g)
        idx = np.random.default_rng(N).choice(g.count, 100, replace=False)
        d = wrap_phase(np.angle(pn.samples[idx]) - th.theta[idx])
        assert np.max(np.abs(d)) < 1e-10


def test_theta_k_doubling():
    g = TGrid(0.75, 1.0, 500.0, 0.05)
    t1 = theta_p_line(30, 1, g)
    t2 = theta_p_line(30, 2, g)
    assert np.allclose(t2.theta, wrap_phase(2 * t1.unwrapped), atol=1e-12)


def test_phase_series_range_and_csv(tmp_path):
    g = TGrid(0.75, 1.0, 2.0, 0.25)
    with pytest.raises(ValueError):
        PhaseSeries(g, np.full(g.count, -math.pi))
    ps = PhaseSeries(g, np.zeros(g.count), IntervalSet(((1.2, 1.6),)))
    ps.to_csv(tmp_path / "p.csv")
    rows = (tmp_path / "p.csv").read_text().splitlines()
    assert rows[0] == "t,theta,masked"
    assert [r.split(",")[2] for r in rows[1:]] == ["0", "1", "1", "0", "0"]


def test_z_n_identities():
    g = TGrid(0.75, 10.0, 400.0, 0.01)
    z = zeta_line(g)
    pn = p_n_line(20, 1, g)
    th = theta_p_line(20, 1, g)
    zn, tz = z_n_line(z, pn, None, th)
    assert np.allclose(np.abs(zn.samples) * np.abs(pn.samples), np.abs(z.samples), rtol=1e-13)
    # theta_Z + theta_P = arg zeta mod 2 pi
    d = wrap_phase(tz.theta + th.unwrapped - np.angle(z.samples))
    assert np.max(np.abs(d)) < 1e-9
    for k in (1, 2):
        lhs = np.abs(z.samples) ** (2 * k) * np.exp(2j * k * tz.theta)
        rhs = z.samples ** (2 * k) * np.exp(-2j * k * th.unwrapped)
        assert np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))) < 1e-10
    # closed-form phase and arg P_N give the same theta_Z
    _, tz2 = z_n_line(z, pn)
    d = wrap_phase(tz.theta - tz2.theta)
    assert np.max(np.abs(d)) < 1e-9


def test_z_n_degenerate_and_mask():
    g = TGrid(0.75, 10.0, 20.0, 0.01)
    z = zeta_line(g)
    one = constant_series(g, 1.0)
    zn, tz = z_n_line(z, one, IntervalSet(((12.0, 13.0),)))
    assert np.array_equal(zn.samples, z.samples)
    assert np.allclose(tz.theta, np.angle(z.samples))
    assert tz.excluded().sum() == 100
    with pytest.raises(GridMismatchError):
        z_n_line(z, constant_series(TGrid(0.75, 10.0, 20.0, 0.02), 1.0))


def test_partial_sum_examples():
    g0 = TGrid(0.75, 0.0, 1.0, 0.5, allow_low=True)
    assert np.all(partial_sum_line(3, 1, g0).samples == 1)
    assert partial_sum_line(1, 2, g0).samples[0].real == pytest.approx(1 + 2**-0.75)
    g = TGrid(0.6, 1.0, 50.0, 0.01)
    f = partial_sum_line(2, 12, g)
    n = np.arange(1, 13)
    d2 = np.array([1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6])
    ref = (d2 * n**-0.6 * np.exp(-1j * np.outer(g.t, np.log(n)))).sum(axis=1)
    assert np.max(np.abs(f.samples - ref)) < 1e-11


def test_partial_sum_norm_orthogonality():
    g = TGrid(0.75, 1.0, 1e4, 0.05)
    r = mean_square(partial_sum_line(2, 30, g))
    n = np.arange(1, 31)
    from zetamoments.arith import divisor_table

    target = float(np.sum(divisor_table(2, 30).values ** 2 * n**-1.5))
    # off-diagonal terms decay like 1/(T * min gap); gap log(30/29)
    assert r.value == pytest.approx(target, abs=2 / (1e4 * math.log(30 / 29)) * target)


def test_pn_fourier_matches_dirichlet_exp():
    N, k, sigma = 3, 1, 0.75
    g = TGrid(sigma, 1.0, 2e4, 0.05)
    pn = p_n_line(N, k, g)
    lam = smoothed_mangoldt_table(N).values
    n_max = 60
    a = np.zeros(n_max)
    idx = np.flatnonzero(lam) + 1
    a[idx - 1] = k * lam[idx - 1] / np.log(idx)
    b = dirichlet_exp(CoeffTable(n_max, a)).values
    for n in (1, 2, 3, 4, 6, 8, 9, 5):
        c = fourier_coeff(pn, -math.log(n)).value
        assert abs(c - b[n - 1] * n**-sigma) < 5e-3


def test_exponent_line_chunk_invariance():
    g = TGrid(0.8, 1.0, 200.0, 0.01)
    a = pn_exponent_line(15, g, chunk=1000)
    b = pn_exponent_line(15, g, chunk=1000, threads=3)
    assert np.array_equal(a, b)


def test_bad_arguments():
    g = TGrid(0.75, 1.0, 2.0, 0.1)
    with pytest.raises(ValueError):
        p_n_line(1, 1, g)
    with pytest.raises(ValueError):
        theta_p_line(5, 0, g)
    with pytest.raises(ValueError):
        partial_sum_line(1, 0, g)
    assert isinstance(p_n_line(3, 1, g), LineSeries)

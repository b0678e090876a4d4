import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetamoments.approximants import partial_sum_line, theta_p_line
from zetamoments.meanvalue import (
    EstimateRecord,
    besicovitch_dist2,
    fourier_coeff,
    mean_inner,
    mean_square,
    moment,
    quadrature_weights,
    run_weights,
)
from zetamoments.series import GridMismatchError, LineSeries, TGrid, constant_series
from zetamoments.zeros import IntervalSet


def exp_line(g, lam, c=1.0):
    return LineSeries(g, c * np.exp(1j * lam * g.t))


def bohr(g, coefs, lams):
    return LineSeries(g, np.exp(1j * np.outer(g.t, lams)) @ coefs)


@pytest.mark.parametrize("m", range(2, 12))
def test_run_weights_exact_on_polynomials(m):
    h = 0.3
    x = np.arange(m) * h
    w = run_weights(m, h)
    deg = 1 if m == 2 else 3
    for p in range(deg + 1):
        assert w @ x**p == pytest.approx(x[-1] ** (p + 1) / (p + 1), rel=1e-12)


def test_masked_weights_and_measure():
    g = TGrid(0.75, 1.0, 11.0, 0.5)
    ex = IntervalSet(((4.2, 6.1),)).indicator(g.t)
    w, measure = quadrature_weights(g, ex)
    assert np.all(w[ex] == 0)
    # retained runs: t = 1..4 and 6.5..11
    assert measure == pytest.approx(3.0 + 4.5)
    assert w.sum() == pytest.approx(measure)


def test_unit_exponential():
    g = TGrid(0.75, 1.0, 1e3, 0.01)
    e = exp_line(g, 2.0)
    assert mean_inner(e, e).value == pytest.approx(1.0, abs=1e-12)


def test_distinct_exponentials():
    g = TGrid(0.75, 1.0, 1e3, 0.01)
    lam, mu = 2.0, 2.3
    v = abs(mean_inner(exp_line(g, lam), exp_line(g, mu)).value)
    assert v <= 2 / ((1e3 - 1) * abs(lam - mu)) + 1e-8


def test_partial_sum_norm():
    g = TGrid(0.75, 1.0, 1e4, 0.02)
    f = partial_sum_line(1, 50, g)
    target = float(np.sum(np.arange(1, 51) ** -1.5))
    assert mean_inner(f, f).value.real == pytest.approx(target, rel=0.01)


def test_errors():
    g = TGrid(0.75, 1.0, 1.15, 0.1)
    with pytest.raises(ValueError):
        mean_inner(constant_series(g, 1), constant_series(g, 1))
    g1, g2 = TGrid(0.75, 1, 10, 0.1), TGrid(0.75, 1, 10, 0.05)
    with pytest.raises(GridMismatchError):
        mean_inner(constant_series(g1, 1), constant_series(g2, 1))
    with pytest.raises(ValueError):
        fourier_coeff(constant_series(g1, 1), 40.0)
    masked = constant_series(g1, 1).with_mask(IntervalSet(((0, 20),)))
    with pytest.raises(ValueError):
        mean_square(masked)


def test_moment_constant():
    g = TGrid(0.75, 1.0, 100.0, 0.1)
    c = constant_series(g, 1.5 - 0.5j)
    for k in (1, 2, 3):
        r = moment(k, c)
        assert r.value == pytest.approx(abs(1.5 - 0.5j) ** (2 * k), rel=1e-13)
        assert r.extra["integral"] == pytest.approx(r.value * 99.0, rel=1e-13)


def test_record_json():
    r = EstimateRecord(1 + 2j, 0.1, {"k": 1})
    d = json.loads(r.to_json())
    assert d["value_re"] == 1 and d["value_im"] == 2 and d["params"] == {"k": 1}
    with pytest.raises(ValueError):
        EstimateRecord(1.0, -1.0)


def test_besicovitch_n0_is_moment():
    g = TGrid(0.75, 1.0, 300.0, 0.05)
    f = bohr(g, np.array([1.0, 0.5]), np.array([0.0, -math.log(2)]))
    assert besicovitch_dist2(1, 0, f).value == pytest.approx(moment(1, f).value, rel=1e-14)


def test_unitary_multiplier():
    g = TGrid(0.75, 1.0, 2e3, 0.05)
    rng = np.random.default_rng(4)
    f = bohr(g, rng.normal(size=8) + 1j * rng.normal(size=8), rng.uniform(-5, 5, 8))
    u = np.exp(1j * theta_p_line(30, 1, g).theta)
    uf = LineSeries(g, u * f.samples)
    assert mean_square(uf).value == pytest.approx(mean_square(f).value, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_positivity_and_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)
    g = TGrid(0.75, 1.0, 1.0 + rng.uniform(1, 50), rng.uniform(0.01, 0.2))
    f = LineSeries(g, rng.normal(size=g.count) + 1j * rng.normal(size=g.count))
    h = LineSeries(g, rng.normal(size=g.count) + 1j * rng.normal(size=g.count))
    ff, hh = mean_inner(f, f).value, mean_inner(h, h).value
    assert ff.real >= -1e-12 and abs(ff.imag) == 0
    fh = mean_inner(f, h).value
    assert abs(fh) ** 2 <= ff.real * hh.real * (1 + 1e-10)


def test_parseval_residual_decreases():
    rng = np.random.default_rng(20)
    coefs = rng.normal(size=20) + 1j * rng.normal(size=20)
    lams = -np.log(np.arange(1, 21, dtype=float))
    target = float(np.sum(np.abs(coefs) ** 2))
    res = []
    for T in (1e3, 1e4, 1e5):
        g = TGrid(0.75, 1.0, T, 0.05)
        res.append(abs(mean_square(bohr(g, coefs, lams)).value - target))
    assert res[0] > res[1] > res[2]

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from critwindow import asymptotics as asy
from critwindow.errors import BoundHypothesisError
from critwindow.genfun import surplus_S

# calibrated once from the exact table: max of C(n, n+k) / bound form
C_CAL_3_40 = 8.5191
C_CAL_3_64 = 9.118


def test_solve_y_values():
    assert asy.solve_y(1) == 0
    assert asy.solve_y(math.log(3)) == pytest.approx(0.5, abs=1e-14)
    y = asy.solve_y(10)
    assert 0.99 < y < 1
    # y is within rounding of 1 here, so the residual is taken through t = artanh(y)
    r = asy.solve_surplus_ratio(10)
    assert r.t / math.tanh(r.t) == pytest.approx(10, rel=1e-14)
    assert r.eta == pytest.approx(2 * math.exp(-2 * r.t) / (1 + math.exp(-2 * r.t)), rel=1e-12)
    with pytest.raises(ValueError):
        asy.solve_y(0.5)


@given(y=st.floats(0.01, 0.99))
def test_property_solve_y_round_trip(y):
    assert asy.solve_y(math.atanh(y) / y) == pytest.approx(y, abs=1e-12)


def test_solve_y_increasing():
    xs = np.linspace(1, 30, 300)
    # 1 - y stays resolvable after y itself has rounded to 1
    etas = [asy.solve_surplus_ratio(x).eta for x in xs]
    assert all(b < a for a, b in zip(etas, etas[1:]))


def test_phi_values():
    assert asy.phi(1) == pytest.approx(2 / math.e, rel=1e-14)
    y = 0.5
    want = 2 * math.exp(-math.log(3)) * y ** (1 - math.log(3)) / math.sqrt(1 - y * y)
    assert asy.phi(math.log(3)) == pytest.approx(want, rel=1e-12)


def test_a_func_values():
    assert asy.a_func(1) == pytest.approx(2 + 0.5 * math.log(1.5), rel=1e-14)
    x, y = math.log(3), 0.5
    want = x * (x + 1) * (1 - y) + math.log(1 - x + x * y) - 0.5 * math.log(1 - x + x * y * y)
    assert asy.a_func(x) == pytest.approx(want, rel=1e-12)
    vals = [abs(asy.a_func(x)) for x in np.linspace(1, 50, 200)]
    assert max(vals) < 3
    assert asy.a_func(50) < 1e-30


def test_phi_bound_grid():
    xs = np.linspace(1, 20, 1000)
    assert all(asy.phi(x) <= asy.phi_bound(x) * (1 + 1e-14) for x in xs)


def test_phi_bound_monotone_in_y():
    # right side increases in y on (0, t/sqrt(e)]
    t = asy.T_PARAM
    ys = np.linspace(1e-3, t / math.sqrt(math.e), 400)
    rhs = [-(y * y) * math.log(y / t) / 3 for y in ys]
    assert all(b > a for a, b in zip(rhs, rhs[1:]))


def test_bcm_small_case():
    want = (2 / math.e) ** 3 * math.exp(2 + 0.5 * math.log(1.5))
    assert float(asy.bcm_estimate(3, 0)) == pytest.approx(want, rel=1e-12)


def test_bcm_ratio_approaches_one(table):
    ratios = [float(table.entry(n, n) / asy.bcm_estimate(n, 0)) for n in (10, 20, 40, 60)]
    devs = [abs(r - 1) for r in ratios]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    for frac in (0.1, 0.5):
        devs = [abs(float(table.entry(n, n + int(frac * n)) / asy.bcm_estimate(n, int(frac * n))) - 1) for n in (10, 20, 40, 60)]
        assert devs[-1] < devs[0]


def test_prop_bound_calibration(table):
    c, where = asy.calibrate_prop_constant(table, 3, 40)
    assert c == pytest.approx(C_CAL_3_40, abs=1e-4)
    assert c < 10
    for n in range(3, 41):
        for k in range(0, n + 1):
            assert table.entry(n, n + k) <= asy.prop_bound(n, k, c * (1 + 1e-12))
    c64, _ = asy.calibrate_prop_constant(table, 3, 64)
    assert c64 == pytest.approx(C_CAL_3_64, abs=1e-3)


def test_prop_bound_forms():
    n, k = 12, 5
    t = asy.T_PARAM
    assert float(asy.prop_bound(n, 0)) == pytest.approx(float(asy.crude_bound(n, 0) * (2 / mpmath.e) ** n), rel=1e-14)
    ratio_form = (math.e * n / k) ** (k / 2)
    t_form = (t * t * n / (3 * k)) ** (k / 2)
    assert ratio_form == pytest.approx(t_form, rel=1e-13)
    with pytest.raises(BoundHypothesisError):
        asy.prop_bound(5, 6)


def test_crude_bound(table):
    assert asy.crude_bound(4, 0) == 15
    assert asy.crude_bound(3, -1) == 3
    for n in range(2, 30):
        for k in range(-1, n * (n - 1) // 2 - n + 1):
            assert table.entry(n, n + k) <= asy.crude_bound(n, k) <= asy.crude_bound_stirling(n, k)


def test_kk_series():
    assert asy.kk_series(0) == 1
    direct = 1 + sum(1 / k ** (k / 2) for k in range(1, 60))
    assert float(asy.kk_series(1)) == pytest.approx(direct, rel=1e-14)
    ratios = []
    for x in (5, 10, 20):
        x = mpmath.mpf(x)
        ratios.append(float(asy.kk_series(x) / (mpmath.sqrt(4 * mpmath.pi / mpmath.e) * x * mpmath.exp(x * x / (2 * mpmath.e)))))
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))
    assert abs(ratios[-1] - 1) < 0.02


def test_sparse_and_dense_small_cases(table):
    z = Fraction(1, 5)
    assert asy.sparse_A(3, z, table) == z / 3
    assert asy.sparse_A(5, 0, table) == 0
    assert asy.dense_B(3, z, table) == 0
    assert asy.dense_B(4, z, table) == z**3 / 16


def test_linear_regime_and_series_bound(table):
    for n in range(3, table.n_max + 1):
        z = 1 / mpmath.mpf(n) ** 1.5
        a = asy.sparse_A(n, z, table)
        assert a / (mpmath.mpf(n) ** 1.5 * z) < 1
        assert a <= asy.sparse_A_series_bound(n, z, C_CAL_3_64 * 1.001)


def test_dense_bound(table):
    for n in range(3, table.n_max + 1):
        z = 3 / (mpmath.e * n)
        assert asy.dense_B(n, z, table) <= asy.dense_B_bound(n, z)
        assert asy.dense_B_bound(n, z) <= asy.dense_B_bound(n, z, uniform=True)
    with pytest.raises(BoundHypothesisError):
        asy.dense_B_bound(10, 0.2)


def test_surplus_upper_dominates(table):
    for n in range(3, table.n_max + 1):
        for z in (mpmath.mpf("1e-4"), mpmath.mpf("1e-3")):
            exact = surplus_S(n, z, table)
            assert exact <= asy.surplus_upper(n, z, 0.01, C_CAL_3_64 * 1.001)
    assert asy.surplus_upper(5, 0, 0.01, 1.0) >= 0


def test_sparse_constant_dominates_series_bound():
    c = 2.0
    for n in (5, 20, 60, 200):
        for scale in (0.1, 1, 3):
            z = scale / n**1.5
            assert asy.sparse_A_series_bound(n, z, c) <= asy.sparse_A_bound(n, z, 0.01, c) * (1 + 1e-10)

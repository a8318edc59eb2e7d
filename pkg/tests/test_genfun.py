import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from critwindow.errors import BoundHypothesisError, CapacityError
from critwindow.genfun import (
    WindowPoint,
    chi_animal,
    chi_tree,
    delta0,
    delta_chi,
    g01_animal,
    g01_tree,
    g0_animal,
    g0_tree,
    surplus_S,
    tail_bound,
)
from oracles import subgraph_sums, tree_sums_direct

# direct Cayley-count sums at 40 digits (tests/oracles.py), p = 1 unless noted
FROZEN_TREE = {
    1000: {"g0": 2.32625249743827484960439455007, "g01": 0.0091002763826622125007209473305, "chi": 11.4174286037178251378246209332},
    5000: {"g0": 2.45419562200569196311247264405, "g01": 0.00309017735931698953437039279402, "chi": 17.9019922412313226454300662213},
}
FROZEN_CHI_S1 = {1000: 22.515145029385143265427693741, 5000: 35.4244586061089204894869979133}

TREE = {"g0": g0_tree, "g01": g01_tree, "chi": chi_tree}
ANIMAL = {"g0": g0_animal, "g01": g01_animal, "chi": chi_animal}


@pytest.mark.parametrize("V", [2, 3, 4, 5])
def test_tree_and_animal_against_enumeration(V):
    x = Fraction(1, 7)
    p = mpmath.mpf(x.numerator) * mpmath.e * V / x.denominator
    trees = subgraph_sums(V, x, trees_only=True)
    animals = subgraph_sums(V, x, trees_only=False)
    for name in ("g0", "g01", "chi"):
        want = trees[name]
        assert float(TREE[name](V, p).value) == pytest.approx(float(want), rel=1e-14)
        want = animals[name]
        assert float(ANIMAL[name](V, p).value) == pytest.approx(float(want), rel=1e-14)


def test_small_closed_forms():
    assert float(g0_tree(2, 1)) == pytest.approx(1 + 1 / (2 * math.e), rel=1e-15)
    assert float(chi_tree(2, 1)) == pytest.approx(1 + 1 / math.e, rel=1e-15)
    assert float(delta0(3, 1)) == pytest.approx((1 / (3 * math.e)) ** 3, rel=1e-14)


@pytest.mark.parametrize("V", sorted(FROZEN_TREE))
def test_frozen_tree_values(V):
    for name, want in FROZEN_TREE[V].items():
        assert float(TREE[name](V, 1)) == pytest.approx(want, rel=1e-13)
    assert float(chi_tree(WindowPoint(V, 1))) == pytest.approx(FROZEN_CHI_S1[V], rel=1e-13)


def test_direct_sum_oracle_moderate_V():
    V = 300
    x = Fraction(1, 900)
    direct = tree_sums_direct(V, x)
    with mpmath.workprec(200):
        p = mpmath.e * V * x.numerator / x.denominator
        for name, fn in TREE.items():
            want = mpmath.mpf(direct[name].numerator) / direct[name].denominator
            assert abs(fn(V, p, precision_bits=200).value - want) <= 1e-40 * want


def test_p_zero_is_exact():
    assert g0_tree(50, 0).value == 1
    assert chi_tree(50, 0).value == 1
    assert g01_tree(50, 0).value == 0
    assert chi_animal(10, 0).value == 1


def test_one_point_increases_towards_e():
    vals = [float(g0_tree(V, 1)) for V in (10**3, 10**4, 10**5)]
    assert vals[0] < vals[1] < vals[2] < math.e


def test_truncation_certificate_brackets_full_sum():
    V = 20_000
    for s in (-1.5, 0.0, 1.5):
        point = WindowPoint(V, s)
        full = chi_tree(point, truncate=False)
        cut = chi_tree(point, truncate=True)
        assert cut.certificate is not None
        assert cut.value <= full.value <= cut.upper
        assert cut.n_terms < V


@settings(max_examples=12)
@given(s=st.floats(-2, 2), V=st.integers(10_001, 30_000))
def test_property_certificate(s, V):
    cut = g0_tree(WindowPoint(V, s), truncate=True)
    full = g0_tree(WindowPoint(V, s), truncate=False)
    assert cut.value <= full.value <= cut.upper


@given(V=st.integers(2, 400), s=st.floats(-1, 3))
def test_property_chi_decomposition(V, s):
    point = WindowPoint(V, s)
    chi = chi_tree(point).value
    assert chi == pytest.approx(g0_tree(point).value + (V - 1) * g01_tree(point).value, rel=1e-25)


@given(V=st.integers(4, 30), p1=st.floats(0, 2), p2=st.floats(0, 2))
def test_property_monotone_in_p(V, p1, p2):
    lo, hi = sorted((p1, p2))
    assert chi_tree(V, lo).value <= chi_tree(V, hi).value
    assert g0_animal(V, lo).value <= g0_animal(V, hi).value


def test_animal_decomposition(table):
    V = 12
    assert float(chi_animal(V, 1, table)) == pytest.approx(float(chi_tree(V, 1)) + float(delta_chi(V, 1, table)), rel=1e-25)
    assert float(g0_animal(V, 1, table)) == pytest.approx(float(g0_tree(V, 1)) + float(delta0(V, 1, table)), rel=1e-25)
    assert delta_chi(V, 1, table).value > 0


def test_animal_capacity(table):
    with pytest.raises(CapacityError):
        chi_animal(table.n_max + 1, 1, table)


def test_surplus_generating_function(table):
    # K_3 is the only connected graph on 3 vertices with surplus
    assert surplus_S(3, Fraction(1, 2), table) == Fraction(1, 2)
    assert surplus_S(4, 1, table) == table.connected_total(4) - 16
    with pytest.raises(ValueError):
        surplus_S(2, 1, table)


def test_tail_bound_hypotheses():
    with pytest.raises(BoundHypothesisError):
        tail_bound(0.5, 0.5, 0.0, 0.001, 100)
    with pytest.raises(BoundHypothesisError):
        tail_bound(0.5, 0.5, 10.0, 1.0, 10_000)
    assert tail_bound(0.5, 0.5, 0.0, 8.0, 10_000) < 1e-12


def test_window_point_validation():
    with pytest.raises(ValueError):
        WindowPoint(100, -11)
    assert WindowPoint.from_p(100, 1.1).s == pytest.approx(1.0)
    with pytest.raises(TypeError):
        chi_tree(WindowPoint(10, 0), 1.0)


def test_one_point_deficit_decays_like_quarter_power():
    # e - G0(1) ~ c V^(-1/4) with c = e 2^(3/4) Gamma(3/4) / sqrt(2 pi): a slow approach to e
    c = math.e * 2**0.75 * math.gamma(0.75) / math.sqrt(2 * math.pi)
    scaled = [(math.e - float(g0_tree(WindowPoint(V, 0.0)))) * V**0.25 for V in (10**4, 10**5, 10**6, 10**7)]
    assert all(abs(x - c) < 0.015 for x in scaled)
    assert [abs(x - c) for x in scaled] == sorted((abs(x - c) for x in scaled), reverse=True)

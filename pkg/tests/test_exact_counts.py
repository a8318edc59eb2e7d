import math

import pytest
from hypothesis import given, strategies as st

from critwindow.exact_counts import (
    CountTable,
    binomial,
    brute_force_connected,
    cayley_count,
    connected_count,
    total_graphs,
)

# brute-force enumeration of all edge subsets, frozen
ROW_5 = [125, 222, 205, 120, 45, 10, 1]
CONNECTED_TOTALS = {1: 1, 2: 1, 3: 4, 4: 38, 5: 728, 6: 26704}


def test_small_values(table):
    assert connected_count(4, 4, table) == 15
    assert connected_count(5, 5, table) == 222
    assert list(table.row(5)) == ROW_5


def test_against_brute_force(table):
    for n in range(1, 7):
        for m in range(0, n * (n - 1) // 2 + 1):
            assert table.entry(n, m) == brute_force_connected(n, m), (n, m)


def test_connected_totals(table):
    for n, total in CONNECTED_TOTALS.items():
        assert table.connected_total(n) == total
        assert sum(brute_force_connected(n, m) for m in range(n * (n - 1) // 2 + 1)) == total


def test_cayley_big_integers(table):
    for n in range(1, 61):
        assert table.entry(n, n - 1) == cayley_count(n)
    assert table.entry(60, 59) == 60**58


def test_outside_support_is_zero(table):
    assert table.entry(5, 3) == 0
    assert table.entry(5, 11) == 0
    assert table.entry(1, 0) == 1


def test_capacity_and_domain():
    small = CountTable(6)
    with pytest.raises(ValueError):
        small.entry(7, 6)
    with pytest.raises(ValueError):
        CountTable(0)
    with pytest.raises(ValueError):
        brute_force_connected(9, 8)
    assert binomial(3, 5) == 0
    assert total_graphs(4, 3) == 20


def test_small_table_matches_large(table):
    small = CountTable(12)
    for n in range(1, 13):
        assert small.row(n) == table.row(n)


@given(n=st.integers(1, 6), data=st.data())
def test_property_brute_force(table, n, data):
    m = data.draw(st.integers(0, n * (n - 1) // 2))
    assert table.entry(n, m) == brute_force_connected(n, m)


@given(n=st.integers(2, 64), data=st.data())
def test_property_bounded_by_all_graphs(table, n, data):
    m = data.draw(st.integers(n - 1, n * (n - 1) // 2))
    c = table.entry(n, m)
    assert 0 < c <= total_graphs(n, m)
    # every spanning tree count sits below the whole row
    assert table.entry(n, n - 1) <= table.connected_total(n)


def test_complete_graph_and_near_complete(table):
    for n in range(2, 30):
        N = n * (n - 1) // 2
        assert table.entry(n, N) == 1
        # removing one edge never disconnects K_n for n >= 3
        assert table.entry(n, N - 1) == (N if n >= 3 else 0)


def test_counts_are_python_ints(table):
    assert type(table.entry(40, 60)) is int
    assert math.log10(table.entry(64, 200)) > 100

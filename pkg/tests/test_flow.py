import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtflow.flow import (
    FlowError,
    FlowNetwork,
    enumerate_integer_flows,
    kostant,
    leaf_volume,
    lidskii_points_binomial,
    lidskii_points_multiset,
    lidskii_volume,
    simplify,
)

TRIANGLE = FlowNetwork.make(3, [(0, 1), (1, 2), (0, 2)], (1, 0, -1))
PATH3 = FlowNetwork.make(3, [(0, 1), (1, 2)], (1, 0, -1))


def test_network_validation():
    with pytest.raises(FlowError):
        FlowNetwork.make(3, [(1, 0)], (0, 0, 0))
    with pytest.raises(FlowError):
        FlowNetwork.make(3, [(0, 1), (1, 2)], (1, 0, 0))
    assert not FlowNetwork.make(4, [(0, 1), (2, 3)], (0, 0, 0, 0)).is_connected()
    assert TRIANGLE.is_connected()


def test_enumerate_flows_examples():
    assert len(enumerate_integer_flows(TRIANGLE)) == 2
    assert enumerate_integer_flows(TRIANGLE, (0, 0, 0)) == [(0, 0, 0)]
    assert len(enumerate_integer_flows(PATH3)) == 1
    assert enumerate_integer_flows(TRIANGLE, (2, 0, -2)) == [
        (2, 2, 0),
        (1, 1, 1),
        (0, 0, 2),
    ]


def test_kostant_examples():
    assert kostant(TRIANGLE) == 2
    assert kostant(TRIANGLE, (0, 0, 0)) == 1
    assert kostant(TRIANGLE, (2, 0, -2)) == 3
    assert kostant(TRIANGLE, (1, 0, 0)) == 0  # does not sum to zero


def small_networks():
    yield TRIANGLE
    yield PATH3
    yield FlowNetwork.make(2, [(0, 1), (0, 1), (0, 1)], (2, -2))
    yield FlowNetwork.make(
        4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)], (1, 0, 0, -1)
    )
    yield FlowNetwork.make(
        4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)], (3, 1, 0, -4)
    )
    yield FlowNetwork.make(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 3), (2, 4), (0, 4)],
        (2, 0, 0, 0, -2),
    )
    yield FlowNetwork.make(3, [(0, 1), (0, 1), (1, 2), (1, 2)], (2, 0, -2))


def test_kostant_matches_enumeration_on_corpus():
    for g in small_networks():
        assert kostant(g) == len(enumerate_integer_flows(g))
        shifted = tuple(x + 1 for x in g.netflow[:-1]) + (
            g.netflow[-1] - (g.num_vertices - 1),
        )
        assert kostant(g, shifted) == len(enumerate_integer_flows(g, shifted))


def test_kostant_edge_order_invariance():
    import random

    rng = random.Random(3)
    for g in small_networks():
        perm = list(range(len(g.edges)))
        rng.shuffle(perm)
        h = g.reordered_edges(perm)
        assert kostant(h) == kostant(g)


def test_lidskii_simplex():
    for a, d in ((1, 2), (3, 2), (2, 4)):
        g = FlowNetwork.make(2, [(0, 1)] * d, (a, -a))
        assert lidskii_volume(g) == Fraction(a ** (d - 1), math.factorial(d - 1))
        assert lidskii_points_binomial(g) == math.comb(a + d - 1, d - 1)


def test_lidskii_identities_on_corpus():
    for g in small_networks():
        pts = kostant(g)
        assert lidskii_points_binomial(g) == pts
        assert lidskii_points_multiset(g) == pts


def test_lidskii_precondition_errors():
    g = FlowNetwork.make(3, [(0, 2), (1, 2), (0, 1)], (1, -1, 0))
    with pytest.raises(FlowError) as e:
        lidskii_volume(g)
    assert "vertex 1" in str(e.value)


def test_lidskii_volume_is_ehrhart_leading_coefficient():
    for g in small_networks():
        dim = g.dimension()
        counts = []
        for t in range(dim + 1):
            gt = g.with_netflow(tuple(t * x for x in g.netflow))
            counts.append(lidskii_points_binomial(gt))
        lead = sum((-1) ** (dim - i) * math.comb(dim, i) * c for i, c in enumerate(counts))
        assert Fraction(lead, math.factorial(dim)) == lidskii_volume(g)


def test_lidskii_points_match_enumeration_on_dilations():
    for g in small_networks():
        for t in (1, 2, 3):
            gt = g.with_netflow(tuple(t * x for x in g.netflow))
            assert lidskii_points_binomial(gt) == len(enumerate_integer_flows(gt))


def test_leaf_volume():
    g = FlowNetwork.make(2, [(0, 1), (0, 1)], (3, -3))
    assert leaf_volume(g) == 3
    h = FlowNetwork.make(
        3, [(0, 2), (0, 2), (1, 2), (1, 2), (1, 2)], (2, 1, -3)
    )
    assert leaf_volume(h) == Fraction(2, 1) * Fraction(1, 2)
    single = FlowNetwork.make(2, [(0, 1)], (5, -5))
    assert leaf_volume(single) == 1
    with pytest.raises(FlowError):
        leaf_volume(TRIANGLE)  # zero-netflow vertex present


def test_simplify_drops_forced_zero_whiskers():
    g = FlowNetwork.make(
        4,
        [(0, 2), (1, 2), (1, 3), (2, 3)],
        (0, 1, 0, -1),
        in_orders=[(), (), (0, 1), (2, 3)],
        out_orders=[(0,), (1, 2), (3,), ()],
    )
    s, vmap, emap = simplify(g)
    assert vmap == (1, 2, 3)
    assert emap == (1, 2, 3)
    assert s.netflow == (1, 0, -1)
    assert kostant(s) == kostant(g)


def test_flow_json_round_trip():
    g = TRIANGLE
    assert FlowNetwork.from_json(g.to_json()) == FlowNetwork.make(
        3, g.edges, g.netflow
    )


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
@settings(deadline=None, max_examples=30)
def test_kostant_triangle_formula(a, b):
    # triangle with netflow (a, b, -a-b): flows f01 in 0..a, forced rest
    g = TRIANGLE
    assert kostant(g, (a, b, -a - b)) == a + 1


@given(st.data())
@settings(deadline=None, max_examples=40)
def test_kostant_matches_enumeration_on_random_networks(data):
    n = data.draw(st.integers(min_value=2, max_value=5))
    pool = [(i, j) for i in range(n) for j in range(i + 1, n)]
    base = [(i, i + 1) for i in range(n - 1)]  # keep it connected
    extra = data.draw(st.lists(st.sampled_from(pool), max_size=4))
    edges = base + extra
    netflow = [data.draw(st.integers(min_value=0, max_value=2)) for _ in range(n - 1)]
    netflow.append(-sum(netflow))
    g = FlowNetwork.make(n, edges, netflow)
    assert kostant(g) == len(enumerate_integer_flows(g))

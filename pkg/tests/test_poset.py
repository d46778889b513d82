import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtflow.poset import (
    MarkedPoset,
    Poset,
    PosetError,
    check_log_concavity,
    check_minkowski,
    count_marked_extensions,
    enumerate_vertices,
    extension_gap_counts,
    is_vertex,
    lattice_points,
    make_order_polytope_mp,
    marked_volume,
    normalized_volume,
    order_polynomial_check,
    unit_markings,
    validate_marked_poset,
)

CHAIN3 = Poset.from_covers(["a", "m", "c"], [("a", "m"), ("m", "c")])
DIAMOND = Poset.from_covers(
    ["bot", "x", "y", "top"], [("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")]
)


def chain_mp(lo=0, hi=2):
    return MarkedPoset.make(CHAIN3, {"a": lo, "c": hi})


def test_poset_rejects_cycle_and_redundant_cover():
    with pytest.raises(PosetError):
        Poset.from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(PosetError):
        Poset.from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])


def test_validate_marked_poset_examples():
    assert validate_marked_poset(chain_mp(0, 2))
    assert not validate_marked_poset(MarkedPoset.make(CHAIN3, {"a": 3, "c": 1}))
    anti = Poset.from_covers(["a", "b"], [])
    assert not validate_marked_poset(MarkedPoset.make(anti, {"a": 0}))


def test_lattice_points_chain():
    pts = lattice_points(chain_mp(0, 2))
    assert sorted(p["m"] for p in pts) == [0, 1, 2]


def test_lattice_points_all_marks_equal():
    mp = MarkedPoset.make(CHAIN3, {"a": 1, "c": 1})
    pts = lattice_points(mp)
    assert len(pts) == 1 and pts[0]["m"] == 1


def test_lattice_points_translation_invariance():
    mp = MarkedPoset.make(DIAMOND, {"bot": 0, "top": 3})
    n0 = len(lattice_points(mp))
    for shift in (1, 2, 5):
        mps = MarkedPoset.make(DIAMOND, {"bot": shift, "top": 3 + shift})
        assert len(lattice_points(mps)) == n0


def test_count_marked_extensions_examples():
    assert count_marked_extensions(chain_mp(0, 2), (1,)) == 1
    assert count_marked_extensions(chain_mp(0, 2), (0,)) == 0
    mp = MarkedPoset.make(DIAMOND, {"bot": 0, "top": 1})
    assert count_marked_extensions(mp, (2,)) == 2
    assert count_marked_extensions(mp, (1,)) == 0


def test_extension_counts_sum_to_sorted_order_extensions():
    mp = MarkedPoset.make(DIAMOND, {"bot": 0, "top": 1})
    buckets = extension_gap_counts(mp)
    total = sum(buckets.values())
    # every extension of the diamond has top first and bot last
    assert total == DIAMOND.count_linear_extensions() == 2


def test_marked_volume_order_polytope_is_extension_count_over_factorial():
    for p in (CHAIN3, DIAMOND):
        mp = make_order_polytope_mp(p)
        e = p.count_linear_extensions()
        assert marked_volume(mp) == Fraction(e, math.factorial(len(p.elements)))
        assert normalized_volume(mp) == e


def test_marked_volume_degenerate():
    mp = MarkedPoset.make(CHAIN3, {"a": 1, "c": 1})
    assert marked_volume(mp) == 0


def test_marked_volume_matches_ehrhart_leading_coefficient():
    fixtures = [
        make_order_polytope_mp(CHAIN3),
        make_order_polytope_mp(DIAMOND),
        MarkedPoset.make(DIAMOND, {"bot": 0, "top": 2, "x": 1}),
    ]
    for mp in fixtures:
        dim = len(mp.poset.elements) - len(mp.marked)
        counts = []
        for t in range(dim + 1):
            scaled = {a: v * t for a, v in mp.marking.items()}
            counts.append(len(lattice_points(mp.with_marking(scaled))))
        lead = Fraction(0)
        for i, c in enumerate(counts):  # dim-th finite difference at 0
            lead += (-1) ** (dim - i) * math.comb(dim, i) * c
        assert Fraction(lead, math.factorial(dim)) == marked_volume(mp)


def test_is_vertex_chain():
    mp = chain_mp(0, 2)
    assert is_vertex(mp, {"a": 0, "m": 0, "c": 2})
    assert not is_vertex(mp, {"a": 0, "m": 1, "c": 2})
    with pytest.raises(PosetError):
        is_vertex(mp, {"a": 0, "m": 5, "c": 2})


def test_enumerate_vertices():
    mp = chain_mp(0, 2)
    assert sorted(v["m"] for v in enumerate_vertices(mp)) == [0, 2]
    square = make_order_polytope_mp(Poset.from_covers(["a", "b"], []))
    assert len(enumerate_vertices(square)) == 4
    full = MarkedPoset.make(CHAIN3, {"a": 0, "m": 1, "c": 2})
    assert len(enumerate_vertices(full)) == 1


def test_vertices_satisfy_criterion_and_capture_optima():
    import random

    mp = MarkedPoset.make(DIAMOND, {"bot": 0, "top": 3})
    verts = enumerate_vertices(mp)
    assert all(is_vertex(mp, v) for v in verts)
    pts = lattice_points(mp)
    rng = random.Random(7)
    vert_set = {tuple(sorted(v.items())) for v in verts}
    for _ in range(25):
        c = {e: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for e in DIAMOND.elements}
        best = max(pts, key=lambda x: sum(c[e] * x[e] for e in x))
        bestval = sum(c[e] * best[e] for e in best)
        winners = [x for x in pts if sum(c[e] * x[e] for e in x) == bestval]
        assert any(tuple(sorted(w.items())) in vert_set for w in winners)


def test_check_minkowski():
    mp = MarkedPoset.make(DIAMOND, {"bot": 0, "top": 2})
    lam = {"bot": 0, "top": 2}
    mu = {"bot": 0, "top": 0}
    assert check_minkowski(mp, lam, mu, trials=20, seed=1)
    assert check_minkowski(mp, lam, lam, trials=20, seed=2)
    omegas = unit_markings(mp)
    assert check_minkowski(mp, omegas[0], omegas[-1], trials=20, seed=3)


def test_check_log_concavity_small():
    assert check_log_concavity(chain_mp(0, 2)) == []
    two_mid = Poset.from_covers(
        ["a", "p", "q", "c"], [("a", "p"), ("p", "q"), ("q", "c")]
    )
    mp = MarkedPoset.make(two_mid, {"a": 0, "p": 1, "c": 3})
    assert check_log_concavity(mp) == []


def test_order_polynomial_check_examples():
    single = Poset.from_covers(["a"], [])
    assert single.order_polynomial(3) == 4
    assert order_polynomial_check(single, 3)
    chain2 = Poset.from_covers(["a", "b"], [("a", "b")])
    assert chain2.order_polynomial(2) == 6
    assert order_polynomial_check(chain2, 2)
    anti = Poset.from_covers(["a", "b"], [])
    assert anti.order_polynomial(1) == 4
    assert order_polynomial_check(anti, 1)


def test_sorted_marked_tie_breaking():
    # equal markings: comparable pairs keep the larger element first
    chain = Poset.from_covers(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
    mp = MarkedPoset.make(chain, {"a": 0, "b": 0, "c": 2, "d": 2})
    assert mp.sorted_marked() == ("d", "c", "b", "a")
    incomparable = Poset.from_covers(["a", "b", "x", "y"], [("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")])
    mp2 = MarkedPoset.make(incomparable, {"a": 0, "b": 0, "x": 1, "y": 1})
    assert mp2.sorted_marked() == ("x", "y", "a", "b")  # id order within ties


def test_json_round_trip():
    mp = MarkedPoset.make(DIAMOND, {"bot": Fraction(1, 2), "top": 2})
    again = MarkedPoset.from_json(mp.to_json())
    assert again == mp


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=1, max_value=4))
@settings(deadline=None, max_examples=20)
def test_chain_lattice_points_count(lo_shift, width):
    mp = chain_mp(lo_shift, lo_shift + width)
    assert len(lattice_points(mp)) == width + 1

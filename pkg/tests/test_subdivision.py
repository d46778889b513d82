import math
from fractions import Fraction

import pytest

from gtflow.combinat import enumerate_compositions
from gtflow.flow import (
    FlowError,
    FlowNetwork,
    kostant,
    lidskii_volume,
    simplify,
)
from gtflow.gt import build_G_lambda, gt_embedding, gt_volume_product
from gtflow.poset import MarkedPoset, Poset, count_marked_extensions, marked_volume
from gtflow.subdivision import (
    NoncrossingTree,
    canonical_reduction_tree,
    compound_reduce,
    enumerate_noncrossing_trees,
    face_extensions,
    full_subdivision_check,
    gamma_cells,
    interior_sample_disjoint,
    leaves_to_extensions,
    reduction_tree_volume,
    sigma_from_tree,
    subdivide_marked_face,
)
from gtflow.transform import SENTINEL, Face, MarkedEmbedding

from test_transform import chain_embedding, diamond_embedding


def test_noncrossing_tree_counts():
    for l in range(1, 6):
        for r in range(1, 6):
            trees = enumerate_noncrossing_trees(l, r)
            assert len(trees) == math.comb(l + r - 2, l - 1)
            assert len(set(t.edges for t in trees)) == len(trees)


def test_noncrossing_tree_composition_round_trip():
    for l, r in [(2, 3), (3, 4), (4, 5)]:
        for t in enumerate_noncrossing_trees(l, r):
            assert NoncrossingTree.from_composition(t.to_composition()) == t


def test_noncrossing_tree_worked_example():
    t = NoncrossingTree.from_composition((0, 2, 1, 1))
    assert t.left == 4 and t.right == 5
    assert t.left_degrees() == (1, 3, 2, 2)


def test_star_tree():
    trees = enumerate_noncrossing_trees(1, 4)
    assert len(trees) == 1
    assert trees[0].edges == ((0, 0), (0, 1), (0, 2), (0, 3))


def test_crossing_rejected():
    with pytest.raises(ValueError):
        NoncrossingTree(2, 2, ((0, 1), (1, 0), (1, 1)))


def test_compound_reduce_preserves_dimension_and_flows():
    g = FlowNetwork.make(
        4, [(0, 1), (0, 1), (1, 2), (1, 3), (2, 3)], (2, 0, 0, -2)
    )
    for tree in enumerate_noncrossing_trees(g.indeg(1), g.outdeg(1)):
        child, old_to_new, pairs = compound_reduce(g, 1, tree)
        assert child.dimension() == g.dimension()
        assert child.num_vertices == g.num_vertices - 1


def test_compound_reduce_requires_zero_netflow():
    g = FlowNetwork.make(3, [(0, 1), (1, 2)], (1, 0, -1))
    with pytest.raises(FlowError):
        compound_reduce(g, 0, enumerate_noncrossing_trees(1, 1)[0])


def test_single_in_edge_reduction_is_contraction():
    g = FlowNetwork.make(3, [(0, 1), (1, 2), (1, 2)], (1, 0, -1))
    trees = enumerate_noncrossing_trees(1, 2)
    assert len(trees) == 1
    child, _, _ = compound_reduce(g, 1, trees[0])
    assert child.edges == ((0, 1), (0, 1))


def test_already_reduced_tree_is_single_node():
    g = FlowNetwork.make(2, [(0, 1), (0, 1)], (2, -2))
    tree = canonical_reduction_tree(g)
    assert len(tree.nodes) == 1
    assert tree.leaves() == [0]


def test_volume_conservation_G_lambda():
    for lam in [(2, 1, 0), (3, 1, 0), (3, 2, 1, 0)]:
        g = build_G_lambda(lam).network
        tree = canonical_reduction_tree(g)
        assert reduction_tree_volume(tree) == gt_volume_product(lam)


def test_volume_conservation_after_simplify():
    # repeated parts make a zero-netflow source; simplify restores the sign
    # convention (the polytope drops to a lower-dimensional coordinate
    # subspace, so volumes are conserved in the simplified normalization)
    g = build_G_lambda((2, 1, 1, 0)).network
    with pytest.raises(FlowError):
        canonical_reduction_tree(g)
    s, _, _ = simplify(g)
    tree = canonical_reduction_tree(s)
    assert reduction_tree_volume(tree) == lidskii_volume(s)
    assert gt_volume_product((2, 1, 1, 0)) == 0  # full-dimension normalization


CRY5 = FlowNetwork.make(
    5, [(i, j) for i in range(5) for j in range(i + 1, 5)], (1, 0, 0, 0, -1)
)
CRY5_LEAF_COUNT = 2


def test_cry_volume_and_leaf_count():
    tree = canonical_reduction_tree(CRY5)
    vol = reduction_tree_volume(tree)
    # normalized volume of the K5 Chan-Robbins-Yuen polytope is 2
    assert vol == lidskii_volume(CRY5) == Fraction(2, math.factorial(6))
    # golden leaf count, cross-checked by the shifted-netflow identity below
    assert len(tree.leaves()) == CRY5_LEAF_COUNT


def test_leaf_counts_by_out_degrees_match_kostant():
    # leaves grouped by source out-degrees are counted by Kostant values at
    # the matching shifted netflow (this doubles as the independent check of
    # the frozen CRY5 leaf count)
    for g in (CRY5, build_G_lambda((2, 1, 0)).network, build_G_lambda((3, 1, 0)).network):
        tree = canonical_reduction_tree(g)
        sources = [v for v in range(g.num_vertices) if g.netflow[v] > 0]
        groups: dict[tuple, int] = {}
        for li in tree.leaves():
            net = tree.nodes[li].network
            degs = tuple(
                net.outdeg(v) for v in range(net.num_vertices) if net.netflow[v] > 0
            )
            groups[degs] = groups.get(degs, 0) + 1
        for degs, cnt in groups.items():
            j = dict(zip(sources, (d - 1 for d in degs)))
            shifted = tuple(
                j.get(v, 0) - g.out_shift(v) for v in range(g.num_vertices - 1)
            ) + (0,)
            assert kostant(g, shifted) == cnt


def test_reduction_order_naturality():
    g = build_G_lambda((2, 1, 0)).network
    zeros = [v for v in range(g.num_vertices) if g.netflow[v] == 0]
    t1 = canonical_reduction_tree(g)
    t2 = canonical_reduction_tree(g, order=sorted(zeros))
    assert len(t1.leaves()) == len(t2.leaves())
    assert reduction_tree_volume(t1) == reduction_tree_volume(t2)


def test_interior_sample_disjoint():
    assert interior_sample_disjoint(canonical_reduction_tree(CRY5))
    assert interior_sample_disjoint(canonical_reduction_tree(build_G_lambda((2, 1, 0)).network))


# ---------------------------------------------------------------------------
# order side


def test_face_extensions_counts():
    f = Face.make(["a", "x", "b"], ["a", "y", "z", "b"])
    exts = face_extensions(f)
    assert len(exts) == math.comb(3, 1)
    f2 = Face.make(["a", "b"], ["a", "b"])
    assert face_extensions(f2) == [("a", "b")]


def test_sigma_from_tree_quadrilateral():
    f = Face.make(["a", "x", "b"], ["a", "y", "b"])
    pairs = gamma_cells_fixture(f)
    assert sorted(s for _, s in pairs) == [("a", "x", "y", "b"), ("a", "y", "x", "b")]


def gamma_cells_fixture(face):
    trees = enumerate_noncrossing_trees(len(face.right) - 1, len(face.left) - 1)
    return [(t, sigma_from_tree(face, t)) for t in trees]


def test_gamma_cells_on_gt_diamond():
    me = gt_embedding((2, 1, 0))
    pairs = gamma_cells(me, "D2_3")
    assert len(pairs) == 2
    sigmas = {s for _, s in pairs}
    assert sigmas == {
        ("x2_2", "x3_3", "x1_2", "x2_3"),
        ("x2_2", "x1_2", "x3_3", "x2_3"),
    }


def test_subdivide_marked_face_volumes():
    me = gt_embedding((2, 1, 0))
    children = subdivide_marked_face(me, "D2_3")
    assert len(children) == 2
    assert sum(marked_volume(c.mp) for c in children) == marked_volume(me.mp)


def test_full_subdivision_check_gt():
    report = full_subdivision_check(gt_embedding((2, 1, 0)))
    assert report.cells == 2
    assert report.ok
    report2 = full_subdivision_check(gt_embedding((3, 1, 0)))
    assert report2.ok


def test_full_subdivision_check_trivial():
    report = full_subdivision_check(chain_embedding(["a", "m", "c"], {"a": 0, "c": 2}))
    assert report.cells == 1 and report.ok


def test_full_subdivision_check_diamond():
    report = full_subdivision_check(diamond_embedding({"a": 0, "c": 3}))
    assert report.cells == 2 and report.ok
    # a mark on the right boundary does not block the face reduction
    report2 = full_subdivision_check(diamond_embedding({"a": 0, "c": 3, "y": 2}))
    assert report2.cells == 2 and report2.ok


def five_element_fixture():
    # a < {x, y, p} < c with p marked and drawn easternmost, so all marks
    # lie on the left boundary of Fs and the dual has a single sink
    p = Poset.from_covers(
        ["a", "x", "p", "y", "c"],
        [("a", "x"), ("a", "p"), ("a", "y"), ("x", "c"), ("p", "c"), ("y", "c")],
    )
    mp = MarkedPoset.make(p, {"a": 0, "c": 3, "p": 1})
    from gtflow.poset import BOTTOM, TOP

    faces = [
        Face.make(SENTINEL, [TOP, "c", "x", "a", BOTTOM]),
        Face.make(["c", "x", "a"], ["c", "y", "a"]),
        Face.make(["c", "y", "a"], ["c", "p", "a"]),
        Face.make([TOP, "c", "p", "a", BOTTOM], SENTINEL),
    ]
    return MarkedEmbedding.make(mp, faces, face_ids=("Ft", "F1", "F2", "Fs"))


def test_extension_bijection_on_fixtures():
    cases = [
        (gt_embedding((2, 1, 0)), 3),
        (gt_embedding((1, 0)), 3),
        (five_element_fixture(), 3),
        (diamond_embedding({"a": 0, "c": 3}), 3),
    ]
    for me, amax in cases:
        me.validate()
        k = len(me.mp.sorted_marked())
        dim = len(me.mp.poset.elements) - k
        for a in enumerate_compositions(dim, k - 1):
            if any(x > amax for x in a):
                continue
            records = leaves_to_extensions(me, a)
            assert len(records) == count_marked_extensions(me.mp, a), (a,)


def test_extension_bijection_infeasible_gap():
    me = gt_embedding((2, 1, 0))
    assert leaves_to_extensions(me, (9, 9)) == []


def test_face_order_naturality():
    from gtflow.combinat import enumerate_shsyt
    from gtflow.subdivision import _reduction_order, _simplified_dual_state

    me = gt_embedding((3, 2, 1, 0))
    root, _, _ = _simplified_dual_state(me)
    plan = _reduction_order(root)
    r1 = full_subdivision_check(me)
    r2 = full_subdivision_check(me, face_order=list(reversed(plan)))
    assert r1.ok and r2.ok
    assert r1.cells == r2.cells
    assert r1.total_volume == r2.total_volume
    # the cells of the GT subdivision are labeled by shifted tableaux
    assert r1.cells == len(enumerate_shsyt(4))

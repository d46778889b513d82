import math
import pytest

from gtflow.combinat import count_N, count_ssyt, enumerate_compositions, enumerate_shsyt
from gtflow.flow import enumerate_integer_flows, kostant, lidskii_points_binomial, lidskii_volume
from gtflow.gt import (
    build_G_lambda,
    enumerate_gt_points,
    flow_to_gt,
    flow_to_shsyt,
    gt_marked_poset,
    gt_points_lidskii,
    gt_to_flow,
    gt_volume_lidskii,
    gt_volume_product,
    gt_volume_shsyt,
    shifted_netflow,
    shsyt_to_flow,
    weyl_dimension,
)
from gtflow.poset import lattice_points


def all_partitions(max_n, max_part):
    for n in range(1, max_n + 1):
        def rec(prefix, lo):
            if len(prefix) == n:
                yield tuple(prefix)
                return
            hi = prefix[-1] if prefix else max_part
            for v in range(hi, -1, -1):
                yield from rec(prefix + [v], v)
        yield from rec([], max_part)


def test_build_G_lambda_structure_n2():
    gtn = build_G_lambda((1, 0))
    assert gtn.vertex_cells == ((2, 2), (3, 2), (3, 3), (4, 3))
    assert gtn.network.netflow == (1, 0, 0, -1)
    assert len(gtn.network.edges) == 4


def test_build_G_lambda_n1():
    gtn = build_G_lambda((5,))
    assert gtn.network.num_vertices == 1
    assert gtn.network.edges == ()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_build_G_lambda_counts(n):
    lam = tuple(range(n, 0, -1))
    gtn = build_G_lambda(lam)
    assert gtn.network.num_vertices == math.comb(n + 2, 2) - 2
    assert len(gtn.network.edges) == (n - 1) * (n + 2)


def test_enumerate_gt_points_examples():
    assert len(enumerate_gt_points((2, 1, 0))) == 8
    assert len(enumerate_gt_points((0, 0, 0))) == 1
    assert len(enumerate_gt_points((1, 0))) == 2


def test_weyl_dimension_examples():
    assert weyl_dimension((2, 1, 0)) == 8
    assert weyl_dimension((0, 0, 0, 0)) == 1
    for m in range(5):
        assert weyl_dimension((m, 0)) == m + 1


def test_gt_volume_product_examples():
    assert gt_volume_product((2, 1, 0)) == 1
    assert gt_volume_product((3, 3, 1)) == 0
    assert gt_volume_product((4, 0)) == 4


def test_volume_formulas_agree_small():
    for lam in all_partitions(3, 3):
        v1 = gt_volume_product(lam)
        assert gt_volume_shsyt(lam) == v1
        assert gt_volume_lidskii(lam) == v1


def test_point_formulas_agree_small():
    for lam in all_partitions(3, 3):
        pts = weyl_dimension(lam)
        assert gt_points_lidskii(lam) == pts
        assert len(enumerate_gt_points(lam)) == pts
        if len(lam) >= 2:
            assert kostant(build_G_lambda(lam).network) == pts


def test_points_match_ssyt_oracle():
    for lam in [(2, 1, 0), (3, 1, 0), (2, 2, 1), (3, 2, 1, 0)]:
        shape = tuple(p for p in lam if p > 0)
        assert weyl_dimension(lam) == count_ssyt(shape, len(lam))


def test_gt_to_flow_bijection():
    lam = (2, 1, 0)
    pts = enumerate_gt_points(lam)
    flows = {gt_to_flow(lam, p) for p in pts}
    assert len(flows) == len(pts) == 8
    direct = set(enumerate_integer_flows(build_G_lambda(lam).network))
    assert flows == direct
    for p in pts:
        assert flow_to_gt(lam, gt_to_flow(lam, p)) == p


def test_gt_to_flow_zero_pattern():
    lam = (0, 0, 0)
    z = enumerate_gt_points(lam)[0]
    assert set(gt_to_flow(lam, z)) == {0}


def test_marked_poset_lattice_points_matches():
    mp = gt_marked_poset((2, 1, 0))
    assert len(lattice_points(mp)) == 8
    mp2 = gt_marked_poset((1, 1))
    assert len(lattice_points(mp2)) == 1


def test_shsyt_flow_round_trip_small():
    for n in (1, 2, 3, 4):
        for t in enumerate_shsyt(n):
            f = shsyt_to_flow(t)
            back = flow_to_shsyt(n, f)
            assert back == t


def test_shsyt_to_flow_diagonal_and_border_zeros():
    for n in (2, 3, 4):
        gtn = build_G_lambda((0,) * n)
        for t in enumerate_shsyt(n):
            f = shsyt_to_flow(t)
            for i in range(2, n + 1):
                assert f[gtn.edge_index[("a", i, i)]] == 0
                assert f[gtn.edge_index[("b", i, n)]] == 0


def test_diagonal_counts_match_kostant():
    from itertools import product

    for n in (2, 3, 4):
        gtn = build_G_lambda((0,) * n)
        for b in product(range(4), repeat=n - 1):
            lhs = count_N(n, b)
            rhs = kostant(gtn.network, shifted_netflow(n, b))
            assert lhs == rhs, (n, b)


def test_flow_to_shsyt_inverse_on_flows():
    for n in (2, 3):
        gtn = build_G_lambda((0,) * n)
        total = n * (n - 1) // 2
        for b in enumerate_compositions(total, n - 1):
            nf = shifted_netflow(n, b)
            for f in enumerate_integer_flows(gtn.network, nf):
                t = flow_to_shsyt(n, f)
                assert t.diagonal_composition() == b
                assert shsyt_to_flow(t) == f


def test_gt_lidskii_against_flow_module():
    for lam in [(2, 1, 0), (3, 1, 0), (1, 1, 0), (2, 0), (1, 0)]:
        g = build_G_lambda(lam).network
        assert lidskii_volume(g) == gt_volume_product(lam)
        assert lidskii_points_binomial(g) == weyl_dimension(lam)
    from gtflow.flow import lidskii_points_multiset

    assert lidskii_points_multiset(build_G_lambda((1, 0)).network) == 2

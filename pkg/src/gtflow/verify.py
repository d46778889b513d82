"""Verification harness: runs the identity chains on the fixture corpus and
returns machine-readable records.

Each record is {"identity", "instance", "expected", "actual", "pass"} with
exact values rendered as strings (integers in decimal, rationals as p/q).
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import corpus
from .combinat import count_N, enumerate_compositions, enumerate_shsyt
from .flow import (
    enumerate_integer_flows,
    kostant,
    lidskii_points_binomial,
    lidskii_points_multiset,
    lidskii_volume,
)
from .gt import (
    build_G_lambda,
    enumerate_gt_points,
    flow_to_shsyt,
    gt_points_lidskii,
    gt_to_flow,
    gt_volume_lidskii,
    gt_volume_product,
    gt_volume_shsyt,
    shifted_netflow,
    shsyt_to_flow,
    weyl_dimension,
)
from .poset import (
    check_log_concavity,
    check_minkowski,
    count_marked_extensions,
    lattice_points,
    make_order_polytope_mp,
    marked_volume,
    normalized_volume,
    unit_markings,
)
from .subdivision import (
    canonical_reduction_tree,
    full_subdivision_check,
    leaves_to_extensions,
    reduction_tree_volume,
)
from .transform import build_G_PAlambda, gamma, gamma_inverse

SCOPES = ("gt", "flow", "poset", "transform", "subdivision")


def _fmt(x) -> str:
    return str(x)


def record(identity, instance, expected, actual):
    return {
        "identity": identity,
        "instance": str(instance),
        "expected": _fmt(expected),
        "actual": _fmt(actual),
        "pass": expected == actual,
    }


def partitions(max_n: int, max_part: int):
    for n in range(1, max_n + 1):
        def rec(prefix):
            if len(prefix) == n:
                yield tuple(prefix)
                return
            hi = prefix[-1] if prefix else max_part
            for v in range(hi, -1, -1):
                yield from rec(prefix + [v])
        yield from rec([])


# ---------------------------------------------------------------------------


def verify_gt(nmax: int = 4, lmax: int = 4) -> list[dict]:
    """The five-formula identity chain for GT volumes and point counts."""
    out = []
    for lam in partitions(nmax, lmax):
        v1 = gt_volume_product(lam)
        out.append(record("gt/vol:product=shsyt", lam, v1, gt_volume_shsyt(lam)))
        out.append(record("gt/vol:product=lidskii", lam, v1, gt_volume_lidskii(lam)))
        pts = weyl_dimension(lam)
        out.append(record("gt/pts:weyl=lidskii", lam, pts, gt_points_lidskii(lam)))
        out.append(record("gt/pts:weyl=enumeration", lam, pts, len(enumerate_gt_points(lam))))
        if len(lam) >= 2:
            out.append(
                record("gt/pts:weyl=kostant", lam, pts, kostant(build_G_lambda(lam).network))
            )
    # injectivity of the pattern -> flow map at a desk-scale instance
    lam = (min(lmax, 2), 1, 0) if nmax >= 3 else (1, 0)
    pts = enumerate_gt_points(lam)
    flows = {gt_to_flow(lam, p) for p in pts}
    out.append(record("gt/pattern-flow-bijection", lam, len(pts), len(flows)))
    return out


def verify_bijection(nmax: int = 4, bmax: int = 3) -> list[dict]:
    """Diagonal-count identity N(b) = K(shifted) and the explicit mutually
    inverse tableau/flow maps realizing it."""
    from itertools import product as iproduct

    out = []
    for n in range(2, nmax + 1):
        gtn = build_G_lambda((0,) * n)
        for b in iproduct(range(bmax + 1), repeat=n - 1):
            lhs = count_N(n, b)
            rhs = kostant(gtn.network, shifted_netflow(n, b))
            out.append(record("diagonal-kostant/count", (n, b), lhs, rhs))
        ok = True
        for t in enumerate_shsyt(n):
            if flow_to_shsyt(n, shsyt_to_flow(t)) != t:
                ok = False
        out.append(record("diagonal-kostant/tableau-roundtrip", n, True, ok))
        ok = True
        total = n * (n - 1) // 2
        for b in enumerate_compositions(total, n - 1):
            if any(x > bmax for x in b):
                continue
            for f in enumerate_integer_flows(gtn.network, shifted_netflow(n, b)):
                t = flow_to_shsyt(n, f)
                if shsyt_to_flow(t) != f or t.diagonal_composition() != b:
                    ok = False
        out.append(record("diagonal-kostant/flow-roundtrip", n, True, ok))
    return out


def verify_flow(tmax: int = 3) -> list[dict]:
    """Lidskii formulas on the network corpus: both point-count forms against
    direct enumeration, the volume as the exact Ehrhart leading coefficient,
    and the degree bound of the count polynomial."""
    out = []
    for name, g in corpus.networks():
        pts = kostant(g)
        out.append(record("lidskii/binomial=count", name, pts, lidskii_points_binomial(g)))
        out.append(record("lidskii/multiset=count", name, pts, lidskii_points_multiset(g)))
        out.append(
            record(
                "kostant/dp=enumeration", name, pts, len(enumerate_integer_flows(g))
            )
        )
        dim = g.dimension()
        counts = [
            lidskii_points_binomial(g.with_netflow(tuple(t * x for x in g.netflow)))
            for t in range(dim + 2)
        ]
        lead = sum(
            (-1) ** (dim - i) * math.comb(dim, i) * c for i, c in enumerate(counts[: dim + 1])
        )
        out.append(
            record(
                "lidskii/volume=ehrhart-lead",
                name,
                lidskii_volume(g),
                Fraction(lead, math.factorial(dim)),
            )
        )
        top = sum(
            (-1) ** (dim + 1 - i) * math.comb(dim + 1, i) * c for i, c in enumerate(counts)
        )
        out.append(record("lidskii/ehrhart-degree", name, 0, top))
        for t in range(1, tmax + 1):
            gt_net = g.with_netflow(tuple(t * x for x in g.netflow))
            out.append(
                record(
                    "lidskii/dilation=enumeration",
                    f"{name}@t={t}",
                    len(enumerate_integer_flows(gt_net)),
                    lidskii_points_binomial(gt_net),
                )
            )
    return out


def verify_poset(mmax: int = 3, trials: int = 100, seed: int = 0) -> list[dict]:
    """Order-polytope and marked-volume checks, Minkowski support-function
    additivity, and log-concavity of the extension counts."""
    out = []
    for name, p in corpus.posets():
        mp = make_order_polytope_mp(p)
        e = p.count_linear_extensions()
        out.append(record("order-polytope/volume=extensions", name, e, normalized_volume(mp)))
        for m in range(mmax + 1):
            lhs = len(lattice_points(make_order_polytope_mp(p, 0, m)))
            out.append(
                record("order-polytope/ehrhart=order-polynomial", f"{name}@m={m}", p.order_polynomial(m), lhs)
            )
    for name, me in corpus.embeddings():
        mp = me.mp
        dim = len(mp.poset.elements) - len(mp.marked)
        counts = []
        for t in range(dim + 1):
            scaled = {a: v * t for a, v in mp.marking.items()}
            counts.append(len(lattice_points(mp.with_marking(scaled))))
        lead = sum((-1) ** (dim - i) * math.comb(dim, i) * c for i, c in enumerate(counts))
        out.append(
            record(
                "marked-volume/ehrhart-lead",
                name,
                marked_volume(mp),
                Fraction(lead, math.factorial(dim)),
            )
        )
    for name, me in corpus.embeddings():
        mp = me.mp
        violations = check_log_concavity(mp)
        out.append(record("log-concavity/adjacent-trade", name, [], violations))
    for name, p in corpus.posets():
        if len(p.elements) > 5:
            continue
        mp = make_order_polytope_mp(p)
        violations = check_log_concavity(mp)
        out.append(record("log-concavity/adjacent-trade", f"order-polytope:{name}", [], violations))
    for name, me in corpus.embeddings():
        mp = me.mp
        omegas = unit_markings(mp)
        lam = mp.marking
        pairs = [(lam, omegas[0]), (omegas[0], omegas[-1])]
        for i, (l1, l2) in enumerate(pairs):
            ok = check_minkowski(mp, dict(l1), dict(l2), trials=trials, seed=seed + i)
            out.append(record("minkowski/support-additivity", f"{name}#{i}", True, ok))
    return out


def verify_transform() -> list[dict]:
    """Marked-order-to-flow equivalence: Gamma bijections, count transfer,
    and volume transfer where the Lidskii hypotheses apply."""
    out = []
    for name, me in corpus.embeddings():
        dn = build_G_PAlambda(me)
        pts = lattice_points(me.mp)
        flows = {gamma(dn, x) for x in pts}
        direct = set(enumerate_integer_flows(dn.network))
        out.append(record("order-flow/count", name, len(pts), kostant(dn.network)))
        out.append(record("order-flow/gamma-bijection", name, True, flows == direct))
        ok = all(gamma_inverse(dn, gamma(dn, x)) == x for x in pts)
        out.append(record("order-flow/gamma-inverse", name, True, ok))
        # volume transfer, where the Lidskii hypotheses hold for the raw dual
        # (its ambient dimension matches the marked order polytope's)
        net = dn.network
        applicable = (
            net.is_connected()
            and all(net.netflow[v] >= 0 and net.outdeg(v) > 0 for v in range(net.num_vertices - 1))
        )
        if applicable:
            out.append(
                record(
                    "order-flow/volume=lidskii",
                    name,
                    marked_volume(me.mp),
                    lidskii_volume(net),
                )
            )
    return out


def verify_subdivision(amax: int = 3) -> list[dict]:
    """Reduction-tree volume conservation, subdivision cell pairing, and the
    flow-to-extension bijection on single-sink fixtures."""
    out = []
    for name, g in corpus.networks():
        tree = canonical_reduction_tree(g)
        out.append(
            record(
                "subdivision/volume-conservation",
                name,
                lidskii_volume(g),
                reduction_tree_volume(tree),
            )
        )
    from .transform import EmbeddingError

    for name, me in corpus.embeddings():
        if any(f != "L" for f in me.flags):
            continue
        try:
            report = full_subdivision_check(me)
        except EmbeddingError:
            continue  # degenerate markings: gap sources prune away
        out.append(record("subdivision/cell-pairing", name, True, report.ok))
    for name, me in corpus.single_sink_embeddings():
        mp = me.mp
        k = len(mp.sorted_marked())
        dim = len(mp.poset.elements) - k
        ok = True
        checked = 0
        for a in enumerate_compositions(dim, k - 1):
            if any(x > amax for x in a):
                continue
            records = leaves_to_extensions(me, a)
            if len(records) != count_marked_extensions(mp, a):
                ok = False
            checked += 1
        out.append(record("extension-bijection/count", f"{name} ({checked} gap vectors)", True, ok))
    return out


def run_verify(scope: str = "all", bounds: dict | None = None, seed: int = 0) -> dict:
    bounds = bounds or {}
    records = []
    warnings = []
    if not corpus.networks() or not corpus.embeddings():
        warnings.append("corpus is empty; trivial pass")
    if scope in ("gt", "all"):
        records += verify_gt(bounds.get("n", 3), bounds.get("lmax", 3))
        records += verify_bijection(bounds.get("n", 3), bounds.get("bmax", 3))
    if scope in ("flow", "all"):
        records += verify_flow(bounds.get("tmax", 3))
    if scope in ("poset", "all"):
        records += verify_poset(bounds.get("mmax", 3), bounds.get("trials", 100), seed)
    if scope in ("transform", "all"):
        records += verify_transform()
    if scope in ("subdivision", "all"):
        records += verify_subdivision(bounds.get("amax", 3))
    records.sort(key=lambda r: (r["identity"], r["instance"]))
    return {
        "scope": scope,
        "warnings": warnings,
        "results": records,
        "pass": all(r["pass"] for r in records),
    }

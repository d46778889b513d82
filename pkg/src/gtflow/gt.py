"""Gelfand-Tsetlin patterns, the flow network G_lambda, five exact formulas
for volumes and lattice-point counts, and the explicit bijections between
patterns, flows, and shifted standard Young tableaux.

Patterns are triangular arrays x_{ij} (1 <= i <= j <= n) whose top row is
pinned to the partition (x_{1j} = lambda_j) and whose rows interlace:
x_{i-1,j-1} >= x_{ij} >= x_{i-1,j}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .combinat import (
    ShiftedTableau,
    as_partition,
    binomial,
    count_N,
    dominance_geq,
    enumerate_compositions,
)
from .flow import FlowNetwork, kostant
from .poset import MarkedPoset, Poset
from .transform import BOTTOM, SENTINEL, TOP, Face, MarkedEmbedding


def cell_id(i: int, j: int) -> str:
    return f"x{i}_{j}"


@dataclass(frozen=True)
class GTPattern:
    """Triangular array, rows[i-1] = (x_{i,i}, ..., x_{i,n})."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(self.rows[i]) != n - i for i in range(n)):
            raise ValueError("rows must have lengths n, n-1, ..., 1")
        for i in range(2, n + 1):
            for j in range(i, n + 1):
                if not self.entry(i - 1, j - 1) >= self.entry(i, j) >= self.entry(i - 1, j):
                    raise ValueError(f"interlacing fails at ({i},{j})")
        if any(v < 0 for row in self.rows for v in row):
            raise ValueError("entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - i]

    def top_row(self) -> tuple[int, ...]:
        return self.rows[0]

    def as_dict(self) -> dict[str, int]:
        n = self.n
        return {cell_id(i, j): self.entry(i, j) for i in range(1, n + 1) for j in range(i, n + 1)}


def enumerate_gt_points(lam) -> list[GTPattern]:
    """All integral patterns with top row lam, by row-wise backtracking."""
    lam = as_partition(lam)
    n = len(lam)
    rows: list[tuple[int, ...]] = [lam]
    out: list[GTPattern] = []

    def rec(i: int):
        if i > n:
            out.append(GTPattern(tuple(rows)))
            return
        prev = rows[-1]

        def fill(row: list[int], j: int):
            if j > n:
                rows.append(tuple(row))
                rec(i + 1)
                rows.pop()
                return
            hi = prev[j - i]  # x_{i-1,j-1}
            lo = prev[j - i + 1]  # x_{i-1,j}
            for v in range(lo, hi + 1):
                row.append(v)
                fill(row, j + 1)
                row.pop()

        fill([], i)

    rec(2)
    return out


def weyl_dimension(lam) -> int:
    """Product formula for the lattice-point count of GT(lam)."""
    lam = as_partition(lam)
    n = len(lam)
    num = 1
    den = 1
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            num *= lam[i - 1] - lam[j - 1] + j - i
            den *= j - i
    q, r = divmod(num, den)
    assert r == 0
    return q


def gt_volume_product(lam) -> Fraction:
    """Product formula for the volume of GT(lam)."""
    lam = as_partition(lam)
    n = len(lam)
    vol = Fraction(1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            vol *= Fraction(lam[i - 1] - lam[j - 1], j - i)
    return vol


def gt_volume_shsyt(lam) -> Fraction:
    """Volume as a sum of gap powers weighted by shifted-tableau counts."""
    lam = as_partition(lam)
    n = len(lam)
    if n == 1:
        return Fraction(1)
    gaps = [lam[i] - lam[i + 1] for i in range(n - 1)]
    total = n * (n - 1) // 2
    vol = Fraction(0)
    for b in enumerate_compositions(total, n - 1):
        cnt = count_N(n, b)
        if cnt == 0:
            continue
        term = Fraction(cnt)
        for g, bi in zip(gaps, b):
            if g == 0 and bi > 0:
                term = Fraction(0)
                break
            term *= Fraction(g) ** bi / math.factorial(bi)
        vol += term
    return vol


# ---------------------------------------------------------------------------
# the network G_lambda


@dataclass(frozen=True)
class GTNetwork:
    """The GT flow network with its canonical vertex order and labeled edges.

    Edge labels: ("a", i, j) for v_ij -> v_{i+1,j}, ("b", i, j) for
    v_ij -> v_{i+1,j+1}, ("gamma", i) for v_{i,i-1} -> v_{i+1,i}, and
    ("delta", i) for v_{i,n+1} -> v_{i+1,n+1}.
    """

    n: int
    network: FlowNetwork
    vertex_cells: tuple[tuple[int, int], ...]
    edge_labels: tuple[tuple, ...]

    @cached_property
    def edge_index(self) -> dict[tuple, int]:
        return {lab: k for k, lab in enumerate(self.edge_labels)}

    @cached_property
    def vertex_index(self) -> dict[tuple[int, int], int]:
        return {c: k for k, c in enumerate(self.vertex_cells)}


def canonical_gt_vertices(n: int) -> list[tuple[int, int]]:
    group1 = [(i, j) for i in range(2, n + 1) for j in range(i, n + 1)]
    group2 = [(i, i - 1) for i in range(3, n + 2)]
    group3 = [(i, n + 1) for i in range(3, n + 2)]
    return group1 + group2 + group3 + [(n + 2, n + 1)]


def build_G_lambda(lam) -> GTNetwork:
    """The flow network whose polytope realizes GT(lam), in the canonical
    vertex order (row sources, interior cells, the two border chains, sink)."""
    lam = as_partition(lam)
    n = len(lam)
    if n == 1:
        g = FlowNetwork.make(1, [], (0,), names=["v2_2"])
        return GTNetwork(1, g, ((2, 2),), ())
    cells = canonical_gt_vertices(n)
    index = {c: k for k, c in enumerate(cells)}
    edges = []
    labels = []
    for i in range(2, n + 1):
        for j in range(i, n + 1):
            edges.append((index[(i, j)], index[(i + 1, j)]))
            labels.append(("a", i, j))
    for i in range(2, n + 1):
        for j in range(i, n + 1):
            edges.append((index[(i, j)], index[(i + 1, j + 1)]))
            labels.append(("b", i, j))
    for i in range(3, n + 2):
        edges.append((index[(i, i - 1)], index[(i + 1, i)]))
        labels.append(("gamma", i))
    for i in range(3, n + 2):
        edges.append((index[(i, n + 1)], index[(i + 1, n + 1)]))
        labels.append(("delta", i))
    netflow = [0] * len(cells)
    for j in range(2, n + 1):
        netflow[index[(2, j)]] = lam[j - 2] - lam[j - 1]
    netflow[index[(n + 2, n + 1)]] = lam[n - 1] - lam[0]
    g = FlowNetwork.make(
        len(cells), edges, netflow, names=[f"v{i}_{j}" for i, j in cells]
    )
    return GTNetwork(n, g, tuple(cells), tuple(labels))


def gt_out_vector(n: int) -> tuple[int, ...]:
    """out_i = outdegree - 1 along the canonical order (sink excluded)."""
    return (1,) * (n - 1) + (1,) * ((n - 1) * (n - 2) // 2) + (0,) * (2 * (n - 1))


def shifted_netflow(n: int, b) -> tuple[int, ...]:
    """(b_1-1, ..., b_{n-1}-1, -1, ..., -1, 0, ..., 0, 0) in canonical order."""
    b = tuple(int(x) for x in b)
    if len(b) != n - 1:
        raise ValueError(f"b needs {n - 1} entries")
    rest = (n - 1) * (n - 2) // 2
    return tuple(x - 1 for x in b) + (-1,) * rest + (0,) * (2 * (n - 1)) + (0,)


def gt_volume_lidskii(lam) -> Fraction:
    """Volume as the Kostant-weighted sum over compositions (only the gap
    positions carry nonzero netflow, so all other indices are forced to 0)."""
    lam = as_partition(lam)
    n = len(lam)
    if n == 1:
        return Fraction(1)
    gtn = build_G_lambda(lam)
    gaps = [lam[i] - lam[i + 1] for i in range(n - 1)]
    total = n * (n - 1) // 2
    vol = Fraction(0)
    for j in enumerate_compositions(total, n - 1):
        term = Fraction(1)
        for g, ji in zip(gaps, j):
            if g == 0 and ji > 0:
                term = Fraction(0)
                break
            term *= Fraction(g) ** ji / math.factorial(ji)
        if term == 0:
            continue
        vol += term * kostant(gtn.network, shifted_netflow(n, j))
    return vol


def gt_points_lidskii(lam) -> int:
    """Lattice points via the binomial-weighted Lidskii sum on G_lambda."""
    lam = as_partition(lam)
    n = len(lam)
    if n == 1:
        return 1
    gtn = build_G_lambda(lam)
    gaps = [lam[i] - lam[i + 1] for i in range(n - 1)]
    out = gt_out_vector(n)
    mid = (n - 1) * (n - 2) // 2
    tail = 2 * (n - 1)
    total = n * (n - 1) // 2
    from itertools import product

    acc = 0
    for mid_bits in product((0, 1), repeat=mid):
        rem = total - sum(mid_bits)
        if rem < 0:
            continue
        for head in enumerate_compositions(rem, n - 1):
            j = head + mid_bits + (0,) * tail
            if not dominance_geq(j, out):
                continue
            w = 1
            for g, ji in zip(gaps, head):
                w *= binomial(g + 1, ji)
                if w == 0:
                    break
            if w == 0:
                continue
            args = tuple(ji - oi for ji, oi in zip(j, out)) + (0,)
            acc += w * kostant(gtn.network, args)
    return acc


# ---------------------------------------------------------------------------
# pattern <-> flow


def gt_to_flow(lam, pattern: GTPattern) -> tuple[int, ...]:
    """Image of a pattern under the integral equivalence GT -> F_{G_lambda}."""
    lam = as_partition(lam)
    n = len(lam)
    if pattern.n != n or pattern.top_row() != lam:
        raise ValueError("pattern does not match the partition")
    gtn = build_G_lambda(lam)
    if n == 1:
        return ()
    x = pattern.entry
    values = [0] * len(gtn.network.edges)
    for lab, k in gtn.edge_index.items():
        if lab[0] == "a":
            _, i, j = lab
            values[k] = x(i - 1, j - 1) - x(i, j)
        elif lab[0] == "b":
            _, i, j = lab
            values[k] = x(i, j) - x(i - 1, j)
        elif lab[0] == "gamma":
            i = lab[1]
            values[k] = lam[0] - x(i - 1, i - 1)
        else:
            i = lab[1]
            values[k] = x(i - 1, n) - lam[n - 1]
    assert gtn.network.check_flow(values)
    return tuple(values)


def flow_to_gt(lam, flow) -> GTPattern:
    """Inverse of gt_to_flow: x_{ij} = lambda_j + b_{2j} + ... + b_{ij}."""
    lam = as_partition(lam)
    n = len(lam)
    gtn = build_G_lambda(lam)
    flow = tuple(flow)
    if not gtn.network.check_flow(flow):
        raise ValueError("not a flow on G_lambda")
    rows = [lam]
    for i in range(2, n + 1):
        row = []
        for j in range(i, n + 1):
            v = lam[j - 1] + sum(
                flow[gtn.edge_index[("b", t, j)]] for t in range(2, i + 1)
            )
            row.append(v)
        rows.append(tuple(row))
    return GTPattern(tuple(rows))


# ---------------------------------------------------------------------------
# shifted tableaux <-> flows (the diagonal-count bijection)


def shsyt_to_flow(t: ShiftedTableau) -> tuple[int, ...]:
    """Flow on G_lambda(n) realizing the tableau, via the counting formulas
    for the a and b edge values; the chain edges carry zero flow."""
    n = t.n
    if n == 1:
        return ()
    gtn = build_G_lambda((0,) * n)
    values = [0] * len(gtn.network.edges)
    all_cells = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    for r in range(2, n + 1):
        for c in range(r, n + 1):
            i, j = c - r + 1, c
            a = sum(
                1
                for (ii, jj) in all_cells
                if ii < i and jj >= j and t.entry(i, j - 1) < t.entry(ii, jj) < t.entry(i, j)
            )
            values[gtn.edge_index[("a", r, c)]] = a
            if i + 1 <= j:
                b = sum(
                    1
                    for (ii, jj) in all_cells
                    if ii <= i and jj > j and t.entry(i, j) < t.entry(ii, jj) < t.entry(i + 1, j)
                )
                values[gtn.edge_index[("b", r, c)]] = b
    target = shifted_netflow(n, t.diagonal_composition())
    for v in range(gtn.network.num_vertices):
        inflow = sum(values[k] for k in gtn.network.in_edges(v))
        outflow = sum(values[k] for k in gtn.network.out_edges(v))
        if outflow - inflow != target[v]:
            raise ValueError("tableau flow fails conservation")
    return tuple(values)


def flow_to_shsyt(n: int, flow) -> ShiftedTableau:
    """Tableau from a flow on G_lambda(n) with a diagonal-shifted netflow, by the
    inductive peeling of the source row."""
    flow = tuple(flow)
    gtn = build_G_lambda((0,) * n)
    if len(flow) != len(gtn.network.edges):
        raise ValueError("flow has the wrong number of edges")
    if any(v < 0 for v in flow):
        raise ValueError("flow values must be nonnegative")
    # netflow (out - in) at each vertex, then sanity-check its shape
    net = []
    for v in range(gtn.network.num_vertices):
        outflow = sum(flow[k] for k in gtn.network.out_edges(v))
        inflow = sum(flow[k] for k in gtn.network.in_edges(v))
        net.append(outflow - inflow)
    b = tuple(net[k] + 1 for k in range(n - 1))
    if any(x < 0 for x in b):
        raise ValueError("netflow at a source is below -1")
    expected = shifted_netflow(n, b)
    if tuple(net) != expected:
        raise ValueError("flow netflow is not of the diagonal-shifted shape")
    if n == 1:
        return ShiftedTableau(((1,),))
    # restrict to the subnetwork on rows >= 3, relabelled down by one
    sub = build_G_lambda((0,) * (n - 1))
    subflow = [0] * len(sub.network.edges)
    for lab, k in sub.edge_index.items():
        if lab[0] == "a":
            _, i, j = lab
            subflow[k] = flow[gtn.edge_index[("a", i + 1, j + 1)]]
        elif lab[0] == "b":
            _, i, j = lab
            subflow[k] = flow[gtn.edge_index[("b", i + 1, j + 1)]]
    # chain flows of the subnetwork are the partial sums forced by conservation
    for i in range(3, n + 1):
        g = sum(subflow[sub.edge_index[("a", t, t)]] for t in range(2, i))
        subflow[sub.edge_index[("gamma", i)]] = g
        d = sum(subflow[sub.edge_index[("b", t, n - 1)]] for t in range(2, i))
        subflow[sub.edge_index[("delta", i)]] = d
    tprime = flow_to_shsyt(n - 1, subflow)
    prefix = [0]
    for x in b:
        prefix.append(prefix[-1] + x)

    def shift(e: int) -> int:
        for k in range(1, n):
            if e <= prefix[k]:
                return e + k
        raise AssertionError("entry exceeds the diagonal composition range")

    rows = []
    for i in range(1, n + 1):
        row = [i + prefix[i - 1]]
        if i <= n - 1:
            row += [shift(tprime.entry(i, j)) for j in range(i, n)]
        rows.append(tuple(row))
    return ShiftedTableau(tuple(rows))


# ---------------------------------------------------------------------------
# GT polytopes as marked order polytopes


def gt_marked_poset(lam) -> MarkedPoset:
    lam = as_partition(lam)
    n = len(lam)
    cells = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    covers = []
    for i in range(2, n + 1):
        for j in range(i, n + 1):
            covers.append((cell_id(i, j), cell_id(i - 1, j - 1)))
            covers.append((cell_id(i - 1, j), cell_id(i, j)))
    p = Poset.from_covers([cell_id(i, j) for i, j in cells], covers)
    return MarkedPoset.make(p, {cell_id(1, j): lam[j - 1] for j in range(1, n + 1)})


def gt_embedding(lam) -> MarkedEmbedding:
    """Bounded strongly planar embedding of the GT marked poset, with the
    marked top row zigzagging along the right boundary."""
    mp = gt_marked_poset(lam)
    n = len(as_partition(lam))
    faces = []
    ids = []
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            faces.append(
                Face.make(
                    [cell_id(i, j - 1), cell_id(i + 1, j), cell_id(i, j)],
                    [cell_id(i, j - 1), cell_id(i - 1, j - 1), cell_id(i, j)],
                )
            )
            ids.append(f"D{i}_{j}")
    west = [TOP] + [cell_id(i, i) for i in range(1, n + 1)]
    west += [cell_id(i, n) for i in range(n - 1, 0, -1)] + [BOTTOM]
    faces.append(Face.make(SENTINEL, west))
    ids.append("Ft")
    east = [TOP, cell_id(1, 1)]
    for j in range(2, n + 1):
        east += [cell_id(2, j), cell_id(1, j)]
    east += [BOTTOM]
    faces.append(Face.make(east, SENTINEL))
    ids.append("Fs")
    return MarkedEmbedding.make(mp, faces, face_ids=ids)


def gt_pattern_from_point(lam, point: dict) -> GTPattern:
    n = len(as_partition(lam))
    rows = tuple(
        tuple(point[cell_id(i, j)] for j in range(i, n + 1)) for i in range(1, n + 1)
    )
    return GTPattern(rows)

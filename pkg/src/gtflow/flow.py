"""Flow networks, flow polytopes, Kostant partition functions, and the
Baldoni-Vergne-Lidskii volume and lattice-point formulas.

A FlowNetwork is a loopless acyclic directed multigraph on vertices
0..num_vertices-1 (every edge goes from a smaller to a larger index)
together with an integer netflow vector summing to zero.  Flows are
edge-indexed vectors; conservation at v reads inflow + netflow = outflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .combinat import binomial, enumerate_compositions, multiset_binomial


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class FlowNetwork:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    netflow: tuple[int, ...]
    # per-vertex edge orderings (indices into `edges`); None = list order
    in_orders: tuple[tuple[int, ...], ...] | None = None
    out_orders: tuple[tuple[int, ...], ...] | None = None
    names: tuple[str, ...] | None = None

    @staticmethod
    def make(num_vertices, edges, netflow, in_orders=None, out_orders=None, names=None):
        return FlowNetwork(
            int(num_vertices),
            tuple((int(u), int(v)) for u, v in edges),
            tuple(int(a) for a in netflow),
            None if in_orders is None else tuple(tuple(o) for o in in_orders),
            None if out_orders is None else tuple(tuple(o) for o in out_orders),
            None if names is None else tuple(names),
        )

    def __post_init__(self):
        n = self.num_vertices
        if n < 1:
            raise FlowError("need at least one vertex")
        for u, v in self.edges:
            if not (0 <= u < v < n):
                raise FlowError(f"edge ({u},{v}) must satisfy 0 <= u < v < {n}")
        if len(self.netflow) != n:
            raise FlowError("netflow length must equal num_vertices")
        if sum(self.netflow) != 0:
            raise FlowError("netflow must sum to zero")
        for orders, proj in ((self.in_orders, 1), (self.out_orders, 0)):
            if orders is None:
                continue
            if len(orders) != n:
                raise FlowError("edge orderings must cover every vertex")
            for v in range(n):
                expect = sorted(i for i, e in enumerate(self.edges) if e[proj] == v)
                if sorted(orders[v]) != expect:
                    raise FlowError(f"edge ordering at vertex {v} is not a permutation")
        if self.names is not None and len(self.names) != n:
            raise FlowError("names must cover every vertex")

    # -- structure ---------------------------------------------------------

    def in_edges(self, v: int) -> tuple[int, ...]:
        if self.in_orders is not None:
            return self.in_orders[v]
        return tuple(i for i, (a, b) in enumerate(self.edges) if b == v)

    def out_edges(self, v: int) -> tuple[int, ...]:
        if self.out_orders is not None:
            return self.out_orders[v]
        return tuple(i for i, (a, b) in enumerate(self.edges) if a == v)

    def indeg(self, v: int) -> int:
        return len(self.in_edges(v))

    def outdeg(self, v: int) -> int:
        return len(self.out_edges(v))

    def out_shift(self, v: int) -> int:
        """out_v = outdegree - 1."""
        return self.outdeg(v) - 1

    def in_shift(self, v: int) -> int:
        return self.indeg(v) - 1

    def degree_profile(self) -> tuple[tuple[int, int], ...]:
        """(out_v, in_v) = (outdegree-1, indegree-1) per vertex."""
        return tuple((self.out_shift(v), self.in_shift(v)) for v in range(self.num_vertices))

    def dimension(self) -> int:
        return len(self.edges) - (self.num_vertices - 1)

    def is_connected(self) -> bool:
        comp = list(range(self.num_vertices))

        def find(a):
            while comp[a] != a:
                comp[a] = comp[comp[a]]
                a = comp[a]
            return a

        for u, v in self.edges:
            comp[find(u)] = find(v)
        return len({find(v) for v in range(self.num_vertices)}) == 1

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def with_netflow(self, b) -> "FlowNetwork":
        return FlowNetwork.make(
            self.num_vertices, self.edges, b, self.in_orders, self.out_orders, self.names
        )

    def reordered_edges(self, perm) -> "FlowNetwork":
        """Same network with the edge list permuted (perm[new] = old)."""
        perm = tuple(perm)
        edges = tuple(self.edges[i] for i in perm)
        return FlowNetwork.make(self.num_vertices, edges, self.netflow, names=self.names)

    def check_flow(self, f) -> bool:
        f = tuple(f)
        if len(f) != len(self.edges) or any(x < 0 for x in f):
            return False
        for v in range(self.num_vertices):
            inflow = sum(f[i] for i in self.in_edges(v))
            outflow = sum(f[i] for i in self.out_edges(v))
            if inflow + self.netflow[v] != outflow:
                return False
        return True

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        d = {
            "n": self.num_vertices,
            "edges": [list(e) for e in self.edges],
            "netflow": list(self.netflow),
        }
        if self.names is not None:
            d["names"] = list(self.names)
        return d

    @staticmethod
    def from_json(data: dict) -> "FlowNetwork":
        return FlowNetwork.make(
            data["n"],
            [tuple(e) for e in data["edges"]],
            data["netflow"],
            names=data.get("names"),
        )

    def to_dot(self) -> str:
        lines = ["digraph flownetwork {", "  rankdir=TB;"]
        for v in range(self.num_vertices):
            lines.append(f'  v{v} [label="{self.name(v)} ({self.netflow[v]:+d})"];')
        for i, (u, v) in enumerate(self.edges):
            lines.append(f'  v{u} -> v{v} [label="e{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# integer flows


def enumerate_integer_flows(g: FlowNetwork, b=None) -> list[tuple[int, ...]]:
    """All integer flows with netflow b, by vertex-by-vertex assignment in
    index order with conservation pruning."""
    b = g.netflow if b is None else tuple(int(x) for x in b)
    if len(b) != g.num_vertices:
        raise FlowError("netflow vector has wrong length")
    if sum(b) != 0:
        return []
    flows: list[tuple[int, ...]] = []
    values = [0] * len(g.edges)
    inflow = [0] * g.num_vertices

    def rec(v: int):
        if v == g.num_vertices:
            flows.append(tuple(values))
            return
        supply = inflow[v] + b[v]
        if supply < 0:
            return
        out = g.out_edges(v)
        if not out:
            if supply == 0:
                rec(v + 1)
            return
        for comp in enumerate_compositions(supply, len(out)):
            for idx, amount in zip(out, comp):
                values[idx] = amount
                inflow[g.edges[idx][1]] += amount
            rec(v + 1)
            for idx, amount in zip(out, comp):
                values[idx] = 0
                inflow[g.edges[idx][1]] -= amount

    rec(0)
    return flows


def kostant(g: FlowNetwork, b=None) -> int:
    """K_G(b): number of integer flows with netflow b.

    Dynamic program over vertices in index order; a state records the flow
    already committed to each not-yet-processed vertex.  Independent of the
    brute-force enumeration above, which serves as its oracle in tests.
    """
    b = g.netflow if b is None else tuple(int(x) for x in b)
    if len(b) != g.num_vertices:
        raise FlowError("netflow vector has wrong length")
    if sum(b) != 0:
        return 0
    n = g.num_vertices
    # multiplicity of edges v -> w
    targets: list[list[tuple[int, int]]] = []
    for v in range(n):
        mult: dict[int, int] = {}
        for i in g.out_edges(v):
            w = g.edges[i][1]
            mult[w] = mult.get(w, 0) + 1
        targets.append(sorted(mult.items()))
    states: dict[tuple[int, ...], int] = {(0,) * n: 1}
    for v in range(n):
        nxt: dict[tuple[int, ...], int] = {}
        for state, count in states.items():
            supply = state[v] + b[v]
            if supply < 0:
                continue
            tv = targets[v]
            if not tv:
                if supply == 0:
                    key = state[:v] + (0,) + state[v + 1 :]
                    nxt[key] = nxt.get(key, 0) + count
                continue
            for comp in enumerate_compositions(supply, len(tv)):
                ways = 1
                for (w, m), amount in zip(tv, comp):
                    ways *= binomial(amount + m - 1, m - 1)
                new = list(state)
                new[v] = 0
                for (w, m), amount in zip(tv, comp):
                    new[w] += amount
                key = tuple(new)
                nxt[key] = nxt.get(key, 0) + count * ways
        states = nxt
    return states.get((0,) * n, 0)


# ---------------------------------------------------------------------------
# Lidskii formulas


def check_lidskii_preconditions(g: FlowNetwork) -> None:
    n = g.num_vertices
    if not g.is_connected():
        raise FlowError("Lidskii formulas need a connected network")
    for v in range(n - 1):
        if g.netflow[v] < 0:
            raise FlowError(f"Lidskii formulas need netflow >= 0 at vertex {v}")
        if g.outdeg(v) == 0:
            raise FlowError(f"Lidskii formulas need an outgoing edge at vertex {v}")


def _lidskii_sum(g: FlowNetwork, weight):
    """Sum over weak compositions j of m-n dominating the out vector of
    weight(j, out) * K_G(j - out, 0)."""
    check_lidskii_preconditions(g)
    n = g.num_vertices
    out = tuple(g.out_shift(v) for v in range(n - 1))
    total = len(g.edges) - (n - 1)
    acc = 0
    for j in enumerate_compositions(total, n - 1, at_least=out):
        coeff = weight(j, out)
        if coeff == 0:
            continue
        shifted = tuple(j[v] - out[v] for v in range(n - 1)) + (0,)
        acc += coeff * kostant(g, shifted)
    return acc


def lidskii_volume(g: FlowNetwork) -> Fraction:
    """Volume of the flow polytope (Ehrhart leading-coefficient
    normalization), as the dominance-filtered sum of
    prod a_i^{j_i}/j_i! times Kostant evaluations."""

    def weight(j, out):
        term = Fraction(1)
        for v, jv in enumerate(j):
            a = g.netflow[v]
            if a == 0 and jv > 0:
                return Fraction(0)
            term *= Fraction(a) ** jv
            term /= math.factorial(jv)
        return term

    if g.num_vertices == 1:
        return Fraction(1)
    return Fraction(_lidskii_sum(g, weight))


def lidskii_points_binomial(g: FlowNetwork) -> int:
    """Lattice points of the flow polytope via binom(a_i + out_i, j_i)."""

    def weight(j, out):
        term = 1
        for v, jv in enumerate(j):
            term *= binomial(g.netflow[v] + out[v], jv)
            if term == 0:
                return 0
        return term

    if g.num_vertices == 1:
        return 1
    return _lidskii_sum(g, weight)


def lidskii_points_multiset(g: FlowNetwork) -> int:
    """Lattice points via the multiset-binomial form <a_i - in_i over j_i>."""

    def weight(j, out):
        term = 1
        for v, jv in enumerate(j):
            term *= multiset_binomial(g.netflow[v] - g.in_shift(v), jv)
            if term == 0:
                return 0
        return term

    if g.num_vertices == 1:
        return 1
    return _lidskii_sum(g, weight)


# ---------------------------------------------------------------------------
# fully reduced networks


def leaf_volume(g: FlowNetwork) -> Fraction:
    """Volume of a fully reduced network: a product of dilated simplices,
    one factor a_i^(d_i - 1)/(d_i - 1)! per source with outdegree d_i.

    Requires every vertex to be a source (positive netflow, no incoming) or
    a sink (negative netflow, no outgoing), with a single sink.
    """
    sinks = 0
    vol = Fraction(1)
    for v in range(g.num_vertices):
        a = g.netflow[v]
        if a == 0 and g.num_vertices > 1:
            raise FlowError(f"vertex {v} has netflow 0: network is not fully reduced")
        if a > 0:
            if g.indeg(v) > 0:
                raise FlowError(f"source {v} has incoming edges")
            d = g.outdeg(v)
            if d == 0:
                raise FlowError(f"source {v} has no outgoing edges")
            vol *= Fraction(a) ** (d - 1) / math.factorial(d - 1)
        elif a < 0:
            if g.outdeg(v) > 0:
                raise FlowError(f"sink {v} has outgoing edges")
            sinks += 1
    if sinks > 1:
        raise FlowError("leaf volume formula needs a single sink")
    return vol


def simplify(g: FlowNetwork):
    """Drop edges whose flow is forced to zero (out-edges of netflow-0
    in-degree-0 vertices, in-edges of netflow-0 out-degree-0 vertices,
    iterated) and then drop isolated netflow-0 vertices.

    Returns (network, vertex_map, edge_map): maps from new indices to old.
    """
    alive_edges = set(range(len(g.edges)))
    alive_vertices = set(range(g.num_vertices))
    changed = True
    while changed:
        changed = False
        for v in list(alive_vertices):
            if g.netflow[v] != 0:
                continue
            ins = [i for i in g.in_edges(v) if i in alive_edges]
            outs = [i for i in g.out_edges(v) if i in alive_edges]
            if not ins and outs:
                alive_edges -= set(outs)
                changed = True
            if not outs and ins:
                alive_edges -= set(ins)
                changed = True
            if not ins and not outs:
                alive_vertices.discard(v)
                changed = True
    vmap = sorted(alive_vertices)
    vidx = {old: new for new, old in enumerate(vmap)}
    emap = [i for i in range(len(g.edges)) if i in alive_edges]
    edges = [(vidx[g.edges[i][0]], vidx[g.edges[i][1]]) for i in emap]
    netflow = [g.netflow[v] for v in vmap]
    in_orders = None
    out_orders = None
    if g.in_orders is not None:
        eidx = {old: new for new, old in enumerate(emap)}
        in_orders = [
            [eidx[i] for i in g.in_orders[v] if i in eidx] for v in vmap
        ]
        out_orders = [
            [eidx[i] for i in g.out_orders[v] if i in eidx] for v in vmap
        ]
    names = None if g.names is None else [g.names[v] for v in vmap]
    new = FlowNetwork.make(len(vmap), edges, netflow, in_orders, out_orders, names)
    return new, tuple(vmap), tuple(emap)

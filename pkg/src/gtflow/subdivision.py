"""Subdivision machinery: bipartite noncrossing trees, compounded reductions
of flow networks, face-replacement subdivisions of marked order polytopes,
and the bijections tying the two sides together.

Conventions.  At a reduced vertex the incoming edges form the left column of
the bipartite tree and the outgoing edges the right column, both ordered
top to bottom (the per-vertex edge order of the network; for duals of
embeddings this is the boundary order).  The canonical reduction tree always
reduces the highest-index zero-netflow vertex first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinat import binomial, enumerate_compositions
from .flow import FlowError, FlowNetwork, enumerate_integer_flows, leaf_volume, simplify
from .poset import MarkedPoset, PosetError, lattice_points, marked_volume
from .transform import (
    SENTINEL,
    DualNetwork,
    EmbeddingError,
    Face,
    MarkedEmbedding,
    _chain_covers,
    build_G_PAlambda,
    gamma,
)


# ---------------------------------------------------------------------------
# noncrossing trees


@dataclass(frozen=True)
class NoncrossingTree:
    """Bipartite noncrossing tree on ordered columns of `left` and `right`
    vertices; edges (t, s) are 0-based and listed in staircase scan order."""

    left: int
    right: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.edges) != self.left + self.right - 1:
            raise ValueError("not a spanning tree edge count")
        seen_l = [0] * self.left
        seen_r = [0] * self.right
        for t, s in self.edges:
            seen_l[t] += 1
            seen_r[s] += 1
        if 0 in seen_l or 0 in seen_r:
            raise ValueError("tree must cover all vertices")
        for (p, q) in self.edges:
            for (t, u) in self.edges:
                if p < t and q > u:
                    raise ValueError("crossing edges")

    @staticmethod
    def from_composition(comp) -> "NoncrossingTree":
        comp = tuple(int(c) for c in comp)
        l = len(comp)
        r = sum(comp) + 1
        ends = [0]
        for c in comp:
            ends.append(ends[-1] + c)
        edges = []
        for t in range(l):
            for s in range(ends[t], ends[t + 1] + 1):
                edges.append((t, s))
        return NoncrossingTree(l, r, tuple(edges))

    def to_composition(self) -> tuple[int, ...]:
        degs = [0] * self.left
        for t, _ in self.edges:
            degs[t] += 1
        return tuple(d - 1 for d in degs)

    def left_degrees(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.to_composition())


def enumerate_noncrossing_trees(l: int, r: int) -> list[NoncrossingTree]:
    """All noncrossing trees with l left and r right vertices, via the
    bijection with weak compositions of r-1 into l parts."""
    if l < 1 or r < 1:
        raise ValueError("need at least one vertex in each column")
    return [NoncrossingTree.from_composition(c) for c in enumerate_compositions(r - 1, l)]


# ---------------------------------------------------------------------------
# compounded reductions


def compound_reduce(g: FlowNetwork, v: int, tree: NoncrossingTree):
    """Replace the zero-netflow vertex v by the tree's edge identifications.

    Returns (network, survivor_map old->new, pairs) where pairs lists
    (new_edge_index, old_in_edge, old_out_edge) for the tree edges.
    """
    if g.netflow[v] != 0:
        raise FlowError(f"vertex {v} has nonzero netflow")
    ins = list(g.in_edges(v))
    outs = list(g.out_edges(v))
    if not ins or not outs:
        raise FlowError(f"vertex {v} lacks incoming or outgoing edges")
    if tree.left != len(ins) or tree.right != len(outs):
        raise FlowError("tree shape does not match the vertex degrees")

    def shift(u: int) -> int:
        return u if u < v else u - 1

    dead = set(ins) | set(outs)
    survivors = [i for i in range(len(g.edges)) if i not in dead]
    old_to_new = {i: idx for idx, i in enumerate(survivors)}
    edges = [(shift(g.edges[i][0]), shift(g.edges[i][1])) for i in survivors]
    pairs = []
    for (t, s) in tree.edges:
        e_in, e_out = ins[t], outs[s]
        idx = len(edges)
        edges.append((shift(g.edges[e_in][0]), shift(g.edges[e_out][1])))
        pairs.append((idx, e_in, e_out))

    netflow = tuple(x for u, x in enumerate(g.netflow) if u != v)

    out_orders = []
    in_orders = []
    for u in range(g.num_vertices):
        if u == v:
            continue
        olist = []
        for i in g.out_edges(u):
            if i in old_to_new:
                olist.append(old_to_new[i])
            else:  # an in-edge of v: replaced by its tree fan (s ascending)
                olist += [idx for (idx, ein, eout) in pairs if ein == i]
        out_orders.append(olist)
        ilist = []
        for i in g.in_edges(u):
            if i in old_to_new:
                ilist.append(old_to_new[i])
            else:  # an out-edge of v: replaced by its tree fan (t ascending)
                ilist += [idx for (idx, ein, eout) in pairs if eout == i]
        in_orders.append(ilist)

    names = None
    if g.names is not None:
        names = [g.names[u] for u in range(g.num_vertices) if u != v]
    child = FlowNetwork.make(
        g.num_vertices - 1, edges, netflow, in_orders=in_orders, out_orders=out_orders, names=names
    )
    return child, old_to_new, pairs


def check_sign_convention(g: FlowNetwork) -> None:
    """Netflow sign convention: positive vertices are pure sources, negative
    pure sinks, zero vertices have traffic both ways."""
    if g.num_vertices == 1:
        return
    for v in range(g.num_vertices):
        a = g.netflow[v]
        if a > 0 and g.indeg(v) > 0:
            raise FlowError(f"positive-netflow vertex {v} has incoming edges")
        if a < 0 and g.outdeg(v) > 0:
            raise FlowError(f"negative-netflow vertex {v} has outgoing edges")
        if a == 0 and (g.indeg(v) == 0 or g.outdeg(v) == 0):
            raise FlowError(f"zero-netflow vertex {v} lacks incoming or outgoing edges")


@dataclass
class ReductionNode:
    network: FlowNetwork
    inclusion: tuple[tuple[int, ...], ...]  # per edge: coefficients over root edges
    parent: int | None = None
    reduced_vertex: int | None = None
    composition: tuple[int, ...] | None = None


@dataclass
class ReductionTree:
    nodes: list[ReductionNode]
    children: dict[int, list[int]]

    @property
    def root(self) -> ReductionNode:
        return self.nodes[0]

    def leaves(self) -> list[int]:
        return [i for i in range(len(self.nodes)) if not self.children.get(i)]

    def leaf_networks(self) -> list[FlowNetwork]:
        return [self.nodes[i].network for i in self.leaves()]

    def include_flow(self, node_index: int, flow) -> tuple[int, ...]:
        """Express a flow on a node's network in the root's edge coordinates."""
        node = self.nodes[node_index]
        m = len(self.nodes[0].network.edges)
        out = [0] * m
        for val, vec in zip(flow, node.inclusion):
            for e, c in enumerate(vec):
                if c:
                    out[e] += c * val
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "nodes": [
                {
                    "network": n.network.to_json(),
                    "parent": n.parent,
                    "reduced_vertex": n.reduced_vertex,
                    "composition": list(n.composition) if n.composition else None,
                }
                for n in self.nodes
            ]
        }

    def to_dot(self) -> str:
        lines = ["digraph reduction_tree {"]
        for i, n in enumerate(self.nodes):
            lines.append(f'  n{i} [label="n{i}: {len(n.network.edges)}e"];')
            if n.parent is not None:
                comp = ",".join(map(str, n.composition))
                lines.append(f'  n{n.parent} -> n{i} [label="v{n.reduced_vertex} ({comp})"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _next_zero_vertex(g: FlowNetwork):
    for v in range(g.num_vertices - 1, -1, -1):
        if g.netflow[v] == 0 and g.num_vertices > 1:
            return v
    return None


def canonical_reduction_tree(g: FlowNetwork, order=None) -> ReductionTree:
    """Fully expand compounded reductions, highest-index zero-netflow vertex
    first (or along the given sequence of vertex indices of g)."""
    check_sign_convention(g)
    identity = tuple(
        tuple(1 if j == i else 0 for j in range(len(g.edges))) for i in range(len(g.edges))
    )
    nodes = [ReductionNode(g, identity)]
    children: dict[int, list[int]] = {}
    plan = None
    if order is not None:
        plan = {0: list(order)}
    stack = [0]
    while stack:
        ni = stack.pop()
        net = nodes[ni].network
        if plan is None:
            v = _next_zero_vertex(net)
        else:
            seq = plan[ni]
            v = seq[0] if seq else None
        if v is None:
            continue
        children[ni] = []
        for tree in enumerate_noncrossing_trees(net.indeg(v), net.outdeg(v)):
            child, old_to_new, pairs = compound_reduce(net, v, tree)
            inc = [None] * len(child.edges)
            for old, new in old_to_new.items():
                inc[new] = nodes[ni].inclusion[old]
            for (idx, ein, eout) in pairs:
                a = nodes[ni].inclusion[ein]
                b = nodes[ni].inclusion[eout]
                inc[idx] = tuple(x + y for x, y in zip(a, b))
            node = ReductionNode(
                child, tuple(inc), parent=ni, reduced_vertex=v, composition=tree.to_composition()
            )
            nodes.append(node)
            ci = len(nodes) - 1
            children[ni].append(ci)
            if plan is not None:
                plan[ci] = [u if u < v else u - 1 for u in plan[ni][1:]]
            stack.append(ci)
    return ReductionTree(nodes, children)


def reduction_tree_volume(tree: ReductionTree) -> Fraction:
    return sum((leaf_volume(n) for n in tree.leaf_networks()), Fraction(0))


def interior_sample_disjoint(tree: ReductionTree, dilation: int = 2) -> bool:
    """Interior lattice points of the dilated leaf cells, pushed into root
    coordinates, must not collide across distinct leaves."""
    seen: dict[tuple, int] = {}
    for li in tree.leaves():
        net = tree.nodes[li].network
        scaled = net.with_netflow(tuple(dilation * x for x in net.netflow))
        for f in enumerate_integer_flows(scaled):
            if any(x < 1 for x in f):
                continue
            point = tree.include_flow(li, f)
            if point in seen and seen[point] != li:
                return False
            seen[point] = li
    return True


# ---------------------------------------------------------------------------
# order-side subdivision


def face_extensions(face: Face) -> list[tuple[str, ...]]:
    """All linear orders of the face: shuffles of the two boundary
    interiors between the shared max and min."""
    p = face.left
    q = face.right
    pi = list(p[1:-1])
    qi = list(q[1:-1])
    out = []

    def rec(acc, i, j):
        if i == len(pi) and j == len(qi):
            out.append((p[0],) + tuple(acc) + (p[-1],))
            return
        if i < len(pi):
            rec(acc + [pi[i]], i + 1, j)
        if j < len(qi):
            rec(acc + [qi[j]], i, j + 1)

    rec([], 0, 0)
    return out


def sigma_from_tree(face: Face, tree: NoncrossingTree) -> tuple[str, ...]:
    """The linear order paired with a noncrossing tree by the bounding
    rectangle region labeling."""
    p = face.left
    q = face.right
    if tree.left != len(q) - 1 or tree.right != len(p) - 1:
        raise ValueError("tree does not match the face boundary sizes")
    sigma = [p[0]]
    for i in range(len(tree.edges) - 1):
        (t1, s1), (t2, s2) = tree.edges[i], tree.edges[i + 1]
        if t1 == t2:
            sigma.append(p[s2])  # triangle against the right side of the box
        else:
            sigma.append(q[t2])  # triangle against the left side
    sigma.append(p[-1])
    return tuple(sigma)


def gamma_cells(me: MarkedEmbedding, face_id: str) -> list[tuple[NoncrossingTree, tuple[str, ...]]]:
    """The bijection between noncrossing trees at v_F and the linear
    extensions replacing F."""
    fi = me.face_ids.index(face_id)
    face = me.faces[fi]
    pairs = []
    for tree in enumerate_noncrossing_trees(len(face.right) - 1, len(face.left) - 1):
        pairs.append((tree, sigma_from_tree(face, tree)))
    sigmas = {s for _, s in pairs}
    if sigmas != set(face_extensions(face)):
        raise AssertionError("gamma is not onto the face extensions")
    return pairs


def subdivide_with_extension(me: MarkedEmbedding, face_id: str, sigma) -> MarkedEmbedding:
    """Replace the face by the given linear order of its elements, rerouting
    the neighbouring boundary chains through the new chain."""
    from .poset import BOTTOM, TOP

    fi = me.face_ids.index(face_id)
    face = me.faces[fi]
    sigma = tuple(sigma)
    if set(sigma) != set(face.left) | set(face.right):
        raise EmbeddingError("extension must order exactly the face elements")
    hats = {BOTTOM, TOP}
    chain_pairs = [(sigma[t + 1], sigma[t]) for t in range(len(sigma) - 1)]
    poset_pairs = [(a, b) for a, b in chain_pairs if a not in hats and b not in hats]
    new_poset = me.mp.poset.with_relations(poset_pairs)
    boundary = set(_chain_covers(face.left)) | set(_chain_covers(face.right))
    old_hat = set(me.hat_poset.covers)
    new_mp = MarkedPoset.make(new_poset, me.mp.marking)
    pos = {e: t for t, e in enumerate(sigma)}

    def reroute(chain):
        if chain == SENTINEL:
            return chain
        out = [chain[0]]
        for t in range(len(chain) - 1):
            u, w = chain[t], chain[t + 1]
            if (w, u) in boundary:
                out.extend(sigma[pos[u] + 1 : pos[w] + 1])
            else:
                out.append(w)
        return tuple(out)

    faces = []
    flags = []
    ids = []
    for gi, g in enumerate(me.faces):
        if gi == fi:
            continue
        faces.append(Face(reroute(g.left), reroute(g.right)))
        flags.append(me.flags[gi])
        ids.append(me.face_ids[gi])
    child = MarkedEmbedding.make(new_mp, faces, flags, tuple(ids), hat_values=me.hat_values)
    new_hat = set(child.hat_poset.covers)
    destroyed = old_hat - new_hat
    if not destroyed <= boundary:
        raise EmbeddingError("subdivision destroyed a cover outside the face")
    child.validate()
    return child


def subdivide_marked_face(me: MarkedEmbedding, face_id: str) -> list[MarkedEmbedding]:
    """All face-replacement children of the embedding at the given face."""
    fi = me.face_ids.index(face_id)
    face = me.faces[fi]
    k, l = len(face.left), len(face.right)
    exts = face_extensions(face)
    assert len(exts) == binomial(k + l - 4, l - 2)
    return [subdivide_with_extension(me, face_id, s) for s in exts]


# ---------------------------------------------------------------------------
# the two subdivisions together


def _dual_signature(dn: DualNetwork):
    """Labeled-network signature: edges as (tail key, head key, crossing)
    with per-vertex boundary orders, plus keyed netflows.  Keys use face ids
    so that signatures survive re-indexing."""
    me = dn.embedding

    def keyof(v):
        k = dn.vertex_keys[v]
        return (k[0], me.face_ids[k[1]]) + tuple(k[2:])

    net = dn.network
    edges = sorted(
        (keyof(net.edges[i][0]), keyof(net.edges[i][1]), dn.crossings[i])
        for i in range(len(net.edges))
    )
    netflows = sorted((keyof(v), net.netflow[v]) for v in range(net.num_vertices))
    orders = []
    for v in range(net.num_vertices):
        orders.append(
            (
                keyof(v),
                tuple(dn.crossings[i] for i in net.in_edges(v)),
                tuple(dn.crossings[i] for i in net.out_edges(v)),
            )
        )
    return edges, netflows, sorted(orders)


@dataclass
class _CellState:
    me: MarkedEmbedding
    network: FlowNetwork
    keys: tuple
    crossings: tuple
    inclusion: tuple
    sigmas: tuple = ()
    compositions: tuple = ()


def _simplified_dual_state(me: MarkedEmbedding) -> tuple[_CellState, DualNetwork, tuple]:
    from .poset import BOTTOM, TOP

    dn = build_G_PAlambda(me)
    net, vmap, emap = simplify(dn.network)
    keys = tuple(dn.vertex_keys[v] for v in vmap)
    hats = {BOTTOM, TOP}
    for k in {k for k in dn.vertex_keys if k[0] == "src"} - set(keys):
        upper, lower = dn.gap_bound_map[k]
        if upper not in hats and lower not in hats:
            raise EmbeddingError(
                "degenerate markings: equal consecutive boundary marks prune gap sources"
            )
    crossings = tuple(dn.crossings[e] for e in emap)
    identity = tuple(
        tuple(1 if j == emap[i] else 0 for j in range(len(dn.network.edges)))
        for i in range(len(net.edges))
    )
    return _CellState(me, net, keys, crossings, identity), dn, emap


def _leaf_cell_volume(net: FlowNetwork, dim: int) -> Fraction:
    """Volume of a fully reduced cell in the given ambient dimension: the
    simplex-product formula when it applies, otherwise the exact Ehrhart
    leading coefficient (multi-sink cells are not simplex products)."""
    import math

    from .flow import kostant

    if net.num_vertices == 1:
        return Fraction(1) if dim == 0 else Fraction(0)
    if net.dimension() == dim:
        try:
            return leaf_volume(net)
        except FlowError:
            pass
    counts = [
        kostant(net.with_netflow(tuple(t * x for x in net.netflow)))
        for t in range(dim + 1)
    ]
    lead = sum((-1) ** (dim - i) * math.comb(dim, i) * c for i, c in enumerate(counts))
    return Fraction(lead, math.factorial(dim))


def _reduction_order(state: _CellState) -> list[str]:
    """Face ids of zero-netflow vertices, highest network index first."""
    out = []
    for v in range(state.network.num_vertices - 1, -1, -1):
        if state.keys[v][0] == "face" and state.network.netflow[v] == 0:
            out.append(state.me.face_ids[state.keys[v][1]])
    return out


def _expand_cell(state: _CellState, face_id: str, check: bool) -> list[_CellState]:
    fi = state.me.face_ids.index(face_id)
    v = state.keys.index(("face", fi))
    face = state.me.faces[fi]
    net = state.network
    if net.indeg(v) != len(face.right) - 1 or net.outdeg(v) != len(face.left) - 1:
        raise EmbeddingError("vertex degrees do not match the face boundary")
    out = []
    for tree in enumerate_noncrossing_trees(net.indeg(v), net.outdeg(v)):
        sigma = sigma_from_tree(face, tree)
        child_me = subdivide_with_extension(state.me, face_id, sigma)
        child_net, old_to_new, pairs = compound_reduce(net, v, tree)
        crossings = [None] * len(child_net.edges)
        inclusion = [None] * len(child_net.edges)
        for old, new in old_to_new.items():
            crossings[new] = state.crossings[old]
            inclusion[new] = state.inclusion[old]
        for rank, (idx, ein, eout) in enumerate(pairs):
            crossings[idx] = (sigma[rank + 1], sigma[rank])
            inclusion[idx] = tuple(
                a + b for a, b in zip(state.inclusion[ein], state.inclusion[eout])
            )
        new_keys = []
        for u in range(net.num_vertices):
            if u == v:
                continue
            k = state.keys[u]
            new_keys.append((k[0], child_me.face_ids.index(state.me.face_ids[k[1]])) + tuple(k[2:]))
        child = _CellState(
            child_me,
            child_net,
            tuple(new_keys),
            tuple(crossings),
            tuple(inclusion),
            state.sigmas + (sigma,),
            state.compositions + (tree.to_composition(),),
        )
        if check:
            direct_state, _, _ = _simplified_dual_state(child_me)
            got = _dual_signature(
                DualNetwork(child_me, child.network, child.keys, child.crossings)
            )
            want = _dual_signature(
                DualNetwork(
                    child_me, direct_state.network, direct_state.keys, direct_state.crossings
                )
            )
            if got != want:
                raise AssertionError(
                    f"reduced network differs from the direct dual after replacing {face_id}"
                )
        out.append(child)
    return out


@dataclass
class SubdivisionReport:
    cells: int
    total_volume: Fraction
    root_volume: Fraction
    lattice_matches: bool
    volumes_match: bool

    @property
    def ok(self) -> bool:
        return self.volumes_match and self.lattice_matches


def full_subdivision_check(
    me: MarkedEmbedding, check_networks: bool = True, face_order=None
) -> SubdivisionReport:
    """Run both subdivisions in lockstep and verify the gamma pairing cell
    by cell: equal labeled networks, matching volumes, and a lattice-point
    bijection through the integral equivalence.

    face_order overrides the canonical highest-vertex-first sequence (used
    by the order-naturality property test).
    """
    if any(f != "L" for f in me.flags):
        raise EmbeddingError("full subdivision check supports left-flagged embeddings")
    me.validate()
    root, dn, emap = _simplified_dual_state(me)
    plan = _reduction_order(root) if face_order is None else list(face_order)
    if sorted(plan) != sorted(_reduction_order(root)):
        raise EmbeddingError("face_order must permute the reducible faces")
    states = [root]
    for face_id in plan:
        states = [c for s in states for c in _expand_cell(s, face_id, check_networks)]
    # everything is compared in the coordinates of the unsimplified dual;
    # pruned whisker edges carry zero flow in every feasible point
    root_pts = {gamma(dn, x) for x in lattice_points(me.mp)}
    root_vol = marked_volume(me.mp)
    m = len(dn.network.edges)
    total = Fraction(0)
    covered = set()
    lattice_ok = True
    volumes_ok = True
    dim = len(me.mp.poset.elements) - len(me.mp.marked)
    for cell in states:
        cell_vol = marked_volume(cell.me.mp)
        total += cell_vol
        if cell_vol != _leaf_cell_volume(cell.network, dim):
            volumes_ok = False
        order_side = {gamma(dn, x) for x in lattice_points(cell.me.mp)}
        flow_side = set()
        for g in enumerate_integer_flows(cell.network):
            vec = [0] * m
            for val, coeffs in zip(g, cell.inclusion):
                for e, c in enumerate(coeffs):
                    if c:
                        vec[e] += c * val
            flow_side.add(tuple(vec))
        if order_side != flow_side or not order_side <= root_pts:
            lattice_ok = False
        covered |= order_side
    if covered != root_pts:
        lattice_ok = False
    if total != root_vol:
        volumes_ok = False
    return SubdivisionReport(len(states), total, root_vol, lattice_ok, volumes_ok)


# ---------------------------------------------------------------------------
# flows at the shifted netflow <-> leaves <-> linear extensions


def _chain_extension(mp: MarkedPoset) -> tuple[str, ...]:
    """The unique extension of a chain poset, largest element first."""
    order = mp.poset.topo_order
    chain = list(reversed(order))
    for t in range(len(chain) - 1):
        if not mp.poset.lt(chain[t + 1], chain[t]):
            raise PosetError("final cell poset is not a chain")
    return tuple(chain)


def leaves_to_extensions(me: MarkedEmbedding, a) -> list[dict]:
    """Explicit extension bijection for a single-sink embedding: each integer
    flow at the shifted netflow walks to a leaf of the canonical reduction
    tree and on to a linear extension whose marked elements sit at positions
    1, 2+a_1, ..., k+a_1+...+a_{k-1}."""
    if any(f != "L" for f in me.flags):
        raise EmbeddingError("the extension bijection runs on left-flagged embeddings")
    me.validate()
    root, dn, emap = _simplified_dual_state(me)
    net = root.network
    sinks = [v for v in range(net.num_vertices) if net.netflow[v] < 0]
    if len(sinks) != 1 or sinks[0] != net.num_vertices - 1:
        raise EmbeddingError("the extension bijection needs a single sink, last in the order")
    sources = [v for v in range(net.num_vertices) if root.keys[v][0] == "src"]
    marked = me.mp.sorted_marked()
    k = len(marked)
    a = tuple(int(x) for x in a)
    if len(a) != k - 1:
        raise ValueError(f"gap vector needs {k - 1} entries")
    if len(sources) != k - 1:
        raise EmbeddingError("gap sources do not match the marked elements (degenerate markings?)")
    shifted = []
    for v in range(net.num_vertices - 1):
        if v in sources:
            shifted.append(a[sources.index(v)] - net.out_shift(v))
        else:
            shifted.append(-net.out_shift(v))
    shifted.append(0)
    if sum(shifted) != 0:
        return []

    plan = _reduction_order(root)
    records = []
    for f in enumerate_integer_flows(net, tuple(shifted)):
        state = root
        values = list(f)
        for face_id in plan:
            fi = state.me.face_ids.index(face_id)
            v = state.keys.index(("face", fi))
            comp = tuple(values[i] for i in state.network.in_edges(v))
            if any(values[i] != 0 for i in state.network.out_edges(v)):
                raise AssertionError("nonzero flow on an edge into the sink")
            tree = NoncrossingTree.from_composition(comp)
            face = state.me.faces[fi]
            sigma = sigma_from_tree(face, tree)
            child_me = subdivide_with_extension(state.me, face_id, sigma)
            child_net, old_to_new, pairs = compound_reduce(state.network, v, tree)
            new_values = [0] * len(child_net.edges)
            for old, new in old_to_new.items():
                new_values[new] = values[old]
            new_keys = []
            for u in range(state.network.num_vertices):
                if u == v:
                    continue
                kk = state.keys[u]
                new_keys.append(
                    (kk[0], child_me.face_ids.index(state.me.face_ids[kk[1]])) + tuple(kk[2:])
                )
            state = _CellState(child_me, child_net, tuple(new_keys), (), ())
            values = new_values
        if any(values):
            raise AssertionError("leaf flow should vanish identically")
        # leaf source out-degrees recover the gap composition
        degs = []
        for v in range(state.network.num_vertices):
            if state.keys[v][0] == "src":
                degs.append(state.network.outdeg(v))
        if tuple(d - 1 for d in degs) != a:
            raise AssertionError("leaf out-degrees disagree with the gap vector")
        ext = _chain_extension(state.me.mp)
        positions = [ext.index(m) + 1 for m in marked]
        want = []
        cur = 1
        for idx in range(k):
            want.append(cur)
            if idx < k - 1:
                cur += 1 + a[idx]
        if positions != want:
            raise AssertionError("marked positions disagree with the gap vector")
        records.append({"flow": f, "extension": ext, "positions": tuple(positions)})
    exts = {r["extension"] for r in records}
    if len(exts) != len(records):
        raise AssertionError("two flows mapped to the same extension")
    return records

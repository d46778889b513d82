"""Bounded strongly planar embeddings and the dual flow networks of marked
order polytopes, together with the integral equivalence in both directions.

An embedding is given by an explicit list of bounded faces of the Hasse
diagram of P extended by hats 0hat/1hat and two outer (0hat,1hat) edges.
Each face carries a left and a right boundary chain, listed from max(F) down
to min(F); the two faces containing the outer edges use the sentinel chain
(1hat, 0hat) on their outer side.

The dual network is built face by face.  Hats always carry the auxiliary
markings min/max of the marking values.  A face is processed when it is one
of the two outer faces or when its flagged boundary chain (left by default,
right for faces flagged "R", the mixed boundary-side generalization) has a marked
element strictly inside.  Processing a left-flagged face turns its vertex
into a sink that keeps the incoming edges, and hands the outgoing edges to
new sources, one per gap between consecutive marked elements of the chain;
right-flagged faces are treated mirror-image (source remnant, sink gaps).
Remnants without any edges (the outer faces) are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .flow import FlowError, FlowNetwork
from .poset import BOTTOM, TOP, MarkedPoset, Poset, PosetError, point_feasible

SENTINEL = (TOP, BOTTOM)


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    left: tuple[str, ...]
    right: tuple[str, ...]

    @staticmethod
    def make(left, right) -> "Face":
        return Face(tuple(str(e) for e in left), tuple(str(e) for e in right))

    @property
    def is_left_outer(self) -> bool:
        return self.left == SENTINEL

    @property
    def is_right_outer(self) -> bool:
        return self.right == SENTINEL

    @property
    def max(self) -> str:
        return self.right[0] if self.is_left_outer else self.left[0]

    @property
    def min(self) -> str:
        return self.right[-1] if self.is_left_outer else self.left[-1]


def _chain_covers(chain) -> list[tuple[str, str]]:
    """Cover pairs (lower, upper) along a descending chain."""
    return [(chain[t + 1], chain[t]) for t in range(len(chain) - 1)]


@dataclass(frozen=True)
class MarkedEmbedding:
    """Embedding of the hat extension of mp.poset.

    If the marking is empty (order-polytope mode) the hats carry the explicit
    hat_values; otherwise they carry min/max of the marking values.
    """

    mp: MarkedPoset
    faces: tuple[Face, ...]
    flags: tuple[str, ...]
    face_ids: tuple[str, ...]
    hat_values: tuple[Fraction, Fraction] | None = None

    @staticmethod
    def make(mp: MarkedPoset, faces, flags=None, face_ids=None, hat_values=None) -> "MarkedEmbedding":
        faces = tuple(f if isinstance(f, Face) else Face.make(*f) for f in faces)
        if flags is None:
            flags = ("L",) * len(faces)
        if face_ids is None:
            face_ids = tuple(f"F{i}" for i in range(len(faces)))
        if hat_values is not None:
            hat_values = (Fraction(hat_values[0]), Fraction(hat_values[1]))
        return MarkedEmbedding(mp, faces, tuple(flags), tuple(face_ids), hat_values)

    @cached_property
    def hat_poset(self) -> Poset:
        p = self.mp.poset
        if BOTTOM in p.elements or TOP in p.elements:
            raise EmbeddingError(f"element ids {BOTTOM}/{TOP} are reserved")
        covers = list(p.covers)
        covers += [(BOTTOM, e) for e in p.minimal_elements()]
        covers += [(e, TOP) for e in p.maximal_elements()]
        return Poset.from_covers(p.elements + (BOTTOM, TOP), covers)

    @cached_property
    def extended_marking(self) -> dict[str, Fraction]:
        lam = dict(self.mp.marking)
        if lam:
            values = list(lam.values())
            lam[BOTTOM] = min(values)
            lam[TOP] = max(values)
        else:
            if self.hat_values is None:
                raise EmbeddingError("empty marking needs explicit hat values")
            lam[BOTTOM], lam[TOP] = self.hat_values
        return lam

    def flagged_chain(self, i: int) -> tuple[str, ...]:
        return self.faces[i].left if self.flags[i] == "L" else self.faces[i].right

    @cached_property
    def edge_sides(self) -> tuple[dict, dict]:
        """Maps cover -> face index: east (cover on left chain) and west."""
        east: dict[tuple[str, str], int] = {}
        west: dict[tuple[str, str], int] = {}
        for fi, face in enumerate(self.faces):
            for chain, store in ((face.left, east), (face.right, west)):
                if chain == SENTINEL:
                    continue
                for cov in _chain_covers(chain):
                    if cov in store:
                        raise EmbeddingError(
                            f"edge {cov} appears on two {'left' if store is east else 'right'} boundaries"
                        )
                    store[cov] = fi
        return east, west

    def validate(self) -> None:
        if self.mp.marking_items:
            self.mp.validate()
        else:
            if self.hat_values is None or not self.hat_values[0] <= self.hat_values[1]:
                raise EmbeddingError("empty marking needs ordered hat values")
        hat = self.hat_poset
        covers = set(hat.covers)
        lamhat = self.extended_marking
        lo = [f for f in self.faces if f.is_left_outer]
        ro = [f for f in self.faces if f.is_right_outer]
        if len(lo) != 1 or len(ro) != 1:
            raise EmbeddingError("need exactly one left-outer and one right-outer face")
        for fi, face in enumerate(self.faces):
            for chain in (face.left, face.right):
                if chain == SENTINEL:
                    continue
                if len(set(chain)) != len(chain):
                    raise EmbeddingError(f"face {self.face_ids[fi]} chain repeats an element")
                for cov in _chain_covers(chain):
                    if cov not in covers:
                        raise EmbeddingError(
                            f"face {self.face_ids[fi]}: ({cov[0]},{cov[1]}) is not a cover"
                        )
            if face.left[0] != face.right[0] or face.left[-1] != face.right[-1]:
                if not (face.is_left_outer or face.is_right_outer):
                    raise EmbeddingError(
                        f"face {self.face_ids[fi]} chains must share max and min"
                    )
        east, west = self.edge_sides
        if set(east) != covers or set(west) != covers:
            missing = (covers - set(east)) | (covers - set(west))
            extra = (set(east) - covers) | (set(west) - covers)
            raise EmbeddingError(f"boundary edges do not tile the Hasse diagram: missing={sorted(missing)} extra={sorted(extra)}")
        n_vertices = len(hat.elements)
        n_edges = len(covers) + 2
        if len(self.faces) != n_edges - n_vertices + 1:
            raise EmbeddingError(
                f"Euler check failed: {len(self.faces)} faces, expected {n_edges - n_vertices + 1}"
            )
        for fi, face in enumerate(self.faces):
            chain = self.flagged_chain(fi)
            if chain == SENTINEL:
                continue
            if any(p in lamhat for p in chain[1:-1]):
                if face.max not in lamhat or face.min not in lamhat:
                    raise EmbeddingError(
                        f"face {self.face_ids[fi]}: marked {self.flags[fi]} boundary "
                        f"but max/min unmarked"
                    )
                vals = [lamhat[p] for p in chain if p in lamhat]
                if any(vals[t] < vals[t + 1] for t in range(len(vals) - 1)):
                    raise EmbeddingError("marking not descending along a boundary chain")

    def sink_count(self) -> int:
        return sum(1 for k in build_G_PAlambda(self).vertex_keys if k[0] in ("sink", "rsink"))

    def to_json(self) -> dict:
        d = {
            "poset": self.mp.to_json(),
            "faces": [
                {"left": list(f.left), "right": list(f.right), "flag": self.flags[i]}
                for i, f in enumerate(self.faces)
            ],
        }
        if self.hat_values is not None:
            d["hat_values"] = [str(v) for v in self.hat_values]
        return d

    @staticmethod
    def from_json(data: dict) -> "MarkedEmbedding":
        mp = MarkedPoset.from_json(data["poset"])
        faces = [Face.make(f["left"], f["right"]) for f in data["faces"]]
        flags = [f.get("flag", "L") for f in data["faces"]]
        hv = data.get("hat_values")
        if hv is not None:
            hv = (Fraction(hv[0]), Fraction(hv[1]))
        return MarkedEmbedding.make(mp, faces, flags, hat_values=hv)


def validate_embedding(me: MarkedEmbedding) -> bool:
    try:
        me.validate()
        return True
    except (EmbeddingError, PosetError):
        return False


# ---------------------------------------------------------------------------
# dual network construction


@dataclass(frozen=True)
class DualNetwork:
    """Flow network dual to a bounded strongly planar embedding.

    vertex_keys identify each network vertex: ("face", fi) untouched face,
    ("src", fi, g) / ("sink", fi, g) gap vertices, ("rsrc", fi) /
    ("rsink", fi) processed-face remnants.  crossings[i] is the Hasse cover
    crossed by edge i.
    """

    embedding: MarkedEmbedding
    network: FlowNetwork
    vertex_keys: tuple[tuple, ...]
    crossings: tuple[tuple[str, str], ...]
    # for gap vertices: key -> (upper marked element, lower marked element)
    gap_bounds: tuple[tuple[tuple, tuple[str, str]], ...] = ()

    @cached_property
    def edge_of_cover(self) -> dict[tuple[str, str], int]:
        return {cov: i for i, cov in enumerate(self.crossings)}

    @cached_property
    def gap_bound_map(self) -> dict[tuple, tuple[str, str]]:
        return dict(self.gap_bounds)

    @cached_property
    def vertex_index(self) -> dict[tuple, int]:
        return {k: i for i, k in enumerate(self.vertex_keys)}

    def gap_sources(self) -> tuple[int, ...]:
        """Indices of gap-source vertices, in vertex order."""
        return tuple(
            i for i, k in enumerate(self.vertex_keys) if k[0] == "src"
        )


def _gap_of(chain_positions, marked_positions, cover_pos):
    for g in range(len(marked_positions) - 1):
        if marked_positions[g] <= cover_pos < marked_positions[g + 1]:
            return g
    raise EmbeddingError("cover outside the marked span of its chain")


def build_G_PAlambda(me: MarkedEmbedding) -> DualNetwork:
    """The flow network of a bounded strongly planar embedding of a marked
    poset, with the vertex order: sources (marking value descending), faces
    in topological order, sinks last."""
    me.validate()
    lamhat = me.extended_marking
    east, west = me.edge_sides
    faces = me.faces

    processed: dict[int, dict] = {}
    for fi, face in enumerate(faces):
        chain = me.flagged_chain(fi)
        outer = face.is_left_outer or face.is_right_outer
        strict = chain != SENTINEL and any(p in lamhat for p in chain[1:-1])
        if not (outer or strict):
            continue
        if chain == SENTINEL:
            mpos = [0, 1]
        else:
            mpos = [t for t, p in enumerate(chain) if p in lamhat]
            if mpos[0] != 0 or mpos[-1] != len(chain) - 1:
                raise EmbeddingError(
                    f"face {me.face_ids[fi]}: flagged chain endpoints must be marked"
                )
        marks = [chain[t] for t in mpos]
        processed[fi] = {"chain": chain, "mpos": mpos, "marks": marks}

    def gap_netflow(fi, g):
        info = processed[fi]
        return lamhat[info["marks"][g]] - lamhat[info["marks"][g + 1]]

    def span(fi):
        info = processed[fi]
        return lamhat[info["marks"][0]] - lamhat[info["marks"][-1]]

    def tail_owner(cov):
        fi = east[cov]
        if fi not in processed:
            return ("face", fi)
        if me.flags[fi] == "L":
            face = faces[fi]
            pos = _chain_covers(face.left).index(cov)
            g = _gap_of(face.left, processed[fi]["mpos"], pos)
            return ("src", fi, g)
        return ("rsrc", fi)

    def head_owner(cov):
        fi = west[cov]
        if fi not in processed:
            return ("face", fi)
        if me.flags[fi] == "R":
            face = faces[fi]
            pos = _chain_covers(face.right).index(cov)
            g = _gap_of(face.right, processed[fi]["mpos"], pos)
            return ("sink", fi, g)
        return ("rsink", fi)

    all_covers = [cov for face in faces if face.left != SENTINEL for cov in _chain_covers(face.left)]
    edge_tail = {cov: tail_owner(cov) for cov in all_covers}
    edge_head = {cov: head_owner(cov) for cov in all_covers}

    # vertex keys and netflows
    netflows: dict[tuple, Fraction] = {}
    for fi, face in enumerate(faces):
        if fi not in processed:
            netflows[("face", fi)] = Fraction(0)
            continue
        flag = me.flags[fi]
        if flag == "L":
            if not face.is_right_outer:
                netflows[("rsink", fi)] = -span(fi)
            if face.left != SENTINEL:
                for g in range(len(processed[fi]["marks"]) - 1):
                    netflows[("src", fi, g)] = gap_netflow(fi, g)
        else:
            if not face.is_left_outer:
                netflows[("rsrc", fi)] = span(fi)
            if face.right != SENTINEL:
                for g in range(len(processed[fi]["marks"]) - 1):
                    netflows[("sink", fi, g)] = -gap_netflow(fi, g)
    used = set(edge_tail.values()) | set(edge_head.values())
    for key in list(netflows):
        if key[0] in ("src", "sink") and key not in used:
            # a gap whose boundary segment carries no dual edges cannot happen:
            # every gap spans at least one cover
            raise EmbeddingError(f"empty gap vertex {key}")

    sources = [k for k in netflows if k[0] in ("src", "rsrc")]
    plains = [k for k in netflows if k[0] == "face"]
    sinks = [k for k in netflows if k[0] in ("sink", "rsink")]

    def upper_value(k):
        fi = k[1]
        info = processed[fi]
        return lamhat[info["marks"][k[2]]] if k[0] == "src" else lamhat[info["marks"][0]]

    sources.sort(key=lambda k: (-upper_value(k), k[1], k[2] if len(k) > 2 else -1))
    # topological order of untouched faces along dual edges
    adj = {k: set() for k in plains}
    indeg = {k: 0 for k in plains}
    for cov in all_covers:
        t, h = edge_tail[cov], edge_head[cov]
        if t in indeg and h in indeg and h not in adj[t]:
            adj[t].add(h)
            indeg[h] += 1
    topo = []
    avail = sorted((k for k in plains if indeg[k] == 0), key=lambda k: k[1])
    while avail:
        k = avail.pop(0)
        topo.append(k)
        for h in sorted(adj[k], key=lambda x: x[1]):
            indeg[h] -= 1
            if indeg[h] == 0:
                avail.append(h)
        avail.sort(key=lambda k: k[1])
    if len(topo) != len(plains):
        raise EmbeddingError("dual network has a cycle among faces")
    sinks.sort(key=lambda k: (k[1], k[2] if len(k) > 2 else -1))

    keys = tuple(sources + topo + sinks)
    index = {k: i for i, k in enumerate(keys)}

    edges = []
    crossings = []
    for cov in all_covers:
        edges.append((index[edge_tail[cov]], index[edge_head[cov]]))
        crossings.append(cov)
    for (u, v) in edges:
        if not u < v:
            raise EmbeddingError("vertex order is not topological for the dual edges")

    # integer netflows
    nets = []
    for k in keys:
        v = netflows[k]
        if v.denominator != 1:
            raise EmbeddingError("network construction needs integer markings")
        nets.append(int(v))

    # per-vertex edge orders from the boundary chains
    eidx = {cov: i for i, cov in enumerate(crossings)}
    out_orders = [[] for _ in keys]
    in_orders = [[] for _ in keys]
    for fi, face in enumerate(faces):
        if face.left != SENTINEL:
            for cov in _chain_covers(face.left):
                out_orders[index[edge_tail[cov]]].append(eidx[cov])
        if face.right != SENTINEL:
            for cov in _chain_covers(face.right):
                in_orders[index[edge_head[cov]]].append(eidx[cov])

    names = []
    for k in keys:
        fid = me.face_ids[k[1]]
        if k[0] == "face":
            names.append(fid)
        elif k[0] == "src":
            names.append(f"s{k[2] + 1}^{fid}")
        elif k[0] == "rsrc":
            names.append(f"s^{fid}")
        elif k[0] == "sink":
            names.append(f"t{k[2] + 1}^{fid}")
        else:
            names.append(f"t^{fid}")

    network = FlowNetwork.make(
        len(keys), edges, nets, in_orders=in_orders, out_orders=out_orders, names=names
    )
    gap_bounds = []
    for k in keys:
        if k[0] in ("src", "sink"):
            marks = processed[k[1]]["marks"]
            gap_bounds.append((k, (marks[k[2]], marks[k[2] + 1])))
    return DualNetwork(me, network, keys, tuple(crossings), tuple(gap_bounds))


def build_G_P(p: Poset, faces, face_ids=None, hat_values=(0, 1)) -> DualNetwork:
    """Dual network of an unmarked strongly planar poset: netflow +1 at the
    source on the right, -1 at the sink on the left, 0 elsewhere."""
    mp = MarkedPoset.make(p, {})
    me = MarkedEmbedding.make(mp, faces, face_ids=face_ids, hat_values=hat_values)
    return build_G_PAlambda(me)


# ---------------------------------------------------------------------------
# the integral equivalence Gamma


def gamma(dn: DualNetwork, x: dict):
    """Map a point of the marked order polytope to a flow: the value on a
    dual edge is the difference of the point across the crossed cover."""
    me = dn.embedding
    if not point_feasible(me.mp, {k: Fraction(v) for k, v in x.items()}):
        raise PosetError("point is not in the marked order polytope")
    lamhat = me.extended_marking
    xh = {k: Fraction(v) for k, v in x.items()}
    xh[BOTTOM] = lamhat[BOTTOM]
    xh[TOP] = lamhat[TOP]
    values = []
    for (p, q) in dn.crossings:
        v = xh[q] - xh[p]
        values.append(int(v) if v.denominator == 1 else v)
    assert dn.network.check_flow(values)
    return tuple(values)


def gamma_inverse(dn: DualNetwork, f) -> dict:
    """Inverse map: x_p is the flow summed over a canonical descending chain
    from p to 0hat (the lexicographically smallest lower covers)."""
    me = dn.embedding
    f = tuple(f)
    if not dn.network.check_flow(f):
        raise FlowError("not a feasible flow on the dual network")
    lamhat = me.extended_marking
    hat = me.hat_poset
    xh: dict[str, Fraction] = {BOTTOM: lamhat[BOTTOM]}
    for e in hat.topo_order:
        if e == BOTTOM:
            continue
        d = hat.down_covers(e)[0]
        xh[e] = xh[d] + f[dn.edge_of_cover[(d, e)]]
    x = {e: xh[e] for e in me.mp.poset.elements}
    for a, v in me.mp.marking.items():
        if x[a] != v:
            raise FlowError(f"flow does not restore the marking at {a}")
    if not point_feasible(me.mp, x):
        raise FlowError("flow maps outside the marked order polytope")
    return {k: int(v) if v.denominator == 1 else v for k, v in x.items()}


# ---------------------------------------------------------------------------
# skew Gelfand-Tsetlin polytopes


def _skew_id(i: int, j: int) -> str:
    return f"y{i}_{j}"


def build_skew_gt(lam, mu, m: int) -> MarkedEmbedding:
    """Marked poset plus embedding for the skew polytope with top row lam,
    bottom row mu, and m+1 rows in total.

    Cells (i, j): i = 1 (bottom, marked mu) .. m+1 (top, marked lam),
    j = 1..n.  Relations: (i-1,j) <= (i,j) and (i+1,j+1) <= (i,j).
    """
    from .combinat import as_partition

    lam = as_partition(lam)
    mu = as_partition(mu)
    if len(mu) > len(lam):
        raise ValueError("mu must fit inside lam")
    mu = mu + (0,) * (len(lam) - len(mu))
    n = len(lam)
    if n < 1 or m < 1:
        raise ValueError("need at least one column and m >= 1")
    if any(mu[j] > lam[j] for j in range(n)):
        raise ValueError("mu must be contained in lam columnwise")

    cells = [(i, j) for i in range(1, m + 2) for j in range(1, n + 1)]
    covers = []
    for i in range(2, m + 2):
        for j in range(1, n + 1):
            covers.append((_skew_id(i - 1, j), _skew_id(i, j)))
    for i in range(1, m + 1):
        for j in range(1, n):
            covers.append((_skew_id(i + 1, j + 1), _skew_id(i, j)))
    p = Poset.from_covers([_skew_id(i, j) for i, j in cells], covers)
    marking = {_skew_id(m + 1, j): lam[j - 1] for j in range(1, n + 1)}
    marking.update({_skew_id(1, j): mu[j - 1] for j in range(1, n + 1)})
    mp = MarkedPoset.make(p, marking)

    faces = []
    flags = []
    ids = []
    for i in range(2, m + 1):
        for j in range(1, n):
            faces.append(
                Face.make(
                    [_skew_id(i, j), _skew_id(i - 1, j), _skew_id(i, j + 1)],
                    [_skew_id(i, j), _skew_id(i + 1, j + 1), _skew_id(i, j + 1)],
                )
            )
            flags.append("R" if i == 2 else "L")
            ids.append(f"D{i}_{j}")
    west = [TOP] + [_skew_id(i, 1) for i in range(m + 1, 0, -1)]
    for j in range(2, n + 1):
        west += [_skew_id(2, j), _skew_id(1, j)]
    west += [BOTTOM]
    faces.append(Face.make(SENTINEL, west))
    flags.append("R")
    ids.append("Ft")
    east = [TOP, _skew_id(m + 1, 1)]
    for j in range(1, n):
        east += [_skew_id(m, j), _skew_id(m + 1, j + 1)]
    east += [_skew_id(i, n) for i in range(m, 0, -1)]
    east += [BOTTOM]
    faces.append(Face.make(east, SENTINEL))
    flags.append("L")
    ids.append("Fs")
    return MarkedEmbedding.make(mp, faces, flags, ids)


def enumerate_skew_points(lam, mu, m: int) -> list[dict[str, int]]:
    """Independent cell-by-cell enumeration of the integer skew arrays."""
    from .combinat import as_partition

    lam = as_partition(lam)
    mu = as_partition(mu)
    mu = mu + (0,) * (len(lam) - len(mu))
    n = len(lam)
    vals: dict[tuple[int, int], int] = {}
    for j in range(1, n + 1):
        vals[(1, j)] = mu[j - 1]
        vals[(m + 1, j)] = lam[j - 1]
    if m == 1:
        ok = all(
            vals[(1, j)] <= vals[(2, j)] for j in range(1, n + 1)
        ) and all(vals[(2, j + 1)] <= vals[(1, j)] for j in range(1, n))
        return [{_skew_id(i, j): v for (i, j), v in vals.items()}] if ok else []
    # columns right to left, rows bottom up: both lower covers of a cell,
    # (i-1,j) and (i+1,j+1), are always already assigned
    free = [(i, j) for j in range(n, 0, -1) for i in range(2, m + 1)]
    points: list[dict[str, int]] = []

    def rec(idx):
        if idx == len(free):
            points.append({_skew_id(i, j): v for (i, j), v in vals.items()})
            return
        i, j = free[idx]
        lo = vals[(i - 1, j)]
        if j < n:
            lo = max(lo, vals[(i + 1, j + 1)])
        hi = lam[j - 1]
        if i == 2 and j > 1:
            hi = min(hi, vals[(1, j - 1)])  # upper cover (1, j-1) is marked
        for v in range(lo, hi + 1):
            vals[(i, j)] = v
            rec(idx + 1)
            del vals[(i, j)]

    rec(0)
    return points


def build_skew_flow(lam, mu, m: int) -> DualNetwork:
    """Flow network for a skew polytope, with an empirical correctness gate:
    the integer-flow count is verified against direct enumeration."""
    me = build_skew_gt(lam, mu, m)
    try:
        me.validate()
    except EmbeddingError as e:
        raise EmbeddingError(
            f"no valid boundary-side assignment for this skew instance: {e}"
        ) from e
    dn = build_G_PAlambda(me)
    from .flow import kostant

    expected = len(enumerate_skew_points(lam, mu, m))
    got = kostant(dn.network)
    if got != expected:
        raise EmbeddingError(
            f"side assignment failed the count gate: {got} flows vs {expected} points"
        )
    return dn

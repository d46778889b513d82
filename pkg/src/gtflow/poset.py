"""Finite posets, marked posets, and marked order polytopes.

Implements the marked-order-polytope toolkit: lattice point enumeration,
volumes via position-constrained linear extensions, the vertex criterion,
Minkowski-sum checks by support functions, and the log-concavity property of
the extension counts.

Conventions: a linear extension is an order-REVERSING listing (largest
element first).  Marked elements are sorted by marking value descending,
ties broken so that larger poset elements come first.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from .combinat import enumerate_compositions

BOTTOM = "0hat"
TOP = "1hat"


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Poset:
    """Finite poset given by elements and cover pairs (lower, upper)."""

    elements: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]

    @staticmethod
    def from_covers(elements, covers) -> "Poset":
        els = tuple(sorted(str(e) for e in elements))
        if len(set(els)) != len(els):
            raise PosetError("duplicate elements")
        cvs = tuple(sorted((str(p), str(q)) for p, q in covers))
        return Poset(els, cvs)

    def __post_init__(self):
        els = set(self.elements)
        for p, q in self.covers:
            if p not in els or q not in els:
                raise PosetError(f"cover ({p},{q}) references unknown element")
            if p == q:
                raise PosetError(f"loop at {p}")
        # strictly-below sets; also detects cycles
        below: dict[str, set[str]] = {e: set() for e in self.elements}
        order = self._topo_order()
        for e in order:
            for p, q in self.covers:
                if q == e:
                    below[e].add(p)
                    below[e] |= below[p]
            if e in below[e]:
                raise PosetError("cover relation has a cycle")
        object.__setattr__(self, "_below", below)
        for p, q in self.covers:
            if any(p in below[z] and z in below[q] for z in self.elements):
                raise PosetError(f"redundant cover ({p},{q})")

    def _topo_order(self) -> tuple[str, ...]:
        indeg = {e: 0 for e in self.elements}
        for p, q in self.covers:
            indeg[q] += 1
        avail = sorted(e for e, d in indeg.items() if d == 0)
        out = []
        seen = set()
        while avail:
            e = avail.pop(0)
            out.append(e)
            seen.add(e)
            fresh = []
            for p, q in self.covers:
                if p == e:
                    indeg[q] -= 1
                    if indeg[q] == 0:
                        fresh.append(q)
            avail = sorted(set(avail) | set(fresh))
        if len(out) != len(self.elements):
            raise PosetError("cover relation has a cycle")
        return tuple(out)

    @cached_property
    def topo_order(self) -> tuple[str, ...]:
        return self._topo_order()

    def lt(self, p: str, q: str) -> bool:
        return p in self._below[q]

    def leq(self, p: str, q: str) -> bool:
        return p == q or self.lt(p, q)

    def comparable(self, p: str, q: str) -> bool:
        return p == q or self.lt(p, q) or self.lt(q, p)

    def strictly_below(self, q: str) -> frozenset:
        return frozenset(self._below[q])

    def up_covers(self, p: str) -> tuple[str, ...]:
        return tuple(sorted(q for a, q in self.covers if a == p))

    def down_covers(self, q: str) -> tuple[str, ...]:
        return tuple(sorted(p for p, b in self.covers if b == q))

    def maximal_elements(self) -> tuple[str, ...]:
        tops = {e for e in self.elements}
        for p, q in self.covers:
            tops.discard(p)
        return tuple(sorted(tops))

    def minimal_elements(self) -> tuple[str, ...]:
        bots = {e for e in self.elements}
        for p, q in self.covers:
            bots.discard(q)
        return tuple(sorted(bots))

    def linear_extensions(self, position_filter=None):
        """Yield order-reversing listings (maximal elements first).

        position_filter(pos, element) may veto a placement; pos is 1-based.
        """
        n = len(self.elements)
        placed: list[str] = []
        remaining = set(self.elements)

        def rec():
            if not remaining:
                yield tuple(placed)
                return
            for e in sorted(remaining):
                if any(self.lt(e, o) for o in remaining if o != e):
                    continue  # must place maximal elements first
                if position_filter and not position_filter(len(placed) + 1, e):
                    continue
                placed.append(e)
                remaining.discard(e)
                yield from rec()
                placed.pop()
                remaining.add(e)

        yield from rec()

    def count_linear_extensions(self) -> int:
        memo: dict[frozenset, int] = {}

        def count(remaining: frozenset) -> int:
            if not remaining:
                return 1
            if remaining in memo:
                return memo[remaining]
            total = 0
            for e in remaining:
                if not any(self.lt(e, o) for o in remaining if o != e):
                    total += count(remaining - {e})
            memo[remaining] = total
            return total

        return count(frozenset(self.elements))

    def with_relations(self, pairs) -> "Poset":
        """New poset with extra relations (p below q), transitively reduced."""
        rel = {(p, q) for q in self.elements for p in self._below[q]}
        rel |= {(str(p), str(q)) for p, q in pairs}
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        if a == d:
                            raise PosetError("added relations create a cycle")
                        rel.add((a, d))
                        changed = True
        covers = [
            (p, q)
            for (p, q) in rel
            if not any((p, z) in rel and (z, q) in rel for z in self.elements)
        ]
        return Poset.from_covers(self.elements, covers)

    def order_polynomial(self, m: int) -> int:
        """Number of order-preserving maps P -> {0, ..., m}."""
        if m < 0:
            raise ValueError("m must be >= 0")
        count = 0
        order = self.topo_order
        vals: dict[str, int] = {}

        def rec(idx: int):
            nonlocal count
            if idx == len(order):
                count += 1
                return
            e = order[idx]
            lo = max((vals[d] for d in self.down_covers(e)), default=0)
            for v in range(lo, m + 1):
                vals[e] = v
                rec(idx + 1)
            vals.pop(e, None)

        rec(0)
        return count

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers]}

    @staticmethod
    def from_json(data: dict) -> "Poset":
        return Poset.from_covers(data["elements"], [tuple(c) for c in data["covers"]])


def _parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


@dataclass(frozen=True)
class MarkedPoset:
    """A poset with an order-preserving marking on a subset containing all
    extremal elements."""

    poset: Poset
    marking_items: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def make(poset: Poset, marking: dict) -> "MarkedPoset":
        items = tuple(sorted((str(k), _parse_rational(v)) for k, v in marking.items()))
        return MarkedPoset(poset, items)

    @cached_property
    def marking(self) -> dict[str, Fraction]:
        return dict(self.marking_items)

    @property
    def marked(self) -> frozenset:
        return frozenset(k for k, _ in self.marking_items)

    def validate(self) -> None:
        lam = self.marking
        for a in lam:
            if a not in self.poset._below:
                raise PosetError(f"marked element {a} not in poset")
        for e in self.poset.maximal_elements() + self.poset.minimal_elements():
            if e not in lam:
                raise PosetError(f"extremal element {e} is unmarked")
        for p in lam:
            for q in lam:
                if self.poset.lt(p, q) and not lam[p] <= lam[q]:
                    raise PosetError(
                        f"marking not order-preserving: {p}<{q} but {lam[p]}>{lam[q]}"
                    )

    def sorted_marked(self) -> tuple[str, ...]:
        """Marked elements with values descending; ties: larger elements first."""
        lam = self.marking
        groups: dict[Fraction, list[str]] = {}
        for a in lam:
            groups.setdefault(lam[a], []).append(a)
        out: list[str] = []
        for value in sorted(groups, reverse=True):
            block = set(groups[value])
            while block:
                maxi = sorted(
                    e for e in block if not any(self.poset.lt(e, o) for o in block if o != e)
                )
                e = maxi[0]
                out.append(e)
                block.discard(e)
        return tuple(out)

    def with_marking(self, marking: dict) -> "MarkedPoset":
        return MarkedPoset.make(self.poset, marking)

    def to_json(self) -> dict:
        d = self.poset.to_json()
        d["marked"] = {k: str(v) for k, v in self.marking_items}
        return d

    @staticmethod
    def from_json(data: dict) -> "MarkedPoset":
        return MarkedPoset.make(Poset.from_json(data), data.get("marked", {}))


def validate_marked_poset(mp: MarkedPoset) -> bool:
    """True iff all marked-poset invariants hold; False (not raise) otherwise."""
    try:
        mp.validate()
        return True
    except PosetError:
        return False


def make_order_polytope_mp(p: Poset, bot=Fraction(0), top=Fraction(1)) -> MarkedPoset:
    """Hat-extended marked poset whose marked order polytope is the order
    polytope of p (dilated to [bot, top])."""
    if BOTTOM in p.elements or TOP in p.elements:
        raise PosetError(f"element ids {BOTTOM}/{TOP} are reserved")
    covers = list(p.covers)
    covers += [(BOTTOM, e) for e in p.minimal_elements()]
    covers += [(e, TOP) for e in p.maximal_elements()]
    if not p.elements:
        covers = [(BOTTOM, TOP)]
    hat = Poset.from_covers(p.elements + (BOTTOM, TOP), covers)
    return MarkedPoset.make(hat, {BOTTOM: bot, TOP: top})


# ---------------------------------------------------------------------------
# lattice points


def lattice_points(mp: MarkedPoset) -> list[dict[str, int]]:
    """All integer points of O(P,A)_lambda, by interval propagation."""
    mp.validate()
    lam = mp.marking
    for a, v in lam.items():
        if v.denominator != 1:
            raise PosetError(f"lattice_points needs integer markings, got {a}={v}")
    p = mp.poset
    order = p.topo_order
    upper: dict[str, int] = {}
    for e in reversed(order):
        cands = [int(lam[e])] if e in lam else []
        cands += [upper[q] for q in p.up_covers(e)]
        upper[e] = min(cands) if cands else 0
    points: list[dict[str, int]] = []
    vals: dict[str, int] = {}

    def rec(idx: int):
        if idx == len(order):
            points.append(dict(vals))
            return
        e = order[idx]
        lo = max((vals[d] for d in p.down_covers(e)), default=None)
        if e in lam:
            v = int(lam[e])
            if lo is not None and lo > v:
                return
            vals[e] = v
            rec(idx + 1)
            del vals[e]
            return
        lo = lo if lo is not None else _unmarked_floor(mp, e)
        for v in range(lo, upper[e] + 1):
            vals[e] = v
            rec(idx + 1)
            del vals[e]

    rec(0)
    return points


def _unmarked_floor(mp: MarkedPoset, e: str) -> int:
    # unmarked minimal elements cannot occur (A contains all extremals)
    lam = mp.marking
    lows = [int(lam[a]) for a in lam if mp.poset.leq(a, e)]
    if not lows:
        raise PosetError(f"element {e} has no marked element below it")
    return max(lows)


def point_feasible(mp: MarkedPoset, x: dict) -> bool:
    lam = mp.marking
    if set(x) != set(mp.poset.elements):
        return False
    for a, v in lam.items():
        if Fraction(x[a]) != v:
            return False
    for p, q in mp.poset.covers:
        if not x[p] <= x[q]:
            return False
    return True


# ---------------------------------------------------------------------------
# linear extensions with marked positions, volumes


def _marked_positions(mp: MarkedPoset, a) -> dict[int, str] | None:
    marked = mp.sorted_marked()
    k = len(marked)
    if len(a) != k - 1:
        raise ValueError(f"gap vector needs {k - 1} entries, got {len(a)}")
    pos = {}
    cur = 1
    for idx, e in enumerate(marked):
        pos[cur] = e
        if idx < k - 1:
            cur += 1 + a[idx]
    if max(pos) > len(mp.poset.elements):
        return None
    return pos


def count_marked_extensions(mp: MarkedPoset, a) -> int:
    """N_{P,A,lambda}(a): linear extensions placing the sorted marked
    elements at positions 1, 2+a_1, ..., k+a_1+...+a_{k-1}."""
    pos = _marked_positions(mp, a)
    if pos is None:
        return 0
    n = len(mp.poset.elements)
    if sum(a) != n - len(mp.sorted_marked()):
        return 0
    marked = set(mp.sorted_marked())

    def flt(position: int, e: str) -> bool:
        want = pos.get(position)
        if want is not None:
            return e == want
        return e not in marked

    return sum(1 for _ in mp.poset.linear_extensions(position_filter=flt))


def extension_gap_counts(mp: MarkedPoset) -> dict[tuple[int, ...], int]:
    """Bucket all linear extensions with the marked elements in sorted
    relative order by their gap vector a."""
    marked = mp.sorted_marked()
    rank = {e: i for i, e in enumerate(marked)}
    buckets: dict[tuple[int, ...], int] = {}
    for ext in mp.poset.linear_extensions():
        seen = [e for e in ext if e in rank]
        if [rank[e] for e in seen] != list(range(len(marked))):
            continue
        positions = [i + 1 for i, e in enumerate(ext) if e in rank]
        gaps = tuple(
            positions[t + 1] - positions[t] - 1 for t in range(len(marked) - 1)
        )
        buckets[gaps] = buckets.get(gaps, 0) + 1
    return buckets


def marked_volume(mp: MarkedPoset) -> Fraction:
    """Volume of the projected marked order polytope, via the sum of
    simplex-product volumes over position-constrained extension counts."""
    mp.validate()
    lam = mp.marking
    marked = mp.sorted_marked()
    values = [lam[e] for e in marked]
    vol = Fraction(0)
    for gaps, count in extension_gap_counts(mp).items():
        term = Fraction(count)
        for t, g in enumerate(gaps):
            diff = values[t] - values[t + 1]
            if diff == 0 and g > 0:
                term = Fraction(0)
                break
            term *= diff**g
            term /= math.factorial(g)
        vol += term
    return vol


def normalized_volume(mp: MarkedPoset) -> Fraction:
    """dim! times marked_volume, dim = number of unmarked elements."""
    dim = len(mp.poset.elements) - len(mp.marked)
    return marked_volume(mp) * math.factorial(dim)


# ---------------------------------------------------------------------------
# vertices


def point_partition(mp: MarkedPoset, x: dict) -> list[frozenset]:
    """Blocks of the transitive closure of 'equal value and comparable'."""
    parent = {e: e for e in mp.poset.elements}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for p, q in mp.poset.covers:
        if Fraction(x[p]) == Fraction(x[q]):
            parent[find(p)] = find(q)
    blocks: dict[str, set] = {}
    for e in mp.poset.elements:
        blocks.setdefault(find(e), set()).add(e)
    return [frozenset(b) for b in blocks.values()]


def is_vertex(mp: MarkedPoset, x: dict) -> bool:
    """Vertex criterion: every block of the point partition is marked."""
    if not point_feasible(mp, x):
        raise PosetError("point is not in the marked order polytope")
    return all(b & mp.marked for b in point_partition(mp, x))


def enumerate_vertices(mp: MarkedPoset) -> list[dict]:
    """All vertices: candidates give each unmarked element a marking value."""
    mp.validate()
    lam = mp.marking
    values = sorted(set(lam.values()))
    unmarked = [e for e in mp.poset.elements if e not in lam]
    verts = []
    for combo in product(values, repeat=len(unmarked)):
        x = {e: lam[e] for e in lam}
        x.update(dict(zip(unmarked, combo)))
        if point_feasible(mp, x) and is_vertex(mp, x):
            verts.append(x)
    return verts


def check_minkowski(mp: MarkedPoset, lam: dict, mu: dict, trials: int = 100, seed: int = 0) -> bool:
    """Support-function additivity of O_{lam+mu} vs O_lam + O_mu on seeded
    random rational objectives."""
    mp_l = mp.with_marking(lam)
    mp_m = mp.with_marking(mu)
    both = {a: _parse_rational(lam[a]) + _parse_rational(mu[a]) for a in lam}
    mp_b = mp.with_marking(both)
    for m in (mp_l, mp_m, mp_b):
        m.validate()
    vl, vm, vb = (enumerate_vertices(m) for m in (mp_l, mp_m, mp_b))
    rng = random.Random(seed)
    els = mp.poset.elements

    def support(vertices, c):
        return max(sum(c[e] * Fraction(v[e]) for e in els) for v in vertices)

    for _ in range(trials):
        c = {e: Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for e in els}
        if support(vb, c) != support(vl, c) + support(vm, c):
            return False
    return True


def unit_markings(mp: MarkedPoset) -> list[dict]:
    """The 0/1 markings omega_i: 1 on the i largest marked elements."""
    marked = mp.sorted_marked()
    return [
        {e: Fraction(1) if idx < i else Fraction(0) for idx, e in enumerate(marked)}
        for i in range(1, len(marked) + 1)
    ]


def check_log_concavity(mp: MarkedPoset) -> list[tuple[tuple[int, ...], int]]:
    """Adjacent-trade log-concavity of the extension counts.

    For every feasible gap vector a and index j with a_{j-1} >= 1 and
    a_j >= 1, checks N(a)^2 >= N(a + e_{j-1} - e_j) * N(a - e_{j-1} + e_j).
    Returns the violating (a, j) pairs (expected none).
    """
    mp.validate()
    k = len(mp.sorted_marked())
    dim = len(mp.poset.elements) - k
    if k < 3:
        return []
    buckets = extension_gap_counts(mp)

    def N(a):
        return buckets.get(tuple(a), 0)

    bad = []
    for a in enumerate_compositions(dim, k - 1):
        for j in range(1, k - 1):
            if a[j - 1] < 1 or a[j] < 1:
                continue
            up = list(a)
            up[j - 1] += 1
            up[j] -= 1
            dn = list(a)
            dn[j - 1] -= 1
            dn[j] += 1
            if N(a) ** 2 < N(up) * N(dn):
                bad.append((a, j))
    return bad


def order_polynomial_check(p: Poset, m: int) -> bool:
    """Count lattice points of the m-dilated order polytope two ways."""
    mp = make_order_polytope_mp(p, Fraction(0), Fraction(m))
    return len(lattice_points(mp)) == p.order_polynomial(m)

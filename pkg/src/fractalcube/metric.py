"""Exact minimum distance and certified Hausdorff brackets between voxel sets.

All internal arithmetic is done in *leaf units*, where a cell of the finest
mesh is the unit cube ``[i, i+1]^3``; results are scaled by the cell side.

The minimum distance between two unions of grid cubes is an integer sum of
squared per-axis gaps, computed exactly with a dual-tree search over the
prefix pyramids of both sets.

The Hausdorff distance is bracketed by branch and bound over the prefix
pyramid of one set, continuing with octree subdivision below the leaf mesh.
For a box ``C`` with center ``c`` and nearest cube ``Q`` of the other set,

    sup_{p in C} d(p, B) <= min(d(c, B) + radius(C), sup_{p in C} d(p, Q))

and any point of the first set gives a lower bound. Boxes whose upper bound
cannot beat the running lower bound by more than ``tol`` are retired.
"""
from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .voxel import VoxelSet, check_word, iterate

SQRT3_2 = math.sqrt(3) / 2
_CHUNK = 1 << 15
_DEFAULT_NODE_BUDGET = 20_000_000
_COPIES = 4096
_PAIR_BATCH = 1 << 20


class ToleranceNotReached(RuntimeError):
    pass


class _Pyramid:
    """Prefix cells of a voxel set at every level, with CSR child lists."""

    def __init__(self, v: VoxelSet):
        if len(v) == 0:
            raise ValueError("empty voxel set")
        k, n = v.depth, v.base
        self.depth = k
        self.codes = [None] * (k + 1)
        self.size = [n ** (k - j) for j in range(k + 1)]
        self.ptr = [None] * k
        self.children = [None] * k
        self.rep = [None] * (k + 1)
        self.codes[k] = v.coords
        self.rep[k] = v.coords
        for j in range(k - 1, -1, -1):
            up = self.codes[j + 1] // n
            m = self.size[0] // self.size[j] if j else 1
            keys = (up[:, 0] * m + up[:, 1]) * m + up[:, 2]
            uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
            inv = inv.reshape(-1)
            self.codes[j] = up[first]
            order = np.argsort(inv, kind="stable")
            counts = np.bincount(inv, minlength=len(uniq))
            ptr = np.zeros(len(uniq) + 1, np.int64)
            np.cumsum(counts, out=ptr[1:])
            self.children[j] = order
            self.ptr[j] = ptr
            self.rep[j] = self.rep[j + 1][order[ptr[:-1]]]
        self.table = [self._padded(j) for j in range(k)]
        self.leaves = v.coords.astype(float)
        # uniform[j]: every node at level j has the same subtree up to
        # translation (true at all levels for product iterates)
        self.uniform = [False] * k + [True]
        for j in range(k - 1, -1, -1):
            self.uniform[j] = self.uniform[j + 1] and self._same_children(j, n)

    def _same_children(self, j: int, n: int) -> bool:
        counts = np.diff(self.ptr[j])
        if (counts != counts[0]).any():
            return False
        rel = self.codes[j + 1][self.children[j]].reshape(len(counts), counts[0], 3)
        rel = rel - n * self.codes[j][:, None, :]
        return bool((rel == rel[:1]).all())

    def _padded(self, j: int) -> np.ndarray:
        ptr = self.ptr[j]
        counts = np.diff(ptr)
        width = int(counts.max())
        t = np.full((len(counts), width), -1, np.int64)
        col = np.arange(ptr[-1]) - np.repeat(ptr[:-1], counts)
        t[np.repeat(np.arange(len(counts)), counts), col] = self.children[j]
        return t

    def expand(self, j: int, nodes: np.ndarray):
        """Children of ``nodes`` at level ``j`` and the per-node child counts."""
        ptr = self.ptr[j]
        starts = ptr[nodes]
        counts = ptr[nodes + 1] - starts
        total = int(counts.sum())
        base = np.repeat(starts - (np.cumsum(counts) - counts), counts)
        return self.children[j][base + np.arange(total)], counts


def _box_dist2(p: np.ndarray, lo: np.ndarray, size) -> np.ndarray:
    g = np.maximum(np.maximum(lo - p, p - (lo + size)), 0.0)
    return np.einsum("ij,ij->i", g, g)


def _nearest(pyr: _Pyramid, points: np.ndarray):
    """Exact squared distance from each point to the union of leaf cubes, and the nearest leaf."""
    out_d2 = np.empty(len(points))
    out_q = np.empty(len(points), np.int64)
    for s in range(0, len(points), _CHUNK):
        p = points[s : s + _CHUNK]
        d2, q = _nearest_chunk(pyr, p)
        out_d2[s : s + _CHUNK] = d2
        out_q[s : s + _CHUNK] = q
    return out_d2, out_q


def _group_argmin(groups: np.ndarray, values: np.ndarray, tiebreak=None) -> np.ndarray:
    """Index of the smallest value within each run of equal, sorted group ids."""
    keys = (values, groups) if tiebreak is None else (tiebreak, values, groups)
    order = np.lexsort(keys)
    g = groups[order]
    first = np.ones(len(g), bool)
    first[1:] = g[1:] != g[:-1]
    return order[first]


def _greedy_seed(pyr: _Pyramid, p: np.ndarray):
    """Descend to a leaf by always entering the closest child box; returns (leaf, squared distance).

    Ties between boxes containing the point go to the nearer box center.
    """
    node = np.zeros(len(p), np.int64)
    for j in range(pyr.depth):
        child = pyr.table[j][node]
        valid = child >= 0
        s = pyr.size[j + 1]
        lo = pyr.codes[j + 1][np.where(valid, child, 0)] * s
        g = np.maximum(np.maximum(lo - p[:, None, :], p[:, None, :] - (lo + s)), 0.0)
        off = p[:, None, :] - (lo + s / 2)
        key = np.einsum("ijk,ijk->ij", g, g) * (4 * s * s + 1) + np.einsum("ijk,ijk->ij", off, off)
        key[~valid] = np.inf
        node = child[np.arange(len(p)), key.argmin(axis=1)]
    return node, _box_dist2(p, pyr.leaves[node], 1.0)


def _nearest_chunk(pyr: _Pyramid, p: np.ndarray):
    k = pyr.depth
    seed, ub = _greedy_seed(pyr, p)
    pt = np.arange(len(p))
    node = np.zeros(len(p), np.int64)
    for j in range(k + 1):
        lo = pyr.codes[j][node] * pyr.size[j]
        d2 = _box_dist2(p[pt], lo.astype(float), float(pyr.size[j]))
        # the seed already attains ub, so only strictly closer boxes matter
        keep = d2 < ub[pt]
        pt, node, d2 = pt[keep], node[keep], d2[keep]
        if j == k or not len(pt):
            break
        node, counts = pyr.expand(j, node)
        pt = np.repeat(pt, counts)
    best_d2 = ub.copy()
    best_q = seed.copy()
    if not len(pt):
        return best_d2, best_q
    sel = _group_argmin(pt, d2)
    best_d2[pt[sel]] = d2[sel]
    best_q[pt[sel]] = node[sel]
    return best_d2, best_q


def _common_mesh(a: VoxelSet, b: VoxelSet, budget=None) -> tuple[VoxelSet, VoxelSet]:
    if a.base != b.base or a.scale != b.scale:
        raise ValueError("voxel sets must share base and bounding cube")
    if len(a) == 0 or len(b) == 0:
        raise ValueError("distance to an empty set is undefined")
    k = max(a.depth, b.depth)
    return a.refine(k, budget), b.refine(k, budget)


def min_distance_sq(a: VoxelSet, b: VoxelSet) -> Fraction:
    """Exact squared minimum distance between the closed cube unions."""
    a, b = _common_mesh(a, b)
    g2 = _min_gap2(_Pyramid(a), _Pyramid(b))
    return Fraction(a.scale) ** 2 * Fraction(g2, a.grid_size**2)


def min_distance(a: VoxelSet, b: VoxelSet) -> float:
    """Euclidean distance between the closest points of ``a`` and ``b``; 0 iff they touch."""
    return math.sqrt(min_distance_sq(a, b))


def _pair_children(pa: _Pyramid, pb: _Pyramid, j: int, ia, ib):
    """All child pairs of the node pairs ``(ia, ib)`` at level ``j``."""
    ca, na = pa.expand(j, ia)
    cb, nb = pb.expand(j, ib)
    pairs = na * nb
    pid = np.repeat(np.arange(len(ia)), pairs)
    within = np.arange(int(pairs.sum())) - np.repeat(np.cumsum(pairs) - pairs, pairs)
    offa = np.cumsum(na) - na
    offb = np.cumsum(nb) - nb
    return ca[offa[pid] + within // nb[pid]], cb[offb[pid] + within % nb[pid]]


def _pair_gap2(pa: _Pyramid, pb: _Pyramid, j: int, ia, ib) -> np.ndarray:
    g = np.maximum(np.abs(pa.codes[j][ia] - pb.codes[j][ib]) - 1, 0) * pa.size[j]
    return (g * g).sum(axis=1)


def _min_gap2(pa: _Pyramid, pb: _Pyramid, beam: int = 32) -> int:
    """Minimum squared gap between leaf cubes, in leaf units (an integer).

    A narrow beam descent first finds a good achieved gap; the full dual-tree
    search then only keeps box pairs that could beat it.
    """
    k = pa.depth
    root = np.zeros(1, np.int64)
    ia, ib = root, root
    for j in range(k):
        ia, ib = _pair_children(pa, pb, j, ia, ib)
        lower = _pair_gap2(pa, pb, j + 1, ia, ib)
        if len(lower) > beam:
            sel = np.argpartition(lower, beam)[:beam]
            ia, ib = ia[sel], ib[sel]
    ub = int(_pair_gap2(pa, pb, k, ia, ib).min())

    # depth-first over bounded batches of box pairs keeps memory flat; each
    # step refines only the coarser box of a pair, which keeps fan-out small
    stack = [(0, 0, root, root)]
    while stack:
        ja, jb, ia, ib = stack.pop()
        lower = _box_gap2(pa, ja, ia, pb, jb, ib)
        if ja == k and jb == k:
            ub = min(ub, int(lower.min()))
            continue
        rg = np.maximum(np.abs(pa.rep[ja][ia] - pb.rep[jb][ib]) - 1, 0)
        ub = min(ub, int((rg * rg).sum(axis=1).min()))
        # ub is attained by real leaves, so ties cannot improve it
        keep = lower < ub
        ia, ib, lower = ia[keep], ib[keep], lower[keep]
        if not len(ia):
            continue
        if pa.uniform[ja] and pb.uniform[jb] and len(ia) > 1:
            # identical subtrees: the pair's gap depends only on the corner offset
            off = pb.codes[jb][ib] * pb.size[jb] - pa.codes[ja][ia] * pa.size[ja]
            _, first = np.unique(off, axis=0, return_index=True)
            ia, ib, lower = ia[first], ib[first], lower[first]
        side_a = ja <= jb and ja < k
        pyr, j, nodes = (pa, ja, ia) if side_a else (pb, jb, ib)
        fan = np.diff(pyr.ptr[j])[nodes]
        order = np.argsort(-lower, kind="stable")
        ia, ib, fan = ia[order], ib[order], fan[order]
        bounds = np.searchsorted(np.cumsum(fan), np.arange(_PAIR_BATCH, int(fan.sum()), _PAIR_BATCH))
        for part_a, part_b in zip(np.split(ia, bounds), np.split(ib, bounds)):
            if not len(part_a):
                continue
            if side_a:
                ca, cnt = pa.expand(ja, part_a)
                stack.append((ja + 1, jb, ca, np.repeat(part_b, cnt)))
            else:
                cb, cnt = pb.expand(jb, part_b)
                stack.append((ja, jb + 1, np.repeat(part_a, cnt), cb))
    return ub


def _box_gap2(pa: _Pyramid, ja: int, ia, pb: _Pyramid, jb: int, ib) -> np.ndarray:
    """Squared gap between boxes of possibly different levels, in leaf units."""
    sa, sb = pa.size[ja], pb.size[jb]
    lo_a = pa.codes[ja][ia] * sa
    lo_b = pb.codes[jb][ib] * sb
    g = np.maximum(np.maximum(lo_b - (lo_a + sa), lo_a - (lo_b + sb)), 0)
    return (g * g).sum(axis=1)


def _supdist_to_cube(lo: np.ndarray, size: float, q: np.ndarray):
    """sup over box [lo, lo+size] of the distance to unit cube [q, q+1], and the maximising corner."""
    at_lo = np.maximum(np.maximum(q - lo, lo - (q + 1)), 0.0)
    hi = lo + size
    at_hi = np.maximum(np.maximum(q - hi, hi - (q + 1)), 0.0)
    g = np.maximum(at_lo, at_hi)
    corner = np.where(at_lo >= at_hi, lo, hi)
    return np.sqrt(np.einsum("ij,ij->i", g, g)), corner


class _Bound:
    """Running lower bound shared by the searches of one query, with a witness point."""

    def __init__(self, value: float = 0.0):
        self.value = value
        self.witness = None  # (side, point in leaf units)

    def offer(self, values: np.ndarray, points: np.ndarray, side: str) -> None:
        i = int(values.argmax())
        if values[i] > self.value:
            self.value = float(values[i])
            self.witness = (side, points[i].copy())


def _directed(pa: _Pyramid, pb: _Pyramid, tol: float, bound: _Bound, side: str = "a",
              node_budget: int = _DEFAULT_NODE_BUDGET):
    """Generator bracketing ``sup_{p in A} d(p, B)`` in leaf units.

    Yields after every batch so that two searches can share ``bound``; its
    return value is ``(upper bound, boxes evaluated)``. Boxes are filtered
    against the bound only right before they are split, so a bound raised by
    the other search in the meantime still prunes them.
    """
    k = pa.depth
    parked = 0.0
    evaluated = 0

    def evaluate(lo, size, rep_lo):
        nonlocal evaluated
        evaluated += len(lo)
        if evaluated > node_budget:
            raise ToleranceNotReached(f"more than {node_budget} boxes evaluated")
        c = lo + size / 2
        d2, q = _nearest(pb, c)
        d = np.sqrt(d2)
        sup_q, corner = _supdist_to_cube(lo, size, pb.leaves[q])
        upper = np.minimum(d + SQRT3_2 * size, sup_q)
        if rep_lo is None:
            # the box is contained in A: its center and corners are points of A
            probe = corner
            bound.offer(d, c, side)
        else:
            # same-orientation corner of a leaf of A inside the box
            probe = rep_lo + (corner > lo)
        pd2, _ = _nearest(pb, probe)
        bound.offer(np.sqrt(pd2), probe, side)
        return upper

    def select(upper):
        nonlocal parked
        keep = upper > bound.value + tol
        if (~keep).any():
            parked = max(parked, float(upper[~keep].max()))
        return keep

    nodes = np.zeros(1, np.int64)
    leaf_lo = np.zeros((0, 3))
    for j in range(k + 1):
        s = pa.size[j]
        lo = (pa.codes[j][nodes] * s).astype(float)
        rep = None if j == k else pa.rep[j][nodes].astype(float)
        upper = evaluate(lo, float(s), rep)
        yield
        keep = select(upper)
        if j == k:
            leaf_lo = lo[keep]
        else:
            nodes, _ = pa.expand(j, nodes[keep])
        if not len(nodes):
            break
    size = 1.0
    corners = np.array([[i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(8)], float)
    while len(leaf_lo):
        size /= 2
        lo = (leaf_lo[:, None, :] + corners[None, :, :] * size).reshape(-1, 3)
        upper = evaluate(lo, size, None)
        yield
        leaf_lo = lo[select(upper)]
    return parked, evaluated


def _lockstep(*searches):
    """Advance generator searches round-robin; return their final values."""
    results = [None] * len(searches)
    live = list(range(len(searches)))
    while live:
        for i in list(live):
            try:
                next(searches[i])
            except StopIteration as stop:
                results[i] = stop.value
                live.remove(i)
    return results


@dataclass(frozen=True)
class DistanceReport:
    d_min: float
    d_hausdorff_lo: float
    d_hausdorff_hi: float
    boxes_evaluated: int = 0

    @property
    def width(self) -> float:
        return self.d_hausdorff_hi - self.d_hausdorff_lo

    def contains(self, value: float) -> bool:
        return self.d_hausdorff_lo <= value <= self.d_hausdorff_hi


def _outward(lo: float, hi: float) -> tuple[float, float]:
    return lo * (1 - 1e-12), hi * (1 + 1e-12) + 1e-300


class Measurer:
    """Caches pyramids so repeated distance queries on the same sets are cheap."""

    def __init__(self, node_budget: int = _DEFAULT_NODE_BUDGET, cache_size: int = 6):
        self.last_witness = None
        self.cache_size = cache_size
        self._reports: dict = {}
        self._witness: dict = {}
        self.node_budget = node_budget
        self._pyr: OrderedDict = OrderedDict()

    def pyramid(self, v: VoxelSet) -> _Pyramid:
        key = (v.base, v.depth, v.scale, hash(v))
        hit = self._pyr.get(key)
        if hit is not None and hit[0] == v:
            self._pyr.move_to_end(key)
            return hit[1]
        pyr = _Pyramid(v)
        self._pyr[key] = (v, pyr)
        while len(self._pyr) > self.cache_size:
            self._pyr.popitem(last=False)
        return pyr

    def min_distance_sq(self, a: VoxelSet, b: VoxelSet) -> Fraction:
        a, b = _common_mesh(a, b)
        g2 = _min_gap2(self.pyramid(a), self.pyramid(b))
        return Fraction(a.scale) ** 2 * Fraction(g2, a.grid_size**2)

    def directed_hausdorff(self, a: VoxelSet, b: VoxelSet, tol: float) -> tuple[float, float]:
        a, b = _common_mesh(a, b)
        h = a.cell_side
        bound = _Bound()
        ((parked, _),) = _lockstep(_directed(self.pyramid(a), self.pyramid(b), tol / h, bound,
                                             node_budget=self.node_budget))
        return _outward(bound.value * h, max(bound.value, parked) * h)

    def hausdorff(self, a: VoxelSet, b: VoxelSet, tol: float, lower: float = 0.0,
                  with_min: bool = True) -> DistanceReport:
        """Bracket ``d_H(a, b)``; ``lower`` may pass in a known lower bound (same units as the result)."""
        if not tol > 0:
            raise ValueError("tolerance must be positive")
        a, b = _common_mesh(a, b)
        h = a.cell_side
        pa, pb = self.pyramid(a), self.pyramid(b)
        t = tol / h
        # both directions share one lower bound on max(h(A,B), h(B,A))
        bound = _Bound(lower / h)
        (p1, n1), (p2, n2) = _lockstep(
            _directed(pa, pb, t, bound, "a", self.node_budget),
            _directed(pb, pa, t, bound, "b", self.node_budget),
        )
        lo, hi = _outward(bound.value * h, max(bound.value, p1, p2) * h)
        d_min = math.sqrt(_min_gap2(pa, pb)) * h if with_min else math.nan
        self.last_witness = None if bound.witness is None else (bound.witness[0], bound.witness[1] * h)
        return DistanceReport(d_min, lo, hi, n1 + n2)

    def iterate_hausdorff(self, wa: str, wb: str, tol: float, digit_sets=None,
                          shortcut: bool = True, with_min: bool = True) -> DistanceReport:
        """Bracket ``d_H(F_wa, F_wb)`` for two words of equal length.

        With a common prefix ``sigma`` of length ``s``, ``F_w = T_sigma(F_w')``
        and ``T_sigma`` is a union of similarities of ratio ``5^-s``, so
        ``d_H <= d_H(F_wa', F_wb') / 5^s``. The witness point of the shorter
        problem, pushed through copies of ``T_sigma``, gives an exact lower
        bound; if the bracket is still wider than ``tol`` the direct search
        runs with that lower bound. ``with_min=False`` skips the exact minimum
        distance and reports ``d_min`` as NaN.
        """
        check_word(wa)
        check_word(wb)
        if len(wa) != len(wb):
            raise ValueError("words must have equal length")
        key = (wa, wb, tol, shortcut, with_min, id(digit_sets) if digit_sets is not None else None)
        if key in self._reports:
            return self._reports[key]
        a, b = iterate(wa, digit_sets), iterate(wb, digit_sets)
        s = common_prefix(wa, wb)
        if not shortcut or s == 0 or s == len(wa):
            rep = self.hausdorff(a, b, tol, with_min=with_min)
            self._reports[key] = rep
            self._witness[key[:2]] = self.last_witness
            return rep
        n = a.base
        sub = self.iterate_hausdorff(wa[s:], wb[s:], tol * n**s, digit_sets, with_min=False)
        hi = sub.d_hausdorff_hi / n**s
        lo, witness = 0.0, None
        sub_witness = self._witness.get((wa[s:], wb[s:]))
        if sub_witness is not None:
            side, point = sub_witness
            cells = iterate(wa[:s], digit_sets).coords
            if len(cells) > _COPIES:
                cells = cells[np.linspace(0, len(cells) - 1, _COPIES).astype(np.int64)]
            # a point x of F_w' lands at (cell + x) / n^s in each copy
            pts = (cells + point) / n**s
            target = b if side == "a" else a
            d2, _ = _nearest(self.pyramid(target), pts / target.cell_side)
            best = int(d2.argmax())
            lo = float(np.sqrt(d2[best])) * target.cell_side
            witness = (side, pts[best])
        lo, hi = _outward(lo, hi)
        d_min = math.nan
        if with_min:
            d_min = math.sqrt(_min_gap2(self.pyramid(a), self.pyramid(b))) * a.cell_side
        if hi - lo <= tol:
            rep = DistanceReport(d_min, lo, hi, sub.boxes_evaluated)
        else:
            direct = self.hausdorff(a, b, tol, lower=lo, with_min=False)
            if direct.d_hausdorff_lo > lo:
                witness = self.last_witness
            rep = DistanceReport(d_min, max(lo, direct.d_hausdorff_lo), min(hi, direct.d_hausdorff_hi),
                                 sub.boxes_evaluated + direct.boxes_evaluated)
        self._reports[key] = rep
        self._witness[key[:2]] = witness
        return rep


def hausdorff_distance(a: VoxelSet, b: VoxelSet, tol: float = 1e-4) -> DistanceReport:
    """Certified bracket ``[lo, hi]`` of the Hausdorff distance with ``hi - lo <= tol``."""
    return Measurer().hausdorff(a, b, tol)


def directed_hausdorff(a: VoxelSet, b: VoxelSet, tol: float = 1e-4) -> tuple[float, float]:
    return Measurer().directed_hausdorff(a, b, tol)


def point_distance(v: VoxelSet, points) -> np.ndarray:
    """Exact distance from arbitrary points (in the bounding cube's coordinates) to ``v``."""
    pts = np.asarray(points, float).reshape(-1, 3) / v.cell_side
    d2, _ = _nearest(_Pyramid(v), pts)
    return np.sqrt(d2) * v.cell_side


def common_prefix(a: str, b: str) -> int:
    """Length of the longest common prefix of two words."""
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


@dataclass(frozen=True)
class SandwichReport:
    words: tuple[str, str]
    s: int
    d_min: float
    d_min_sq: Fraction
    dH_lo: float
    dH_hi: float
    lower_bound: Fraction
    upper_sqrt5: float
    upper_sqrt2: float
    min_lower_ok: bool
    lower_ok: bool
    upper_sqrt5_ok: bool
    upper_sqrt2_ok: bool

    @property
    def passed(self) -> bool:
        """The lower bounds and the weakest printed upper bound all hold."""
        return self.min_lower_ok and self.lower_ok and self.upper_sqrt2_ok

    def as_dict(self) -> dict:
        return {
            "words": list(self.words),
            "s": self.s,
            "d_min": self.d_min,
            "dH_lo": self.dH_lo,
            "dH_hi": self.dH_hi,
            "bounds": {
                "lower": float(self.lower_bound),
                "upper_sqrt5": self.upper_sqrt5,
                "upper_sqrt2": self.upper_sqrt2,
                "min_lower_ok": self.min_lower_ok,
                "lower_ok": self.lower_ok,
                "upper_sqrt5_ok": self.upper_sqrt5_ok,
                "upper_sqrt2_ok": self.upper_sqrt2_ok,
            },
        }


def sandwich_bounds(s: int) -> tuple[Fraction, float, float]:
    """Lower bound ``5^-(s+1)`` and the two printed upper candidates.

    ``3*sqrt(5)*5^-(s+1)`` is the tight form; ``3*sqrt(2)*5^-s`` is the weakest
    one that appears alongside it.
    """
    lower = Fraction(1, 5 ** (s + 1))
    return lower, 3 * math.sqrt(5) / 5 ** (s + 1), 3 * math.sqrt(2) / 5**s


def verify_sandwich(wa: str, wb: str, tol: float = 1e-4, measurer: Measurer | None = None,
                    digit_sets=None) -> SandwichReport:
    """Measure ``d`` and ``d_H`` between two iterates and test them against the distance bounds."""
    check_word(wa)
    check_word(wb)
    if wa == wb:
        raise ValueError("the two words must differ")
    if len(wa) != len(wb):
        raise ValueError("the two words must have equal length")
    m = measurer or Measurer()
    a, b = iterate(wa, digit_sets), iterate(wb, digit_sets)
    s = common_prefix(wa, wb)
    rep = m.iterate_hausdorff(wa, wb, tol, digit_sets, with_min=False)
    dmin_sq = m.min_distance_sq(a, b)
    lower, up5, up2 = sandwich_bounds(s)
    return SandwichReport(
        words=(wa, wb),
        s=s,
        d_min=math.sqrt(dmin_sq),
        d_min_sq=dmin_sq,
        dH_lo=rep.d_hausdorff_lo,
        dH_hi=rep.d_hausdorff_hi,
        lower_bound=lower,
        upper_sqrt5=up5,
        upper_sqrt2=up2,
        min_lower_ok=dmin_sq >= lower**2,
        lower_ok=rep.d_hausdorff_lo >= float(lower),
        upper_sqrt5_ok=rep.d_hausdorff_hi <= up5,
        upper_sqrt2_ok=rep.d_hausdorff_hi <= up2,
    )

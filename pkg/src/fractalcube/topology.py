"""Face-adjacency connectivity of voxel sets, on the cube or on the torus.

Two cells are adjacent iff they share a 2-dimensional face. In torus mode the
grid indices wrap modulo ``N = base**depth``, which models the periodic set
``F + Z^3`` on ``R^3 / Z^3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .digitset import DigitSet
from .voxel import VoxelSet, as_grid_index, cell_budget, BudgetExceeded

MODES = ("plain", "torus")
AXES = "xyz"


class DisjointSet:
    """Union-find with path compression, union by rank and winding offsets.

    Each element carries the integer lattice shift (in periods of the torus)
    of its lifted copy relative to the lifted copy of its parent. Merging two
    elements that already share a root closes a cycle; a nonzero net shift
    around that cycle means the component reaches its own translate.
    """

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.shift = [(0, 0, 0)] * size
        self.cycles: dict[int, list[tuple[int, int, int]]] = {}

    def find(self, x: int) -> tuple[int, tuple[int, int, int]]:
        """Root of ``x`` and the shift of ``x`` relative to that root."""
        parent, shift = self.parent, self.shift
        path = []
        while parent[x] != x:
            path.append(x)
            x = parent[x]
        root = x
        # walk back from the node nearest the root, accumulating shifts
        acc = (0, 0, 0)
        for node in reversed(path):
            s = shift[node]
            acc = (acc[0] + s[0], acc[1] + s[1], acc[2] + s[2])
            shift[node] = acc
            parent[node] = root
        return root, (shift[path[0]] if path else (0, 0, 0))

    def union(self, a: int, b: int, s=(0, 0, 0)) -> bool:
        """Join ``a`` and ``b``, where lifted ``b`` sits ``s`` periods from lifted ``a``.

        Returns True if two components merged.
        """
        ra, wa = self.find(a)
        rb, wb = self.find(b)
        # shift of rb relative to ra implied by this edge
        d = (wa[0] + s[0] - wb[0], wa[1] + s[1] - wb[1], wa[2] + s[2] - wb[2])
        if ra == rb:
            if d != (0, 0, 0):
                self.cycles.setdefault(ra, []).append(d)
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
            d = (-d[0], -d[1], -d[2])
        self.parent[rb] = ra
        self.shift[rb] = d
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        moved = self.cycles.pop(rb, None)
        if moved:
            self.cycles.setdefault(ra, []).extend(moved)
        return True

    def roots(self) -> list[int]:
        return [self.find(i)[0] for i in range(len(self.parent))]

    def winding_vectors(self, root: int) -> list[tuple[int, int, int]]:
        return self.cycles.get(root, [])


@dataclass(frozen=True)
class ComponentLabeling:
    """Component id per cell, aligned with ``voxels.coords``.

    Ids are dense and assigned in order of each component's smallest cell key,
    so the labeling is canonical for a given partition.
    """

    voxels: VoxelSet
    labels: np.ndarray
    component_count: int
    mode: str
    sizes: tuple[int, ...] = field(default=())

    def label_of(self, cell) -> int:
        idx = as_grid_index(cell, self.voxels.depth, self.voxels.base)
        pos = self.voxels.index_of(idx)[0]
        if pos < 0:
            raise KeyError(f"cell {cell} is not in the labeled set")
        return int(self.labels[pos])

    def partition(self) -> set[frozenset[int]]:
        """Components as sets of linear cell keys; independent of label ids."""
        out: dict[int, set] = {}
        for key, lab in zip(self.voxels.keys.tolist(), self.labels.tolist()):
            out.setdefault(lab, set()).add(key)
        return {frozenset(s) for s in out.values()}


def face_edges(v: VoxelSet, torus: bool = False):
    """Face-adjacent cell pairs ``(i, j, axis, wrapped)`` with ``j = i + e_axis``.

    ``wrapped`` marks torus edges that step from index ``N-1`` to ``0``.
    """
    n = v.grid_size
    c, keys = v.coords, v.keys
    out_i, out_j, out_ax, out_w = [], [], [], []
    if not len(keys):
        z = np.zeros(0, np.int64)
        return z, z, z, np.zeros(0, bool)
    for ax in range(3):
        nb = c.copy()
        nb[:, ax] += 1
        wrapped = nb[:, ax] == n
        if torus:
            if n == 1:
                continue
            nb[wrapped, ax] = 0
            ok = np.ones(len(c), bool)
        else:
            ok = ~wrapped
        j = v.index_of(nb)
        hit = ok & (j >= 0)
        i = np.nonzero(hit)[0]
        out_i.append(i)
        out_j.append(j[hit])
        out_ax.append(np.full(len(i), ax))
        out_w.append(wrapped[hit])
    return (
        np.concatenate(out_i),
        np.concatenate(out_j),
        np.concatenate(out_ax),
        np.concatenate(out_w),
    )


def _canonical(raw: np.ndarray) -> tuple[np.ndarray, int, tuple[int, ...]]:
    # first occurrence in key order defines the id
    _, first, inv = np.unique(raw, return_index=True, return_inverse=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    labels = remap[inv.reshape(-1)]
    sizes = np.bincount(labels, minlength=len(order)) if len(labels) else np.zeros(0, int)
    return labels, len(order), tuple(int(s) for s in sizes)


def components(v: VoxelSet, mode: str = "plain", method: str = "graph") -> ComponentLabeling:
    """Label face-connected components of ``v``.

    ``method="graph"`` uses scipy's sparse connected components;
    ``method="unionfind"`` runs :class:`DisjointSet` edge by edge. Both give
    the same canonical labeling.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    i, j, _, _ = face_edges(v, torus=mode == "torus")
    m = len(v)
    if m == 0:
        return ComponentLabeling(v, np.zeros(0, np.int64), 0, mode, ())
    if method == "graph":
        g = coo_matrix((np.ones(len(i), np.int8), (i, j)), shape=(m, m))
        _, raw = connected_components(g, directed=False)
    elif method == "unionfind":
        ds = DisjointSet(m)
        for a, b in zip(i.tolist(), j.tolist()):
            ds.union(a, b)
        raw = np.array(ds.roots())
    else:
        raise ValueError(f"unknown method {method!r}")
    labels, count, sizes = _canonical(raw)
    return ComponentLabeling(v, labels, count, mode, sizes)


def complement(v: VoxelSet, budget: int | None = None) -> VoxelSet:
    """All cells of the depth-k grid that are not in ``v``."""
    n = v.grid_size
    total = n**3 - len(v)
    if n**3 > cell_budget(budget):
        raise BudgetExceeded(f"complement grid has {n ** 3} cells")
    mask = np.ones(n**3, bool)
    mask[v.keys] = False
    keys = np.nonzero(mask)[0]
    assert len(keys) == total
    return VoxelSet.from_keys(keys, v.depth, v.base, v.scale)


def complement_components(v: VoxelSet, mode: str = "plain", budget: int | None = None) -> ComponentLabeling:
    return components(complement(v, budget), mode)


def wraps_torus(labeling: ComponentLabeling, v: VoxelSet) -> np.ndarray:
    """Per component, whether it reaches its own periodic translate along x, y, z.

    Returns a boolean array of shape ``(component_count, 3)``.
    """
    if labeling.mode != "torus":
        raise ValueError("wrap detection needs a torus-mode labeling")
    if labeling.voxels != v:
        raise ValueError("labeling was computed for a different voxel set")
    flags, _ = _windings(labeling, v)
    return flags


def winding_rank(labeling: ComponentLabeling, v: VoxelSet) -> np.ndarray:
    """Rank of the lattice of net shifts per component (3 = periodic in all directions)."""
    if labeling.voxels != v:
        raise ValueError("labeling was computed for a different voxel set")
    _, ranks = _windings(labeling, v)
    return ranks


def _windings(labeling: ComponentLabeling, v: VoxelSet):
    i, j, ax, wrapped = face_edges(v, torus=True)
    ds = DisjointSet(len(v))
    unit = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    zero = (0, 0, 0)
    for a, b, x, w in zip(i.tolist(), j.tolist(), ax.tolist(), wrapped.tolist()):
        ds.union(a, b, unit[x] if w else zero)
    flags = np.zeros((labeling.component_count, 3), bool)
    ranks = np.zeros(labeling.component_count, np.int64)
    for root, vecs in ds.cycles.items():
        lab = labeling.labels[root]
        arr = np.array(vecs)
        flags[lab] |= (arr != 0).any(axis=0)
        ranks[lab] = np.linalg.matrix_rank(arr)
    return flags, ranks


@dataclass(frozen=True)
class FaceTrace:
    """Squares where cells of a voxel set meet one face of the bounding cube."""

    axis: int
    side: str
    depth: int
    squares: frozenset

    def __len__(self) -> int:
        return len(self.squares)


def face_trace(v: VoxelSet, axis, side: str) -> FaceTrace:
    ax = AXES.index(axis) if isinstance(axis, str) else int(axis)
    if side not in ("low", "high"):
        raise ValueError("side must be 'low' or 'high'")
    target = 0 if side == "low" else v.grid_size - 1
    on = v.coords[v.coords[:, ax] == target]
    rest = [a for a in range(3) if a != ax]
    squares = frozenset(map(tuple, on[:, rest].tolist()))
    return FaceTrace(ax, side, v.depth, squares)


def opposite_faces_congruent(v: VoxelSet) -> bool:
    """Low and high traces coincide after translating across the cube, on every axis."""
    return all(
        face_trace(v, ax, "low").squares == face_trace(v, ax, "high").squares for ax in range(3)
    )


def affine_dimension(v: VoxelSet) -> int:
    """Dimension of the affine span of the cell centers (3 = not in any plane)."""
    if len(v) == 0:
        return -1
    c = v.coords - v.coords[0]
    return int(np.linalg.matrix_rank(c.astype(float))) if len(v) > 1 else 0


@dataclass(frozen=True)
class DendriteReport:
    one_contact_per_face: bool
    avoids_edges: bool
    intersection_graph_is_tree: bool
    max_graph_degree: int
    face_contacts: dict = field(default_factory=dict)
    edge_count: int = 0

    @property
    def all_conditions(self) -> bool:
        return self.one_contact_per_face and self.avoids_edges and self.intersection_graph_is_tree


def dendrite_conditions(d: DigitSet) -> DendriteReport:
    """Digit-level sufficient conditions for the fractal cube of ``d`` to be a dendrite.

    (a) every face of the big cube meets exactly one digit cube; (b) no digit
    cube meets an edge of the big cube; (c) the face-adjacency graph of the
    digit cubes is a tree.
    """
    arr = d.array
    top = d.base - 1
    contacts = {}
    for ax in range(3):
        contacts[f"{AXES[ax]}-low"] = int((arr[:, ax] == 0).sum())
        contacts[f"{AXES[ax]}-high"] = int((arr[:, ax] == top).sum())
    one_contact = all(c == 1 for c in contacts.values())
    extreme = ((arr == 0) | (arr == top)).sum(axis=1)
    avoids_edges = bool((extreme < 2).all())

    diff = np.abs(arr[:, None, :] - arr[None, :, :])
    adj = (diff.sum(axis=2) == 1)
    degree = adj.sum(axis=1)
    edges = int(adj.sum()) // 2
    # tens of nodes: a union-find pass beats building a sparse matrix
    ds = DisjointSet(len(d))
    merges = sum(ds.union(a, b) for a, b in np.argwhere(np.triu(adj)).tolist())
    ncomp = len(d) - merges
    is_tree = ncomp == 1 and edges == len(d) - 1
    return DendriteReport(one_contact, avoids_edges, bool(is_tree), int(degree.max()), contacts, edges)

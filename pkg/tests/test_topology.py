from collections import deque

import numpy as np
import pytest
from scipy import ndimage

from fractalcube.digitset import DigitSet, make_cross, make_frame
from fractalcube.topology import (
    DisjointSet,
    affine_dimension,
    complement,
    complement_components,
    components,
    dendrite_conditions,
    face_trace,
    opposite_faces_congruent,
    winding_rank,
    wraps_torus,
)
from fractalcube.voxel import VoxelSet, full_iterate, iterate

SIX = ndimage.generate_binary_structure(3, 1)


def bfs_partition(v, torus):
    """Flood fill over face neighbours, with or without wrap-around."""
    n = v.grid_size
    cells = set(map(tuple, v.coords.tolist()))
    seen, parts = set(), []
    for start in sorted(cells):
        if start in seen:
            continue
        part, queue = set(), deque([start])
        seen.add(start)
        while queue:
            c = queue.popleft()
            part.add(c)
            for ax in range(3):
                for step in (-1, 1):
                    nb = list(c)
                    nb[ax] += step
                    if torus:
                        nb[ax] %= n
                    elif not 0 <= nb[ax] < n:
                        continue
                    nb = tuple(nb)
                    if nb in cells and nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
        parts.append(part)
    return parts


def key_partition(v, parts):
    n = v.grid_size
    return {frozenset((x * n + y) * n + z for x, y, z in p) for p in parts}


def tiled_wraps(v):
    """Per torus component, whether a lift in a 3x3x3 tiling meets its own x/y/z translate."""
    n = v.grid_size
    shifts = np.array([[i, j, k] for i in range(3) for j in range(3) for k in range(3)])
    big = np.zeros((3 * n,) * 3, bool)
    for s in shifts:
        c = v.coords + s * n
        big[c[:, 0], c[:, 1], c[:, 2]] = True
    lab, _ = ndimage.label(big, SIX)
    torus = components(v, "torus")
    out = np.zeros((torus.component_count, 3), bool)
    centre = v.coords + n
    lc = lab[centre[:, 0], centre[:, 1], centre[:, 2]]
    for ax in range(3):
        shifted = centre.copy()
        shifted[:, ax] += n
        ls = lab[shifted[:, 0], shifted[:, 1], shifted[:, 2]]
        same = lc == ls
        for t in np.unique(torus.labels[same]):
            out[t, ax] = True
    return out


@pytest.mark.parametrize("word", ["0", "1", "01", "10", "11", "001"])
def test_plain_matches_ndimage(word):
    v = iterate(word)
    lab = components(v)
    ref, count = ndimage.label(v.dense(), SIX)
    assert lab.component_count == count == 1
    assert lab.partition() == key_partition(v, bfs_partition(v, False))


@pytest.mark.parametrize("method", ["graph", "unionfind"])
def test_methods_agree_on_disconnected_set(method):
    # two separate rods plus a lone cell
    v = VoxelSet([(0, 0, 0), (0, 0, 1), (0, 0, 2), (3, 3, 3), (3, 3, 4), (1, 4, 0)], 1)
    lab = components(v, method=method)
    assert lab.component_count == 3
    assert lab.sizes == (3, 1, 2)
    assert list(lab.labels) == [0, 0, 0, 1, 2, 2]
    assert lab.partition() == key_partition(v, bfs_partition(v, False))


def test_torus_joins_across_boundary():
    v = VoxelSet([(0, 2, 2), (4, 2, 2)], 1)
    assert components(v).component_count == 2
    assert components(v, "torus").component_count == 1
    assert components(v, "torus", method="unionfind").component_count == 1


@pytest.mark.parametrize("k", [1, 2])
def test_full_iterate_torus(k):
    v = full_iterate(k)
    lab = components(v, "torus")
    assert lab.component_count == 2**k
    assert lab.partition() == key_partition(v, bfs_partition(v, True))
    flags = wraps_torus(lab, v)
    assert flags.all()
    assert (flags == tiled_wraps(v)).all()
    assert (winding_rank(lab, v) == 3).all()
    assert complement_components(v, "torus").component_count == 1


def test_wraps_oracle_on_non_wrapping_set():
    v = iterate("0")  # cross touches every face once: wraps on the torus
    lab = components(v, "torus")
    assert (wraps_torus(lab, v) == tiled_wraps(v)).all()
    blob = VoxelSet([(1, 1, 1), (1, 1, 2), (2, 2, 2)], 1)
    lab = components(blob, "torus")
    assert not wraps_torus(lab, blob).any()
    assert (tiled_wraps(blob) == wraps_torus(lab, blob)).all()
    line = VoxelSet([(i, 0, 0) for i in range(5)], 1)
    lab = components(line, "torus")
    assert wraps_torus(lab, line).tolist() == [[True, False, False]]
    assert winding_rank(lab, line).tolist() == [1]


def test_wraps_needs_torus_labeling():
    v = iterate("0")
    with pytest.raises(ValueError):
        wraps_torus(components(v), v)
    with pytest.raises(ValueError):
        wraps_torus(components(v, "torus"), iterate("1"))


def test_complement():
    v = iterate("0")
    c = complement(v)
    assert len(c) == 125 - 13
    assert set(map(tuple, c.coords.tolist())).isdisjoint(map(tuple, v.coords.tolist()))
    assert complement_components(v).component_count == 1
    ref, count = ndimage.label(~iterate("01").dense(), SIX)
    assert complement_components(iterate("01")).component_count == count


def test_face_traces():
    t = face_trace(iterate("1"), "x", "low")
    assert len(t) == 16  # the square ring of a 5x5 face
    assert len(face_trace(iterate("0"), 0, "high")) == 1
    assert opposite_faces_congruent(iterate("10"))
    lopsided = VoxelSet([(0, 0, 0), (0, 1, 0)], 1)
    assert not opposite_faces_congruent(lopsided)
    with pytest.raises(ValueError):
        face_trace(iterate("0"), 0, "middle")


def test_affine_dimension():
    assert affine_dimension(iterate("01")) == 3
    assert affine_dimension(VoxelSet([(0, 0, 0), (1, 0, 0), (2, 0, 0)], 1)) == 1
    assert affine_dimension(VoxelSet([(0, 0, 0)], 1)) == 0


def test_label_of():
    lab = components(iterate("0"))
    assert lab.label_of((2, 2, 2)) == 0
    with pytest.raises(KeyError):
        lab.label_of((0, 0, 0))


def test_dendrite_conditions():
    c = dendrite_conditions(make_cross())
    assert c.one_contact_per_face and c.avoids_edges and c.intersection_graph_is_tree
    assert c.all_conditions and c.max_graph_degree == 6 and c.edge_count == 12
    assert set(c.face_contacts.values()) == {1}
    f = dendrite_conditions(make_frame())
    assert not f.intersection_graph_is_tree and not f.avoids_edges and not f.all_conditions
    # a single rod touches only two faces
    rod = DigitSet(5, tuple((i, 2, 2) for i in range(5)))
    r = dendrite_conditions(rod)
    assert r.intersection_graph_is_tree and not r.one_contact_per_face


def test_disjoint_set_cycles():
    ds = DisjointSet(4)
    assert ds.union(0, 1)
    assert ds.union(1, 2, (1, 0, 0))
    assert not ds.union(0, 2, (1, 0, 0))  # consistent, no winding
    assert ds.winding_vectors(ds.find(0)[0]) == []
    assert not ds.union(2, 0)  # closes a loop with net shift
    root = ds.find(0)[0]
    assert [tuple(abs(c) for c in w) for w in ds.winding_vectors(root)] == [(1, 0, 0)]
    assert ds.find(3) == (3, (0, 0, 0))
    assert len(set(ds.roots())) == 2


def test_mode_validation():
    with pytest.raises(ValueError):
        components(iterate("0"), "sphere")
    with pytest.raises(ValueError):
        components(iterate("0"), method="bfs")

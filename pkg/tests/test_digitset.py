import itertools

import numpy as np
import pytest

from fractalcube.digitset import (
    DigitSet,
    apply_symmetry,
    cube_symmetries,
    digits_on_edges,
    is_symmetric,
    make_cross,
    make_frame,
    union_disjoint,
)


def brute(n, keep):
    return {d for d in itertools.product(range(n), repeat=3) if keep(d)}


def test_cross_digits():
    cross = make_cross()
    assert len(cross) == 13
    assert (2, 2, 2) in cross
    assert [d for d in cross if d[0] == 0] == [(0, 2, 2)]
    # three rods of five cells sharing the centre: 3*5 - 2
    assert set(cross) == brute(5, lambda d: sum(c == 2 for c in d) >= 2)


def test_frame_digits():
    frame = make_frame()
    assert len(frame) == 44 == 3 * 4 * 5 - 2 * 8
    assert (0, 0, 0) in frame
    assert (0, 2, 2) not in frame


def test_frame_base3_is_menger():
    # Menger sponge keeps the 20 subcubes off the face centres and the centre
    menger = {d for d in itertools.product(range(3), repeat=3) if sum(c == 1 for c in d) <= 1}
    assert set(make_frame(3)) == menger


def test_union():
    u, disjoint = union_disjoint(make_cross(), make_frame())
    assert len(u) == 57 and disjoint
    u, disjoint = union_disjoint(make_cross(), make_cross())
    assert len(u) == 13 and not disjoint
    u, disjoint = union_disjoint(make_frame(), make_frame())
    assert len(u) == 44 and not disjoint
    with pytest.raises(ValueError):
        union_disjoint(make_cross(), make_frame(3))


def test_cross_avoids_edges():
    assert digits_on_edges(make_cross()) == []
    assert len(digits_on_edges(make_frame())) == 44


def test_symmetry_group():
    syms = cube_symmetries()
    assert len(syms) == 48
    pts = np.array(list(itertools.product(range(5), repeat=3)))
    images = {tuple(map(tuple, apply_symmetry(pts, s, 5))) for s in syms}
    assert len(images) == 48
    assert is_symmetric(make_cross()) and is_symmetric(make_frame())
    assert not is_symmetric(DigitSet(5, ((0, 0, 0), (1, 0, 0))))


def test_canonical_order_and_validation():
    a = DigitSet(3, ((2, 1, 0), (0, 0, 0), (2, 1, 0)))
    b = DigitSet(3, ((0, 0, 0), (2, 1, 0)))
    assert a == b and hash(a) == hash(b)
    assert a.digits == ((0, 0, 0), (2, 1, 0))
    with pytest.raises(ValueError):
        DigitSet(3, ((0, 0, 3), (0, 0, 0)))
    with pytest.raises(ValueError):
        DigitSet(3, ((0, 0, 0),))
    with pytest.raises(ValueError):
        DigitSet(2, tuple(itertools.product(range(2), repeat=3)))
    with pytest.raises(ValueError):
        make_cross(4)


def test_text_roundtrip(tmp_path):
    frame = make_frame()
    text = frame.to_text()
    assert text.splitlines()[0] == "base 5"
    assert text.splitlines()[1] == "0 0 0"
    assert DigitSet.from_text(text) == frame
    path = tmp_path / "frame.txt"
    frame.save(path)
    assert DigitSet.load(path) == frame
    assert DigitSet.from_text("# comment\nbase 3\n0 0 0\n\n1 1 1\n") == DigitSet(3, ((0, 0, 0), (1, 1, 1)))
    for bad in ("0 0 0\n", "base 3\n0 0\n", ""):
        with pytest.raises(ValueError):
            DigitSet.from_text(bad)


def test_array_read_only():
    arr = make_cross().array
    assert arr.shape == (13, 3)
    with pytest.raises(ValueError):
        arr[0, 0] = 1

"""Finite iterates of mixed Hutchinson compositions as sparse voxel sets.

An iterate ``F_w = T_{w1} o ... o T_{wk}(I)`` is a union of closed cells of the
``n^-k`` mesh. A cell is stored by its integer grid index ``(x, y, z)`` with
``0 <= x, y, z < n^k``; the base-n digits of the three indices, read most
significant first, are the digit triples of the cell address.
"""
from __future__ import annotations

import io
import math
import os
import re
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .digitset import DigitSet, make_cross, make_frame, union_disjoint

DEFAULT_CELL_BUDGET = 200_000_000
BUDGET_ENV = "FRACTALCUBE_CELL_BUDGET"

_WORD_RE = re.compile(r"^[01]*$")


class BudgetExceeded(RuntimeError):
    """Raised when an operation would materialise more cells than allowed."""


def cell_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_CELL_BUDGET


# peak bytes per generated cell: coordinates, keys and sort temporaries
BYTES_PER_CELL = 112


def available_memory() -> int | None:
    """Physical memory currently available, in bytes, where the OS reports it."""
    try:
        return os.sysconf("SC_AVPHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return None


def check_cells(total: int, budget: int | None = None) -> None:
    """Refuse to materialise ``total`` cells beyond the budget or available memory."""
    if total > cell_budget(budget):
        raise BudgetExceeded(f"iterate has {total} cells, budget is {cell_budget(budget)}")
    avail = available_memory()
    if avail is not None and total * BYTES_PER_CELL > avail:
        raise BudgetExceeded(
            f"iterate has {total} cells, needing about {total * BYTES_PER_CELL / 2**30:.1f} GiB; "
            f"{avail / 2**30:.1f} GiB available"
        )


def default_digit_sets() -> tuple[DigitSet, DigitSet]:
    """Letter 0 selects the Cross, letter 1 the Frame."""
    return make_cross(), make_frame()


def check_word(word: str) -> str:
    if not isinstance(word, str) or not _WORD_RE.match(word):
        raise ValueError(f"word must be a string over {{0,1}}, got {word!r}")
    return word


def zeros(word: str) -> int:
    return word.count("0")


@dataclass(frozen=True)
class WordSpec:
    """A finite word, or an eventually periodic infinite one.

    Parsed from ``"0111"`` (finite) or ``"pre:period"`` such as ``"0:1"``
    (0 followed by 1 forever) or ``":01"`` (purely periodic).
    """

    preperiod: str
    period: str = ""

    def __post_init__(self):
        check_word(self.preperiod)
        check_word(self.period)

    @classmethod
    def parse(cls, text: str) -> "WordSpec":
        if ":" in text:
            pre, _, per = text.partition(":")
            if not per:
                raise ValueError(f"empty period in {text!r}")
            return cls(pre, per)
        return cls(text)

    @property
    def periodic(self) -> bool:
        return bool(self.period)

    def prefix(self, k: int) -> str:
        if k <= len(self.preperiod):
            return self.preperiod[:k]
        if not self.period:
            raise ValueError(f"finite word of length {len(self.preperiod)} has no prefix of length {k}")
        extra = k - len(self.preperiod)
        reps = -(-extra // len(self.period))
        return self.preperiod + (self.period * reps)[:extra]

    def __len__(self) -> int:
        if self.period:
            raise TypeError("infinite word has no length")
        return len(self.preperiod)

    @property
    def limit_density(self) -> Fraction | None:
        """Density of zeros in the period, i.e. the exact limit of prefix densities."""
        if not self.period:
            return None
        return Fraction(zeros(self.period), len(self.period))

    def __str__(self) -> str:
        return f"{self.preperiod}:{self.period}" if self.period else self.preperiod


class VoxelSet:
    """A set of cells of the depth-k mesh on the cube ``[0, scale]^3``.

    ``coords`` holds unique integer grid indices, sorted by linear key
    ``(x * N + y) * N + z`` with ``N = base**depth``. ``scale`` is the side of
    the bounding cube; it is 1 for iterates and ``base`` when a digit set is
    read as a union of unit cubes (``D + I``).
    """

    def __init__(self, coords, depth: int, base: int = 5, scale: float = 1.0, *, presorted: bool = False):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.base = int(base)
        self.depth = int(depth)
        self.scale = scale
        c = np.asarray(coords, dtype=np.int64).reshape(-1, 3)
        n = self.grid_size
        if c.size and (c.min() < 0 or c.max() >= n):
            raise ValueError(f"cell index out of range for a {n}^3 grid")
        keys = (c[:, 0] * n + c[:, 1]) * n + c[:, 2]
        if not presorted:
            keys, first = np.unique(keys, return_index=True)
            c = c[first]
        c.flags.writeable = False
        keys.flags.writeable = False
        self.coords = c
        self.keys = keys

    @classmethod
    def from_keys(cls, keys, depth: int, base: int = 5, scale: float = 1.0) -> "VoxelSet":
        keys = np.unique(np.asarray(keys, dtype=np.int64))
        n = base**depth
        coords = np.stack([keys // (n * n), (keys // n) % n, keys % n], axis=1)
        return cls(coords, depth, base, scale, presorted=True)

    @classmethod
    def from_digits(cls, ds: DigitSet) -> "VoxelSet":
        """``D + I``: the digits as unit cubes inside ``[0, n]^3``."""
        return cls(ds.array, 1, ds.base, scale=float(ds.base))

    @classmethod
    def unit_cube(cls, base: int = 5) -> "VoxelSet":
        return cls(np.zeros((1, 3), np.int64), 0, base)

    @property
    def grid_size(self) -> int:
        return self.base**self.depth

    @property
    def cell_side(self) -> float:
        return self.scale / self.grid_size

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VoxelSet):
            return NotImplemented
        return (
            self.base == other.base
            and self.depth == other.depth
            and self.scale == other.scale
            and np.array_equal(self.keys, other.keys)
        )

    def __hash__(self):
        return hash((self.base, self.depth, self.scale, self.keys.tobytes()))

    def __repr__(self) -> str:
        return f"VoxelSet(depth={self.depth}, base={self.base}, cells={len(self)})"

    def index_of(self, coords) -> np.ndarray:
        """Positions of ``coords`` in ``self.coords``, or -1 where absent."""
        c = np.asarray(coords, dtype=np.int64).reshape(-1, 3)
        n = self.grid_size
        k = (c[:, 0] * n + c[:, 1]) * n + c[:, 2]
        if not len(self.keys):
            return np.full(len(k), -1)
        pos = np.minimum(np.searchsorted(self.keys, k), len(self.keys) - 1)
        return np.where(self.keys[pos] == k, pos, -1)

    def contains(self, cell) -> bool:
        """Membership of a cell given as a CellAddress or a grid index triple."""
        idx = as_grid_index(cell, self.depth, self.base)
        return bool(self.index_of(idx)[0] >= 0)

    def union(self, other: "VoxelSet") -> "VoxelSet":
        _check_compatible(self, other)
        return VoxelSet(np.concatenate([self.coords, other.coords]), self.depth, self.base, self.scale)

    def parents(self, depth: int) -> "VoxelSet":
        """Cells of the coarser mesh at ``depth`` that contain some cell of this set."""
        if not 0 <= depth <= self.depth:
            raise ValueError("parent depth must lie in [0, depth]")
        f = self.base ** (self.depth - depth)
        return VoxelSet(self.coords // f, depth, self.base, self.scale)

    def refine(self, depth: int, budget: int | None = None) -> "VoxelSet":
        """The same point set expressed on the finer mesh at ``depth``."""
        if depth < self.depth:
            raise ValueError("cannot refine to a coarser depth")
        f = self.base ** (depth - self.depth)
        total = len(self) * f**3
        if total > cell_budget(budget):
            raise BudgetExceeded(f"refinement needs {total} cells")
        r = np.arange(f, dtype=np.int64)
        sub = np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1).reshape(-1, 3)
        c = (self.coords[:, None, :] * f + sub[None, :, :]).reshape(-1, 3)
        return VoxelSet(c, depth, self.base, self.scale)

    def dense(self) -> np.ndarray:
        """Boolean occupancy grid of shape ``(N, N, N)``."""
        n = self.grid_size
        g = np.zeros((n, n, n), dtype=bool)
        g[self.coords[:, 0], self.coords[:, 1], self.coords[:, 2]] = True
        return g

    def addresses(self) -> list[tuple[tuple[int, int, int], ...]]:
        return [grid_index_to_address(c, self.depth, self.base) for c in self.coords]

    # -- serialisation -----------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,x_idx,y_idx,z_idx\n")
        k = self.depth
        for x, y, z in self.coords.tolist():
            buf.write(f"{k},{x},{y},{z}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, base: int = 5) -> "VoxelSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("k,"):
            raise ValueError("missing CSV header 'k,x_idx,y_idx,z_idx'")
        rows = np.array([[int(t) for t in ln.split(",")] for ln in lines[1:]], dtype=np.int64).reshape(-1, 4)
        depths = set(rows[:, 0].tolist())
        if len(depths) > 1:
            raise ValueError(f"mixed depths in CSV: {sorted(depths)}")
        depth = depths.pop() if depths else 0
        return cls(rows[:, 1:], depth, base)

    def to_rle(self) -> bytes:
        """Binary run-length encoding of the occupancy in linear-key order.

        Layout (little endian): magic ``FCVX``, u8 version, u8 base, u8 depth,
        u8 pad, u64 run count, then ``count`` u64 run starts followed by
        ``count`` u64 run lengths.
        """
        k = self.keys
        if len(k):
            brk = np.nonzero(np.diff(k) != 1)[0] + 1
            starts = np.concatenate([[0], brk])
            ends = np.concatenate([brk, [len(k)]])
            run_start = k[starts].astype("<u8")
            run_len = (ends - starts).astype("<u8")
        else:
            run_start = run_len = np.zeros(0, "<u8")
        head = b"FCVX" + struct.pack("<BBBBQ", 1, self.base, self.depth, 0, len(run_start))
        return head + run_start.tobytes() + run_len.tobytes()

    @classmethod
    def from_rle(cls, data: bytes) -> "VoxelSet":
        if data[:4] != b"FCVX":
            raise ValueError("not a voxel RLE stream")
        version, base, depth, _, count = struct.unpack_from("<BBBBQ", data, 4)
        if version != 1:
            raise ValueError(f"unsupported RLE version {version}")
        off = 16
        if len(data) != off + 16 * count:
            raise ValueError("truncated or oversized voxel RLE stream")
        starts = np.frombuffer(data, "<u8", count, off).astype(np.int64)
        lengths = np.frombuffer(data, "<u8", count, off + 8 * count).astype(np.int64)
        if len(starts):
            total = int(lengths.sum())
            run_id = np.repeat(np.arange(count), lengths)
            within = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
            keys = starts[run_id] + within
        else:
            keys = np.zeros(0, np.int64)
        return cls.from_keys(keys, depth, base)

    def to_obj(self, weld: bool = False) -> str:
        """Wavefront OBJ with one hexahedron (six quads) per cell."""
        h = self.cell_side
        corners = np.array(
            [[i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(8)], dtype=np.int64
        )
        # faces as corner indices, counter-clockwise seen from outside
        quads = np.array(
            [[0, 1, 3, 2], [4, 6, 7, 5], [0, 4, 5, 1], [2, 3, 7, 6], [0, 2, 6, 4], [1, 5, 7, 3]]
        )
        verts = (self.coords[:, None, :] + corners[None, :, :]).reshape(-1, 3)
        faces = (np.arange(len(self))[:, None, None] * 8 + quads[None, :, :]).reshape(-1, 4)
        if weld and len(verts):
            verts, inv = np.unique(verts, axis=0, return_inverse=True)
            faces = inv.reshape(-1)[faces]
        buf = io.StringIO()
        buf.write(f"# fractal cube iterate: depth {self.depth}, {len(self)} cells\n")
        for v in verts * h:
            buf.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for f in faces + 1:
            buf.write(f"f {f[0]} {f[1]} {f[2]} {f[3]}\n")
        return buf.getvalue()

    def save(self, path, fmt: str | None = None, weld: bool = False) -> None:
        path = Path(path)
        fmt = fmt or path.suffix.lstrip(".")
        if fmt == "csv":
            path.write_text(self.to_csv())
        elif fmt in ("rle", "fcvx"):
            path.write_bytes(self.to_rle())
        elif fmt == "obj":
            path.write_text(self.to_obj(weld=weld))
        else:
            raise ValueError(f"unknown voxel format {fmt!r}")


def _check_compatible(a: VoxelSet, b: VoxelSet) -> None:
    if (a.base, a.depth, a.scale) != (b.base, b.depth, b.scale):
        raise ValueError("voxel sets live on different meshes")


def grid_index_to_address(idx, depth: int, base: int = 5) -> tuple[tuple[int, int, int], ...]:
    x, y, z = (int(c) for c in idx)
    out = []
    for j in range(depth - 1, -1, -1):
        p = base**j
        out.append((x // p % base, y // p % base, z // p % base))
    return tuple(out)


def address_to_grid_index(address: Sequence[Sequence[int]], base: int = 5) -> tuple[int, int, int]:
    x = y = z = 0
    for dx, dy, dz in address:
        x, y, z = x * base + dx, y * base + dy, z * base + dz
    return x, y, z


def as_grid_index(cell, depth: int, base: int = 5) -> tuple[int, int, int]:
    """Accept either a CellAddress (k digit triples) or a grid index triple."""
    cell = tuple(cell)
    if not cell and depth == 0:
        return 0, 0, 0
    if depth and len(cell) == depth and all(isinstance(d, (tuple, list)) for d in cell):
        if any(not 0 <= c < base for d in cell for c in d):
            raise ValueError(f"address digit out of range: {cell}")
        return address_to_grid_index(cell, base)
    if len(cell) == 3 and all(isinstance(c, (int, np.integer)) for c in cell):
        return tuple(int(c) for c in cell)
    raise ValueError(f"cell {cell!r} does not match depth {depth}")


def product_iterate(digit_sets: Sequence[DigitSet], budget: int | None = None) -> VoxelSet:
    """Cells whose j-th digit triple lies in ``digit_sets[j]`` for every j."""
    if not digit_sets:
        return VoxelSet.unit_cube()
    base = digit_sets[0].base
    if any(d.base != base for d in digit_sets):
        raise ValueError("digit sets have different bases")
    check_cells(math.prod(len(d) for d in digit_sets), budget)
    c = np.zeros((1, 3), dtype=np.int64)
    for d in digit_sets:
        c = (c[:, None, :] * base + d.array[None, :, :]).reshape(-1, 3)
    # digits are sorted lexicographically and distinct, but product order is
    # not key order once several levels interleave; sort once.
    return VoxelSet(c, len(digit_sets), base)


def iterate(word: str, digit_sets: Sequence[DigitSet] | None = None, budget: int | None = None) -> VoxelSet:
    """``F_w = T_{w1} o ... o T_{wk}(I)``; the empty word gives the unit cube."""
    check_word(word)
    ds = tuple(digit_sets) if digit_sets is not None else default_digit_sets()
    if not word:
        return VoxelSet.unit_cube(ds[0].base)
    return product_iterate([ds[int(ch)] for ch in word], budget)


def full_iterate(depth: int, digit_sets: Sequence[DigitSet] | None = None, budget: int | None = None) -> VoxelSet:
    """``T^k(I)`` for the combined digit set ``D0 | D1``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ds = tuple(digit_sets) if digit_sets is not None else default_digit_sets()
    combined, _ = union_disjoint(*ds)
    return product_iterate([combined] * depth, budget)


def iterate_count(word: str, digit_sets: Sequence[DigitSet] | None = None) -> int:
    ds = tuple(digit_sets) if digit_sets is not None else default_digit_sets()
    return math.prod(len(ds[int(ch)]) for ch in check_word(word))


def contains(v: VoxelSet, cell) -> bool:
    cell = tuple(cell)
    if cell and isinstance(cell[0], (tuple, list)) and len(cell) != v.depth:
        raise ValueError(f"cell depth {len(cell)} != voxel depth {v.depth}")
    return v.contains(cell)

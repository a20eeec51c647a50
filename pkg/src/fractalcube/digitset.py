"""Digit sets in {0, ..., n-1}^3 and the Cross / Frame constructions.

A digit set D with base n defines the Hutchinson operator
``T(A) = (A + D) / n`` acting on subsets of the unit cube.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

Digit = tuple[int, int, int]


@dataclass(frozen=True)
class DigitSet:
    """Immutable, canonically ordered set of lattice triples.

    Digits are deduplicated and sorted lexicographically on construction, so
    equality and hashing do not depend on input order.
    """

    base: int
    digits: tuple[Digit, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        canon = tuple(sorted({tuple(int(c) for c in d) for d in self.digits}))
        for d in canon:
            if len(d) != 3:
                raise ValueError(f"digit {d} is not a triple")
            if any(c < 0 or c >= self.base for c in d):
                raise ValueError(f"digit {d} out of range for base {self.base}")
        if not 2 <= len(canon) < self.base**3:
            raise ValueError(
                f"a digit set needs 2 <= #digits < {self.base ** 3}, got {len(canon)}"
            )
        object.__setattr__(self, "digits", canon)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[Digit]:
        return iter(self.digits)

    def __contains__(self, d) -> bool:
        return tuple(d) in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.digits)

    @cached_property
    def array(self) -> np.ndarray:
        """Digits as an (m, 3) int64 array, read-only."""
        a = np.array(self.digits, dtype=np.int64).reshape(-1, 3)
        a.flags.writeable = False
        return a

    def to_text(self) -> str:
        lines = [f"base {self.base}"]
        lines += [f"{x} {y} {z}" for x, y, z in self.digits]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DigitSet":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0][0] != "base" or len(rows[0]) != 2:
            raise ValueError("digit file must start with a 'base n' line")
        base = int(rows[0][1])
        digits = []
        for r in rows[1:]:
            if len(r) != 3:
                raise ValueError(f"malformed digit line: {' '.join(r)!r}")
            digits.append(tuple(int(c) for c in r))
        return cls(base, tuple(digits))

    @classmethod
    def load(cls, path) -> "DigitSet":
        return cls.from_text(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def _select(n: int, keep) -> DigitSet:
    r = range(n)
    return DigitSet(n, tuple(d for d in itertools.product(r, r, r) if keep(d)))


def make_cross(n: int = 5) -> DigitSet:
    """Three axis-parallel rods through the central cell (13 digits for n=5)."""
    if n % 2 == 0:
        raise ValueError("the cross needs an odd base to have a central cell")
    mid = n // 2
    return _select(n, lambda d: sum(c == mid for c in d) >= 2)


def make_frame(n: int = 5) -> DigitSet:
    """Edge wireframe of the big cube: at least two extreme coordinates.

    For n=3 this is the Menger sponge digit set; for n=5 it has 44 digits.
    """
    ext = (0, n - 1)
    return _select(n, lambda d: sum(c in ext for c in d) >= 2)


def union_disjoint(a: DigitSet, b: DigitSet) -> tuple[DigitSet, bool]:
    """Return ``(a | b, a and b are disjoint)``."""
    if a.base != b.base:
        raise ValueError(f"base mismatch: {a.base} != {b.base}")
    return DigitSet(a.base, a.digits + b.digits), a._lookup.isdisjoint(b._lookup)


def cube_symmetries() -> list[tuple[tuple[int, int, int], tuple[bool, bool, bool]]]:
    """The 48 symmetries of the cube as (axis permutation, reflection flags)."""
    return [
        (perm, flips)
        for perm in itertools.permutations(range(3))
        for flips in itertools.product((False, True), repeat=3)
    ]


def apply_symmetry(coords: np.ndarray, sym, size: int) -> np.ndarray:
    """Apply a cube symmetry to integer coordinates in ``[0, size)``.

    Reflection maps ``i -> size - 1 - i`` on the flagged axes, after permuting.
    """
    perm, flips = sym
    out = np.asarray(coords)[..., list(perm)].copy()
    for ax, f in enumerate(flips):
        if f:
            out[..., ax] = size - 1 - out[..., ax]
    return out


def is_symmetric(ds: DigitSet) -> bool:
    """True iff ``ds`` is invariant under all 48 cube symmetries."""
    ref = set(ds.digits)
    return all(
        {tuple(map(int, r)) for r in apply_symmetry(ds.array, s, ds.base)} == ref
        for s in cube_symmetries()
    )


def digits_on_edges(ds: DigitSet) -> list[Digit]:
    ext = (0, ds.base - 1)
    return [d for d in ds if sum(c in ext for c in d) >= 2]


def from_iterable(base: int, digits: Iterable[Iterable[int]]) -> DigitSet:
    return DigitSet(base, tuple(tuple(d) for d in digits))

"""Components of F as a self-similar set coded by binary words.

Each infinite word alpha addresses one component ``K_alpha``; ``K_{0w}`` and
``K_{1w}`` are the images of ``K_w`` under the two Hutchinson operators. The
map ``phi`` sends letters 0, 1 to ternary digits 0, 2, which turns those two
operators into ``x/3`` and ``(x+2)/3`` on the middle-third Cantor set.

Distances between components are controlled by the common prefix ``s``:
``d_H`` sits in ``[5^-(s+1), C 5^-(s+1)]`` and the Cantor gap in
``[3^-(s+1), 3^-s]``. Raising the first interval to the power
``log 3 / log 5`` lines it up with the second, giving a bi-Hölder relation.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .metric import Measurer, common_prefix, sandwich_bounds
from .voxel import check_word

EXPONENT_FORWARD = math.log(3) / math.log(5)
EXPONENT_BACKWARD = math.log(5) / math.log(3)
SQRT3 = math.sqrt(3)


@dataclass(frozen=True)
class CantorPoint:
    """Partial ternary sum of a word; the limit point is within ``3^-len``."""

    value: Fraction
    ternary_digits: tuple[int, ...]

    @property
    def error_bound(self) -> Fraction:
        return Fraction(1, 3 ** len(self.ternary_digits))

    def __float__(self) -> float:
        return float(self.value)


def phi(word: str) -> CantorPoint:
    check_word(word)
    digits = tuple(2 * int(c) for c in word)
    value = sum((Fraction(d, 3**i) for i, d in enumerate(digits, start=1)), Fraction(0))
    return CantorPoint(value, digits)


def cantor_gap(a: str, b: str) -> Fraction:
    return abs(phi(a).value - phi(b).value)


def cantor_gap_bounds(s: int) -> tuple[Fraction, Fraction]:
    """Range of ``|phi(a) - phi(b)|`` for words whose first difference is at letter ``s+1``."""
    if s < 0:
        raise ValueError("prefix length must be >= 0")
    return Fraction(1, 3 ** (s + 1)), Fraction(1, 3**s)


def words(k: int) -> list[str]:
    return ["".join(p) for p in itertools.product("01", repeat=k)]


def conjugacy_holds(max_len: int = 8) -> bool:
    """``phi(0w) = phi(w)/3`` and ``phi(1w) = (phi(w)+2)/3`` for every word up to ``max_len``."""
    for k in range(max_len):
        for w in words(k):
            x = phi(w).value
            if phi("0" + w).value != x / 3 or phi("1" + w).value != (x + 2) / 3:
                return False
    return True


def min_separation(k: int) -> Fraction:
    """Smallest gap between ``phi`` values of distinct words of length ``k``."""
    vals = sorted(phi(w).value for w in words(k))
    return min(b - a for a, b in zip(vals, vals[1:]))


def _up(x: float) -> float:
    return float(np.nextafter(x, math.inf))


def _down(x: float) -> float:
    return float(np.nextafter(x, -math.inf))


@dataclass(frozen=True)
class HolderPair:
    words: tuple[str, str]
    s: int
    dH_lo: float
    dH_hi: float
    cantor_gap: Fraction
    ratio_lo: float  # cantor_gap / dH^a over the bracket, a = log3/log5
    ratio_hi: float
    back_ratio_lo: float  # dH / cantor_gap^b, b = log5/log3
    back_ratio_hi: float
    dH_sandwich: bool
    tight_upper: bool
    gap_sandwich: bool
    limit_lo: float
    limit_hi: float

    def as_dict(self) -> dict:
        return {
            "words": list(self.words),
            "s": self.s,
            "dH_lo": self.dH_lo,
            "dH_hi": self.dH_hi,
            "cantor_gap": float(self.cantor_gap),
            "cantor_gap_exact": str(self.cantor_gap),
            "ratio_lo": self.ratio_lo,
            "ratio_hi": self.ratio_hi,
            "back_ratio_lo": self.back_ratio_lo,
            "back_ratio_hi": self.back_ratio_hi,
            "dH_sandwich": self.dH_sandwich,
            "tight_upper": self.tight_upper,
            "gap_sandwich": self.gap_sandwich,
            "limit_dH_lo": self.limit_lo,
            "limit_dH_hi": self.limit_hi,
        }


@dataclass(frozen=True)
class HolderReport:
    """Pairwise checks at one word length and the Hölder constants they certify.

    ``c1`` and ``c2`` are the smallest constants with
    ``gap <= c1 * dH^a`` and ``dH <= c2 * gap^b`` over all measured pairs.
    The sandwiches alone give ``c1 <= 3`` and ``c2 <= C``, with ``C`` the
    upper constant used for ``d_H``.
    """

    k: int
    tol: float
    pairs: tuple[HolderPair, ...]
    exponent_forward: float
    exponent_backward: float
    c1: float
    c2: float
    c1_bound: float
    c2_bound: float
    tail_bound: float

    @property
    def passed(self) -> bool:
        return (
            all(p.dH_sandwich and p.gap_sandwich for p in self.pairs)
            and math.isfinite(self.c1)
            and math.isfinite(self.c2)
            and self.c1 <= self.c1_bound
            and self.c2 <= self.c2_bound
        )

    @property
    def tight_upper_all(self) -> bool:
        return all(p.tight_upper for p in self.pairs)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "tol": self.tol,
            "pair_count": len(self.pairs),
            "exponent_forward": self.exponent_forward,
            "exponent_backward": self.exponent_backward,
            "c1": self.c1,
            "c2": self.c2,
            "c1_bound": self.c1_bound,
            "c2_bound": self.c2_bound,
            "tail_bound": self.tail_bound,
            "tight_upper_all": self.tight_upper_all,
            "passed": self.passed,
            "pairs": [p.as_dict() for p in self.pairs],
        }


def holder_check(k: int = 4, tol: float = 1e-4, measurer: Measurer | None = None,
                 digit_sets=None, max_len: int = 4) -> HolderReport:
    """Check both sandwiches on all pairs of distinct words of length ``k``.

    ``d_H`` must lie in ``[5^-(s+1), 3 sqrt2 5^-s]`` (the weaker upper
    candidate; whether ``3 sqrt5 5^-(s+1)`` also holds is reported per pair),
    and the Cantor gap in ``[3^-(s+1), 3^-s]``. The limit components differ
    from the iterates by at most ``sqrt3 5^-k`` each, so ``limit_lo/hi``
    widen the bracket by twice that; they are informational.
    """
    if k < 1:
        raise ValueError("need words of length >= 1")
    if k > max_len:
        raise ValueError(f"word length {k} exceeds the depth budget {max_len}")
    m = measurer or Measurer()
    a_exp, b_exp = EXPONENT_FORWARD, EXPONENT_BACKWARD
    tail = SQRT3 / 5**k
    rows = []
    for wa, wb in itertools.combinations(words(k), 2):
        s = common_prefix(wa, wb)
        rep = m.iterate_hausdorff(wa, wb, tol, digit_sets, with_min=False)
        lo, hi = rep.d_hausdorff_lo, rep.d_hausdorff_hi
        gap = cantor_gap(wa, wb)
        g = float(gap)
        lower, up5, up2 = sandwich_bounds(s)
        glo, ghi = cantor_gap_bounds(s)
        rows.append(HolderPair(
            words=(wa, wb),
            s=s,
            dH_lo=lo,
            dH_hi=hi,
            cantor_gap=gap,
            ratio_lo=_down(g / hi**a_exp),
            ratio_hi=_up(g / lo**a_exp) if lo > 0 else math.inf,
            back_ratio_lo=_down(lo / g**b_exp),
            back_ratio_hi=_up(hi / g**b_exp),
            dH_sandwich=lo >= float(lower) and hi <= up2,
            tight_upper=hi <= up5,
            gap_sandwich=glo <= gap <= ghi,
            limit_lo=max(0.0, lo - 2 * tail),
            limit_hi=hi + 2 * tail,
        ))
    c1 = max(p.ratio_hi for p in rows)
    c2 = max(p.back_ratio_hi for p in rows)
    # gap <= 3^-s and dH >= 5^-(s+1) give gap <= 3 dH^a; the upper side
    # dH <= C 5^-(s+1) with gap >= 3^-(s+1) gives dH <= C gap^b
    _, _, up2 = sandwich_bounds(0)
    c2_bound = up2 * 5
    return HolderReport(k, tol, tuple(rows), a_exp, b_exp, c1, c2, 3.0, c2_bound, tail)

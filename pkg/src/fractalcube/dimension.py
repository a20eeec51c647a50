"""Box counts of iterates, zero densities of addresses and the dimension formula.

``F_w`` for a word ``w`` of length k is a union of ``prod #D_{w_i}`` cells of
side ``5^-k``, so with m zeros the box count at mesh ``5^-k`` is
``13^m * 44^(k-m)``. Counts stay exact Python integers; logarithms are only
taken when a slope or exponent is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .digitset import DigitSet
from .voxel import (
    BudgetExceeded,
    WordSpec,
    check_word,
    default_digit_sets,
    iterate,
    zeros,
)


def _sets(digit_sets):
    return default_digit_sets() if digit_sets is None else tuple(digit_sets)


def formula_count(word: str, digit_sets: Sequence[DigitSet] | None = None) -> int:
    """``prod #D_{w_i}``; with the default sets this is ``13^m * 44^(k-m)``."""
    check_word(word)
    d0, d1 = _sets(digit_sets)
    m = zeros(word)
    return len(d0) ** m * len(d1) ** (len(word) - m)


@dataclass(frozen=True)
class BoxCount:
    word: str
    count: int
    generated: int | None
    formula_only: bool

    def __int__(self) -> int:
        return self.count


def box_count(word: str, digit_sets=None, budget: int | None = None) -> BoxCount:
    """Count cells of ``F_word`` by generating it and by the product formula.

    Generation is skipped (``formula_only``) when the count exceeds the cell
    budget or the memory at hand. A mismatch between the two routes raises ``AssertionError``.
    """
    expected = formula_count(word, digit_sets)
    try:
        got = len(iterate(word, digit_sets, budget))
    except BudgetExceeded:
        return BoxCount(word, expected, None, True)
    if got != expected:
        raise AssertionError(f"generated {got} cells for {word!r}, formula gives {expected}")
    return BoxCount(word, expected, got, False)


def dimension_formula(lam, digit_sets=None) -> float:
    """``lam * log_n #D0 + (1 - lam) * log_n #D1``; for the default sets
    ``lam * log_5 13 + (1 - lam) * log_5 44``."""
    lam = Fraction(lam) if not isinstance(lam, float) else lam
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    d0, d1 = _sets(digit_sets)
    n = d0.base
    a, b = math.log(len(d0), n), math.log(len(d1), n)
    return float(lam) * a + (1 - float(lam)) * b


# name used in report fields
theorem4_value = dimension_formula


@dataclass(frozen=True)
class BoxCountSeries:
    """Exact counts ``N(k)`` for the prefixes of one address."""

    entries: tuple[tuple[int, int], ...]
    word_prefixes: tuple[str, ...]
    base: int = 5
    formula_only: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        ks = [k for k, _ in self.entries]
        if ks != sorted(set(ks)):
            raise ValueError("depths must be strictly increasing")

    def exponents(self) -> list[float]:
        """Per-depth ``log N / (k log n)``, i.e. ``-log N_delta / log delta``."""
        return [math.log(n) / (k * math.log(self.base)) if k else math.nan for k, n in self.entries]

    def rows(self):
        return [(k, n, e) for (k, n), e in zip(self.entries, self.exponents())]


def box_count_series(word, kmax: int | None = None, depths: Sequence[int] | None = None,
                     digit_sets=None, budget: int | None = None, generate: bool = True) -> BoxCountSeries:
    """Counts for prefixes of ``word`` (a string or :class:`WordSpec`).

    ``depths`` defaults to ``1..kmax``; for a finite word ``kmax`` defaults to
    its length. With ``generate=False`` only the formula is used.
    """
    spec = word if isinstance(word, WordSpec) else WordSpec.parse(word)
    if depths is None:
        if kmax is None:
            kmax = len(spec)
        depths = range(1, kmax + 1)
    prefixes, entries, flags = [], [], []
    for k in depths:
        w = spec.prefix(k)
        if generate:
            bc = box_count(w, digit_sets, budget)
            n, flag = bc.count, bc.formula_only
        else:
            n, flag = formula_count(w, digit_sets), True
        prefixes.append(w)
        entries.append((k, n))
        flags.append(flag)
    base = _sets(digit_sets)[0].base
    return BoxCountSeries(tuple(entries), tuple(prefixes), base, tuple(flags))


@dataclass(frozen=True)
class DimensionFit:
    slope: float
    intercept: float
    residual: float
    points: int


def estimate_dimension(series: BoxCountSeries) -> DimensionFit:
    """Least-squares slope of ``log N`` against ``-log delta = k log n``.

    Exact counts carry no noise, so a nonzero residual only reflects drift of
    the zero density along the prefixes.
    """
    if len(series.entries) < 2:
        raise ValueError("need at least two depths to fit a slope")
    k = np.array([e[0] for e in series.entries], float)
    x = k * math.log(series.base)
    y = np.array([math.log(e[1]) for e in series.entries])
    if np.ptp(x) == 0:
        raise ValueError("degenerate series: all depths equal")
    # center before fitting; keeps the collinear case exact to rounding
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    slope = float(dx @ dy / (dx @ dx))
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    return DimensionFit(slope, intercept, float(np.sqrt(np.mean(resid**2))), len(x))


@dataclass(frozen=True)
class DensitySeries:
    """Zero densities ``lambda_m = z_m / m`` of the prefixes of an address.

    ``limsup``/``liminf`` are taken over the tail ``m >= ceil(M/2)`` of the
    computed range ``1..M``, which drops start-up transients. ``limit`` is the
    exact limit when the word was declared eventually periodic.
    """

    lambda_m: tuple[Fraction, ...]
    limsup: Fraction | None
    liminf: Fraction | None
    limit: Fraction | None = None

    def __len__(self) -> int:
        return len(self.lambda_m)


def density_series(word, length: int | None = None) -> DensitySeries:
    """Prefix zero densities of ``word`` (string or :class:`WordSpec`).

    For periodic words ``length`` defaults to the preperiod plus eight periods.
    """
    spec = word if isinstance(word, WordSpec) else WordSpec.parse(word)
    if length is None:
        length = len(spec.preperiod) + 8 * len(spec.period) if spec.periodic else len(spec)
    w = spec.prefix(length)
    z = np.cumsum([c == "0" for c in w]) if w else []
    lam = tuple(Fraction(int(zm), m) for m, zm in enumerate(z, start=1))
    if not lam:
        return DensitySeries((), None, None, spec.limit_density)
    tail = lam[(len(lam) - 1) // 2 :]
    return DensitySeries(lam, max(tail), min(tail), spec.limit_density)


@dataclass(frozen=True)
class DimensionSummary:
    """Box-dimension values implied by the formula for one address.

    The formula is decreasing in the zero density, so the lower box
    dimension pairs with the upper density and vice versa.
    """

    word: str
    slope: float
    residual: float
    lam: Fraction | None
    lower_box: float | None
    upper_box: float | None
    formula_value: float | None

    def as_dict(self) -> dict:
        return {
            "word": self.word,
            "slope": self.slope,
            "residual": self.residual,
            "lambda": None if self.lam is None else float(self.lam),
            "lambda_exact": None if self.lam is None else str(self.lam),
            "lower_box_dimension": self.lower_box,
            "upper_box_dimension": self.upper_box,
            "theorem4_value": self.formula_value,
        }


def summarize(word, kmax: int, digit_sets=None, budget: int | None = None,
              generate: bool = True) -> tuple[BoxCountSeries, DimensionSummary]:
    """Fit and formula values for prefixes up to ``kmax``.

    For a periodic word the fit uses depths ``len(pre) + j * len(period)``,
    where consecutive counts grow by one fixed factor and so lie on a line.
    """
    spec = word if isinstance(word, WordSpec) else WordSpec.parse(word)
    depths = None
    if spec.periodic:
        aligned = list(range(len(spec.preperiod) + len(spec.period), kmax + 1, len(spec.period)))
        if len(aligned) >= 2:
            depths = aligned
    series = box_count_series(spec, kmax, depths, digit_sets, budget, generate)
    fit = estimate_dimension(series)
    dens = density_series(spec, kmax)
    lam = dens.limit
    if lam is None and dens.limsup == dens.liminf:
        lam = dens.limsup
    value = dimension_formula(lam, digit_sets) if lam is not None else None
    lower = dimension_formula(dens.limsup, digit_sets) if dens.limsup is not None else None
    upper = dimension_formula(dens.liminf, digit_sets) if dens.liminf is not None else None
    if spec.periodic:
        lower = upper = value
    return series, DimensionSummary(str(spec), fit.slope, fit.residual, lam, lower, upper, value)

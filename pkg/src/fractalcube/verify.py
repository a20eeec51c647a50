"""Aggregate checks behind ``fractalcube verify``.

Each check returns a plain dict with a ``passed`` flag. Checks that compare
against counts of the built-in Cross and Frame are skipped when other digit
sets are supplied.
"""
from __future__ import annotations

import itertools
import math

from .digitset import apply_symmetry, cube_symmetries, is_symmetric, make_cross, make_frame, union_disjoint
from .dimension import box_count, box_count_series, dimension_formula, estimate_dimension
from .hyperspace import conjugacy_holds, holder_check, min_separation
from .metric import Measurer, hausdorff_distance, min_distance_sq, verify_sandwich
from .topology import (
    complement_components,
    components,
    dendrite_conditions,
    opposite_faces_congruent,
    wraps_torus,
)
from .voxel import VoxelSet, full_iterate, iterate

CHECKS = (
    "digits",
    "digit_distances",
    "connectivity",
    "sandwich",
    "box_counts",
    "dimension",
    "dendrite",
    "torus",
    "holder",
    "symmetry",
)
BUILTIN_ONLY = {"digits", "digit_distances", "dendrite", "torus"}


def words_upto(kmax: int, kmin: int = 1):
    for k in range(kmin, kmax + 1):
        for p in itertools.product("01", repeat=k):
            yield "".join(p)


def check_digits(**_) -> dict:
    cross, frame = make_cross(), make_frame()
    union, disjoint = union_disjoint(cross, frame)
    ok = len(cross) == 13 and len(frame) == 44 and len(union) == 57 and disjoint
    sym = is_symmetric(cross) and is_symmetric(frame)
    return {"cross": len(cross), "frame": len(frame), "union": len(union), "disjoint": disjoint,
            "symmetric": sym, "passed": bool(ok and sym)}


def check_digit_distances(**_) -> dict:
    a, b = VoxelSet.from_digits(make_cross()), VoxelSet.from_digits(make_frame())
    d2 = min_distance_sq(a, b)
    rep = hausdorff_distance(a, b, 1e-3)
    target = 2 * math.sqrt(2)
    return {"d_min": float(d2) ** 0.5, "dH_lo": rep.d_hausdorff_lo, "dH_hi": rep.d_hausdorff_hi,
            "passed": d2 == 1 and rep.width <= 1e-3 and rep.contains(target)}


def check_connectivity(kmax: int, digit_sets=None, **_) -> dict:
    bad = []
    n = 0
    for w in words_upto(kmax):
        v = iterate(w, digit_sets)
        n += 1
        if components(v).component_count != 1 or not opposite_faces_congruent(v):
            bad.append(w)
    return {"words": n, "failures": bad, "passed": not bad}


def check_sandwich(kmax: int, tol: float = 1e-4, digit_sets=None, measurer=None, **_) -> dict:
    m = measurer or Measurer()
    bad, tight, n = [], True, 0
    for k in range(1, kmax + 1):
        for wa, wb in itertools.combinations(list(words_upto(k, k)), 2):
            r = verify_sandwich(wa, wb, tol, m, digit_sets)
            n += 1
            tight &= r.upper_sqrt5_ok
            if not r.passed:
                bad.append([wa, wb])
    return {"pairs": n, "failures": bad, "tight_upper_all": tight, "passed": not bad}


def check_box_counts(kmax: int, digit_sets=None, budget=None, **_) -> dict:
    rows = [box_count(w, digit_sets, budget) for w in words_upto(kmax)]
    return {"words": len(rows), "formula_only": [r.word for r in rows if r.formula_only], "passed": True}


def check_dimension(kmax: int, digit_sets=None, **_) -> dict:
    out = {}
    for name, word, lam in (("zeros", "0" * kmax, 1), ("ones", "1" * kmax, 0)):
        if kmax < 2:
            break
        fit = estimate_dimension(box_count_series(word, digit_sets=digit_sets))
        out[name] = {"slope": fit.slope, "value": dimension_formula(lam, digit_sets),
                     "ok": abs(fit.slope - dimension_formula(lam, digit_sets)) <= 1e-12}
    even = list(range(2, max(kmax, 4) + 1, 2))
    fit = estimate_dimension(box_count_series(":01", depths=even, digit_sets=digit_sets))
    half = dimension_formula(0.5, digit_sets)
    out["alternating"] = {"slope": fit.slope, "value": half, "ok": abs(fit.slope - half) <= 1e-12}
    out["passed"] = all(v["ok"] for v in out.values())
    return out


def check_dendrite(**_) -> dict:
    c, f = dendrite_conditions(make_cross()), dendrite_conditions(make_frame())
    ok = c.all_conditions and c.max_graph_degree == 6
    ok &= not f.intersection_graph_is_tree and not f.avoids_edges
    return {"cross": c.all_conditions, "cross_max_degree": c.max_graph_degree,
            "frame": f.all_conditions, "passed": bool(ok)}


def check_torus(kmax: int, budget=None, **_) -> dict:
    rows = []
    for k in range(1, min(kmax, 3) + 1):
        v = full_iterate(k)
        lab = components(v, "torus")
        wraps = wraps_torus(lab, v)
        comp = complement_components(v, "torus", budget).component_count
        rows.append({"k": k, "components": lab.component_count, "all_wrap": bool(wraps.all()),
                     "complement_components": comp,
                     "ok": lab.component_count == 2**k and bool(wraps.all()) and comp == 1})
    return {"depths": rows, "passed": all(r["ok"] for r in rows)}


def check_holder(kmax: int, tol: float = 1e-4, digit_sets=None, measurer=None, **_) -> dict:
    rep = holder_check(kmax, tol, measurer, digit_sets)
    conj = conjugacy_holds(8)
    sep = min_separation(kmax) >= 3 ** -kmax if kmax else True
    return {"k": kmax, "c1": rep.c1, "c2": rep.c2, "exponent_forward": rep.exponent_forward,
            "exponent_backward": rep.exponent_backward, "conjugacy": conj, "injective": bool(sep),
            "passed": rep.passed and conj and bool(sep)}


def check_symmetry(kmax: int, digit_sets=None, **_) -> dict:
    bad = []
    for w in words_upto(min(kmax, 3)):
        v = iterate(w, digit_sets)
        for sym in cube_symmetries():
            img = VoxelSet(apply_symmetry(v.coords, sym, v.grid_size), v.depth, v.base)
            if img != v:
                bad.append(w)
                break
    return {"failures": bad, "passed": not bad}


_RUNNERS = {name: globals()[f"check_{name}"] for name in CHECKS}


def run_checks(names=CHECKS, kmax: int = 3, tol: float = 1e-4, digit_sets=None, budget=None) -> dict:
    m = Measurer()
    results = {}
    for name in names:
        if name not in _RUNNERS:
            raise ValueError(f"unknown check {name!r}")
        if digit_sets is not None and name in BUILTIN_ONLY:
            results[name] = {"skipped": True, "passed": True}
            continue
        results[name] = _RUNNERS[name](kmax=kmax, tol=tol, digit_sets=digit_sets, budget=budget, measurer=m)
    return results

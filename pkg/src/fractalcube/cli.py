"""Command-line front end.

Every subcommand prints one JSON document (schema 1, sorted keys, floats at
fixed precision) to stdout or ``--out``. Exit status: 0 when all requested
checks pass, 1 on a failed check or a resource limit, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .digitset import DigitSet, make_cross, make_frame
from .voxel import BUDGET_ENV, BudgetExceeded, VoxelSet, WordSpec, check_cells, check_word, default_digit_sets

SCHEMA = 1
PRECISION = 12
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    words: list = field(default_factory=list)
    depth: int | None = None
    kmax: int | None = None
    tol: float = 1e-4
    budget: int | None = None
    out: Path | None = None
    digit_files: list = field(default_factory=list)
    threads: int = 1

    def validate(self) -> None:
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be positive")
        for k in (self.depth, self.kmax):
            if k is not None and k < 0:
                raise ValueError("depths must be >= 0")

    def digit_sets(self):
        return load_digit_sets(self.digit_files)


def load_digit_sets(specs) -> tuple[DigitSet, DigitSet] | None:
    """``--digits-file`` values: ``PATH`` fills letters 0 then 1 in order; ``0=PATH``/``1=PATH`` pick one."""
    if not specs:
        return None
    sets = dict(enumerate(default_digit_sets()))
    free = 0
    for spec in specs:
        letter, sep, path = spec.partition("=")
        if sep and letter in ("0", "1"):
            sets[int(letter)] = DigitSet.load(path)
        else:
            if free > 1:
                raise ValueError("at most two digit files (letters 0 and 1)")
            sets[free] = DigitSet.load(spec)
            free += 1
    if sets[0].base != sets[1].base:
        raise ValueError("both digit sets need the same base")
    return sets[0], sets[1]


def _clean(x):
    """JSON-ready copy with floats at fixed precision; NaN and inf become null."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.{PRECISION}g}") if math.isfinite(x) else None
    return x


def dumps(payload: dict) -> str:
    body = {"schema": SCHEMA, **payload}
    return json.dumps(_clean(body), sort_keys=True, indent=2) + "\n"


def _emit(payload: dict, out: Path | None) -> None:
    text = dumps(payload)
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _word_spec(text: str) -> WordSpec:
    try:
        return WordSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _word(text: str) -> str:
    try:
        return check_word(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _word_pair(text: str) -> tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two words separated by a comma")
    a, b = (_word(p) for p in parts)
    if len(a) != len(b):
        raise argparse.ArgumentTypeError("words must have equal length")
    if a == b:
        raise argparse.ArgumentTypeError("words must differ")
    return a, b


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _prefix(spec: WordSpec, depth: int | None) -> str:
    """Finite words are used as given, or repeated periodically when a larger depth is asked for."""
    if depth is None:
        if spec.periodic:
            raise ValueError("a periodic word needs --depth")
        return spec.preperiod
    if not spec.periodic and depth > len(spec.preperiod):
        if not spec.preperiod:
            raise ValueError("cannot extend the empty word")
        spec = WordSpec("", spec.preperiod)
    return spec.prefix(depth)


def _check_budget(word: str, digit_sets, budget) -> None:
    from .dimension import formula_count

    check_cells(formula_count(word, digit_sets), budget)


# subcommands -------------------------------------------------------------

def cmd_gen(args, cfg: RunConfig) -> int:
    from .dimension import formula_count
    from .voxel import iterate

    ds = cfg.digit_sets()
    word = _prefix(args.word, args.depth)
    _check_budget(word, ds, cfg.budget)
    v = iterate(word, ds, cfg.budget)
    if args.save:
        v.save(args.save, weld=args.weld)
    _emit({"command": "gen", "word": word, "depth": v.depth, "cells": len(v),
           "formula_cells": formula_count(word, ds), "saved": str(args.save) if args.save else None,
           "passed": len(v) == formula_count(word, ds)}, cfg.out)
    return EXIT_OK if len(v) == formula_count(word, ds) else EXIT_FAIL


def cmd_components(args, cfg: RunConfig) -> int:
    from .topology import complement, components, opposite_faces_congruent, wraps_torus
    from .voxel import full_iterate, iterate

    ds = cfg.digit_sets()
    if args.full is not None:
        v = full_iterate(args.full, ds, cfg.budget)
        label = f"full:{args.full}"
    else:
        word = _prefix(args.word, args.depth)
        _check_budget(word, ds, cfg.budget)
        v = iterate(word, ds, cfg.budget)
        label = word
    target = complement(v, cfg.budget) if args.complement else v
    lab = components(target, args.mode)
    out = {"command": "components", "set": label, "mode": args.mode, "complement": args.complement,
           "cells": len(target), "component_count": lab.component_count,
           "largest": max(lab.sizes) if lab.sizes else 0}
    if args.mode == "torus":
        w = wraps_torus(lab, target)
        out["wrapping"] = int(w.all(axis=1).sum())
    if not args.complement:
        out["opposite_faces_congruent"] = opposite_faces_congruent(v)
    _emit(out, cfg.out)
    return EXIT_OK


def cmd_torus(args, cfg: RunConfig) -> int:
    from .topology import complement_components, components, winding_rank, wraps_torus
    from .voxel import full_iterate

    ds = cfg.digit_sets()
    rows, ok = [], True
    for k in range(1, args.kmax + 1):
        v = full_iterate(k, ds, cfg.budget)
        lab = components(v, "torus")
        wraps = wraps_torus(lab, v)
        ranks = winding_rank(lab, v)
        comp = complement_components(v, "torus", cfg.budget).component_count
        row = {"k": k, "cells": len(v), "components": lab.component_count,
               "all_wrap_xyz": bool(wraps.all()), "min_winding_rank": int(ranks.min()),
               "complement_components": comp}
        if ds is None:
            row["expected_components"] = 2**k
            row["passed"] = lab.component_count == 2**k and bool(wraps.all()) and comp == 1
            ok &= row["passed"]
        rows.append(row)
    _emit({"command": "torus", "depths": rows, "passed": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_distance(args, cfg: RunConfig) -> int:
    from .metric import verify_sandwich

    wa, wb = args.words
    r = verify_sandwich(wa, wb, cfg.tol, digit_sets=cfg.digit_sets())
    out = {"command": "distance", "tol": cfg.tol, **r.as_dict(), "passed": r.passed}
    out["d_min_sq"] = r.d_min_sq
    _emit(out, cfg.out)
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_boxdim(args, cfg: RunConfig) -> int:
    from .dimension import summarize

    ds = cfg.digit_sets()
    spec = args.word
    kmax = args.kmax if args.kmax is not None else (None if spec.periodic else len(spec.preperiod))
    if kmax is None:
        raise ValueError("a periodic word needs --kmax")
    series, summary = summarize(spec, kmax, ds, cfg.budget, generate=not args.formula_only)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "N", "exponent"])
    for k, n, e in series.rows():
        writer.writerow([k, n, f"{e:.{PRECISION}f}"])
    csv_path = args.csv
    if csv_path is None and cfg.out is not None:
        csv_path = cfg.out.with_suffix(".csv")
    if csv_path is not None:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(buf.getvalue())
    if args.figure:
        from .plotting import plot_box_counts

        plot_box_counts({str(spec): series}, args.figure)
    out = {"command": "boxdim", **summary.as_dict(), "kmax": kmax,
           "depths": [k for k, _ in series.entries],
           "formula_only": any(series.formula_only) if not args.formula_only else True,
           "csv": str(csv_path) if csv_path else None,
           "rows": [{"k": k, "N": str(n), "exponent": e, "generated": not flag}
                    for (k, n, e), flag in zip(series.rows(), series.formula_only)]}
    _emit(out, cfg.out)
    return EXIT_OK


def cmd_dendrite(args, cfg: RunConfig) -> int:
    from .topology import dendrite_conditions

    ds = cfg.digit_sets()
    sets = {"0": ds[0], "1": ds[1]} if ds else {"cross": make_cross(), "frame": make_frame()}
    out, ok = {"command": "dendrite"}, True
    for name, d in sets.items():
        r = dendrite_conditions(d)
        out[name] = {"one_contact_per_face": r.one_contact_per_face, "avoids_edges": r.avoids_edges,
                     "intersection_graph_is_tree": r.intersection_graph_is_tree,
                     "max_graph_degree": r.max_graph_degree, "edges": r.edge_count,
                     "face_contacts": r.face_contacts, "all_conditions": r.all_conditions}
    if ds is None:
        ok = out["cross"]["all_conditions"] and out["cross"]["max_graph_degree"] == 6
        ok &= not out["frame"]["intersection_graph_is_tree"] and not out["frame"]["avoids_edges"]
        out["passed"] = ok
    _emit(out, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_holder(args, cfg: RunConfig) -> int:
    from .hyperspace import holder_check

    rep = holder_check(args.kmax, cfg.tol, digit_sets=cfg.digit_sets(), max_len=args.max_len)
    if args.figure:
        from .plotting import plot_holder

        plot_holder(rep, args.figure)
    _emit({"command": "holder", **rep.as_dict()}, cfg.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args, cfg: RunConfig) -> int:
    from .verify import CHECKS, run_checks

    names = list(CHECKS) if args.all or not args.check else args.check
    results = run_checks(names, cfg.kmax, cfg.tol, cfg.digit_sets(), cfg.budget)
    ok = all(r["passed"] for r in results.values())
    _emit({"command": "verify", "kmax": cfg.kmax, "tol": cfg.tol, "checks": results, "passed": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(args, cfg: RunConfig) -> int:
    from .voxel import iterate

    ds = cfg.digit_sets()
    word = _prefix(args.word, args.depth)
    _check_budget(word, ds, cfg.budget)
    v = iterate(word, ds, cfg.budget)
    fmt = args.format
    if cfg.out is None:
        if fmt == "rle":
            raise ValueError("binary RLE output needs --out")
        sys.stdout.write(v.to_obj(args.weld) if fmt == "obj" else v.to_csv())
    else:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        v.save(cfg.out, fmt, weld=args.weld)
        sys.stderr.write(f"wrote {len(v)} cells to {cfg.out}\n")
    return EXIT_OK


def cmd_figures(args, cfg: RunConfig) -> int:
    from .dimension import box_count_series, dimension_formula
    from .hyperspace import holder_check
    from .plotting import plot_box_counts, plot_holder, render_voxels
    from .voxel import iterate

    outdir = Path(args.dir)
    ds = cfg.digit_sets()
    d0, d1 = ds or default_digit_sets()
    files = {}
    files["digits_0"] = render_voxels(VoxelSet.from_digits(d0), outdir / "digits_0.png", "D0 + I")
    files["digits_1"] = render_voxels(VoxelSet.from_digits(d1), outdir / "digits_1.png", "D1 + I")
    for word in ("000", "11", _prefix(WordSpec("", "01"), args.depth)):
        _check_budget(word, ds, cfg.budget)
        files[f"iterate_{word}"] = render_voxels(iterate(word, ds, cfg.budget), outdir / f"iterate_{word}.png",
                                                 f"F_{word}")
    k = args.kmax
    series = {
        "0^k": box_count_series("0" * k, digit_sets=ds, generate=False),
        "1^k": box_count_series("1" * k, digit_sets=ds, generate=False),
        "(01)^k": box_count_series(":01", depths=list(range(2, k + 1, 2)) or [2, 4], digit_sets=ds,
                                   generate=False),
    }
    ref = {"lambda=1/2": dimension_formula(0.5, ds)}
    files["box_counts"] = plot_box_counts(series, outdir / "box_counts.png", ref)
    rep = holder_check(args.holder_k, cfg.tol, digit_sets=ds)
    files["holder"] = plot_holder(rep, outdir / "holder.png")
    _emit({"command": "figures", "files": {k: str(v) for k, v in files.items()}}, cfg.out)
    return EXIT_OK


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits-file", action="append", default=[], metavar="[LETTER=]PATH",
                        help="digit set file replacing letter 0, then letter 1 (repeatable)")
    common.add_argument("--budget", type=int, default=None,
                        help=f"cell budget (default {BUDGET_ENV} or 2e8)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker count (work is vectorized; kept for interface parity)")
    common.add_argument("--tol", type=_positive_float, default=1e-4, help="Hausdorff bracket width")
    common.add_argument("--out", type=Path, default=None, help="write the JSON report here")

    p = argparse.ArgumentParser(prog="fractalcube", description="Iterates of a mixed fractal cube and checks on them.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate one iterate")
    g.add_argument("--word", type=_word_spec, required=True)
    g.add_argument("--depth", type=_nonneg_int)
    g.add_argument("--save", type=Path, help="also write cells (.csv, .rle, .obj)")
    g.add_argument("--weld", action="store_true")

    c = sub.add_parser("components", parents=[common], help="label face-connected components")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", type=_word_spec)
    src.add_argument("--full", type=_nonneg_int, metavar="K", help="union over all words of length K")
    c.add_argument("--depth", type=_nonneg_int)
    c.add_argument("--mode", choices=("plain", "torus"), default="plain")
    c.add_argument("--complement", action="store_true")

    t = sub.add_parser("torus", parents=[common], help="periodic components and complement")
    t.add_argument("--kmax", type=_nonneg_int, default=3)

    d = sub.add_parser("distance", parents=[common], help="distance bounds for two words")
    d.add_argument("--words", type=_word_pair, required=True, metavar="W1,W2")

    b = sub.add_parser("boxdim", parents=[common], help="box counts and dimension fit")
    b.add_argument("--word", type=_word_spec, required=True, help="finite word or PRE:PERIOD")
    b.add_argument("--kmax", type=_nonneg_int)
    b.add_argument("--csv", type=Path)
    b.add_argument("--figure", type=Path)
    b.add_argument("--formula-only", action="store_true")

    sub.add_parser("dendrite", parents=[common], help="digit-level dendrite conditions")

    h = sub.add_parser("holder", parents=[common], help="bi-Hölder check against the Cantor coding")
    h.add_argument("--kmax", type=_nonneg_int, default=4)
    h.add_argument("--max-len", type=_nonneg_int, default=4, help="refuse longer words")
    h.add_argument("--figure", type=Path)

    v = sub.add_parser("verify", parents=[common], help="run aggregate checks")
    v.add_argument("--all", action="store_true")
    v.add_argument("--check", action="append", metavar="NAME")
    v.add_argument("--kmax", type=_nonneg_int, default=3)

    e = sub.add_parser("export", parents=[common], help="write an iterate as OBJ, CSV or RLE")
    e.add_argument("--word", type=_word_spec, required=True)
    e.add_argument("--depth", type=_nonneg_int)
    e.add_argument("--format", choices=("obj", "csv", "rle"), default="obj")
    e.add_argument("--weld", action="store_true")

    f = sub.add_parser("figures", parents=[common], help="render figures to a directory")
    f.add_argument("--dir", default="figures")
    f.add_argument("--depth", type=_nonneg_int, default=3, help="depth of the alternating iterate")
    f.add_argument("--kmax", type=_nonneg_int, default=6, help="depths for the box-count plot")
    f.add_argument("--holder-k", type=_nonneg_int, default=3)
    return p


COMMANDS = {
    "gen": cmd_gen,
    "components": cmd_components,
    "torus": cmd_torus,
    "distance": cmd_distance,
    "boxdim": cmd_boxdim,
    "dendrite": cmd_dendrite,
    "holder": cmd_holder,
    "verify": cmd_verify,
    "export": cmd_export,
    "figures": cmd_figures,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        subcommand=args.command,
        depth=getattr(args, "depth", None),
        kmax=getattr(args, "kmax", None),
        tol=args.tol,
        budget=args.budget,
        out=args.out,
        digit_files=args.digits_file,
        threads=args.threads,
    )
    if args.command == "verify":
        from .verify import CHECKS

        unknown = [c for c in args.check or [] if c not in CHECKS]
        if unknown:
            parser.error(f"unknown check(s) {unknown}; choose from {', '.join(CHECKS)}")
    try:
        cfg.validate()
        return COMMANDS[args.command](args, cfg)
    except BudgetExceeded as exc:
        _emit({"command": args.command, "status": "budget_exceeded", "error": str(exc), "passed": False}, cfg.out)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"fractalcube: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

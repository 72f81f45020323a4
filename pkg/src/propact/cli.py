"""Command-line front end.

Every subcommand prints one JSON document::

    {"schema": 1, "command": ..., "status": "ok" | "failed",
     "payload": {...}, "diagnostics": [...]}

Exit codes: 0 ok, 1 failed (e.g. a table mismatch), 2 bad input,
3 witness search over budget. A negative verdict is still status ok.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import drift, orbits, properness, roots

SCHEMA = 1
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _float_rows(text: str) -> list[list[float]]:
    try:
        return [[float(x) for x in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError:
        raise UsageError(f"expected rows like '1,0,0;0,1,0', got {text!r}")


def _root_type(kind: str, m: int) -> roots.RootType:
    try:
        return roots.RootType(kind, m)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_orbits(args) -> tuple[dict, list[str], bool]:
    rt = _root_type(args.type, args.m)
    records = []
    if rt.kind == "B":
        for d in orbits.enumerate_partitions_B(rt.m):
            seq = orbits.multiplicity_sequence_from_partition(d, rt.m)
            records.append(
                {"partition": list(d.parts), "neutral_element": list(orbits.neutral_element_B(d, rt.m)), "a": list(seq.a)}
            )
    else:
        for d in orbits.enumerate_partitions_A(rt.m):
            records.append({"partition": list(d.parts), "neutral_element": list(orbits.neutral_element_A(d, rt.m))})
    return {"type": rt.kind, "m": rt.m, "count": len(records), "orbits": records}, [], True


def cmd_decide(args) -> tuple[dict, list[str], bool]:
    rt = _root_type(args.type, args.m)
    if not args.functional:
        raise UsageError("give at least one --functional")
    funcs = [_int_list(f) for f in args.functional]
    for c in funcs:
        if len(c) != rt.m:
            raise UsageError(f"functional {list(c)} has length {len(c)}, expected {rt.m}")
    H = roots.LinearSubspace.kernel(rt, funcs)
    verdict = properness.decide_psl2r(rt, H, threads=args.threads)
    rank_h = H.dim
    payload = {
        "type": rt.kind,
        "m": rt.m,
        "functionals": [list(c) for c in funcs],
        "psl2r": verdict.answer,
        "pfree": roots.benoist_pfree(rt, H),
        "pinf": roots.calabi_markus_pinf(rt.rank, rank_h),
        "rank_g": rt.rank,
        "rank_h": rank_h,
        "orbits": [w.to_dict() for w in verdict.witnesses],
    }
    return payload, [], True


def cmd_tables(args) -> tuple[dict, list[str], bool]:
    if args.m not in properness.TABLE_FILTERS:
        raise UsageError("--m must be one of 4, 5, 6, 7")
    rows = properness.reproduce_table(args.m)
    payload = {"m": args.m, "row_count": len(rows), "rows": [r.to_dict() for r in rows]}
    diagnostics: list[str] = []
    ok = True
    if args.verify_paper:
        problems = properness.verify_table(args.m)
        printed = properness.published_tables()[args.m]
        payload["verified"] = not problems
        payload["matched_rows"] = len(printed) if not problems else len(printed) - len(problems)
        diagnostics.extend(problems)
        ok = not problems
    return payload, diagnostics, ok


def cmd_star(args) -> tuple[dict, list[str], bool]:
    if args.m < 4:
        raise UsageError("--m must be >= 4")
    report = properness.star_m_check(args.m, threads=args.threads)
    payload = {
        "m": args.m,
        "all_witnessed": report.all_witnessed,
        "sequence_count": len(report.per_sequence),
        "witnesses": report.rows(),
    }
    return payload, [], True


def _load_gens(path: str) -> drift.GeneratorSet:
    """JSON file: {"matrices": [...], "inverse": [...], "labels"?: [...], "commuting"?: [[i, j], ...]}."""
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read generator file {path}: {e}")
    try:
        return drift.GeneratorSet(
            np.array(spec["matrices"], dtype=float),
            tuple(spec["inverse"]),
            tuple(spec.get("labels", ())),
            frozenset(tuple(p) for p in spec.get("commuting", ())),
        )
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad generator file {path}: {e}")


def _rho_for(spec: str, j: drift.GeneratorSet) -> drift.GeneratorSet:
    if spec == "trivial":
        return drift.trivial_rho(j)
    if spec.startswith("embed:"):
        try:
            N = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad --rho {spec!r}")
        if N < j.n:
            raise UsageError(f"cannot embed O({j.n},1) into O({N},1)")
        return drift.embedded_rho(j, N)
    if spec.startswith("file:"):
        rho = _load_gens(spec.split(":", 1)[1])
        if len(rho) != len(j) or rho.inverse != j.inverse:
            raise UsageError("rho generators are not index-aligned with j")
        return j.with_matrices(rho.matrices)
    raise UsageError(f"unknown --rho {spec!r}")


def cmd_drift(args) -> tuple[dict, list[str], bool]:
    if (args.k is None) == (args.gens is None):
        raise UsageError("give exactly one of --k or --gens")
    try:
        j = drift.right_angled_polygon_generators(args.k) if args.k is not None else _load_gens(args.gens)
    except ValueError as e:
        raise UsageError(str(e))
    rho = _rho_for(args.rho, j)
    try:
        slope = drift.parse_slope(args.line)
    except ValueError:
        raise UsageError(f"bad --line {args.line!r}")
    try:
        fit = drift.drift_statistics(
            j, rho, slope, args.max_len, per_length=args.words_per_length, seed=args.seed, allow_long=args.allow_long
        )
    except drift.WordCeilingError as e:
        raise UsageError(str(e))
    diagnostics = []
    if not fit.exhaustive:
        diagnostics.append(f"word layers subsampled to {args.words_per_length} words per length (seed {args.seed})")
    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                fh.write(fit.to_csv())
        except OSError as e:
            raise UsageError(f"cannot write {args.csv}: {e}")
    payload = fit.summary()
    payload.update({"line_slope": "inf" if math.isinf(slope) else slope, "max_len": args.max_len, "csv": args.csv})
    return payload, diagnostics, True


def cmd_delta(args) -> tuple[dict, list[str], bool]:
    vp, vpp = _float_rows(args.vprime), _float_rows(args.vdoubleprime)
    try:
        d = drift.delta_constant(vp, vpp)
    except ValueError as e:
        raise UsageError(str(e))
    return {"delta": None if math.isinf(d) else d, "degenerate": math.isinf(d)}, [], True


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="propact", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker processes for witness searches (0 = all cores)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled word layers")
    p.add_argument("--output", help="write the JSON document here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("orbits", help="nilpotent orbits and their neutral elements")
    s.add_argument("--type", choices=["A", "B"], required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("decide", help="proper SL(2,R) / free / infinite actions for a_H = ker(functionals)")
    s.add_argument("--type", choices=["A", "B"], required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--functional", action="append", default=[], help="comma-separated ints; repeatable")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("tables", help="witness tables for m = 4..7")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--verify-paper", action="store_true", help="compare against the printed tables")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("star", help="witness search over all multiplicity sequences")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_star)

    s = sub.add_parser("drift", help="Cartan-projection drift of a pair of representations")
    s.add_argument("--k", type=int, help="use the right-angled 2k-gon reflection group")
    s.add_argument("--gens", help="JSON generator file")
    s.add_argument("--rho", default="trivial", help="trivial | embed:<N> | file:<path>")
    s.add_argument("--line", default="inf", help="slope of the line, or inf for the vertical axis")
    s.add_argument("--max-len", type=int, default=10)
    s.add_argument("--words-per-length", type=int, default=drift.DEFAULT_WORDS_PER_LENGTH)
    s.add_argument("--allow-long", action="store_true", help=f"permit --max-len above {drift.DEFAULT_MAX_LEN}")
    s.add_argument("--csv", help="write per-word samples here")
    s.set_defaults(func=cmd_drift)

    s = sub.add_parser("delta", help="linear-space estimate constant for two subspaces")
    s.add_argument("--vprime", required=True, help="basis rows, e.g. '1,0,0;0,1,0'")
    s.add_argument("--vdoubleprime", required=True)
    s.set_defaults(func=cmd_delta)
    return p


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, dict, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    doc = {"schema": SCHEMA, "command": args.command, "status": "ok", "payload": {}, "diagnostics": []}
    code = EXIT_OK
    try:
        payload, diagnostics, ok = args.func(args)
        doc["payload"], doc["diagnostics"] = payload, diagnostics
        if not ok:
            doc["status"], code = "failed", EXIT_FAILED
    except UsageError as e:
        doc["status"], doc["diagnostics"], code = "failed", [str(e)], EXIT_USAGE
    except roots.SearchInfeasible as e:
        doc["status"], doc["diagnostics"], code = "failed", [str(e)], EXIT_INFEASIBLE
    return code, _finite(doc), args


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, doc, args = run(argv)
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

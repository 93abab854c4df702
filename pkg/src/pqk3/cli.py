"""Command-line front end: curves, classify, k3, verify.

Output is deterministic (sorted canonical records) and byte-identical
across worker counts.  Exit codes: 0 success, 1 verification mismatch,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .curves import BoundsError, GroupSpec, enumerate_curves
from .minimal_model import run_pipeline
from .surfaces import full_scan, scan
from .tables import verify_table


def _group_for_order(order: int) -> GroupSpec:
    for p in (3, 5, 7, 11, 13, 17, 19):
        if order == p:
            return GroupSpec(prime=p, doubled=False)
        if order == 2 * p:
            return GroupSpec(prime=p, doubled=True)
    raise BoundsError(f"order {order} is not p or 2p for an odd prime p <= 19")


def _emit(lines, args) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _curve_tsv(record: dict) -> str:
    branch = " ".join(f"{m}:{t}:{c}" for m, t, c in record["branch"])
    alpha = ",".join(str(a) for a in record["alpha"])
    return "\t".join(
        [str(record["order"]), str(record["genus"]), branch, alpha]
    )


def _candidate_tsv(record: dict) -> str:
    sings = " ".join(f"{c}x{d}/{q}" for c, d, q in record["singularities"])
    fields = [
        str(record["order"]),
        str(record["K2"]),
        str(record["euler"]),
        str(record["chi"]),
        str(record["pg"]),
        str(record["h11"]),
        str(record["moduli_dim"]),
        sings,
    ]
    if "is_k3" in record:
        fields.append(str(record["is_k3"]))
        if "fixed_locus" in record:
            fields.append(
                ",".join("-" if v is None else str(v) for v in record["fixed_locus"])
            )
    return "\t".join(fields)


def cmd_curves(args) -> int:
    group = _group_for_order(args.order)
    curves = enumerate_curves(
        group,
        branch_points=args.branch_points,
        max_branch_points=args.max_branch_points,
        require_dim1=not args.all_curves,
        primitive_only=args.primitive_only,
    )
    records = [action.to_json_dict() for action, _profile in curves]
    if args.format == "json":
        lines = [json.dumps(r, sort_keys=True) for r in records]
    else:
        lines = [_curve_tsv(r) for r in records]
    _emit(lines, args)
    return 0


def _classified(args):
    group = _group_for_order(args.order)
    if args.t1 is None and args.t2 is None:
        return full_scan(group, jobs=args.jobs)
    if args.t1 is None or args.t2 is None:
        raise BoundsError("--t1 and --t2 must be given together")
    return scan(group, args.t1, args.t2)


def cmd_classify(args) -> int:
    candidates = _classified(args)
    records = [c.to_json_dict() for c in candidates]
    if args.format == "json":
        lines = [json.dumps(r, sort_keys=True) for r in records]
    else:
        lines = [_candidate_tsv(r) for r in records]
    _emit(lines, args)
    return 0


def cmd_k3(args) -> int:
    candidates = _classified(args)
    lines = []
    for cand in candidates:
        if not cand.is_k3_candidate:
            continue
        result = run_pipeline(cand)
        record = result.to_json_dict()
        if args.format == "json":
            lines.append(json.dumps(record, sort_keys=True))
        else:
            lines.append(_candidate_tsv(record))
    _emit(lines, args)
    return 0


def _parse_rows(value):
    if value is None:
        return None, None
    if value.startswith("p="):
        return None, int(value[2:])
    return [int(v) for v in value.split(",")], None


def cmd_verify(args) -> int:
    rows, prime = _parse_rows(args.rows)
    report = verify_table(args.table, rows=rows, prime=prime)
    lines = []
    if args.format == "json":
        lines.append(json.dumps(report.to_json_dict(), sort_keys=True))
    else:
        for row in report.rows:
            for cell in row.cells:
                lines.append(
                    "\t".join(
                        [
                            f"table{report.table}",
                            f"row{row.row}",
                            f"p{row.p}",
                            cell.name,
                            cell.status,
                            json.dumps(cell.printed),
                            json.dumps(cell.derived),
                        ]
                    )
                )
            for note in row.notes:
                lines.append(f"table{report.table}\trow{row.row}\tnote\t{note}")
    summary = (
        f"rows={len(report.rows)} "
        f"matches={sum(1 for r in report.rows for c in r.cells if c.status == 'match')} "
        f"mismatches={report.mismatch_count} "
        f"quarantined={sum(len(r.quarantined) for r in report.rows)}"
    )
    lines.append(summary if args.format == "tsv" else json.dumps({"summary": summary}))
    _emit(lines, args)
    return 0 if report.mismatch_count == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqk3",
        description=(
            "classify product-quotient surfaces for cyclic groups of order "
            "p or 2p and decide which minimal models are K3"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "tsv"), default="json")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("curves", help="enumerate curve actions")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--branch-points", type=int, default=None)
    sp.add_argument("--max-branch-points", type=int, default=None)
    sp.add_argument("--primitive-only", action="store_true")
    sp.add_argument(
        "--all-curves",
        action="store_true",
        help="drop the one-dimensional-eigenspace filter",
    )
    common(sp)
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("classify", help="list p_g=1, q=0 pairs")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--t1", type=int, default=None)
    sp.add_argument("--t2", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("k3", help="run the full K3 pipeline")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--t1", type=int, default=None)
    sp.add_argument("--t2", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_k3)

    sp = sub.add_parser("verify", help="check the golden tables")
    sp.add_argument("--table", type=int, choices=(1, 2), required=True)
    sp.add_argument("--rows", default=None, help="'p=3' or comma-separated row numbers")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (BoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

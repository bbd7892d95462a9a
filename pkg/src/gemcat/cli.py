"""Command-line interface: generation, invariants, classification,
reduction, ingestion and Table-1-style summaries.

Exit codes: 0 success, 1 domain error, 2 input format error.  All outputs
use fixed sort orders so re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classification import classify, format_report, label_classes, partition_report
from .code import canonical_form, code, parse_code
from .errors import FormatError, GemError
from .generation import (
    generate_catalogue,
    generate_s3,
    read_catalogue,
    write_catalogue,
)
from .graph import format_gem, parse_gem
from .ingest import barycentric_gem, crystallize, parse_facet_complex
from .moves import reduce_gem
from .topology import invariant_record, record_line


def _default_jobs():
    env = os.environ.get("GEMCAT_JOBS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _parse_seed_range(text):
    lo, _, hi = text.partition("..")
    return int(lo), int(hi)


def _read_gem_file(path):
    with open(path) as fh:
        return parse_gem(fh.read())


def _write(path, text):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen_s3(args):
    graphs = generate_s3(args.order)
    write_catalogue(args.output, args.order, "s3", [code(g) for g in graphs])
    print(f"order {args.order}: {len(graphs)} S^3 gems -> {args.output}")
    return 0


def cmd_gen4(args):
    seeds = None
    if args.seeds:
        _order, kind, codes = read_catalogue(args.seeds)
        if kind != "s3":
            raise FormatError(f"seed file has kind {kind!r}, expected 's3'", line=1)
        seeds = [parse_code(c) for c in codes]
    seed_range = _parse_seed_range(args.seed_range) if args.seed_range else None
    bip, nonbip = generate_catalogue(
        args.order,
        seeds=seeds,
        jobs=args.jobs,
        checkpoint=args.checkpoint,
        seed_range=seed_range,
    )
    write_catalogue(
        args.output + ".bipartite", args.order, "bipartite", [code(g) for g in bip]
    )
    write_catalogue(
        args.output + ".nonbipartite",
        args.order,
        "nonbipartite",
        [code(g) for g in nonbip],
    )
    print(
        f"order {args.order}: {len(bip)} bipartite, {len(nonbip)} non-bipartite"
        f" -> {args.output}.(non)bipartite"
    )
    return 0


def cmd_invariants(args):
    _order, _kind, codes = read_catalogue(args.input)
    lines = []
    for c in sorted(codes):
        g = parse_code(c)
        lines.append(record_line(c, invariant_record(g)))
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_classify(args):
    graphs = []
    for path in args.input:
        _order, _kind, codes = read_catalogue(path)
        graphs.extend(parse_code(c) for c in sorted(codes))
    part = classify(graphs, budget=args.budget, passes=args.passes, jobs=args.jobs)
    if args.reps:
        reps = {}
        with open(args.reps) as fh:
            for ln in fh:
                if ln.strip():
                    label, rep_code = ln.split(None, 1)
                    reps[label] = rep_code.strip()
        label_classes(part, reps, fallback=args.fallback_label)
    _write(args.output, format_report(partition_report(part)))
    return 0


def cmd_reduce(args):
    g = _read_gem_file(args.input)
    reduced, h_or, h_non = reduce_gem(g)
    out = format_gem(reduced) + f"# handles orientable={h_or} nonorientable={h_non}\n"
    _write(args.output, out)
    return 0


def cmd_convert(args):
    with open(args.input) as fh:
        K = parse_facet_complex(fh.read())
    g = barycentric_gem(K)
    if args.crystallize:
        g, h_or, h_non = crystallize(g)
        g = canonical_form(g)
    _write(args.output, format_gem(g))
    return 0


def cmd_code(args):
    g = _read_gem_file(args.input)
    print(code(g))
    return 0


def cmd_summary(args):
    by_order = {}
    for path in args.files:
        order, kind, codes = read_catalogue(path)
        by_order.setdefault(order, {})[kind] = len(codes)
    rows = ["order  #S      #C      #C~"]
    for order in sorted(by_order):
        counts = by_order[order]
        rows.append(
            f"{order:<6d} {counts.get('s3', '-'):<7} "
            f"{counts.get('bipartite', '-'):<7} {counts.get('nonbipartite', '-')}"
        )
    print("\n".join(rows))
    if args.classes:
        with open(args.classes) as fh:
            records = [json.loads(ln) for ln in fh if ln.strip()]
        print("\nclass  label  size  min_order  k")
        for rec in records:
            orders = [int(c.split(":")[1]) for c in rec["members"]]
            min_order = min(orders)
            k = min_order // 2 - 1
            label = rec["label"] or "?"
            print(f"{rec['class_id'][:18]:<20} {label:<12} {rec['size']:<5d} {min_order:<9d} {k}")
            if rec["label"]:
                # handle manifolds are not catalogued; report the derived
                # gem-complexity of label # H via k = p - 1 + n*h (h = 1)
                print(f"{'':20} {label + '#H':<12} {'-':<5} {'-':<9} {k + 4}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="gemcat")
    ap.add_argument("--jobs", type=int, default=_default_jobs())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-s3", help="generate the S^3-gem seed set")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen_s3)

    p = sub.add_parser("gen4", help="generate the order-2p catalogues")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--seeds", help="seed catalogue file (kind=s3)")
    p.add_argument("--checkpoint", help="checkpoint directory")
    p.add_argument("--seed-range", help="A..B shard of the seed list")
    p.add_argument("-o", "--output", required=True, help="output file prefix")
    p.set_defaults(func=cmd_gen4)

    p = sub.add_parser("invariants", help="invariant records for a catalogue")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", help="partition catalogues into PL classes")
    p.add_argument("-i", "--input", nargs="+", required=True)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--passes", type=int, default=8)
    p.add_argument("--reps", help="representative labels: '<label> <code>' per line")
    p.add_argument("--fallback-label", help="label for a single leftover class")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="reduce a gem to rigid dipole-free form")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("convert", help="facet list -> barycentric gem")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--crystallize", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("code", help="canonical code of a gem file")
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("summary", help="Table-1-style counts from catalogue files")
    p.add_argument("files", nargs="+")
    p.add_argument("--classes", help="partition report for the class table")
    p.set_defaults(func=cmd_summary)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except GemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

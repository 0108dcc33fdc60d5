"""Command line: build, query, gen-patterns, bench, inspect."""

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import bench, container, patterns
from .index import SCHEMES, build_index

log = logging.getLogger("csaindex")


def _cap(value):
    return None if value.lower() in ("none", "inf", "0") else int(value)


def _read_text(path, int64=False):
    with open(path, "rb") as fh:
        data = fh.read()
    if int64:
        if len(data) % 8:
            raise SystemExit(f"{path}: length is not a multiple of 8 bytes")
        return np.frombuffer(data, dtype="<i8").astype(np.int64)
    return data


def _build_kwargs(args):
    return dict(h=args.h, a=args.a, ref_size=args.ref_size, seed=args.seed, run_sample_mode=args.run_samples)


def cmd_build(args):
    text = _read_text(args.text, args.int64)
    t0 = time.perf_counter()
    ix = build_index(text, args.scheme, **_build_kwargs(args))
    secs = time.perf_counter() - t0
    out = args.output or f"{args.text}.{args.scheme}.csai"
    size = container.save(ix, out)
    info = ix.summary()
    info.update(file=out, file_bytes=size, build_seconds=round(secs, 3))
    print(json.dumps(info, sort_keys=True))
    return 0


def cmd_query(args):
    ix = container.load(args.index, args.scheme)
    pats, _ = patterns.read_patterns(args.patterns)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        for p in pats:
            if args.mode == "count":
                out.write(f"{ix.count(p)}\n")
            else:
                out.write(" ".join(map(str, ix.locate(p).tolist())) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_gen_patterns(args):
    text = _read_text(args.text)
    pats, m = patterns.generate(text, args.count, args.length, args.regime, args.seed)
    out = args.output or f"{args.text}.{args.regime}.{m}.pat"
    patterns.write_patterns(out, pats, m, args.seed, args.regime)
    print(f"{len(pats)} patterns of length {m} written to {out}", file=sys.stderr)
    return 0 if pats else 1


def _is_index(path):
    with open(path, "rb") as fh:
        return fh.read(4) == container.MAGIC


def cmd_bench(args):
    sets = []
    for path in args.patterns:
        pats, head = patterns.read_patterns(path)
        sets.append((pats, head.get("regime", path)))
    rows = []
    for path in args.inputs:
        if _is_index(path):
            built = [(container.load(path), None)]
        else:
            text = _read_text(path, args.int64)
            built = []
            for scheme in args.scheme or SCHEMES:
                t0 = time.perf_counter()
                ix = build_index(text, scheme, **_build_kwargs(args))
                built.append((ix, time.perf_counter() - t0))
        for ix, secs in built:
            for pats, regime in sets:
                rows.append(bench.bench_index(ix, pats, regime, args.repetitions, args.threads, secs))
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        bench.write_csv(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_inspect(args):
    with open(args.index, "rb") as fh:
        buf = fh.read()
    head = container.read_header(buf)
    ix = container.loads(buf)
    info = ix.summary()
    info.update(version=head["version"], file_bytes=len(buf),
                sections={k: v[1] for k, v in head["sections"].items()}, size_report=ix.size_report())
    print(json.dumps(info, indent=2, sort_keys=True))
    return 0


def parser():
    p = argparse.ArgumentParser(prog="csaindex", description="Run-length BWT self-index with compressed suffix arrays")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def build_flags(sp, multi=False):
        if multi:
            sp.add_argument("--scheme", choices=SCHEMES, action="append",
                            help="schemes to build for text inputs (repeatable; default all)")
        else:
            sp.add_argument("--scheme", choices=SCHEMES, default="rlzsa")
        sp.add_argument("--h", type=_cap, default=1 << 13, help="LZ-End phrase cap ('none' = unbounded)")
        sp.add_argument("--a", type=int, default=None, help="copy-start sampling rate")
        sp.add_argument("--ref-size", type=int, default=None, help="RLZ reference target length")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--run-samples", action="store_true", help="LZ-End: anchor at BWT run samples")
        sp.add_argument("--int64", action="store_true", help="input is little-endian 64-bit integers")

    sp = sub.add_parser("build", help="build and serialize an index")
    sp.add_argument("text")
    build_flags(sp)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("query", help="count or locate patterns")
    sp.add_argument("index")
    sp.add_argument("patterns")
    sp.add_argument("--mode", choices=("count", "locate"), default="count")
    sp.add_argument("--scheme", choices=SCHEMES, help="fail unless the index uses this scheme")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("gen-patterns", help="sample a pattern set from a text")
    sp.add_argument("text")
    sp.add_argument("--count", "-n", type=int, default=1000)
    sp.add_argument("--length", "-m", type=int, default=16)
    sp.add_argument("--regime", choices=patterns.REGIMES, default="medium")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_gen_patterns)

    sp = sub.add_parser("bench", help="measure throughput, write CSV")
    sp.add_argument("inputs", nargs="+", help="index files, or texts to build from")
    sp.add_argument("--patterns", "-p", nargs="+", required=True)
    build_flags(sp, multi=True)
    sp.add_argument("--repetitions", type=int, default=3)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("inspect", help="print header and size breakdown")
    sp.add_argument("index")
    sp.set_defaults(func=cmd_inspect)
    return p


def main(argv=None):
    args = parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except container.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

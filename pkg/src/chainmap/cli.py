"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
The coding switches (--mode, --no-skip, --full-recc) are not recorded in
the file, so decode must be invoked with the switches used to encode.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bench as bench_mod
from . import corpus
from .codec import CodecConfig, decode_map, encode_map
from .errors import CodecError
from .imageio import (from_label_map, load_pgm, save_pgm, to_label_map)


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("CHAINMAP_JOBS", "1")))
    except ValueError:
        return 1


def _add_coding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("auto", "ecc", "3ot"), default="auto",
                   help="force one chain-code mode instead of per-region choice")
    p.add_argument("--no-skip", action="store_true",
                   help="disable skip coding of already-traced cracks")
    p.add_argument("--full-recc", action="store_true",
                   help="disable the per-region rare-quadrant flag")


def _config(args) -> CodecConfig:
    return CodecConfig(mode=args.mode, use_skip=not args.no_skip,
                       full_recc=args.full_recc)


def _fail(msg: str) -> int:
    print("error: %s" % msg, file=sys.stderr)
    return 2


def cmd_encode(args) -> int:
    try:
        lm = to_label_map(load_pgm(args.input))
    except (OSError, ValueError) as e:
        return _fail(str(e))
    cfg = _config(args)
    t0 = time.perf_counter()
    data, stats = encode_map(lm, cfg)
    dt = time.perf_counter() - t0
    if not args.no_verify:
        if decode_map(data, cfg) != lm:
            print("FAIL %s: decode does not match input" % args.input,
                  file=sys.stderr)
            return 1
    try:
        with open(args.output, "wb") as f:
            f.write(data)
    except OSError as e:
        return _fail(str(e))
    if args.stats:
        raw = lm.width * lm.height
        print("%s: %dx%d, %d regions (%d border, %d interior)"
              % (args.input, lm.width, lm.height,
                 stats.n_boundary + stats.n_inner,
                 stats.n_boundary, stats.n_inner))
        print("  modes: %d staircase, %d turn; rare flags set: %d"
              % (stats.n_ecc, stats.n_3ot, stats.rare_regions))
        print("  symbols: %d staircase, %d turn; cracks: %d, skipped: %d"
              % (stats.ecc_symbols, stats.t3_symbols,
                 stats.total_edges, stats.skip_edges))
        print("  skip events: %d complete, %d partial, %d empty"
              % (stats.skip_complete, stats.skip_partial, stats.skip_zero))
        print("  contexts: %d staircase, %d turn"
              % (stats.ecc_contexts, stats.t3_contexts))
        print("  %d bytes (%d header + %d payload), %.3f bpp, %.1f ms"
              % (stats.total_bytes, stats.header_bytes, stats.payload_bytes,
                 8.0 * stats.total_bytes / raw, dt * 1e3))
    return 0


def cmd_decode(args) -> int:
    try:
        with open(args.input, "rb") as f:
            data = f.read()
    except OSError as e:
        return _fail(str(e))
    try:
        lm = decode_map(data, _config(args))
    except CodecError as e:
        return _fail("%s: %s" % (args.input, e))
    try:
        save_pgm(args.output, from_label_map(lm))
    except OSError as e:
        return _fail(str(e))
    return 0


def _verify_one(task):
    path, mode, use_skip, full_recc = task
    cfg = CodecConfig(mode=mode, use_skip=use_skip, full_recc=full_recc)
    try:
        lm = to_label_map(load_pgm(path))
        data, _ = encode_map(lm, cfg)
        ok = decode_map(data, cfg) == lm
        raw = lm.width * lm.height * (1 if max(lm.palette) < 256 else 2)
        return path, ok, raw, len(data), ""
    except Exception as e:  # worker must not raise across the pool
        return path, False, 0, 0, str(e)


def _pool_map(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def cmd_verify(args) -> int:
    cfg = _config(args)
    tasks = [(p, cfg.mode, cfg.use_skip, cfg.full_recc) for p in args.inputs]
    results = sorted(_pool_map(_verify_one, tasks, args.jobs))
    bad = 0
    for path, ok, raw, coded, err in results:
        if ok:
            print("ok   %s  %d -> %d bytes (%.2fx)"
                  % (path, raw, coded, raw / coded if coded else 0.0))
        else:
            bad += 1
            print("FAIL %s  %s" % (path, err))
    print("%d/%d verified" % (len(results) - bad, len(results)))
    return 1 if bad else 0


def _ablate_one(path):
    try:
        lm = to_label_map(load_pgm(path))
    except (OSError, ValueError) as e:
        return path, None, str(e)
    sizes = {}
    for name, cfg in (
        ("default", CodecConfig()),
        ("ecc", CodecConfig(mode="ecc")),
        ("3ot", CodecConfig(mode="3ot")),
        ("no-skip", CodecConfig(use_skip=False)),
        ("full-recc", CodecConfig(full_recc=True)),
    ):
        data, _ = encode_map(lm, cfg)
        if decode_map(data, cfg) != lm:
            return path, None, "%s: decode mismatch" % name
        sizes[name] = len(data)
    return path, sizes, ""


def cmd_ablate(args) -> int:
    results = sorted(_pool_map(_ablate_one, list(args.inputs), args.jobs))
    names = ("default", "ecc", "3ot", "no-skip", "full-recc")
    rows = []
    bad = 0
    for path, sizes, err in results:
        if sizes is None:
            bad += 1
            print("FAIL %s  %s" % (path, err), file=sys.stderr)
        else:
            rows.append((path, sizes))
    if rows:
        width = max(len(r[0]) for r in rows)
        print("%-*s %s" % (width, "file", " ".join("%10s" % n for n in names)))
        for path, sizes in rows:
            print("%-*s %s" % (width, path,
                               " ".join("%10d" % sizes[n] for n in names)))
        if args.csv:
            with open(args.csv, "w") as f:
                f.write("file," + ",".join(names) + "\n")
                for path, sizes in rows:
                    f.write(path + "," +
                            ",".join(str(sizes[n]) for n in names) + "\n")
    return 1 if bad else 0


def cmd_bench_shapes(args) -> int:
    rows = bench_mod.run(train=args.train)
    header = ("shape", "F4", "F8", "VCC", "3OT", "ECC",
              "RF8_4", "VCC_5", "3OT_4", "RECC_2")
    print("%-14s %6s %6s %6s %6s %6s %8s %8s %8s %8s" % header)
    tot = [0, 0, 0, 0, 0, 0.0, 0.0, 0.0, 0.0]
    for r in rows:
        print("%-14s %6d %6d %6d %6d %6d %8.0f %8.0f %8.0f %8.0f"
              % (r.name, r.f4, r.f8, r.vcc, r.t3, r.ecc,
                 r.bits_rf8, r.bits_vcc, r.bits_t3, r.bits_recc))
        for k, v in enumerate((r.f4, r.f8, r.vcc, r.t3, r.ecc, r.bits_rf8,
                               r.bits_vcc, r.bits_t3, r.bits_recc)):
            tot[k] += v
    print("%-14s %6d %6d %6d %6d %6d %8.0f %8.0f %8.0f %8.0f"
          % ("total", *tot))
    if args.csv:
        with open(args.csv, "w") as f:
            f.write(",".join(header) + "\n")
            for r in rows:
                f.write("%s,%d,%d,%d,%d,%d,%.1f,%.1f,%.1f,%.1f\n"
                        % (r.name, r.f4, r.f8, r.vcc, r.t3, r.ecc,
                           r.bits_rf8, r.bits_vcc, r.bits_t3, r.bits_recc))
    return 0


def cmd_gen_corpus(args) -> int:
    os.makedirs(args.outdir, exist_ok=True)
    maps = corpus.corpus_maps(count=args.count, seed=args.seed)
    for i, lm in enumerate(maps):
        save_pgm(os.path.join(args.outdir, "map_%04d.pgm" % i),
                 from_label_map(lm))
    print("wrote %d maps to %s" % (len(maps), args.outdir))
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="chainmap",
        description="Lossless contour codec for multi-label maps (PGM in/out)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a PGM label map")
    p.add_argument("input")
    p.add_argument("output")
    _add_coding_flags(p)
    p.add_argument("--no-verify", action="store_true",
                   help="skip the decode-and-compare self check")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("decode", help="decode back to PGM")
    p.add_argument("input")
    p.add_argument("output")
    _add_coding_flags(p)
    p.set_defaults(fn=cmd_decode)

    p = sub.add_parser("verify", help="round-trip PGM files and report")
    p.add_argument("inputs", nargs="+")
    _add_coding_flags(p)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("ablate",
                       help="coded sizes under each switch combination")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_ablate)

    p = sub.add_parser("bench-shapes",
                       help="chain-code comparison table on 28 shapes")
    p.add_argument("--train", action="store_true",
                   help="prime models on half the shapes, report the rest")
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_bench_shapes)

    p = sub.add_parser("gen-corpus", help="write a synthetic PGM corpus")
    p.add_argument("outdir")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=20260814)
    p.set_defaults(fn=cmd_gen_corpus)

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

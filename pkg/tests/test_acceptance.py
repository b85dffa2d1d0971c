"""End-to-end acceptance gates.

Each test checks one required behavior at its stated tolerance and records
one [PASS]/[FAIL] line in the terminal summary.  The shared 1000-map corpus
is generated once per session.
"""

import math
import time

import numpy as np
import pytest

from chainmap import CodecConfig, decode_map, encode_map
from chainmap import bench, corpus
from chainmap.chain import ecc_tokenize
from chainmap.entropy import Model, RangeEncoder
from chainmap.lattice import register_blobs


@pytest.fixture(scope="session")
def corpus_maps():
    return corpus.corpus_maps(1000)


@pytest.fixture(scope="session")
def corpus_run(corpus_maps):
    """Default-config round trip of the whole corpus, timed."""
    results = []
    t0 = time.perf_counter()
    for m in corpus_maps:
        data, stats = encode_map(m)
        ok = decode_map(data) == m
        results.append((ok, stats))
    elapsed = time.perf_counter() - t0
    return elapsed, results


FAMILY_CONFIGS = {
    "auto": CodecConfig(),
    "ecc": CodecConfig(mode="ecc"),
    "3ot": CodecConfig(mode="3ot"),
    "full": CodecConfig(full_recc=True),
    "noskip": CodecConfig(use_skip=False),
}


@pytest.fixture(scope="session")
def family_averages():
    """Per-family corpus averages of coded size under each switch set."""
    families = {
        "silhouette": [corpus.silhouette(240, 180, s) for s in range(6)] +
                      [corpus.silhouette(320, 240, s) for s in range(6)],
        "voronoi": [corpus.voronoi(120, 90, 30, 12, seed=s)
                    for s in range(12)],
        "disks": [corpus.disks(128, 96, 8, 5, seed=s) for s in range(12)],
    }
    out = {}
    for fam, maps in families.items():
        totals = {name: 0 for name in FAMILY_CONFIGS}
        blobs = 0
        for m in maps:
            for name, cfg in FAMILY_CONFIGS.items():
                data, stats = encode_map(m, cfg)
                totals[name] += len(data)
                if name == "auto":
                    blobs += stats.n_boundary + stats.n_inner
        n = len(maps)
        out[fam] = ({name: t / n for name, t in totals.items()}, blobs / n)
    return out


def test_c1_corpus_losslessness_and_speed(corpus_maps, corpus_run, criterion):
    elapsed, results = corpus_run
    n_ok = sum(1 for ok, _ in results if ok)
    dims = [(m.width, m.height) for m in corpus_maps]
    labs = [len(m.palette) for m in corpus_maps]
    spread = (min(min(d) for d in dims) == 1 and
              max(max(d) for d in dims) == 512 and
              min(labs) == 1 and max(labs) == 27)
    ok = n_ok == len(results) == 1000 and elapsed < 60.0 and spread
    criterion(1, ok,
              "%d/%d maps lossless in %.1fs (< 60s), dims 1..512, "
              "labels 1..27" % (n_ok, len(results), elapsed))


def test_c2_context_bound_on_corpus(corpus_maps, corpus_run, criterion):
    worst = max(stats.ecc_contexts for _, stats in corpus_run[1])
    cfg = CodecConfig(mode="ecc")
    for m in corpus_maps:
        _, stats = encode_map(m, cfg)
        worst = max(worst, stats.ecc_contexts)
    criterion(2, worst <= 243 + 9,
              "max staircase contexts %d <= %d" % (worst, 243 + 9))


def test_c3_symbol_counts_vs_plain_chain(corpus_maps, criterion):
    # Disks of radius >= 16: the long-pattern alphabet at least halves the
    # symbol count of the one-crack-per-symbol chain.
    worst_ratio = 0.0
    for r in (16, 24, 32, 48):
        side = 2 * r + 8
        yy, xx = np.indices((side, side))
        mask = ((xx - side / 2 + .5) ** 2 + (yy - side / 2 + .5) ** 2 <= r * r)
        m = corpus.label_map(mask.astype(np.int32))
        _, inner = register_blobs(m)
        blob = inner[0]
        ratio = len(ecc_tokenize(blob.start, blob.dirs)) / len(blob.dirs)
        worst_ratio = max(worst_ratio, ratio)
    # Every contour in the corpus: never more symbols than cracks.
    shorter = True
    for m in corpus_maps:
        boundary, inner = register_blobs(m)
        for blob in boundary + inner:
            if len(ecc_tokenize(blob.start, blob.dirs)) > len(blob.dirs):
                shorter = False
    criterion(3, worst_ratio <= 0.5 and shorter,
              "disk symbol ratio worst %.3f <= 0.5; all corpus contours "
              "have <= one symbol per crack" % worst_ratio)


def test_c4_shape_benchmark_parity(criterion):
    rows = bench.run(train=True)
    assert len(rows) == 14
    t3 = sum(r.bits_t3 for r in rows)
    recc = sum(r.bits_recc for r in rows)
    ratio = recc / t3
    criterion(4, 0.85 <= ratio <= 1.15,
              "trained eval half: relative-staircase %d bits vs turn-code "
              "%d bits, ratio %.3f within 15%%" % (recc, t3, ratio))


def test_c5_mode_choice_never_loses(family_averages, criterion):
    ok = True
    parts = []
    for fam, (avg, blobs) in family_averages.items():
        tol = blobs * 2 / 8  # two bits of flag overhead per region
        good = (avg["auto"] <= avg["ecc"] + tol and
                avg["auto"] <= avg["3ot"] + tol and
                avg["auto"] <= avg["full"])
        ok = ok and good
        parts.append("%s auto=%.1f ecc=%.1f 3ot=%.1f full=%.1f tol=%.1f"
                     % (fam, avg["auto"], avg["ecc"], avg["3ot"],
                        avg["full"], tol))
    criterion(5, ok, "; ".join(parts))


def test_c6_skip_coding_pays_off(family_averages, criterion):
    m = corpus.abutting_rectangles(96, 64, 32)
    with_skip, _ = encode_map(m)
    without, _ = encode_map(m, CodecConfig(use_skip=False))
    rects_ok = len(with_skip) < len(without)

    vor, _ = family_averages["voronoi"]
    vor_ok = vor["auto"] < vor["noskip"]

    _, stats = encode_map(corpus.uniform(512, 512, 12))
    uni_ok = stats.payload_bytes <= 4

    criterion(6, rects_ok and vor_ok and uni_ok,
              "abutting rectangles %d < %d bytes; voronoi avg %.1f < %.1f; "
              "uniform payload %d <= 4 bytes"
              % (len(with_skip), len(without), vor["auto"], vor["noskip"],
                 stats.payload_bytes))


def test_c7_coder_efficiency(criterion):
    r = np.random.default_rng(20260814)
    bits = (r.random(100_000) < 0.9).astype(int)
    p = float(bits.mean())
    empirical = -(p * math.log2(p) + (1 - p) * math.log2(1 - p)) * len(bits)
    enc = RangeEncoder()
    m = Model(2)
    for b in bits:
        enc.encode(m, int(b))
    coded = len(enc.finish()) * 8
    skew_ok = abs(coded / empirical - 1.0) <= 0.05

    enc = RangeEncoder()
    for v in r.integers(0, 36, 1000):
        enc.encode_uniform(int(v), 36)
    amortized = enc.cost_bits() / 1000
    uni_ok = abs(amortized - math.log2(36)) <= 0.1

    criterion(7, skew_ok and uni_ok,
              "p=0.9 stream %d bits vs entropy %.0f (%+.2f%%); uniform-36 "
              "%.3f bits vs %.3f"
              % (coded, empirical, 100 * (coded / empirical - 1),
                 amortized, math.log2(36)))


def test_c8_smooth_figure_budget(criterion):
    m = corpus.disk_union(320, 240, seed=7)
    data1, stats = encode_map(m)
    data2, _ = encode_map(m)
    ok = (len(data1) <= 150 and data1 == data2 and
          decode_map(data1) == m and
          stats.n_boundary == 1 and stats.n_inner == 1)
    criterion(8, ok,
              "320x240 disk-union figure: %d bytes <= 150, deterministic, "
              "lossless" % len(data1))


def test_c9_single_map_latency(criterion):
    m = corpus.disk_union(320, 240, seed=7)
    data, _ = encode_map(m)
    decode_map(data)  # warm caches before timing
    enc_times = []
    dec_times = []
    for _ in range(5):
        t0 = time.perf_counter()
        encode_map(m)
        enc_times.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        decode_map(data)
        dec_times.append(time.perf_counter() - t0)
    enc_ms = sorted(enc_times)[2] * 1e3
    dec_ms = sorted(dec_times)[2] * 1e3
    criterion(9, enc_ms < 50.0 and dec_ms < 25.0,
              "320x240 2-label map: encode %.1fms < 50ms, decode %.1fms "
              "< 25ms" % (enc_ms, dec_ms))

"""Command line round trips, reporting, and exit codes."""

import numpy as np
import pytest

from chainmap.cli import main
from chainmap.imageio import from_label_map, load_pgm, save_pgm, to_label_map
from chainmap import corpus


@pytest.fixture
def sample(tmp_path):
    path = tmp_path / "map.pgm"
    save_pgm(path, from_label_map(corpus.voronoi(48, 40, 8, 5, seed=2)))
    return path


def test_encode_decode_roundtrip(tmp_path, sample, capsys):
    coded = tmp_path / "map.smc"
    back = tmp_path / "back.pgm"
    assert main(["encode", str(sample), str(coded), "--stats"]) == 0
    out = capsys.readouterr().out
    assert "regions" in out and "bytes" in out
    assert coded.stat().st_size > 0
    assert main(["decode", str(coded), str(back)]) == 0
    a = to_label_map(load_pgm(sample))
    b = to_label_map(load_pgm(back))
    assert a == b


def test_encode_with_switches_decodes_with_same(tmp_path, sample):
    coded = tmp_path / "map.smc"
    back = tmp_path / "back.pgm"
    flags = ["--mode", "3ot", "--no-skip"]
    assert main(["encode", str(sample), str(coded)] + flags) == 0
    assert main(["decode", str(coded), str(back)] + flags) == 0
    assert to_label_map(load_pgm(sample)) == to_label_map(load_pgm(back))


def test_verify_reports_and_exit_codes(tmp_path, sample, capsys):
    good2 = tmp_path / "good2.pgm"
    save_pgm(good2, from_label_map(corpus.checkerboard(9, 9, 3, 2)))
    assert main(["verify", str(sample), str(good2)]) == 0
    out = capsys.readouterr().out
    assert out.count("ok ") == 2 and "2/2 verified" in out

    broken = tmp_path / "broken.pgm"
    broken.write_bytes(b"P5\n2 2\n255\nxx")  # raster one byte short
    assert main(["verify", str(sample), str(broken)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "1/2 verified" in out


def test_decode_rejects_garbage(tmp_path, capsys):
    bad = tmp_path / "bad.smc"
    bad.write_bytes(b"not a stream at all")
    assert main(["decode", str(bad), str(tmp_path / "o.pgm")]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_input_is_usage_error(tmp_path, capsys):
    missing = str(tmp_path / "nope.pgm")
    assert main(["encode", missing, str(tmp_path / "o.smc")]) == 2
    capsys.readouterr()
    assert main(["bogus-command"]) == 2


def test_ablate_table_and_csv(tmp_path, sample, capsys):
    csv = tmp_path / "sizes.csv"
    assert main(["ablate", str(sample), "--csv", str(csv)]) == 0
    out = capsys.readouterr().out
    assert "default" in out and "no-skip" in out
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "file,default,ecc,3ot,no-skip,full-recc"
    sizes = [int(v) for v in lines[1].split(",")[1:]]
    assert len(sizes) == 5 and all(v > 0 for v in sizes)
    # Skipping shared cracks must not lose to coding them on this map.
    assert sizes[0] <= sizes[3]


def test_bench_shapes_table(tmp_path, capsys):
    csv = tmp_path / "bench.csv"
    assert main(["bench-shapes", "--train", "--csv", str(csv)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[0] == "shape"
    assert "total" in out
    lines = csv.read_text().strip().splitlines()
    assert len(lines) == 1 + 14  # header + evaluation half


def test_gen_corpus_writes_readable_maps(tmp_path, capsys):
    outdir = tmp_path / "corpus"
    assert main(["gen-corpus", str(outdir), "--count", "5"]) == 0
    files = sorted(outdir.glob("map_*.pgm"))
    assert len(files) == 5
    for f in files:
        img = load_pgm(f)
        assert img.width >= 1 and img.height >= 1
    assert main(["verify"] + [str(f) for f in files]) == 0

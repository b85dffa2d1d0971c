"""Binary PGM (P5) reading and writing.

Only the binary variant is handled.  Reads are tolerant of comments and
arbitrary whitespace in the header; writes are canonical: no comments,
maxval equal to the largest palette sample (at least 1), one byte per
sample below 256 and two big-endian bytes otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LabelMap


@dataclass(frozen=True)
class PgmImage:
    width: int
    height: int
    maxval: int
    samples: np.ndarray  # (height, width), non-negative ints


def _next_token(data: bytes, i: int) -> tuple[bytes, int]:
    n = len(data)
    while i < n:
        c = data[i]
        if c in b" \t\r\n":
            i += 1
        elif c == 0x23:  # '#'
            while i < n and data[i] not in b"\r\n":
                i += 1
        else:
            break
    if i >= n:
        raise ValueError("truncated header")
    j = i
    while j < n and data[j] not in b" \t\r\n":
        j += 1
    return data[i:j], j


def parse_pgm(data: bytes) -> PgmImage:
    if data[:2] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    i = 2
    fields = []
    for _ in range(3):
        tok, i = _next_token(data, i)
        if not tok.isdigit():
            raise ValueError("malformed header field %r" % tok)
        fields.append(int(tok))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ValueError("bad image dimensions")
    if not 1 <= maxval <= 65535:
        raise ValueError("maxval out of range")
    i += 1  # exactly one whitespace byte before the raster
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    need = width * height * dtype.itemsize
    raster = data[i:i + need]
    if len(raster) != need:
        raise ValueError("raster shorter than header promises")
    samples = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    samples = samples.astype(np.int32)
    if int(samples.max(initial=0)) > maxval:
        raise ValueError("sample exceeds maxval")
    return PgmImage(width, height, maxval, samples)


def dump_pgm(img: PgmImage) -> bytes:
    header = b"P5\n%d %d\n%d\n" % (img.width, img.height, img.maxval)
    dtype = np.dtype(">u2") if img.maxval > 255 else np.uint8
    return header + np.ascontiguousarray(img.samples, dtype=dtype).tobytes()


def load_pgm(path) -> PgmImage:
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def save_pgm(path, img: PgmImage) -> None:
    with open(path, "wb") as f:
        f.write(dump_pgm(img))


def to_label_map(img: PgmImage) -> LabelMap:
    palette = np.unique(img.samples)
    labels = np.searchsorted(palette, img.samples).astype(np.int32)
    return LabelMap(labels, tuple(int(v) for v in palette))


def from_label_map(lm: LabelMap) -> PgmImage:
    pal = np.asarray(lm.palette, dtype=np.int32)
    samples = pal[lm.labels]
    maxval = max(int(pal.max(initial=0)), 1)
    return PgmImage(lm.width, lm.height, maxval, samples)

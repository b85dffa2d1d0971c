"""Chain-code comparison bench on single binary shapes.

For a fixed set of 28 hole-free shapes this measures, per contour:
symbol counts for the 4- and 8-direction codes, the corner-count code,
the turn code and the 36-symbol staircase alphabet; and coded sizes for
the context-modeled variants of the last four.  Models persist across
shapes within one run so a training half can prime them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .chain import (ecc_tokenize, f4_symbols, f8_symbols, last_dir,
                    recc_pack, tokenize_3ot, vcc_symbols)
from .codec import _BOUNDARY_PC, _INNER_PC
from .entropy import Model, RangeEncoder
from .lattice import LabelMap, register_blobs

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)


@dataclass
class ShapeRow:
    name: str
    f4: int
    f8: int
    vcc: int
    t3: int
    ecc: int
    bits_rf8: float
    bits_vcc: float
    bits_t3: float
    bits_recc: float


def _disk(r):
    yy, xx = np.indices((2 * r + 1, 2 * r + 1))
    return (xx - r) ** 2 + (yy - r) ** 2 <= r * r


def _square(a):
    return np.ones((a, a), dtype=bool)


def _ellipse(a, b):
    yy, xx = np.indices((2 * b + 1, 2 * a + 1), dtype=np.float64)
    return ((xx - a) / a) ** 2 + ((yy - b) / b) ** 2 <= 1.0


def _diamond(r):
    yy, xx = np.indices((2 * r + 1, 2 * r + 1))
    return np.abs(xx - r) + np.abs(yy - r) <= r


def _star(r0, k, seed=0):
    n = 2 * int(r0 * 1.45) + 1
    c = n // 2
    yy, xx = np.indices((n, n), dtype=np.float64)
    theta = np.arctan2(yy - c, xx - c)
    rad = np.hypot(xx - c, yy - c)
    return rad <= r0 * (1.0 + 0.35 * np.sin(k * theta))


def _blob(size, seed):
    r = np.random.default_rng(seed)
    field = ndimage.gaussian_filter(r.standard_normal((size, size)),
                                    sigma=size / 6.0, mode="nearest")
    mask = field > np.percentile(field, 62)
    lab, n = ndimage.label(mask, structure=_CROSS)
    if n > 1:
        sizes = ndimage.sum_labels(np.ones_like(lab), lab, np.arange(1, n + 1))
        mask = lab == (1 + int(np.argmax(sizes)))
    return ndimage.binary_fill_holes(mask)


def shape_set():
    """28 deterministic hole-free shapes, (name, mask)."""
    shapes = []
    for r in (4, 8, 16, 24, 32, 48):
        shapes.append(("disk_r%d" % r, _disk(r)))
    for a in (8, 16, 32, 64):
        shapes.append(("square_%d" % a, _square(a)))
    for a, b in ((12, 6), (24, 10), (40, 16), (56, 24)):
        shapes.append(("ellipse_%dx%d" % (a, b), _ellipse(a, b)))
    for r in (6, 12, 24, 48):
        shapes.append(("diamond_r%d" % r, _diamond(r)))
    for k, r0 in ((3, 20), (5, 28), (7, 36), (9, 44)):
        shapes.append(("star_k%d" % k, _star(r0, k)))
    for i, size in enumerate((96, 96, 128, 128, 192, 192)):
        shapes.append(("blob_%d" % i, _blob(size, seed=100 + i)))
    assert len(shapes) == 28
    return shapes


def shape_contour(mask):
    """(start, dirs, inside) for the single shape on a padded canvas."""
    m = np.asarray(mask, dtype=bool)
    h, w = m.shape
    canvas = np.zeros((h + 4, w + 4), dtype=np.int32)
    canvas[2:2 + h, 2:2 + w] = m.astype(np.int32)
    lm = LabelMap(canvas, (0, 1))
    _, inner = register_blobs(lm)
    if len(inner) != 1:
        raise ValueError("shape is not a single interior component")
    blob = inner[0]
    pix = {(r, c) for r, c in zip(*np.nonzero(canvas))}
    return blob.start, blob.dirs, lambda rr, cc: (rr, cc) in pix


class _OrderK:
    """Order-k adaptive coder over a small alphabet, shared per run."""

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.models = {}
        self.enc = RangeEncoder()

    def code(self, syms):
        enc = self.enc
        before = enc.cost_bits()
        hist = ()
        for s in syms:
            m = self.models.get(hist)
            if m is None:
                m = Model(self.n)
                self.models[hist] = m
            enc.encode(m, s)
            if self.k:
                hist = (hist + (s,))[-self.k:]
        return enc.cost_bits() - before


class _ReccCoder:
    """The codec's two-back relative context scheme, full alphabet."""

    def __init__(self):
        self.models = {}
        self.enc = RangeEncoder()

    def code(self, syms):
        enc = self.enc
        before = enc.cost_bits()
        enc.encode_uniform(syms[0], 36)
        k1 = 27 + syms[0] % 9
        k2 = 0
        sr_prev = syms[0] % 9
        d_prev = last_dir(syms[0])
        for s in syms[1:]:
            p = recc_pack(s, d_prev)
            key = k1 * 9 + k2
            m = self.models.get(key)
            if m is None:
                m = Model(27)
                self.models[key] = m
            enc.encode(m, p)
            k1, k2, sr_prev = p, sr_prev, s % 9
            d_prev = last_dir(s)
        return enc.cost_bits() - before


class Bench:
    def __init__(self):
        self.rf8 = _OrderK(8, 4)
        self.vcc = _OrderK(3, 5)
        self.t3 = _OrderK(3, 4)
        self.recc = _ReccCoder()

    def measure(self, name, mask) -> ShapeRow:
        start, dirs, inside = shape_contour(mask)
        f4 = f4_symbols(dirs)
        f8 = f8_symbols(start, dirs)
        vcc = vcc_symbols(inside, start, dirs)
        t3 = tokenize_3ot(dirs, _INNER_PC)
        ecc = ecc_tokenize(start, dirs)

        if f8:
            before = self.rf8.enc.cost_bits()
            self.rf8.enc.encode_uniform(f8[0], 8)
            deltas = [(f8[k] - f8[k - 1]) % 8 for k in range(1, len(f8))]
            bits_rf8 = (self.rf8.enc.cost_bits() - before) + self.rf8.code(deltas)
        else:
            bits_rf8 = 0.0
        bits_vcc = self.vcc.code([c - 1 for c in vcc])
        before = self.t3.enc.cost_bits()
        self.t3.enc.encode_uniform(dirs[0], 4)
        bits_t3 = (self.t3.enc.cost_bits() - before) + self.t3.code(t3)
        bits_recc = self.recc.code(ecc)

        return ShapeRow(name, len(f4), len(f8), len(vcc), len(t3), len(ecc),
                        bits_rf8, bits_vcc, bits_t3, bits_recc)


def run(train: bool = False):
    """Measure the shape set; with train=True, the first half primes the
    models and only the second half is reported."""

    shapes = shape_set()
    bench = Bench()
    if train:
        half = len(shapes) // 2
        for name, mask in shapes[:half]:
            bench.measure(name, mask)
        rows = [bench.measure(name, mask) for name, mask in shapes[half:]]
    else:
        rows = [bench.measure(name, mask) for name, mask in shapes]
    return rows

"""Deterministic synthetic label maps for tests, benchmarks and the CLI.

Every generator is pure in its arguments (seeded RNG), so corpora are
reproducible across runs and machines.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .lattice import LabelMap

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)


def label_map(arr) -> LabelMap:
    """Canonicalize any integer image: palette = sorted distinct values."""
    a = np.asarray(arr)
    palette = np.unique(a)
    labels = np.searchsorted(palette, a).astype(np.int32)
    return LabelMap(labels, tuple(int(v) for v in palette))


def _values(r, n: int) -> np.ndarray:
    """n distinct raw sample values, spread over the 16-bit range."""
    step = int(r.choice((1, 2, 7, 100, 937)))
    base = int(r.integers(0, 5))
    return base + step * np.arange(n)


def uniform(width, height, value=0) -> LabelMap:
    return label_map(np.full((height, width), value, dtype=np.int32))


def salt(width, height, n_labels, seed) -> LabelMap:
    r = np.random.default_rng(seed)
    vals = _values(r, n_labels)
    return label_map(vals[r.integers(0, n_labels, (height, width))])


def stripes(width, height, period, n_labels, horizontal=True) -> LabelMap:
    i = np.arange(height)[:, None] if horizontal else np.arange(width)[None, :]
    band = (i // max(period, 1)) % n_labels
    return label_map(np.broadcast_to(band, (height, width)) * 3)


def checkerboard(width, height, cell, n_labels=2) -> LabelMap:
    yy, xx = np.indices((height, width))
    return label_map((yy // cell + xx // cell) % n_labels)


def halfplane(width, height, angle, n_labels=2) -> LabelMap:
    yy, xx = np.indices((height, width), dtype=np.float64)
    v = np.cos(angle) * (xx - width / 2) + np.sin(angle) * (yy - height / 2)
    if n_labels <= 2:
        return label_map((v > 0).astype(np.int32))
    band = np.clip(((v / max(width, height) + 0.5) * n_labels).astype(np.int32),
                   0, n_labels - 1)
    return label_map(band)


def rings(width, height, period, n_labels=2, seed=0) -> LabelMap:
    r = np.random.default_rng(seed)
    cx = width / 2 + float(r.uniform(-width / 8, width / 8))
    cy = height / 2 + float(r.uniform(-height / 8, height / 8))
    yy, xx = np.indices((height, width), dtype=np.float64)
    d = np.hypot(xx - cx, yy - cy)
    return label_map(((d // max(period, 1)).astype(np.int32)) % n_labels)


def spiral(width, height, pitch) -> LabelMap:
    yy, xx = np.indices((height, width), dtype=np.float64)
    dx = xx - width / 2
    dy = yy - height / 2
    theta = np.arctan2(dy, dx) / (2 * np.pi)
    rad = np.hypot(dx, dy) / max(pitch, 2)
    return label_map((np.floor(rad - theta).astype(np.int64) % 2).astype(np.int32))


def disks(width, height, n, n_labels, seed, rmin=2, rmax=None) -> LabelMap:
    r = np.random.default_rng(seed)
    if rmax is None:
        rmax = max(min(width, height) // 3, rmin + 1)
    vals = _values(r, max(n_labels, 1))
    out = np.full((height, width), int(vals[0]), dtype=np.int32)
    yy, xx = np.indices((height, width))
    for k in range(n):
        cx = r.integers(0, width)
        cy = r.integers(0, height)
        rad = int(r.integers(rmin, rmax + 1))
        v = int(vals[int(r.integers(0, len(vals)))])
        out[(xx - cx) ** 2 + (yy - cy) ** 2 <= rad * rad] = v
    return label_map(out)


def voronoi(width, height, n_cells, n_labels, seed) -> LabelMap:
    r = np.random.default_rng(seed)
    n_cells = max(1, min(n_cells, width * height))
    sites = np.column_stack((r.uniform(0, width, n_cells),
                             r.uniform(0, height, n_cells)))
    vals = _values(r, max(n_labels, 1))
    cell_label = vals[r.integers(0, len(vals), n_cells)]
    yy, xx = np.indices((height, width), dtype=np.float64)
    pts = np.column_stack((xx.ravel() + 0.5, yy.ravel() + 0.5))
    _, idx = cKDTree(sites).query(pts)
    return label_map(cell_label[idx].reshape(height, width))


def silhouette(width, height, seed, threshold=55.0, sigma=None) -> LabelMap:
    """One smooth hole-free figure on background, like a segmentation mask."""
    r = np.random.default_rng(seed)
    if sigma is None:
        sigma = max(min(width, height) / 5.0, 1.0)
    noise = r.standard_normal((height, width))
    field = ndimage.gaussian_filter(noise, sigma=sigma, mode="nearest")
    mask = field > np.percentile(field, threshold)
    lab, n = ndimage.label(mask, structure=_CROSS)
    if n > 1:
        sizes = ndimage.sum_labels(np.ones_like(lab), lab, np.arange(1, n + 1))
        mask = lab == (1 + int(np.argmax(sizes)))
    mask = ndimage.binary_fill_holes(mask)
    return label_map(mask.astype(np.int32) * 255)


def disk_union(width, height, seed, n=9) -> LabelMap:
    """One smooth connected figure built from overlapping disks."""
    r = np.random.default_rng(seed)
    margin = 4
    yy, xx = np.indices((height, width))
    mask = np.zeros((height, width), dtype=bool)
    lim = min(width, height)
    centers = []
    for k in range(n):
        rad = int(r.integers(lim // 10, lim // 4))
        if not centers:
            cx, cy = width / 2, height / 2
        else:
            bx, by, br = centers[int(r.integers(0, len(centers)))]
            ang = float(r.uniform(0, 2 * np.pi))
            step = 0.7 * (br + rad)
            cx = bx + step * np.cos(ang)
            cy = by + step * np.sin(ang)
        cx = float(np.clip(cx, margin + rad, width - margin - rad))
        cy = float(np.clip(cy, margin + rad, height - margin - rad))
        centers.append((cx, cy, rad))
        mask |= (xx - cx) ** 2 + (yy - cy) ** 2 <= rad * rad
    lab, cnt = ndimage.label(mask, structure=_CROSS)
    if cnt > 1:
        sizes = ndimage.sum_labels(np.ones_like(lab), lab, np.arange(1, cnt + 1))
        mask = lab == (1 + int(np.argmax(sizes)))
    mask = ndimage.binary_fill_holes(mask)
    return label_map(mask.astype(np.int32) * 200)


def abutting_rectangles(width=96, height=64, rect_h=32) -> LabelMap:
    """Two interior rectangles sharing one vertical side."""
    arr = np.zeros((height, width), dtype=np.int32)
    y0 = (height - rect_h) // 2
    arr[y0:y0 + rect_h, 10:width // 2] = 7
    arr[y0:y0 + rect_h, width // 2:width - 10] = 20
    return label_map(arr)


def levels(width, height, n_labels, seed, sigma=None) -> LabelMap:
    """Smooth field quantized into n_labels nested bands."""
    r = np.random.default_rng(seed)
    if sigma is None:
        sigma = max(min(width, height) / 6.0, 1.0)
    field = ndimage.gaussian_filter(r.standard_normal((height, width)),
                                    sigma=sigma, mode="nearest")
    qs = np.quantile(field, np.linspace(0, 1, n_labels + 1)[1:-1])
    return label_map(np.searchsorted(qs, field).astype(np.int32) * 9)


def _size(r, lo, hi):
    return int(r.integers(lo, hi + 1)), int(r.integers(lo, hi + 1))


def _nlab(r, w, h, cap=27):
    return int(r.integers(1, min(cap, max(w * h, 1)) + 1))


def corpus_maps(count=1000, seed=20260814):
    """The mixed acceptance corpus: sizes 1x1..512x512, 1..27 labels."""

    fixed = [
        uniform(1, 1),
        uniform(1, 1, value=777),
        salt(1, 8, 4, seed=3),
        salt(8, 1, 5, seed=4),
        checkerboard(2, 2, 1, 2),
        uniform(512, 512, value=12),
        halfplane(512, 512, 0.61),
        silhouette(320, 240, seed=7),
        stripes(1, 512, 3, 9),
        salt(512, 1, 27, seed=5),
        label_map(np.arange(9, dtype=np.int32).reshape(3, 3) * 41),
        checkerboard(27, 27, 1, 27),
        rings(96, 64, 5, 7, seed=11),
        spiral(120, 120, 9),
        voronoi(128, 96, 40, 27, seed=13),
    ]
    out = list(fixed[:count])
    for i in range(len(out), count):
        r = np.random.default_rng([seed, i])
        roll = i % 100
        if roll < 2:
            w, h = _size(r, 321, 512)
            pick = roll + i // 100
            if pick % 3 == 0:
                out.append(silhouette(w, h, seed=[seed, i, 1]))
            elif pick % 3 == 1:
                out.append(voronoi(w, h, int(r.integers(4, 48)),
                                   _nlab(r, w, h), seed=[seed, i, 2]))
            else:
                out.append(disks(w, h, int(r.integers(2, 10)),
                                 _nlab(r, w, h, 8), seed=[seed, i, 3], rmin=12))
        elif roll < 7:
            w, h = _size(r, 129, 320)
            g = int(r.integers(0, 5))
            if g == 0:
                out.append(voronoi(w, h, int(r.integers(3, 32)),
                                   _nlab(r, w, h), seed=[seed, i, 2]))
            elif g == 1:
                out.append(silhouette(w, h, seed=[seed, i, 1]))
            elif g == 2:
                out.append(disks(w, h, int(r.integers(2, 12)),
                                 _nlab(r, w, h, 9), seed=[seed, i, 3], rmin=8))
            elif g == 3:
                out.append(rings(w, h, int(r.integers(6, 24)),
                                 _nlab(r, w, h, 9), seed=[seed, i, 4]))
            else:
                out.append(halfplane(w, h, float(r.uniform(0, np.pi)),
                                     _nlab(r, w, h, 7)))
        elif roll < 40:
            w, h = _size(r, 33, 128)
            g = int(r.integers(0, 8))
            if g == 0:
                cell = int(r.integers(2, 17)) if max(w, h) > 64 else int(r.integers(1, 9))
                out.append(checkerboard(w, h, cell, _nlab(r, w, h)))
            elif g == 1:
                out.append(voronoi(w, h, int(r.integers(2, 60)),
                                   _nlab(r, w, h), seed=[seed, i, 2]))
            elif g == 2:
                out.append(disks(w, h, int(r.integers(1, 14)),
                                 _nlab(r, w, h, 9), seed=[seed, i, 3]))
            elif g == 3:
                out.append(levels(w, h, _nlab(r, w, h, 9), seed=[seed, i, 1]))
            elif g == 4:
                out.append(rings(w, h, int(r.integers(2, 16)),
                                 _nlab(r, w, h, 9), seed=[seed, i, 4]))
            elif g == 5:
                out.append(spiral(w, h, int(r.integers(4, 16))))
            elif g == 6 and max(w, h) <= 48:
                out.append(salt(w, h, _nlab(r, w, h), seed=[seed, i, 5]))
            else:
                out.append(halfplane(w, h, float(r.uniform(0, np.pi)),
                                     _nlab(r, w, h, 5)))
        elif roll < 72:
            w, h = _size(r, 9, 32)
            g = int(r.integers(0, 6))
            if g == 0:
                out.append(salt(w, h, _nlab(r, w, h), seed=[seed, i, 5]))
            elif g == 1:
                out.append(checkerboard(w, h, int(r.integers(1, 5)),
                                        _nlab(r, w, h)))
            elif g == 2:
                out.append(voronoi(w, h, int(r.integers(2, 12)),
                                   _nlab(r, w, h), seed=[seed, i, 2]))
            elif g == 3:
                out.append(disks(w, h, int(r.integers(1, 5)),
                                 _nlab(r, w, h, 6), seed=[seed, i, 3]))
            elif g == 4:
                out.append(stripes(w, h, int(r.integers(1, 6)),
                                   _nlab(r, w, h), horizontal=bool(r.integers(0, 2))))
            else:
                out.append(uniform(w, h, value=int(r.integers(0, 1000))))
        else:
            if i % 9 == 0:
                w, h = 1, int(r.integers(1, 9))
            elif i % 9 == 1:
                w, h = int(r.integers(1, 9)), 1
            else:
                w, h = _size(r, 1, 8)
            g = int(r.integers(0, 4))
            if g == 0:
                out.append(salt(w, h, _nlab(r, w, h), seed=[seed, i, 5]))
            elif g == 1:
                out.append(checkerboard(w, h, 1, _nlab(r, w, h)))
            elif g == 2:
                out.append(stripes(w, h, 1, _nlab(r, w, h),
                                   horizontal=bool(r.integers(0, 2))))
            else:
                out.append(uniform(w, h, value=int(r.integers(0, 9))))
    return out

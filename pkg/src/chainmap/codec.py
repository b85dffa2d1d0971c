"""Container format and the per-region coding protocol.

A map is coded as its regions' contours.  Border-touching regions come
first (frame-walk order), then interior regions (raster order); each
contour is coded either with the 36-symbol staircase alphabet under
rotation-relative contexts, or with the 3-symbol turn code, whichever
trial-encodes smaller.  Cracks already traced by earlier contours (or
the frame border) are never re-coded: at every symbol boundary the coder
checks for such cracks and, when present, codes a single skip event that
replays them by a deterministic walk both sides can perform.

Encode and decode share one protocol driver; only the "port" differs
(plan from the true contour / replay the plan into the coder / read from
the coder), so the two sides cannot drift apart.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .chain import PATHS, RECC_BASE, match_longest, recc_pack, recc_unpack
from .entropy import Model, RangeDecoder, RangeEncoder
from .errors import (BadMagic, CorruptStream, OutOfBoundsWalk,
                     TruncatedStream)
from .lattice import DX, DY, LabelMap, fill_contour, register_blobs

MAGIC = b"SMC1"
VERSION = 1

MODE_ECC = 0
MODE_3OT = 1

# packed indices whose relative quadrant opposes the interior-left
# winding (a right-turn start); these are the maskable rare range
RARE_LO = 9
RARE_HI = 18

# turn-code context key offsets by history length 0..4
T3_OFF = (0, 1, 4, 13, 40)

_BOUNDARY_PC = 3   # initial previous-change: left turn for border regions
_INNER_PC = 1      # right turn for interior regions

_MAX_DIM = 1 << 16
_MAX_PIXELS = 1 << 26


@dataclass
class CodecConfig:
    """Out-of-band coding switches; decode must match encode."""

    mode: str = "auto"       # "auto" | "ecc" | "3ot"
    use_skip: bool = True
    full_recc: bool = False  # disable the per-region rare-quadrant flag

    def validate(self) -> None:
        if self.mode not in ("auto", "ecc", "3ot"):
            raise ValueError("mode must be auto, ecc or 3ot")


@dataclass
class EncodeStats:
    width: int = 0
    height: int = 0
    n_boundary: int = 0
    n_inner: int = 0
    n_ecc: int = 0
    n_3ot: int = 0
    total_edges: int = 0
    ecc_symbols: int = 0
    t3_symbols: int = 0
    skip_complete: int = 0
    skip_partial: int = 0
    skip_zero: int = 0
    skip_edges: int = 0
    rare_regions: int = 0
    ecc_contexts: int = 0
    t3_contexts: int = 0
    header_bytes: int = 0
    payload_bytes: int = 0
    total_bytes: int = 0


def _edge_limit(width: int, height: int) -> int:
    return 4 * (width + 1) * (height + 1) + 8


def border_edge_ids(width: int, height: int) -> set[int]:
    """Edge ids of the frame border walked with the image on the right.

    These seed the traced set: a region crack along the border always has
    its reverse here, so border runs are skippable from the first region.
    """

    stride = width + 2
    ids = set()
    for x in range(width):
        ids.add((x << 2) | 0)
    for y in range(height):
        ids.add(((y * stride + width) << 2) | 1)
    for x in range(width, 0, -1):
        ids.add(((height * stride + x) << 2) | 2)
    for y in range(height, 0, -1):
        ids.add(((y * stride) << 2) | 3)
    return ids


def add_contour(traced: set[int], width: int, start, dirs) -> None:
    stride = width + 2
    x, y = start
    for d in dirs:
        traced.add(((y * stride + x) << 2) | d)
        x += DX[d]
        y += DY[d]


def _scan(stride, traced, overlay, x, y, last, extra=None):
    """Ordered candidate directions whose reverse crack is already traced.

    Priority is left, straight, right relative to the incoming crack;
    all four directions, numerically, when there is no incoming crack.
    The reverse direction is never scanned, so walks cannot back up.
    """

    if last is None:
        order = (0, 1, 2, 3)
    else:
        order = ((last + 3) & 3, last, (last + 1) & 3)
    out = []
    for d in order:
        rid = (((y + DY[d]) * stride + (x + DX[d])) << 2) | (d ^ 2)
        if rid in traced or rid in overlay or (extra is not None and rid in extra):
            out.append(d)
    return out


def skip_candidates(width, height, traced, x, y, last=None, overlay=None):
    """Public probe of the candidate scan, for tools and tests."""
    return _scan(width + 2, traced, overlay if overlay is not None else set(),
                 x, y, last)


class _Walker:
    """Mutable per-region geometry: position, produced cracks, overlay."""

    __slots__ = ("width", "height", "stride", "traced", "overlay",
                 "sx", "sy", "x", "y", "last", "edges", "limit")

    def __init__(self, width, height, traced, start, limit):
        self.width = width
        self.height = height
        self.stride = width + 2
        self.traced = traced
        self.overlay = set()
        self.sx, self.sy = start
        self.x, self.y = start
        self.last = None
        self.edges = []
        self.limit = limit


def _walk(wk: _Walker, count: int) -> int:
    """Follow first candidates for count cracks; returns the last turn
    sense seen inside the walk (0 if the walk never turned)."""

    wturn = 0
    stride = wk.stride
    for _ in range(count):
        cands = _scan(stride, wk.traced, wk.overlay, wk.x, wk.y, wk.last)
        if not cands:
            raise CorruptStream("skip run hit a dead end")
        d = cands[0]
        if wk.last is not None:
            t = (d - wk.last) & 3
            if t:
                wturn = t
        wk.overlay.add(((wk.y * stride + wk.x) << 2) | d)
        wk.x += DX[d]
        wk.y += DY[d]
        wk.edges.append(d)
        wk.last = d
    return wturn


def _walk_to_start(wk: _Walker) -> None:
    stride = wk.stride
    while True:
        cands = _scan(stride, wk.traced, wk.overlay, wk.x, wk.y, wk.last)
        if not cands:
            raise CorruptStream("skip run hit a dead end")
        d = cands[0]
        wk.overlay.add(((wk.y * stride + wk.x) << 2) | d)
        wk.x += DX[d]
        wk.y += DY[d]
        wk.edges.append(d)
        wk.last = d
        if wk.x == wk.sx and wk.y == wk.sy:
            return
        if len(wk.edges) > wk.limit:
            raise CorruptStream("contour failed to close")


def _drive(port, wk: _Walker, mode: int, boundary: bool, use_skip: bool) -> None:
    """Run one region's coding protocol to closure.

    The port supplies (encode) or consumes (decode) events; everything
    else, including skip walks, context keys and bounds checking, is this
    one shared code path.
    """

    width = wk.width
    height = wk.height
    stride = wk.stride
    k1 = -1            # packed previous symbol; -1 before any symbol
    k2 = 0             # self-reference of the symbol two back
    sr_prev = 0
    pc = _BOUNDARY_PC if boundary else _INNER_PC
    h3 = 0
    hl3 = 0
    ecc = mode == MODE_ECC
    while True:
        if use_skip:
            cands = _scan(stride, wk.traced, wk.overlay, wk.x, wk.y, wk.last)
            if cands:
                complete, run = port.skip_event()
                if complete:
                    _walk_to_start(wk)
                    return
                if run:
                    if run > wk.limit:
                        raise CorruptStream("skip run longer than the lattice")
                    wturn = _walk(wk, run)
                    if wk.x == wk.sx and wk.y == wk.sy:
                        raise CorruptStream("skip run closed the contour")
                    if ecc:
                        e = wk.edges
                        q_rel = 0 if len(e) < 2 else (e[-1] - e[-2]) & 3
                        k1 = RECC_BASE[q_rel]
                        k2 = 0
                        sr_prev = 0
                    else:
                        if wturn:
                            pc = wturn
                        else:
                            pc = _BOUNDARY_PC if boundary else _INNER_PC
                        h3 = 0
                        hl3 = 0
        if ecc:
            if k1 < 0:
                s = port.start_symbol()
                nk1 = 27 + s % 9
                nk2 = 0
            else:
                p = port.recc_symbol(k1 * 9 + k2)
                s = recc_unpack(p, wk.last)
                nk1 = p
                nk2 = sr_prev
            path = PATHS[s]
            n = len(path)
            x = wk.x
            y = wk.y
            overlay = wk.overlay
            edges = wk.edges
            for j in range(n):
                d = path[j]
                overlay.add(((y * stride + x) << 2) | d)
                x += DX[d]
                y += DY[d]
                if x < 0 or x > width or y < 0 or y > height:
                    raise OutOfBoundsWalk("chain leaves the lattice")
                edges.append(d)
                if j + 1 < n and x == wk.sx and y == wk.sy:
                    raise CorruptStream("chain passes through its start")
            wk.x = x
            wk.y = y
            wk.last = path[-1]
            k1 = nk1
            k2 = nk2
            sr_prev = s % 9
        else:
            if wk.last is None:
                d = port.first_edge()
            else:
                sym = port.t3_symbol(T3_OFF[hl3] + h3, pc)
                if sym == 1:
                    pc = 4 - pc
                    d = (wk.last + pc) & 3
                elif sym == 2:
                    d = (wk.last + pc) & 3
                else:
                    d = wk.last
                h3 = (h3 * 3 + sym) % 81
                if hl3 < 4:
                    hl3 += 1
            x = wk.x
            y = wk.y
            wk.overlay.add(((y * stride + x) << 2) | d)
            x += DX[d]
            y += DY[d]
            if x < 0 or x > width or y < 0 or y > height:
                raise OutOfBoundsWalk("chain leaves the lattice")
            wk.edges.append(d)
            wk.x = x
            wk.y = y
            wk.last = d
        if len(wk.edges) > wk.limit:
            raise CorruptStream("contour failed to close")
        if wk.x == wk.sx and wk.y == wk.sy:
            return


class _OraclePort:
    """Derives the event stream for a region from its true contour."""

    __slots__ = ("wk", "dirs", "i", "events", "rare")

    def __init__(self, wk: _Walker, dirs):
        self.wk = wk
        self.dirs = dirs
        self.i = 0
        self.events = []
        self.rare = False

    def skip_event(self):
        wk = self.wk
        dirs = self.dirs
        n = len(dirs)
        stride = wk.stride
        x, y, last = wk.x, wk.y, wk.last
        extra = set()
        j = self.i
        while j < n:
            cands = _scan(stride, wk.traced, wk.overlay, x, y, last, extra)
            if not cands or cands[0] != dirs[j]:
                break
            d = dirs[j]
            extra.add(((y * stride + x) << 2) | d)
            x += DX[d]
            y += DY[d]
            last = d
            j += 1
        run = j - self.i
        complete = j == n
        self.events.append(("skip", complete, run))
        self.i = j
        return complete, run

    def start_symbol(self):
        wk = self.wk
        s, self.i, _, _ = match_longest(self.dirs, self.i, wk.x, wk.y,
                                        wk.sx, wk.sy)
        self.events.append(("s36", s))
        return s

    def recc_symbol(self, key):
        wk = self.wk
        s, self.i, _, _ = match_longest(self.dirs, self.i, wk.x, wk.y,
                                        wk.sx, wk.sy)
        p = recc_pack(s, wk.last)
        if RARE_LO <= p < RARE_HI:
            self.rare = True
        self.events.append(("recc", p))
        return p

    def t3_symbol(self, key, pc):
        d = self.dirs[self.i]
        self.i += 1
        t = (d - self.wk.last) & 3
        if t == 0:
            sym = 0
        elif t == pc:
            sym = 2
        else:
            sym = 1
        self.events.append(("t3", sym))
        return sym

    def first_edge(self):
        d = self.dirs[self.i]
        self.i += 1
        self.events.append(("first", d))
        return d


class _ReplayPort:
    """Feeds a planned event stream into the range coder."""

    __slots__ = ("events", "k", "enc", "banks", "masked")

    def __init__(self, events, enc, banks, masked):
        self.events = events
        self.k = 0
        self.enc = enc
        self.banks = banks
        self.masked = masked

    def _next(self, tag):
        ev = self.events[self.k]
        self.k += 1
        if ev[0] != tag:
            raise AssertionError("plan/replay drift: %r vs %s" % (ev, tag))
        return ev

    def skip_event(self):
        _, complete, run = self._next("skip")
        banks = self.banks
        banks.touch(banks.skip_flag)
        self.enc.encode(banks.skip_flag, 1 if complete else 0)
        if not complete:
            self.enc.encode_eg0(run)
        return complete, run

    def start_symbol(self):
        _, s = self._next("s36")
        self.enc.encode_uniform(s, 36)
        return s

    def recc_symbol(self, key):
        _, p = self._next("recc")
        m = self.banks.ecc_model(key)
        self.banks.touch(m)
        self.enc.encode(m, p, (RARE_LO, RARE_HI) if self.masked else None)
        return p

    def t3_symbol(self, key, pc):
        _, sym = self._next("t3")
        m = self.banks.t3_model(key)
        self.banks.touch(m)
        self.enc.encode(m, sym)
        return sym

    def first_edge(self):
        return self._next("first")[1]


class _ReaderPort:
    """Pulls events out of the range coder."""

    __slots__ = ("dec", "banks", "masked", "init_dir")

    def __init__(self, dec, banks, masked, init_dir):
        self.dec = dec
        self.banks = banks
        self.masked = masked
        self.init_dir = init_dir

    def skip_event(self):
        if self.dec.decode(self.banks.skip_flag):
            return True, 0
        return False, self.dec.decode_eg0()

    def start_symbol(self):
        return self.dec.decode_uniform(36)

    def recc_symbol(self, key):
        m = self.banks.ecc_model(key)
        return self.dec.decode(m, (RARE_LO, RARE_HI) if self.masked else None)

    def t3_symbol(self, key, pc):
        return self.dec.decode(self.banks.t3_model(key))

    def first_edge(self):
        return self.init_dir


class _TrialLog:
    __slots__ = ("models", "created")

    def __init__(self):
        self.models = {}
        self.created = []


class _Banks:
    """All adaptive models of one stream, with trial undo support."""

    __slots__ = ("ecc", "t3", "skip_flag", "mode_flag", "rare_flag",
                 "label", "log")

    def __init__(self, n_labels: int):
        self.ecc = {}
        self.t3 = {}
        self.skip_flag = Model(2)
        self.mode_flag = Model(2)
        self.rare_flag = Model(2)
        self.label = Model(n_labels) if n_labels > 1 else None
        self.log = None

    def ecc_model(self, key: int) -> Model:
        m = self.ecc.get(key)
        if m is None:
            m = Model(27)
            self.ecc[key] = m
            if self.log is not None:
                self.log.created.append((self.ecc, key))
        return m

    def t3_model(self, key: int) -> Model:
        m = self.t3.get(key)
        if m is None:
            m = Model(3)
            self.t3[key] = m
            if self.log is not None:
                self.log.created.append((self.t3, key))
        return m

    def touch(self, m: Model) -> None:
        log = self.log
        if log is not None and id(m) not in log.models:
            log.models[id(m)] = (m, m.snapshot())

    def begin_trial(self) -> _TrialLog:
        self.log = _TrialLog()
        return self.log

    def rollback(self, log: _TrialLog) -> None:
        for m, snap in log.models.values():
            m.restore(snap)
        for bank, key in log.created:
            if key in bank:
                del bank[key]
        self.log = None

    def commit_trial(self) -> None:
        self.log = None


def _plan(blob, traced, width, height, mode, use_skip):
    """Pure-geometry planning pass; touches neither coder nor models."""

    wk = _Walker(width, height, traced, blob.start, _edge_limit(width, height))
    port = _OraclePort(wk, blob.dirs)
    _drive(port, wk, mode, blob.touches_border, use_skip)
    if port.i != len(blob.dirs) or tuple(wk.edges) != blob.dirs:
        raise AssertionError("planner failed to reproduce the contour")
    return port.events, port.rare


def _tally(stats: EncodeStats, blob, mode: int, events, rare: bool) -> None:
    if mode == MODE_ECC:
        stats.n_ecc += 1
        if rare:
            stats.rare_regions += 1
    else:
        stats.n_3ot += 1
    stats.total_edges += len(blob.dirs)
    for ev in events:
        tag = ev[0]
        if tag == "skip":
            if ev[1]:
                stats.skip_complete += 1
                stats.skip_edges += ev[2]
            elif ev[2]:
                stats.skip_partial += 1
                stats.skip_edges += ev[2]
            else:
                stats.skip_zero += 1
        elif tag == "t3":
            stats.t3_symbols += 1
        elif tag != "first":
            stats.ecc_symbols += 1


def _encode_blob(enc, banks, blob, traced, width, height, cfg, stats) -> None:
    xbits = width.bit_length()
    ybits = height.bit_length()
    limit = _edge_limit(width, height)

    def emit(mode, events, rare, with_flag):
        enc.encode_raw(blob.start[0], xbits)
        enc.encode_raw(blob.start[1], ybits)
        if banks.label is not None:
            banks.touch(banks.label)
            enc.encode(banks.label, blob.label)
        if with_flag:
            banks.touch(banks.mode_flag)
            enc.encode(banks.mode_flag, mode)
        if mode == MODE_ECC:
            masked = False
            if not cfg.full_recc:
                banks.touch(banks.rare_flag)
                enc.encode(banks.rare_flag, 1 if rare else 0)
                masked = not rare
        else:
            enc.encode_raw(blob.dirs[0], 2)
            masked = False
        wk = _Walker(width, height, traced, blob.start, limit)
        port = _ReplayPort(events, enc, banks, masked)
        _drive(port, wk, mode, blob.touches_border, cfg.use_skip)
        if port.k != len(events):
            raise AssertionError("replay left events unconsumed")

    if cfg.mode == "auto":
        ev_e, rare_e = _plan(blob, traced, width, height, MODE_ECC, cfg.use_skip)
        ev_t, _ = _plan(blob, traced, width, height, MODE_3OT, cfg.use_skip)
        base = enc.cost_bits()
        st = enc.state()
        log = banks.begin_trial()
        emit(MODE_3OT, ev_t, False, True)
        cost_t = enc.cost_bits() - base
        enc.rewind(st)
        banks.rollback(log)
        log = banks.begin_trial()
        emit(MODE_ECC, ev_e, rare_e, True)
        cost_e = enc.cost_bits() - base
        if cost_e <= cost_t:
            banks.commit_trial()
            _tally(stats, blob, MODE_ECC, ev_e, rare_e)
        else:
            enc.rewind(st)
            banks.rollback(log)
            emit(MODE_3OT, ev_t, False, True)
            _tally(stats, blob, MODE_3OT, ev_t, False)
    elif cfg.mode == "ecc":
        ev, rare = _plan(blob, traced, width, height, MODE_ECC, cfg.use_skip)
        emit(MODE_ECC, ev, rare, False)
        _tally(stats, blob, MODE_ECC, ev, rare)
    else:
        ev, _ = _plan(blob, traced, width, height, MODE_3OT, cfg.use_skip)
        emit(MODE_3OT, ev, False, False)
        _tally(stats, blob, MODE_3OT, ev, False)

    add_contour(traced, width, blob.start, blob.dirs)


def _decode_blob(dec, banks, traced, width, height, cfg, boundary):
    xbits = width.bit_length()
    ybits = height.bit_length()
    sx = dec.decode_raw(xbits)
    sy = dec.decode_raw(ybits)
    if sx > width or sy > height:
        raise CorruptStream("region start outside the lattice")
    label = dec.decode(banks.label) if banks.label is not None else 0
    if cfg.mode == "auto":
        mode = MODE_3OT if dec.decode(banks.mode_flag) else MODE_ECC
    elif cfg.mode == "ecc":
        mode = MODE_ECC
    else:
        mode = MODE_3OT
    masked = False
    init_dir = 0
    if mode == MODE_ECC:
        if not cfg.full_recc:
            masked = not dec.decode(banks.rare_flag)
    else:
        init_dir = dec.decode_raw(2)
    wk = _Walker(width, height, traced, (sx, sy), _edge_limit(width, height))
    port = _ReaderPort(dec, banks, masked, init_dir)
    _drive(port, wk, mode, boundary, cfg.use_skip)
    add_contour(traced, width, (sx, sy), wk.edges)
    return (sx, sy), wk.edges, label


def encode_map(lm: LabelMap, config: CodecConfig | None = None):
    """Encode a label map; returns (data, EncodeStats)."""

    cfg = config if config is not None else CodecConfig()
    cfg.validate()
    labels = lm.labels
    if labels.ndim != 2:
        raise ValueError("label image must be 2-D")
    h, w = labels.shape
    n_labels = len(lm.palette)
    if h < 1 or w < 1 or h >= _MAX_DIM or w >= _MAX_DIM or h * w > _MAX_PIXELS:
        raise ValueError("image dimensions out of range")
    if n_labels < 1 or n_labels > 0xFFFF:
        raise ValueError("palette size out of range")
    if any(lm.palette[i] >= lm.palette[i + 1] for i in range(n_labels - 1)):
        raise ValueError("palette must be strictly increasing")
    if lm.palette[0] < 0 or lm.palette[-1] > 0xFFFF:
        raise ValueError("palette values must fit 16 bits")
    lo = int(labels.min())
    hi = int(labels.max())
    if lo < 0 or hi >= n_labels:
        raise ValueError("label indices outside the palette")

    boundary, inner = register_blobs(lm)
    header = struct.pack(">4sBIIH", MAGIC, VERSION, w, h, n_labels)
    header += struct.pack(">%dH" % n_labels, *lm.palette)
    header += struct.pack(">II", len(boundary), len(inner))

    stats = EncodeStats(width=w, height=h, n_boundary=len(boundary),
                        n_inner=len(inner))
    enc = RangeEncoder()
    banks = _Banks(n_labels)
    traced = border_edge_ids(w, h)
    for blob in boundary:
        _encode_blob(enc, banks, blob, traced, w, h, cfg, stats)
    for blob in inner:
        _encode_blob(enc, banks, blob, traced, w, h, cfg, stats)
    payload = enc.finish()
    stats.ecc_contexts = len(banks.ecc)
    stats.t3_contexts = len(banks.t3)
    stats.header_bytes = len(header)
    stats.payload_bytes = len(payload)
    stats.total_bytes = len(header) + len(payload)
    return header + payload, stats


def decode_map(data: bytes, config: CodecConfig | None = None) -> LabelMap:
    cfg = config if config is not None else CodecConfig()
    cfg.validate()
    if len(data) < 15:
        raise TruncatedStream("input shorter than the fixed header")
    magic, version, w, h, n_labels = struct.unpack_from(">4sBIIH", data, 0)
    if magic != MAGIC:
        raise BadMagic("not a coded map")
    if version != VERSION:
        raise BadMagic("unsupported version %d" % version)
    if not (1 <= w < _MAX_DIM and 1 <= h < _MAX_DIM) or w * h > _MAX_PIXELS:
        raise CorruptStream("image dimensions out of range")
    if n_labels < 1:
        raise CorruptStream("empty palette")
    off = 15
    if len(data) < off + 2 * n_labels + 8:
        raise TruncatedStream("input shorter than its palette")
    palette = struct.unpack_from(">%dH" % n_labels, data, off)
    off += 2 * n_labels
    if any(palette[i] >= palette[i + 1] for i in range(n_labels - 1)):
        raise CorruptStream("palette not strictly increasing")
    n_boundary, n_inner = struct.unpack_from(">II", data, off)
    off += 8
    if n_boundary < 1 or n_boundary + n_inner > w * h:
        raise CorruptStream("implausible region counts")

    labels = np.zeros((h, w), dtype=np.int32)
    dec = RangeDecoder(data, off)
    banks = _Banks(n_labels)
    traced = border_edge_ids(w, h)
    for k in range(n_boundary + n_inner):
        start, dirs, lab = _decode_blob(dec, banks, traced, w, h, cfg,
                                        k < n_boundary)
        fill_contour(labels, start, dirs, lab)
    return LabelMap(labels, tuple(int(p) for p in palette))

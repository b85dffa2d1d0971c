"""Chain-code alphabets and tokenizers.

The extended alphabet has 36 symbols: 4 quadrants x 9 staircase paths.
A quadrant-q path starts with direction q and uses only directions q and
(q+1) mod 4, so every path is a right-leaning staircase of 1..6 unit
cracks.  Path shapes, as relative directions in quadrant 0:

    l=0 (0,)            l=3 (0,1,0)        l=6 (0,0,1,0)
    l=1 (0,1)           l=4 (0,1,0,1)      l=7 (0,1,0,1,0)
    l=2 (0,0)           l=5 (0,0,0)        l=8 (0,1,0,1,0,1)

Symbol s = 9*q + l.  l is also the symbol's self-reference class.
"""

from __future__ import annotations

from .lattice import DX, DY

Q0_PATHS = (
    (0,),
    (0, 1),
    (0, 0),
    (0, 1, 0),
    (0, 1, 0, 1),
    (0, 0, 0),
    (0, 0, 1, 0),
    (0, 1, 0, 1, 0),
    (0, 1, 0, 1, 0, 1),
)

PATHS = tuple(
    tuple((rel + q) & 3 for rel in Q0_PATHS[l])
    for q in range(4)
    for l in range(9)
)

# last relative direction of each quadrant-0 path
LAST0 = tuple(p[-1] for p in Q0_PATHS)

# candidate class order for greedy matching: longest first, ties by class
_ORDER = (8, 7, 4, 6, 3, 5, 1, 2, 0)

# packed relative-quadrant bases; q_rel = 2 would reverse the last crack
# of the previous symbol, which closed contours cannot do
RECC_BASE = (0, 9, None, 18)
_UNPACK_QREL = (0, 1, 3)


def first_dir(s: int) -> int:
    return s // 9


def last_dir(s: int) -> int:
    return (LAST0[s % 9] + s // 9) & 3


def self_reference(s: int) -> int:
    return s % 9


def match_longest(dirs, i: int, x: int, y: int, sx: int, sy: int):
    """Longest alphabet path matching dirs[i:] from vertex (x, y).

    Interior vertices of a match must not land on the contour start
    (sx, sy): the start terminates the contour, so a symbol may end
    there but never pass through.  Returns (symbol, next_i, x, y).
    """

    n = len(dirs)
    q = dirs[i]
    for l in _ORDER:
        path = Q0_PATHS[l]
        k = len(path)
        if i + k > n:
            continue
        px, py = x, y
        ok = True
        for j in range(k):
            d = (path[j] + q) & 3
            if dirs[i + j] != d:
                ok = False
                break
            px += DX[d]
            py += DY[d]
            if j < k - 1 and px == sx and py == sy:
                ok = False
                break
        if ok:
            return 9 * q + l, i + k, px, py
    raise AssertionError("unit path failed to match its own direction")


def ecc_tokenize(start: tuple[int, int], dirs) -> list[int]:
    """Greedy longest-match tokenization of a closed contour."""
    sx, sy = start
    x, y = sx, sy
    i = 0
    out: list[int] = []
    n = len(dirs)
    while i < n:
        s, i, x, y = match_longest(dirs, i, x, y, sx, sy)
        out.append(s)
    return out


def ecc_detokenize(symbols) -> list[int]:
    dirs: list[int] = []
    for s in symbols:
        dirs.extend(PATHS[s])
    return dirs


def recc_pack(s: int, d_prev: int) -> int:
    """Rotation-invariant index in 0..26 of s after a symbol ending in d_prev."""
    q_rel = (s // 9 - d_prev) & 3
    base = RECC_BASE[q_rel]
    if base is None:
        raise ValueError("symbol reverses the previous crack")
    return base + s % 9


def recc_unpack(packed: int, d_prev: int) -> int:
    base3 = packed // 9
    q = (d_prev + _UNPACK_QREL[base3]) & 3
    return 9 * q + packed % 9


def tokenize_3ot(dirs, init_prev_change: int) -> list[int]:
    """Three-symbol turn code of a contour: 0 straight, 1 opposite turn,
    2 same turn, relative to the previous change of direction.

    Turn deltas are mod-4: 1 turns right on screen, 3 turns left.  The
    stream has len(dirs) - 1 symbols; the first direction travels out of
    band.
    """

    out: list[int] = []
    pc = init_prev_change
    prev = dirs[0]
    for k in range(1, len(dirs)):
        d = dirs[k]
        t = (d - prev) & 3
        if t == 0:
            out.append(0)
        elif t == pc:
            out.append(2)
        else:
            out.append(1)
            pc = t
        prev = d
    return out


def detokenize_3ot(first: int, init_prev_change: int, symbols) -> list[int]:
    dirs = [first]
    pc = init_prev_change
    d = first
    for s in symbols:
        if s == 1:
            pc = 4 - pc
            d = (d + pc) & 3
        elif s == 2:
            d = (d + pc) & 3
        dirs.append(d)
    return dirs


def f4_symbols(dirs) -> list[int]:
    return list(dirs)


_F8_DIR = {
    (1, 0): 0, (1, -1): 1, (0, -1): 2, (-1, -1): 3,
    (-1, 0): 4, (-1, 1): 5, (0, 1): 6, (1, 1): 7,
}


def f8_pixels(start: tuple[int, int], dirs) -> list[tuple[int, int]]:
    """Boundary pixel cycle (row, col) under 8-connectivity.

    Left pixels of consecutive cracks repeat exactly at left turns;
    collapsing the repeats yields the Moore boundary in order.
    """

    from .lattice import left_pixel

    x, y = start
    px: list[tuple[int, int]] = []
    for d in dirs:
        p = left_pixel(x, y, d)
        if not px or px[-1] != p:
            px.append(p)
        x += DX[d]
        y += DY[d]
    if len(px) > 1 and px[0] == px[-1]:
        px.pop()
    return px


def f8_symbols(start: tuple[int, int], dirs) -> list[int]:
    px = f8_pixels(start, dirs)
    n = len(px)
    if n == 1:
        return []
    out = []
    for i in range(n):
        r0, c0 = px[i]
        r1, c1 = px[(i + 1) % n]
        out.append(_F8_DIR[(c1 - c0, r0 - r1)])
    return out


def vcc_symbols(inside, start: tuple[int, int], dirs) -> list[int]:
    """Corner count in 1..3 at each crack's target vertex.

    inside(row, col) -> bool tests blob membership.  One symbol per
    crack, same stream length as the 4-direction code.
    """

    x, y = start
    out = []
    for d in dirs:
        x += DX[d]
        y += DY[d]
        c = (inside(y - 1, x - 1) + inside(y - 1, x)
             + inside(y, x - 1) + inside(y, x))
        out.append(c)
    return out

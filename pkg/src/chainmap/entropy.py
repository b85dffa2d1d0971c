"""Binary range coder with adaptive frequency models.

Carry-propagating byte-oriented coder (32-bit low, 24-bit renorm
threshold).  The flush emits the lowest point of the final interval and
strips trailing zero bytes; the decoder zero-fills past the end of the
payload, so the stream needs no explicit length or terminator.
"""

from __future__ import annotations

import math

from .errors import CorruptStream

TOP = 1 << 24
MASK32 = 0xFFFFFFFF

INC = 32          # adaptive frequency increment
LIMIT = 1 << 13   # halve all counts when the total passes this


class Model:
    """Adaptive symbol frequencies, uniform start."""

    __slots__ = ("freq", "total")

    def __init__(self, n: int):
        self.freq = [1] * n
        self.total = n

    def update(self, s: int) -> None:
        self.freq[s] += INC
        self.total += INC
        if self.total > LIMIT:
            t = 0
            f = self.freq
            for i in range(len(f)):
                f[i] = (f[i] + 1) >> 1
                t += f[i]
            self.total = t

    def snapshot(self) -> tuple[list[int], int]:
        return list(self.freq), self.total

    def restore(self, snap: tuple[list[int], int]) -> None:
        self.freq[:] = snap[0]
        self.total = snap[1]


class RangeEncoder:
    def __init__(self):
        self.low = 0
        self.range = MASK32
        self.cache = 0
        self.cache_size = 1
        self.out = bytearray()

    def _shift_low(self) -> None:
        if self.low < 0xFF000000 or self.low > MASK32:
            carry = self.low >> 32
            self.out.append((self.cache + carry) & 0xFF)
            if self.cache_size > 1:
                self.out.extend(((0xFF + carry) & 0xFF,) * (self.cache_size - 1))
            self.cache = (self.low >> 24) & 0xFF
            self.cache_size = 0
        self.cache_size += 1
        self.low = (self.low << 8) & MASK32

    def _renorm(self) -> None:
        while self.range < TOP:
            self._shift_low()
            self.range <<= 8

    def encode(self, model: Model, s: int, mask: tuple[int, int] | None = None) -> None:
        freq = model.freq
        if mask is None:
            total = model.total
            cum = 0
            for i in range(s):
                cum += freq[i]
        else:
            lo, hi = mask
            total = model.total
            for i in range(lo, hi):
                total -= freq[i]
            cum = 0
            for i in range(s):
                if lo <= i < hi:
                    continue
                cum += freq[i]
        r = self.range // total
        self.low += r * cum
        self.range = r * freq[s]
        self._renorm()
        model.update(s)

    def encode_uniform(self, v: int, n: int) -> None:
        r = self.range // n
        self.low += r * v
        if v < n - 1:
            self.range = r
        else:
            self.range -= r * (n - 1)
        self._renorm()

    def encode_raw_bit(self, b: int) -> None:
        self.range >>= 1
        if b:
            self.low += self.range
        self._renorm()

    def encode_raw(self, v: int, nbits: int) -> None:
        for i in range(nbits - 1, -1, -1):
            self.encode_raw_bit((v >> i) & 1)

    def encode_eg0(self, v: int) -> None:
        # Exp-Golomb order 0 over raw bits: k zeros, then v+1 in k+1 bits
        n = v + 1
        k = n.bit_length() - 1
        for _ in range(k):
            self.encode_raw_bit(0)
        self.encode_raw(n, k + 1)

    def cost_bits(self) -> float:
        return 8.0 * (len(self.out) + self.cache_size) + (32.0 - math.log2(self.range))

    def state(self) -> tuple[int, int, int, int, int]:
        return self.low, self.range, self.cache, self.cache_size, len(self.out)

    def rewind(self, st: tuple[int, int, int, int, int]) -> None:
        self.low, self.range, self.cache, self.cache_size, n = st
        del self.out[n:]

    def finish(self) -> bytes:
        # any value in [low, low + range) decodes identically; pick the
        # one with the most trailing zero bytes so they strip away
        for k in (32, 24):
            v = ((self.low + (1 << k) - 1) >> k) << k
            if v < self.low + self.range:
                self.low = v
                break
        for _ in range(5):
            self._shift_low()
        return bytes(self.out).rstrip(b"\x00")


class RangeDecoder:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos
        self.range = MASK32
        code = 0
        for _ in range(5):
            code = ((code << 8) | self._byte()) & MASK32
        self.code = code

    def _byte(self) -> int:
        p = self.pos
        if p >= len(self.data):
            return 0
        self.pos = p + 1
        return self.data[p]

    def _renorm(self) -> None:
        while self.range < TOP:
            self.code = ((self.code << 8) | self._byte()) & MASK32
            self.range <<= 8

    def decode(self, model: Model, mask: tuple[int, int] | None = None) -> int:
        freq = model.freq
        if mask is None:
            total = model.total
        else:
            lo, hi = mask
            total = model.total
            for i in range(lo, hi):
                total -= freq[i]
        r = self.range // total
        v = self.code // r
        if v >= total:
            v = total - 1
        cum = 0
        s = -1
        if mask is None:
            for i in range(len(freq)):
                if cum + freq[i] > v:
                    s = i
                    break
                cum += freq[i]
        else:
            lo, hi = mask
            for i in range(len(freq)):
                if lo <= i < hi:
                    continue
                if cum + freq[i] > v:
                    s = i
                    break
                cum += freq[i]
        if s < 0:
            raise CorruptStream("symbol outside model range")
        self.code -= r * cum
        self.range = r * freq[s]
        self._renorm()
        model.update(s)
        return s

    def decode_uniform(self, n: int) -> int:
        r = self.range // n
        v = self.code // r
        if v >= n:
            v = n - 1
        self.code -= r * v
        if v < n - 1:
            self.range = r
        else:
            self.range -= r * (n - 1)
        self._renorm()
        return v

    def decode_raw_bit(self) -> int:
        self.range >>= 1
        if self.code >= self.range:
            self.code -= self.range
            b = 1
        else:
            b = 0
        self._renorm()
        return b

    def decode_raw(self, nbits: int) -> int:
        v = 0
        for _ in range(nbits):
            v = (v << 1) | self.decode_raw_bit()
        return v

    def decode_eg0(self) -> int:
        k = 0
        while self.decode_raw_bit() == 0:
            k += 1
            if k > 48:
                raise CorruptStream("runaway run-length prefix")
        n = 1
        for _ in range(k):
            n = (n << 1) | self.decode_raw_bit()
        return n - 1

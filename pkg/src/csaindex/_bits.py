"""Word-level bit helpers shared by the jitted kernels, plus fixed-width packing."""

import numpy as np
from numba import njit
from numba.cpython.unsafe.numbers import leading_zeros, trailing_zeros

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def low_mask(b):
    """Mask with the lowest ``b`` bits set, 0 <= b <= 64."""
    if b >= 64:
        return _ALL
    return (_ONE << np.uint64(b)) - _ONE


@njit(cache=True, inline="always")
def select_in_word(w, k):
    """0-based offset of the k-th (1-based) set bit of ``w``."""
    for _ in range(k - 1):
        w &= w - _ONE
    return np.int64(trailing_zeros(w))


@njit(cache=True, inline="always")
def highest_bit(w):
    return np.int64(63 - leading_zeros(w))


@njit(cache=True, inline="always")
def lowest_bit(w):
    return np.int64(trailing_zeros(w))


def bit_width(max_value):
    """Bits needed for unsigned values in ``[0, max_value]`` (at least 1)."""
    max_value = int(max_value)
    return max(1, max_value.bit_length())


def packed_nbytes(count, width):
    return (int(count) * int(width) + 7) // 8


_CHUNK = 1 << 16


def pack_uint(values, width):
    """Pack non-negative integers into a little-endian bit stream of ``width`` bits each."""
    values = np.asarray(values, dtype=np.uint64)
    if width <= 0:
        raise ValueError("width must be positive")
    if values.size and int(values.max()) >> width:
        raise ValueError(f"value does not fit in {width} bits")
    shifts = np.arange(width, dtype=np.uint64)
    out = np.zeros(values.size * width, dtype=np.uint8)
    for lo in range(0, values.size, _CHUNK):
        chunk = values[lo : lo + _CHUNK]
        bits = ((chunk[:, None] >> shifts[None, :]) & _ONE).astype(np.uint8)
        out[lo * width : (lo + chunk.size) * width] = bits.ravel()
    return np.packbits(out, bitorder="little").tobytes()


def unpack_uint(buf, count, width):
    count = int(count)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")
    weights = np.uint64(1) << np.arange(width, dtype=np.uint64)
    out = np.empty(count, dtype=np.int64)
    for lo in range(0, count, _CHUNK):
        hi = min(count, lo + _CHUNK)
        block = bits[lo * width : hi * width].reshape(hi - lo, width).astype(np.uint64)
        out[lo:hi] = (block * weights[None, :]).sum(axis=1, dtype=np.uint64).astype(np.int64)
    return out

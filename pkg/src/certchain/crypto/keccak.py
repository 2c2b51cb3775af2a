"""Keccak-256 with the original Keccak padding (0x01), not NIST SHA-3 (0x06).

Every digest in this system is Keccak-256. The sponge runs at rate 136 /
capacity 512 over the keccak-f[1600] permutation. The permutation is
JIT-compiled with numba when available; a pure-Python path over the same
numpy state layout is kept as the reference implementation (slow, used as
a cross-check and as a fallback where numba is missing).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

RATE = 136  # bytes absorbed per permutation at 256-bit output

# Rotation offsets and lane permutation for the combined rho+pi step,
# in the order lanes are walked (standard single-loop formulation).
_ROTC = np.array(
    [1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8,
     25, 43, 62, 18, 39, 61, 20, 44],
    dtype=np.uint64,
)
_PILN = np.array(
    [10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13,
     12, 2, 20, 14, 22, 9, 6, 1],
    dtype=np.int64,
)
_RC = np.array(
    [0x0000000000000001, 0x0000000000008082, 0x800000000000808A,
     0x8000000080008000, 0x000000000000808B, 0x0000000080000001,
     0x8000000080008081, 0x8000000000008009, 0x000000000000008A,
     0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
     0x000000008000808B, 0x800000000000008B, 0x8000000000008089,
     0x8000000000008003, 0x8000000000008002, 0x8000000000000080,
     0x000000000000800A, 0x800000008000000A, 0x8000000080008081,
     0x8000000000008080, 0x0000000080000001, 0x8000000080008008],
    dtype=np.uint64,
)


def _absorb(state, lanes):
    """Absorb padded input (17-lane blocks) into the 25-lane state."""
    one = np.uint64(1)
    s63 = np.uint64(63)
    s64 = np.uint64(64)
    bc = np.zeros(5, dtype=np.uint64)
    nblocks = lanes.shape[0] // 17
    for blk in range(nblocks):
        base = blk * 17
        for i in range(17):
            state[i] ^= lanes[base + i]
        for rnd in range(24):
            # theta
            for i in range(5):
                bc[i] = state[i] ^ state[i + 5] ^ state[i + 10] ^ state[i + 15] ^ state[i + 20]
            for i in range(5):
                t = bc[(i + 4) % 5] ^ ((bc[(i + 1) % 5] << one) | (bc[(i + 1) % 5] >> s63))
                for j in range(0, 25, 5):
                    state[j + i] ^= t
            # rho + pi
            t = state[1]
            for i in range(24):
                j = _PILN[i]
                tmp = state[j]
                r = _ROTC[i]
                state[j] = (t << r) | (t >> (s64 - r))
                t = tmp
            # chi
            for j in range(0, 25, 5):
                for i in range(5):
                    bc[i] = state[j + i]
                for i in range(5):
                    state[j + i] = bc[i] ^ ((~bc[(i + 1) % 5]) & bc[(i + 2) % 5])
            # iota
            state[0] ^= _RC[rnd]


_absorb_py = _absorb
if _HAVE_NUMBA:
    _absorb_jit = _njit(cache=True)(_absorb)
else:  # pragma: no cover
    _absorb_jit = _absorb


def _pad(data: bytes) -> bytes:
    """Multi-rate padding: 0x01 ... 0x80 (the pre-NIST Keccak domain byte)."""
    padlen = RATE - (len(data) % RATE)
    pad = bytearray(padlen)
    pad[0] = 0x01
    pad[-1] |= 0x80
    return data + bytes(pad)


def _digest(data: bytes, absorb) -> bytes:
    lanes = np.frombuffer(_pad(data), dtype="<u8")
    state = np.zeros(25, dtype=np.uint64)
    absorb(state, lanes)
    return state[:4].astype("<u8").tobytes()


def keccak256(data: bytes) -> bytes:
    """Return the 32-byte Keccak-256 digest of `data`."""
    return _digest(data, _absorb_jit)


def keccak256_reference(data: bytes) -> bytes:
    """Pure-Python path, independent of the JIT. Slow; for cross-checks."""
    with np.errstate(over="ignore"):
        return _digest(data, _absorb_py)


def checksum8(data: bytes) -> bytes:
    """Truncated 8-byte keccak checksum used by the block log records."""
    return keccak256(data)[:8]

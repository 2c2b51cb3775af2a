"""Keccak-256 against published vectors and the pure-Python reference."""

import hashlib

import pytest
from hypothesis import given, strategies as st

from certchain.crypto import keccak256, keccak256_reference
from certchain.crypto.keccak import RATE

# Published digests for the original Keccak padding (pre-NIST).
VECTORS = [
    (b"", "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470"),
    (b"abc", "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45"),
    (
        b"The quick brown fox jumps over the lazy dog",
        "4d741b6f1eb29cb2a9b9911c82f56fa8d73b04959d3d9d222895df6c0b28aa15",
    ),
    (
        b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq",
        "45d3b367a6904e6e8d502ee04999a7c27647f91fa845d456525fd352ae3d7371",
    ),
]


@pytest.mark.parametrize("data,hexdigest", VECTORS)
def test_published_vectors(data, hexdigest):
    assert keccak256(data).hex() == hexdigest


def test_differs_from_nist_sha3():
    # Same permutation, different padding byte; digests must not collide.
    assert keccak256(b"abc") != hashlib.sha3_256(b"abc").digest()


def test_digest_is_32_bytes():
    assert len(keccak256(b"x")) == 32


@pytest.mark.parametrize("size", [0, 1, RATE - 1, RATE, RATE + 1, 3 * RATE, 10_000])
def test_reference_path_agrees_at_block_boundaries(size):
    data = bytes(i % 251 for i in range(size))
    assert keccak256(data) == keccak256_reference(data)


@given(st.binary(max_size=500))
def test_reference_path_agrees(data):
    assert keccak256(data) == keccak256_reference(data)


@given(st.binary(max_size=200), st.binary(min_size=1, max_size=200))
def test_distinct_inputs_distinct_digests(a, extra):
    assert keccak256(a) != keccak256(a + extra)

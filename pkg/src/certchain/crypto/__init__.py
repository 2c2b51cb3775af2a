"""Hashing, signatures, and address derivation."""

from .keccak import checksum8, keccak256, keccak256_reference
from .secp256k1 import (
    HALF_N,
    N,
    P,
    KeyPair,
    SignatureError,
    ecdsa_recover,
    ecdsa_sign,
    is_on_curve,
    public_key_bytes,
)


def derive_address(public: tuple[int, int]) -> bytes:
    """Account address: last 20 bytes of keccak256 of the 64-byte public key."""
    return keccak256(public_key_bytes(public))[12:]


__all__ = [
    "HALF_N",
    "KeyPair",
    "N",
    "P",
    "SignatureError",
    "checksum8",
    "derive_address",
    "ecdsa_recover",
    "ecdsa_sign",
    "is_on_curve",
    "keccak256",
    "keccak256_reference",
    "public_key_bytes",
]

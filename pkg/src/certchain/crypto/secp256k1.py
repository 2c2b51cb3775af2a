"""secp256k1 ECDSA with public-key recovery.

All transaction and seal signatures use this curve. Signatures are
(r, s, recovery_id) with recovery_id in {0, 1} and s restricted to the
lower half of the group order (canonical-s; the high-s twin of a valid
signature is rejected everywhere).

Implementation notes, relevant because this is pure Python:
  - Jacobian coordinates; a = 0 shortcuts apply.
  - k*G uses 32 fixed 8-bit windows of precomputed affine multiples of G
    (built lazily once per process, batch-inverted).
  - Arbitrary-point multiplication uses width-5 wNAF.
  - Nonces are deterministic per RFC 6979 (HMAC-SHA256), so signing is
    reproducible and needs no entropy source.
  - gmpy2 accelerates modular inversion/exponentiation when importable;
    builtin pow() is the fallback.

Signing points with x >= n (probability ~2^-128) are skipped so the
recovery id always fits one bit.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
from dataclasses import dataclass

try:
    from gmpy2 import invert as _g_invert, powmod as _g_powmod

    def _inv(a: int, m: int) -> int:
        return int(_g_invert(a, m))

    def _powmod(a: int, e: int, m: int) -> int:
        return int(_g_powmod(a, e, m))

except ImportError:  # pragma: no cover - gmpy2 is optional

    def _inv(a: int, m: int) -> int:
        return pow(a, -1, m)

    _powmod = pow

P = 2**256 - 2**32 - 977
N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
HALF_N = N // 2
GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8

_SQRT_EXP = (P + 1) // 4  # valid because P % 4 == 3


class SignatureError(ValueError):
    """Malformed or non-canonical signature material."""


# --- Jacobian point arithmetic (None is the point at infinity) ---------------


def _jdbl(pt):
    X1, Y1, Z1 = pt
    if Y1 == 0:
        return None
    A = X1 * X1 % P
    B = Y1 * Y1 % P
    C = B * B % P
    t = X1 + B
    D = 2 * (t * t - A - C) % P
    E = 3 * A
    X3 = (E * E - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y1 * Z1 % P
    return (X3, Y3, Z3)


def _jadd_mixed(pt, x2, y2):
    """Add the affine point (x2, y2) to jacobian pt."""
    if pt is None:
        return (x2, y2, 1)
    X1, Y1, Z1 = pt
    Z1Z1 = Z1 * Z1 % P
    U2 = x2 * Z1Z1 % P
    S2 = y2 * Z1 * Z1Z1 % P
    H = (U2 - X1) % P
    r = (S2 - Y1) % P
    if H == 0:
        if r == 0:
            return _jdbl(pt)
        return None
    HH = H * H % P
    I = 4 * HH % P
    J = H * I % P
    r = 2 * r % P
    V = X1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * Y1 * J) % P
    t = Z1 + H
    Z3 = (t * t - Z1Z1 - HH) % P
    return (X3, Y3, Z3)


def _jadd(pt1, pt2):
    if pt1 is None:
        return pt2
    if pt2 is None:
        return pt1
    X1, Y1, Z1 = pt1
    X2, Y2, Z2 = pt2
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    H = (U2 - U1) % P
    r = (S2 - S1) % P
    if H == 0:
        if r == 0:
            return _jdbl(pt1)
        return None
    I = 4 * H * H % P
    J = H * I % P
    r = 2 * r % P
    V = U1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = (Z1 + Z2)
    Z3 = (Z3 * Z3 - Z1Z1 - Z2Z2) % P * H % P
    return (X3, Y3, Z3)


def _jneg(pt):
    if pt is None:
        return None
    X, Y, Z = pt
    return (X, (P - Y) % P, Z)


def _to_affine(pt):
    if pt is None:
        raise SignatureError("point at infinity")
    X, Y, Z = pt
    zinv = _inv(Z, P)
    zinv2 = zinv * zinv % P
    return (X * zinv2 % P, Y * zinv2 * zinv % P)


def _batch_affine(points):
    """Affine-normalize many jacobian points with one field inversion."""
    zs = [pt[2] for pt in points]
    prefix = [1] * (len(zs) + 1)
    for i, z in enumerate(zs):
        prefix[i + 1] = prefix[i] * z % P
    acc = _inv(prefix[-1], P)
    out = [None] * len(points)
    for i in range(len(points) - 1, -1, -1):
        zinv = acc * prefix[i] % P
        acc = acc * zs[i] % P
        zinv2 = zinv * zinv % P
        X, Y, _ = points[i]
        out[i] = (X * zinv2 % P, Y * zinv2 * zinv % P)
    return out


def is_on_curve(x: int, y: int) -> bool:
    return 0 < x < P and 0 < y < P and (y * y - (x * x * x + 7)) % P == 0


# --- fixed-window tables for multiples of G ----------------------------------

_G_TABLES: list[list[tuple[int, int]]] | None = None
_G_LOCK = threading.Lock()


def _build_g_tables() -> list[list[tuple[int, int]]]:
    tables = []
    bx, by = GX, GY
    for _ in range(32):
        row = []
        acc = (bx, by, 1)
        row.append(acc)
        for _ in range(254):
            acc = _jadd_mixed(acc, bx, by)
            row.append(acc)
        tables.append(_batch_affine(row))
        nxt = (bx, by, 1)
        for _ in range(8):
            nxt = _jdbl(nxt)
        bx, by = _to_affine(nxt)
    return tables


def _g_tables() -> list[list[tuple[int, int]]]:
    global _G_TABLES
    if _G_TABLES is None:
        with _G_LOCK:
            if _G_TABLES is None:
                _G_TABLES = _build_g_tables()
    return _G_TABLES


def _mul_g(k: int):
    """k*G as a jacobian point (None for k == 0 mod n)."""
    k %= N
    if k == 0:
        return None
    tables = _g_tables()
    acc = None
    for i, d in enumerate(k.to_bytes(32, "little")):
        if d:
            x, y = tables[i][d - 1]
            acc = _jadd_mixed(acc, x, y)
    return acc


# --- arbitrary-point multiplication (width-5 wNAF) ---------------------------


def _wnaf(k: int, width: int = 5) -> list[int]:
    digits = []
    span = 1 << width
    half = 1 << (width - 1)
    while k:
        if k & 1:
            d = k % span
            if d >= half:
                d -= span
            digits.append(d)
            k -= d
        else:
            digits.append(0)
        k >>= 1
    return digits


def _mul_point(k: int, x: int, y: int):
    """k*(x, y) as a jacobian point for an arbitrary affine point."""
    k %= N
    if k == 0:
        return None
    digits = _wnaf(k)
    base = (x, y, 1)
    dbl = _jdbl(base)
    odd = [base]  # odd multiples 1P, 3P, ..., 31P
    for _ in range(15):
        odd.append(_jadd(odd[-1], dbl))
    acc = None
    for d in reversed(digits):
        if acc is not None:
            acc = _jdbl(acc)
        if d:
            pre = odd[(abs(d) - 1) // 2]
            acc = _jadd(acc, pre if d > 0 else _jneg(pre))
    return acc


# --- keys --------------------------------------------------------------------


@dataclass(frozen=True)
class KeyPair:
    """A secp256k1 private scalar with its public point."""

    secret: int
    public: tuple[int, int]

    @classmethod
    def from_secret(cls, secret: int) -> "KeyPair":
        if not 1 <= secret < N:
            raise SignatureError("private key out of range [1, n-1]")
        return cls(secret=secret, public=_to_affine(_mul_g(secret)))

    @classmethod
    def from_hex(cls, text: str) -> "KeyPair":
        raw = text[2:] if text.startswith(("0x", "0X")) else text
        if len(raw) != 64:
            raise SignatureError("private key hex must be 32 bytes")
        return cls.from_secret(int(raw, 16))

    @classmethod
    def generate(cls) -> "KeyPair":
        while True:
            secret = secrets.randbits(256)
            if 1 <= secret < N:
                return cls.from_secret(secret)

    @property
    def secret_hex(self) -> str:
        return "0x" + self.secret.to_bytes(32, "big").hex()


def public_key_bytes(public: tuple[int, int]) -> bytes:
    """Uncompressed 64-byte point encoding (x || y), no 0x04 prefix."""
    x, y = public
    return x.to_bytes(32, "big") + y.to_bytes(32, "big")


# --- ECDSA -------------------------------------------------------------------


def _rfc6979_nonces(msg_hash: bytes, secret: int):
    """Yield deterministic nonce candidates per RFC 6979 (SHA-256)."""
    x = secret.to_bytes(32, "big")
    v = b"\x01" * 32
    k = b"\x00" * 32
    k = hmac.new(k, v + b"\x00" + x + msg_hash, hashlib.sha256).digest()
    v = hmac.new(k, v, hashlib.sha256).digest()
    k = hmac.new(k, v + b"\x01" + x + msg_hash, hashlib.sha256).digest()
    v = hmac.new(k, v, hashlib.sha256).digest()
    while True:
        v = hmac.new(k, v, hashlib.sha256).digest()
        candidate = int.from_bytes(v, "big")
        if 1 <= candidate < N:
            yield candidate
        k = hmac.new(k, v + b"\x00", hashlib.sha256).digest()
        v = hmac.new(k, v, hashlib.sha256).digest()


def ecdsa_sign(msg_hash: bytes, secret: int) -> tuple[int, int, int]:
    """Sign a 32-byte digest; returns canonical (r, s, recovery_id)."""
    if len(msg_hash) != 32:
        raise SignatureError("message hash must be 32 bytes")
    if not 1 <= secret < N:
        raise SignatureError("private key out of range [1, n-1]")
    z = int.from_bytes(msg_hash, "big")
    for k in _rfc6979_nonces(msg_hash, secret):
        rx, ry = _to_affine(_mul_g(k))
        if rx == 0 or rx >= N:
            continue
        r = rx
        s = _inv(k, N) * (z + r * secret) % N
        if s == 0:
            continue
        recid = ry & 1
        if s > HALF_N:
            s = N - s
            recid ^= 1
        return (r, s, recid)
    raise AssertionError("unreachable")


def ecdsa_recover(msg_hash: bytes, r: int, s: int, recid: int) -> tuple[int, int]:
    """Recover the signer's public point. Rejects high-s signatures."""
    if len(msg_hash) != 32:
        raise SignatureError("message hash must be 32 bytes")
    if recid not in (0, 1):
        raise SignatureError("recovery id must be 0 or 1")
    if not 1 <= r < N:
        raise SignatureError("r out of range")
    if not 1 <= s <= HALF_N:
        raise SignatureError("s out of range (canonical-s required)")
    alpha = (r * r * r + 7) % P
    y = _powmod(alpha, _SQRT_EXP, P)
    if y * y % P != alpha:
        raise SignatureError("r is not the x coordinate of a curve point")
    if (y & 1) != recid:
        y = P - y
    z = int.from_bytes(msg_hash, "big")
    rinv = _inv(r, N)
    u1 = (-z * rinv) % N
    u2 = (s * rinv) % N
    q = _jadd(_mul_g(u1), _mul_point(u2, r, y))
    if q is None:
        raise SignatureError("recovered point at infinity")
    qx, qy = _to_affine(q)
    if not is_on_curve(qx, qy):
        raise SignatureError("recovered point is not on the curve")
    return (qx, qy)

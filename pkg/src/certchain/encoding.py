"""Canonical binary encodings and hashes.

Everything that gets hashed or shipped between nodes has exactly one
byte representation, defined here. All integers are big-endian and
fixed-width; variable-length parts carry explicit length prefixes, so
every encoding is injective and self-delimiting.

Transaction: u64 chain_id || u64 nonce || from(20) || to(20) ||
u128 value || u64 gas_limit || u64 gas_price || u8 payload_tag.
Tag 0 is a transfer and ends the encoding; tag 1 is a call, followed by
u8 function_code || u16 arg_count || (u32 len || utf8)*.

SignedTransaction: transaction bytes || r(32) || s(32) || u8 recovery_id.
The signing preimage is keccak256 of the unsigned transaction bytes
(chain_id is inside, so signatures never replay across chains); the
transaction hash is keccak256 of the signed bytes.

Header: u64 number || parent_hash(32) || u64 timestamp || sealer(20) ||
u64 gas_limit || u64 gas_used || tx_root(32) || state_root(32).
The header hash (also the seal preimage) is keccak256 of those 148 bytes.

Block: header bytes || seal r(32) || s(32) || u8 recovery_id ||
u32 tx_count || (u32 len || signed tx bytes)*.

Log record (block persistence): u32 len || block bytes || checksum8,
where checksum8 is the first 8 bytes of keccak256 of the block bytes.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterator

from .crypto import checksum8, keccak256
from .types import (
    FUNCTION_BY_CODE,
    FUNCTIONS,
    Block,
    BlockHeader,
    CallPayload,
    Signature,
    SignedTransaction,
    Transaction,
)

U64_MAX = 2**64 - 1
U128_MAX = 2**128 - 1


class DecodeError(ValueError):
    """Input bytes do not form a valid canonical encoding."""


# --- hex helpers -------------------------------------------------------------


def to_hex(data: bytes) -> str:
    return "0x" + data.hex()


def parse_hex(text: str, length: int | None = None) -> bytes:
    raw = text[2:] if text.startswith(("0x", "0X")) else text
    try:
        data = bytes.fromhex(raw)
    except ValueError as exc:
        raise DecodeError(f"invalid hex: {exc}") from None
    if length is not None and len(data) != length:
        raise DecodeError(f"expected {length} bytes, got {len(data)}")
    return data


def parse_address(text: str) -> bytes:
    return parse_hex(text, 20)


# --- primitive writers/readers ----------------------------------------------


def _u64(n: int) -> bytes:
    if not 0 <= n <= U64_MAX:
        raise ValueError(f"u64 out of range: {n}")
    return n.to_bytes(8, "big")


def _u128(n: int) -> bytes:
    if not 0 <= n <= U128_MAX:
        raise ValueError(f"u128 out of range: {n}")
    return n.to_bytes(16, "big")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DecodeError("truncated input")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return int.from_bytes(self.take(2), "big")

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def u64(self) -> int:
        return int.from_bytes(self.take(8), "big")

    def u128(self) -> int:
        return int.from_bytes(self.take(16), "big")

    def done(self):
        if self.pos != len(self.data):
            raise DecodeError("trailing bytes after encoding")


# --- transactions ------------------------------------------------------------


def encode_transaction(tx: Transaction) -> bytes:
    if len(tx.sender) != 20 or len(tx.to) != 20:
        raise ValueError("addresses must be 20 bytes")
    parts = [
        _u64(tx.chain_id),
        _u64(tx.nonce),
        tx.sender,
        tx.to,
        _u128(tx.value),
        _u64(tx.gas_limit),
        _u64(tx.gas_price),
    ]
    if tx.payload is None:
        parts.append(b"\x00")
    else:
        code = FUNCTIONS[tx.payload.function][0]
        parts.append(bytes([1, code]))
        parts.append(struct.pack(">H", len(tx.payload.args)))
        for arg in tx.payload.args:
            raw = arg.encode("utf-8")
            parts.append(struct.pack(">I", len(raw)))
            parts.append(raw)
    return b"".join(parts)


def _read_transaction(r: _Reader) -> Transaction:
    chain_id = r.u64()
    nonce = r.u64()
    sender = r.take(20)
    to = r.take(20)
    value = r.u128()
    gas_limit = r.u64()
    gas_price = r.u64()
    tag = r.u8()
    if tag == 0:
        payload = None
    elif tag == 1:
        code = r.u8()
        if code not in FUNCTION_BY_CODE:
            raise DecodeError(f"unknown function code {code}")
        count = r.u16()
        args = []
        for _ in range(count):
            n = r.u32()
            try:
                args.append(r.take(n).decode("utf-8"))
            except UnicodeDecodeError:
                raise DecodeError("argument is not valid UTF-8") from None
        try:
            payload = CallPayload(FUNCTION_BY_CODE[code], tuple(args))
        except ValueError as exc:
            raise DecodeError(str(exc)) from None
    else:
        raise DecodeError(f"unknown payload tag {tag}")
    return Transaction(chain_id, nonce, sender, to, value, gas_limit, gas_price, payload)


def decode_transaction(data: bytes) -> Transaction:
    r = _Reader(data)
    tx = _read_transaction(r)
    r.done()
    return tx


def signing_hash(tx: Transaction) -> bytes:
    """The 32-byte digest a sender signs."""
    return keccak256(encode_transaction(tx))


def encode_signed_transaction(stx: SignedTransaction) -> bytes:
    r, s, recid = stx.signature
    return (
        encode_transaction(stx.tx)
        + r.to_bytes(32, "big")
        + s.to_bytes(32, "big")
        + bytes([recid])
    )


def _read_signed_transaction(r: _Reader) -> SignedTransaction:
    tx = _read_transaction(r)
    sig_r = int.from_bytes(r.take(32), "big")
    sig_s = int.from_bytes(r.take(32), "big")
    recid = r.u8()
    if recid not in (0, 1):
        raise DecodeError(f"recovery id must be 0 or 1, got {recid}")
    return SignedTransaction(tx, Signature(sig_r, sig_s, recid))


def decode_signed_transaction(data: bytes) -> SignedTransaction:
    r = _Reader(data)
    stx = _read_signed_transaction(r)
    r.done()
    return stx


def tx_hash(stx: SignedTransaction) -> bytes:
    """Transaction identifier: keccak256 of the signed encoding."""
    return keccak256(encode_signed_transaction(stx))


def tx_root(hashes: list[bytes]) -> bytes:
    """Commitment to a block's transactions: keccak256 of concatenated hashes."""
    return keccak256(b"".join(hashes))


# --- headers and blocks ------------------------------------------------------


def encode_header(h: BlockHeader) -> bytes:
    if len(h.parent_hash) != 32 or len(h.tx_root) != 32 or len(h.state_root) != 32:
        raise ValueError("header hashes must be 32 bytes")
    if len(h.sealer) != 20:
        raise ValueError("sealer must be 20 bytes")
    return (
        _u64(h.number)
        + h.parent_hash
        + _u64(h.timestamp)
        + h.sealer
        + _u64(h.gas_limit)
        + _u64(h.gas_used)
        + h.tx_root
        + h.state_root
    )


def header_hash(h: BlockHeader) -> bytes:
    """Block identifier and seal preimage; the seal itself is not hashed."""
    return keccak256(encode_header(h))


def decode_header(data: bytes) -> BlockHeader:
    r = _Reader(data)
    h = _read_header(r)
    r.done()
    return h


def _read_header(r: _Reader) -> BlockHeader:
    return BlockHeader(
        number=r.u64(),
        parent_hash=r.take(32),
        timestamp=r.u64(),
        sealer=r.take(20),
        gas_limit=r.u64(),
        gas_used=r.u64(),
        tx_root=r.take(32),
        state_root=r.take(32),
    )


def encode_block(block: Block) -> bytes:
    r, s, recid = block.seal_signature
    parts = [
        encode_header(block.header),
        r.to_bytes(32, "big"),
        s.to_bytes(32, "big"),
        bytes([recid]),
        struct.pack(">I", len(block.transactions)),
    ]
    for stx in block.transactions:
        raw = encode_signed_transaction(stx)
        parts.append(struct.pack(">I", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def decode_block(data: bytes) -> Block:
    r = _Reader(data)
    header = _read_header(r)
    sig_r = int.from_bytes(r.take(32), "big")
    sig_s = int.from_bytes(r.take(32), "big")
    recid = r.u8()
    count = r.u32()
    txs = []
    for _ in range(count):
        n = r.u32()
        sub = _Reader(r.take(n))
        stx = _read_signed_transaction(sub)
        sub.done()
        txs.append(stx)
    r.done()
    return Block(header, tuple(txs), Signature(sig_r, sig_s, recid))


# --- block log records -------------------------------------------------------


def write_log_record(fh: BinaryIO, block_bytes: bytes) -> None:
    fh.write(struct.pack(">I", len(block_bytes)))
    fh.write(block_bytes)
    fh.write(checksum8(block_bytes))


def read_log_records(fh: BinaryIO) -> Iterator[bytes]:
    """Yield block encodings; raises DecodeError on any corruption."""
    while True:
        prefix = fh.read(4)
        if not prefix:
            return
        if len(prefix) < 4:
            raise DecodeError("truncated record length")
        (n,) = struct.unpack(">I", prefix)
        body = fh.read(n)
        if len(body) < n:
            raise DecodeError("truncated record body")
        check = fh.read(8)
        if len(check) < 8:
            raise DecodeError("truncated record checksum")
        if check != checksum8(body):
            raise DecodeError("record checksum mismatch")
        yield body

"""Transaction signing and signer recovery; block seal helpers."""

from __future__ import annotations

from functools import lru_cache

from .crypto import KeyPair, SignatureError, derive_address, ecdsa_recover, ecdsa_sign
from .encoding import header_hash, signing_hash
from .types import Block, BlockHeader, Signature, SignedTransaction, Transaction


def sign_transaction(tx: Transaction, key: KeyPair) -> SignedTransaction:
    if derive_address(key.public) != tx.sender:
        raise SignatureError("key does not match the transaction's from address")
    r, s, recid = ecdsa_sign(signing_hash(tx), key.secret)
    return SignedTransaction(tx, Signature(r, s, recid))


@lru_cache(maxsize=65536)
def _recover_address(msg_hash: bytes, r: int, s: int, recid: int) -> bytes:
    return derive_address(ecdsa_recover(msg_hash, r, s, recid))


def recover_signer(stx: SignedTransaction) -> bytes:
    """Address recovered from the signature; raises SignatureError if invalid.

    Cached: the sealer, the validator re-execution, and any follower all
    recover the same signature, and recovery dominates their cost.
    """
    r, s, recid = stx.signature
    return _recover_address(signing_hash(stx.tx), r, s, recid)


def seal_block(block: Block, key: KeyPair) -> Block:
    if derive_address(key.public) != block.header.sealer:
        raise SignatureError("key does not match the header's sealer address")
    r, s, recid = ecdsa_sign(header_hash(block.header), key.secret)
    return Block(block.header, block.transactions, Signature(r, s, recid))


def recover_sealer(header: BlockHeader, seal: Signature) -> bytes:
    return _recover_address(header_hash(header), seal.r, seal.s, seal.recovery_id)

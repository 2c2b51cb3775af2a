"""Transaction signing round trips and seal recovery."""

import dataclasses

import pytest

from certchain.crypto import KeyPair, SignatureError, derive_address
from certchain.encoding import decode_signed_transaction, encode_signed_transaction
from certchain.signing import recover_signer, recover_sealer, seal_block, sign_transaction
from certchain.types import (
    Block,
    BlockHeader,
    CallPayload,
    Signature,
    Transaction,
    ZERO_HASH,
)

KEY_A = KeyPair.from_secret(0x1111)
KEY_B = KeyPair.from_secret(0x2222)


def _tx(sender, nonce=0):
    return Transaction(
        chain_id=496,
        nonce=nonce,
        sender=sender,
        to=b"\x00" * 20,
        value=0,
        gas_limit=400_000,
        gas_price=1,
        payload=CallPayload("addCertificate", tuple(f"f{i}" for i in range(7))),
    )


def test_sign_recover_round_trip():
    tx = _tx(derive_address(KEY_A.public))
    stx = sign_transaction(tx, KEY_A)
    assert recover_signer(stx) == derive_address(KEY_A.public)


def test_sign_rejects_mismatched_sender():
    tx = _tx(derive_address(KEY_B.public))
    with pytest.raises(SignatureError):
        sign_transaction(tx, KEY_A)


def test_tampered_payload_changes_recovered_signer():
    stx = sign_transaction(_tx(derive_address(KEY_A.public)), KEY_A)
    tampered = dataclasses.replace(
        stx, tx=dataclasses.replace(stx.tx, nonce=stx.tx.nonce + 1)
    )
    try:
        recovered = recover_signer(tampered)
    except SignatureError:
        return
    assert recovered != derive_address(KEY_A.public)


def test_signature_survives_wire_round_trip():
    stx = sign_transaction(_tx(derive_address(KEY_A.public)), KEY_A)
    again = decode_signed_transaction(encode_signed_transaction(stx))
    assert recover_signer(again) == derive_address(KEY_A.public)


def _header(sealer):
    return BlockHeader(
        number=1,
        parent_hash=ZERO_HASH,
        timestamp=5,
        sealer=sealer,
        gas_limit=27_507_108,
        gas_used=0,
        tx_root=ZERO_HASH,
        state_root=ZERO_HASH,
    )


def test_seal_round_trip():
    block = Block(_header(derive_address(KEY_A.public)))
    sealed = seal_block(block, KEY_A)
    assert recover_sealer(sealed.header, sealed.seal_signature) == derive_address(
        KEY_A.public
    )


def test_seal_rejects_wrong_key():
    block = Block(_header(derive_address(KEY_A.public)))
    with pytest.raises(SignatureError):
        seal_block(block, KEY_B)


def test_garbage_signature_never_recovers_the_claimed_sender():
    # A fabricated (r, s) may still recover to *some* point; what must
    # hold is that it does not recover to the claimed sender.
    stx = sign_transaction(_tx(derive_address(KEY_A.public)), KEY_A)
    broken = dataclasses.replace(stx, signature=Signature(1, 1, 0))
    try:
        recovered = recover_signer(broken)
    except SignatureError:
        return
    assert recovered != derive_address(KEY_A.public)

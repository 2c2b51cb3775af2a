"""Chain assembly, validation, and the block log."""

import dataclasses

import pytest

from certchain.chain import BlockLog, BlockRejected, Chain, genesis_block
from certchain.config import ChainConfig
from certchain.crypto import KeyPair, derive_address, keccak256
from certchain.encoding import DecodeError, encode_header, header_hash
from certchain.mempool import Mempool
from certchain.signing import seal_block
from certchain.state import commit_state
from certchain.types import Block, ZERO_ADDRESS, ZERO_HASH

from conftest import make_cert_tx, make_config


@pytest.fixture
def loaded(config, registrar_key):
    """A chain plus a pool holding five cert txs."""
    chain = Chain(config)
    pool = Mempool()
    for i in range(5):
        pool.submit(make_cert_tx(config, registrar_key, i, nonce=i), chain.head_state, config)
    return chain, pool


def now_for(chain):
    return chain.head.header.timestamp + chain.config.block_period_s


# --- genesis -----------------------------------------------------------------


def test_genesis_shape(config):
    block, state = genesis_block(config)
    h = block.header
    assert h.number == 0
    assert h.parent_hash == ZERO_HASH
    assert h.sealer == ZERO_ADDRESS
    assert h.timestamp == config.genesis_timestamp
    assert h.gas_used == 0
    assert h.tx_root == keccak256(b"")
    assert h.state_root == commit_state(state)
    assert block.transactions == ()


def test_genesis_hash_reproducible_from_manual_layout(config):
    # Independent route: assemble the 148-byte header layout by hand.
    block, _ = genesis_block(config)
    h = block.header
    manual = (
        (0).to_bytes(8, "big")
        + b"\x00" * 32
        + h.timestamp.to_bytes(8, "big")
        + b"\x00" * 20
        + h.gas_limit.to_bytes(8, "big")
        + (0).to_bytes(8, "big")
        + keccak256(b"")
        + h.state_root
    )
    assert encode_header(h) == manual
    assert header_hash(h) == keccak256(manual)


def test_genesis_state_root_reproducible_from_manual_serialization(config):
    # Independent route: serialize the genesis state by hand (one
    # funded account, no certificates) and hash it.
    _, state = genesis_block(config)
    registrar, balance = config.alloc[0]
    manual = (
        (1).to_bytes(4, "big")
        + registrar
        + balance.to_bytes(16, "big")
        + (0).to_bytes(8, "big")
        + (0).to_bytes(4, "big")
        + (0).to_bytes(8, "big")
        + config.registrar
    )
    assert commit_state(state) == keccak256(manual)


# --- assembly and sealing ----------------------------------------------------


def test_assemble_includes_ready_txs(loaded, config):
    chain, pool = loaded
    block, state, receipts = chain.assemble_block(pool, now_for(chain))
    assert len(block.transactions) == 5
    assert block.header.gas_used == 5 * 343_838
    assert block.header.state_root == commit_state(state)
    assert [r.status for r in receipts] == ["success"] * 5
    assert block.header.timestamp == config.genesis_timestamp + 5


def test_assemble_requires_elapsed_period(loaded):
    chain, pool = loaded
    with pytest.raises(ValueError, match="period"):
        chain.assemble_block(pool, now_for(chain) - 1)


def test_assemble_empty_pool_seals_empty_block(config):
    chain = Chain(config)
    block, _, receipts = chain.assemble_block(Mempool(), now_for(chain))
    assert block.transactions == ()
    assert block.header.gas_used == 0
    assert receipts == []


def test_gas_cutoff_leaves_overflow_pending(sealer_key, registrar_key):
    # room for exactly two adds per block
    config = make_config(sealer_key, registrar_key, block_gas_limit=2 * 343_838)
    chain = Chain(config)
    pool = Mempool()
    for i in range(3):
        pool.submit(make_cert_tx(config, registrar_key, i, nonce=i), chain.head_state, config)
    sealed = chain.seal_and_append(pool, sealer_key, now_for(chain))
    assert len(sealed.transactions) == 2
    assert len(pool) == 1
    sealed2 = chain.seal_and_append(pool, sealer_key, now_for(chain))
    assert len(sealed2.transactions) == 1
    assert len(pool) == 0


def test_seal_and_append_round_trip(loaded, sealer_key, config):
    chain, pool = loaded
    sealed = chain.seal_and_append(pool, sealer_key, now_for(chain))
    assert chain.height == 1
    assert chain.head is sealed
    assert sealed.header.sealer == derive_address(sealer_key.public)
    assert len(pool) == 0
    assert chain.head_state.cert_count == 5


def test_produced_block_passes_validation_elsewhere(loaded, sealer_key, config):
    chain, pool = loaded
    sealed = chain.seal_and_append(pool, sealer_key, now_for(chain))
    other = Chain(config)
    other.validate_and_append(sealed)
    assert other.height == 1
    assert other.snapshot.head_hash == chain.snapshot.head_hash
    assert commit_state(other.head_state) == commit_state(chain.head_state)


def test_seal_requires_authority_key(loaded, registrar_key):
    chain, pool = loaded
    block, _, _ = chain.assemble_block(pool, now_for(chain))
    with pytest.raises(Exception, match="sealer"):
        seal_block(block, registrar_key)  # registrar is not an authority


def test_two_authority_rotation(registrar_key):
    key_a = KeyPair.from_secret(0xAAA)
    key_b = KeyPair.from_secret(0xBBB)
    registrar = derive_address(registrar_key.public)
    config = ChainConfig(
        authorities=(derive_address(key_a.public), derive_address(key_b.public)),
        registrar=registrar,
        alloc=((registrar, 10**24),),
    )
    chain = Chain(config)
    pool = Mempool()
    # height 1 belongs to authorities[1 % 2] = key_b
    with pytest.raises(Exception, match="sealer"):
        chain.seal_and_append(pool, key_a, now_for(chain))
    chain.seal_and_append(pool, key_b, now_for(chain))
    chain.seal_and_append(pool, key_a, now_for(chain))
    assert chain.height == 2


# --- validation rejections ---------------------------------------------------


def _sealed_next(chain, pool, sealer_key):
    block, _, _ = chain.assemble_block(pool, now_for(chain))
    return seal_block(block, sealer_key)


def _tamper_and_reseal(block, sealer_key, **header_changes):
    header = dataclasses.replace(block.header, **header_changes)
    return seal_block(Block(header, block.transactions), sealer_key)


def test_rejects_wrong_height(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(block, sealer_key, number=7)
    target = Chain(config)
    with pytest.raises(BlockRejected, match="height"):
        target.validate_and_append(bad)


def test_rejects_parent_mismatch(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(block, sealer_key, parent_hash=b"\x13" * 32)
    target = Chain(config)
    with pytest.raises(BlockRejected, match="parent"):
        target.validate_and_append(bad)


def test_rejects_short_period(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(
        block, sealer_key, timestamp=config.genesis_timestamp + config.block_period_s - 1
    )
    target = Chain(config)
    with pytest.raises(BlockRejected, match="period"):
        target.validate_and_append(bad)


def test_rejects_flipped_state_root(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    flipped = bytearray(block.header.state_root)
    flipped[0] ^= 0x01
    bad = _tamper_and_reseal(block, sealer_key, state_root=bytes(flipped))
    target = Chain(config)
    with pytest.raises(BlockRejected, match="state_root"):
        target.validate_and_append(bad)


def test_rejects_tampered_header_without_reseal(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    header = dataclasses.replace(block.header, state_root=bytes(32))
    bad = Block(header, block.transactions, block.seal_signature)
    target = Chain(config)
    with pytest.raises(BlockRejected, match="seal"):
        target.validate_and_append(bad)


def test_rejects_wrong_tx_root(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(block, sealer_key, tx_root=keccak256(b"lies"))
    target = Chain(config)
    with pytest.raises(BlockRejected, match="tx_root"):
        target.validate_and_append(bad)


def test_rejects_wrong_gas_used(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(block, sealer_key, gas_used=123)
    target = Chain(config)
    with pytest.raises(BlockRejected, match="gas_used"):
        target.validate_and_append(bad)


def test_rejects_non_authority_sealer(loaded, registrar_key, config):
    chain, pool = loaded
    block, _, _ = chain.assemble_block(pool, now_for(chain))
    header = dataclasses.replace(block.header, sealer=derive_address(registrar_key.public))
    bad = seal_block(Block(header, block.transactions), registrar_key)
    target = Chain(config)
    with pytest.raises(BlockRejected, match="authority"):
        target.validate_and_append(bad)


def test_rejects_duplicate_block(loaded, sealer_key, config):
    chain, pool = loaded
    sealed = chain.seal_and_append(pool, sealer_key, now_for(chain))
    with pytest.raises(BlockRejected, match="height"):
        chain.validate_and_append(sealed)


def test_rejection_leaves_chain_unchanged(loaded, sealer_key, config):
    chain, pool = loaded
    block = _sealed_next(chain, pool, sealer_key)
    bad = _tamper_and_reseal(block, sealer_key, gas_used=1)
    target = Chain(config)
    before_root = commit_state(target.head_state)
    with pytest.raises(BlockRejected):
        target.validate_and_append(bad)
    assert target.height == 0
    assert commit_state(target.head_state) == before_root
    target.validate_and_append(block)  # the untampered block still fits
    assert target.height == 1


# --- queries -----------------------------------------------------------------


def test_get_blocks_window(config, sealer_key, registrar_key):
    chain = Chain(config)
    pool = Mempool()
    for _ in range(4):
        chain.seal_and_append(pool, sealer_key, now_for(chain))
    assert [b.header.number for b in chain.get_blocks(0, 2)] == [0, 1]
    assert [b.header.number for b in chain.get_blocks(3, 100)] == [3, 4]
    assert chain.get_blocks(99, 5) == []


# --- persistence -------------------------------------------------------------


def test_block_log_round_trip(tmp_path, config, sealer_key, registrar_key):
    log_path = tmp_path / "blocks.log"
    chain = Chain(config)
    log = BlockLog(log_path)
    log.rewrite_genesis(chain)
    pool = Mempool()
    for i in range(3):
        pool.submit(make_cert_tx(config, registrar_key, i, nonce=i), chain.head_state, config)
    chain.seal_and_append(pool, sealer_key, now_for(chain), log)
    chain.seal_and_append(pool, sealer_key, now_for(chain), log)
    log.close()

    replayed = Chain(config)
    appended = BlockLog(log_path).replay_into(replayed)
    assert appended == 2
    assert replayed.height == 2
    assert replayed.snapshot.head_hash == chain.snapshot.head_hash
    assert commit_state(replayed.head_state) == commit_state(chain.head_state)


def test_block_log_corruption_is_fatal(tmp_path, config, sealer_key):
    log_path = tmp_path / "blocks.log"
    chain = Chain(config)
    log = BlockLog(log_path)
    log.rewrite_genesis(chain)
    chain.seal_and_append(Mempool(), sealer_key, now_for(chain), log)
    log.close()

    data = bytearray(log_path.read_bytes())
    data[len(data) // 2] ^= 0xFF
    log_path.write_bytes(bytes(data))
    with pytest.raises(DecodeError):
        BlockLog(log_path).replay_into(Chain(config))


def test_block_log_rejects_foreign_genesis(tmp_path, config, sealer_key, registrar_key):
    other_config = make_config(
        KeyPair.from_secret(0xDEAD), registrar_key, genesis_timestamp=123
    )
    log_path = tmp_path / "blocks.log"
    other_chain = Chain(other_config)
    log = BlockLog(log_path)
    log.rewrite_genesis(other_chain)
    log.close()
    with pytest.raises(DecodeError, match="genesis"):
        BlockLog(log_path).replay_into(Chain(config))

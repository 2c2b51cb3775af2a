"""Block chain: genesis, assembly, sealing checks, and persistence.

The Chain object owns the canonical block sequence and the head state.
One thread (the sealer or the sync loop) appends; any number of reader
threads grab `snapshot`, an immutable tuple swapped atomically on every
append, and work against it without locks.

validate_and_append re-executes every transaction of an incoming block
and compares gas_used, tx_root, and state_root against the header, so
a follower accepts nothing it cannot reproduce locally.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

from .config import ChainConfig
from .crypto import KeyPair, SignatureError
from .encoding import (
    DecodeError,
    decode_block,
    encode_block,
    header_hash,
    read_log_records,
    tx_hash,
    tx_root,
    write_log_record,
)
from .mempool import Mempool
from .signing import recover_sealer, seal_block
from .state import TxRejected, WorldState, apply_transaction, commit_state, gas_cost, genesis_state
from .types import Block, BlockHeader, Receipt, SignedTransaction, ZERO_ADDRESS, ZERO_HASH


class BlockRejected(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Snapshot:
    """An immutable view of the chain at one height."""

    head: Block
    head_hash: bytes
    state: WorldState
    height: int


def genesis_block(config: ChainConfig) -> tuple[Block, WorldState]:
    state = genesis_state(config)
    header = BlockHeader(
        number=0,
        parent_hash=ZERO_HASH,
        timestamp=config.genesis_timestamp,
        sealer=ZERO_ADDRESS,
        gas_limit=config.block_gas_limit,
        gas_used=0,
        tx_root=tx_root([]),
        state_root=commit_state(state),
    )
    return Block(header), state


class Chain:
    def __init__(self, config: ChainConfig):
        self.config = config
        block, state = genesis_block(config)
        self.blocks: list[Block] = [block]
        self.receipts: list[list[Receipt]] = [[]]
        self._state = state
        self._snapshot = Snapshot(block, header_hash(block.header), state, 0)
        self._append_lock = threading.Lock()

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    @property
    def height(self) -> int:
        return self._snapshot.height

    @property
    def head(self) -> Block:
        return self._snapshot.head

    @property
    def head_state(self) -> WorldState:
        return self._snapshot.state

    # --- block production ----------------------------------------------------

    def assemble_block(
        self, pool: Mempool, now: float
    ) -> tuple[Block, WorldState, list[Receipt]]:
        """Build the unsealed next block from the pool.

        Transactions are drained in (arrival, per-sender nonce) order.
        Assembly stops at the first transaction that would push gas_used
        past the block gas limit; that one stays pending. Transactions
        that fail validity when applied are dropped from the pool.
        The block timestamp is parent + period regardless of `now` (one
        block per elapsed period; a node that was down catches up by
        sealing the backlog), so `now` only gates readiness.
        """
        parent = self.head.header
        timestamp = parent.timestamp + self.config.block_period_s
        if now < timestamp:
            raise ValueError("parent period has not elapsed")
        config = self.config
        state = self._state.clone()
        included: list[SignedTransaction] = []
        receipts: list[Receipt] = []
        hashes: list[bytes] = []
        drop: list[bytes] = []
        gas_used = 0
        for txh, stx in pool.ready_transactions(state):
            if gas_used + gas_cost(stx.tx.payload) > config.block_gas_limit:
                break
            try:
                receipt = apply_transaction(state, stx, config)
            except TxRejected:
                drop.append(txh)
                continue
            included.append(stx)
            receipts.append(receipt)
            hashes.append(txh)
            gas_used += receipt.gas_used
        if drop:
            pool.remove(drop)
        header = BlockHeader(
            number=parent.number + 1,
            parent_hash=header_hash(parent),
            timestamp=timestamp,
            sealer=config.in_turn_sealer(parent.number + 1),
            gas_limit=config.block_gas_limit,
            gas_used=gas_used,
            tx_root=tx_root(hashes),
            state_root=commit_state(state),
        )
        return Block(header, tuple(included)), state, receipts

    def seal_and_append(
        self,
        pool: Mempool,
        key: KeyPair,
        now: float,
        log: "BlockLog | None" = None,
    ) -> Block:
        """Assemble, seal, and append the next block (the sealer's step)."""
        with self._append_lock:
            block, state, receipts = self.assemble_block(pool, now)
            sealed = seal_block(block, key)
            self._append_validated(sealed, state, receipts)
        pool.remove([tx_hash(stx) for stx in sealed.transactions])
        pool.prune_stale(self._state)
        if log is not None:
            log.append(sealed)
        return sealed

    # --- block validation ----------------------------------------------------

    def validate_block(self, block: Block) -> tuple[WorldState, list[Receipt]]:
        """Re-execute and check a block against the current head.

        Returns the post-state and receipts; raises BlockRejected.
        """
        parent = self.head.header
        header = block.header
        config = self.config
        if header.number != parent.number + 1:
            raise BlockRejected("height mismatch")
        if header.parent_hash != header_hash(parent):
            raise BlockRejected("parent hash mismatch")
        if header.timestamp < parent.timestamp + config.block_period_s:
            raise BlockRejected("period")
        if header.gas_limit != config.block_gas_limit:
            raise BlockRejected("gas limit mismatch")
        if header.gas_used > header.gas_limit:
            raise BlockRejected("gas used exceeds limit")
        expected_sealer = config.in_turn_sealer(header.number)
        if header.sealer != expected_sealer:
            raise BlockRejected("not the in-turn authority")
        try:
            recovered = recover_sealer(header, block.seal_signature)
        except SignatureError:
            raise BlockRejected("seal signature") from None
        if recovered != header.sealer:
            raise BlockRejected("seal signature")

        state = self._state.clone()
        receipts: list[Receipt] = []
        hashes: list[bytes] = []
        gas_used = 0
        for stx in block.transactions:
            try:
                receipt = apply_transaction(state, stx, self.config)
            except TxRejected as exc:
                raise BlockRejected(f"invalid transaction: {exc.reason}") from None
            receipts.append(receipt)
            hashes.append(receipt.tx_hash)
            gas_used += receipt.gas_used
        if gas_used != header.gas_used:
            raise BlockRejected("gas_used mismatch")
        if tx_root(hashes) != header.tx_root:
            raise BlockRejected("tx_root mismatch")
        if commit_state(state) != header.state_root:
            raise BlockRejected("state_root mismatch")
        return state, receipts

    def validate_and_append(self, block: Block, log: "BlockLog | None" = None) -> None:
        """Follower-side append; raises BlockRejected, chain unchanged."""
        with self._append_lock:
            state, receipts = self.validate_block(block)
            self._append_validated(block, state, receipts)
        if log is not None:
            log.append(block)

    def _append_validated(
        self, block: Block, state: WorldState, receipts: list[Receipt]
    ) -> None:
        self.blocks.append(block)
        self.receipts.append(receipts)
        self._state = state
        self._snapshot = Snapshot(
            block, header_hash(block.header), state, block.header.number
        )

    # --- queries -------------------------------------------------------------

    def get_blocks(self, start: int, max_count: int) -> list[Block]:
        if start < 0 or max_count <= 0:
            return []
        return self.blocks[start : start + max_count]


class BlockLog:
    """Append-only block persistence with per-record checksums."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh: BinaryIO | None = None

    def append(self, block: Block) -> None:
        if self._fh is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self.path, "ab")
        write_log_record(self._fh, encode_block(block))
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def replay_into(self, chain: Chain) -> int:
        """Load persisted blocks; returns how many were appended.

        Any corruption (bad checksum, undecodable block, validation
        failure) is a hard error: refusing to start beats silently
        running on a diverged state.
        """
        if not self.path.exists():
            return 0
        count = 0
        with open(self.path, "rb") as fh:
            for raw in read_log_records(fh):
                block = decode_block(raw)
                if block.header.number == 0:
                    genesis = chain.blocks[0]
                    if encode_block(block) != encode_block(genesis):
                        raise DecodeError("log genesis differs from configured genesis")
                    continue
                chain.validate_and_append(block)
                count += 1
        return count

    def rewrite_genesis(self, chain: Chain) -> None:
        """Start a fresh log with the genesis record."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "wb") as fh:
            write_log_record(fh, encode_block(chain.blocks[0]))

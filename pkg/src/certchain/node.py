"""A node: chain + mempool + optional sealer + optional follower sync.

This object is the single place the HTTP layer and the CLI talk to.
Read methods work on atomic snapshots, so they never block the sealer
and never observe a half-applied block.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path

from .chain import BlockLog, Chain
from .config import ChainConfig
from .crypto import KeyPair
from .encoding import (
    decode_signed_transaction,
    parse_hex,
    to_hex,
    encode_block,
)
from .mempool import Mempool
from .sealer import Clock, SealerService, SystemClock
from .state import get_list_certificate_status, read_certificate_public
from .sync import SyncService


class Node:
    def __init__(
        self,
        config: ChainConfig,
        datadir: str | Path | None = None,
        sealer_key: KeyPair | None = None,
        clock: Clock | None = None,
        sync_from: str | None = None,
    ):
        self.config = config
        self.chain = Chain(config)
        self.pool = Mempool()
        self.clock = clock or SystemClock()
        self._counters_lock = threading.Lock()
        self.requests_total: dict[str, int] = {}

        self.log: BlockLog | None = None
        if datadir is not None:
            path = Path(datadir) / "blocks.log"
            self.log = BlockLog(path)
            if path.exists():
                self.log.replay_into(self.chain)
            else:
                self.log.rewrite_genesis(self.chain)

        self.sealer: SealerService | None = None
        if sealer_key is not None:
            self.sealer = SealerService(
                self.chain, self.pool, sealer_key, self.clock, self.log
            )

        self.sync: SyncService | None = None
        if sync_from is not None:
            self.sync = SyncService(self.chain, sync_from, log=self.log)

    # --- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        if self.sealer is not None:
            self.sealer.start()
        if self.sync is not None:
            self.sync.start()

    def stop(self) -> None:
        if self.sealer is not None:
            self.sealer.stop()
        if self.sync is not None:
            self.sync.stop()
        if self.log is not None:
            self.log.close()

    # --- RPC backends --------------------------------------------------------

    def _count(self, method: str) -> None:
        with self._counters_lock:
            self.requests_total[method] = self.requests_total.get(method, 0) + 1

    def submit_raw_transaction(self, raw_hex: str) -> str:
        """Decode and admit a signed transaction; returns its hash (hex).

        Raises DecodeError on malformed input, MempoolRejected on
        admission failure.
        """
        self._count("submit")
        stx = decode_signed_transaction(parse_hex(raw_hex))
        txh = self.pool.submit(stx, self.chain.head_state, self.config)
        return to_hex(txh)

    def read_certificate(self, cert_no: str) -> tuple[str, str, str, str]:
        self._count("read")
        return read_certificate_public(self.chain.snapshot.state, cert_no)

    def certificate_count(self) -> int:
        self._count("cert_count")
        return get_list_certificate_status(self.chain.snapshot.state)

    def get_blocks_hex(self, start: int, max_count: int) -> list[str]:
        self._count("blocks")
        max_count = max(0, min(max_count, 1000))
        return [to_hex(encode_block(b)) for b in self.chain.get_blocks(start, max_count)]

    def head_info(self) -> dict:
        self._count("head")
        snap = self.chain.snapshot
        return {
            "height": snap.height,
            "hash": to_hex(snap.head_hash),
            "stateRoot": to_hex(snap.head.header.state_root),
        }

    def metrics(self) -> dict:
        times = os.times()
        snap = self.chain.snapshot
        with self._counters_lock:
            requests = dict(self.requests_total)
        return {
            "process_cpu_seconds": times.user + times.system,
            "requests_total": requests,
            "txs_pending": len(self.pool),
            "chain_height": snap.height,
            "certs_total": snap.state.cert_count,
        }

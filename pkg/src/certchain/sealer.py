"""Block production loop with an injectable clock.

The clock is a dependency so tests and acceptance runs drive simulated
time; deployments use wall time. poll() seals every block that is due,
so advancing a simulated clock by 625 s on a 5 s chain yields exactly
125 blocks, and a node that was down catches up the same way.
"""

from __future__ import annotations

import threading
import time
from typing import Callable, Protocol

from .chain import BlockLog, Chain
from .crypto import KeyPair, derive_address
from .mempool import Mempool
from .types import Block


class Clock(Protocol):
    def now(self) -> float: ...


class SystemClock:
    def now(self) -> float:
        return time.time()


class ManualClock:
    """Test clock; advance() moves time forward explicitly."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now += seconds

    def set(self, timestamp: float) -> None:
        self._now = timestamp


class SealerService:
    """Seals due blocks; run via poll() (tests) or start() (deployments)."""

    def __init__(
        self,
        chain: Chain,
        pool: Mempool,
        key: KeyPair,
        clock: Clock | None = None,
        log: BlockLog | None = None,
        on_block: Callable[[Block], None] | None = None,
    ):
        if derive_address(key.public) not in chain.config.authorities:
            raise ValueError("sealer key is not an authority")
        self.chain = chain
        self.pool = pool
        self.key = key
        self.clock = clock or SystemClock()
        self.log = log
        self.on_block = on_block
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self.blocks_sealed = 0

    def _next_due(self) -> float:
        return self.chain.head.header.timestamp + self.chain.config.block_period_s

    def poll(self, max_blocks: int | None = None) -> int:
        """Seal every due block (up to max_blocks); returns how many."""
        sealed = 0
        address = derive_address(self.key.public)
        while self.clock.now() >= self._next_due():
            height = self.chain.height + 1
            if self.chain.config.in_turn_sealer(height) != address:
                break  # another authority's turn; wait for sync
            block = self.chain.seal_and_append(
                self.pool, self.key, self.clock.now(), self.log
            )
            self.blocks_sealed += 1
            sealed += 1
            if self.on_block is not None:
                self.on_block(block)
            if max_blocks is not None and sealed >= max_blocks:
                break
        return sealed

    def start(self, tick_s: float = 0.05) -> None:
        def run():
            while not self._stop.is_set():
                self.poll()
                self._stop.wait(tick_s)

        self._thread = threading.Thread(target=run, name="sealer", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

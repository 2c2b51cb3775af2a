"""Follower-side chain replication: poll a peer, pull blocks, validate.

Pull-based only. The loop fetches blocks above the local head from the
peer's /blocks endpoint and appends them through full validation. A
validation failure stops the loop and keeps the error (never skip a
block); network errors retry with backoff.
"""

from __future__ import annotations

import threading

import requests

from .chain import BlockLog, BlockRejected, Chain
from .encoding import DecodeError, decode_block, parse_hex

BATCH = 64


def sync_once(chain: Chain, fetch, log: BlockLog | None = None) -> int:
    """One catch-up pass; returns blocks appended.

    `fetch(start, max_count)` returns a list of hex block encodings
    (the wire shape of GET /blocks).
    """
    appended = 0
    while True:
        batch = fetch(chain.height + 1, BATCH)
        if not batch:
            return appended
        for raw_hex in batch:
            block = decode_block(parse_hex(raw_hex))
            chain.validate_and_append(block, log)
            appended += 1


class SyncService:
    """Background puller keeping a follower at the peer's head."""

    def __init__(
        self,
        chain: Chain,
        peer_url: str,
        poll_interval: float = 1.0,
        log: BlockLog | None = None,
    ):
        self.chain = chain
        self.peer_url = peer_url.rstrip("/")
        self.poll_interval = poll_interval
        self.log = log
        self.error: str | None = None
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._session = requests.Session()

    def _fetch(self, start: int, max_count: int) -> list[str]:
        resp = self._session.get(
            f"{self.peer_url}/blocks",
            params={"from": start, "max": max_count},
            timeout=10,
        )
        resp.raise_for_status()
        return resp.json()["blocks"]

    def run_once(self) -> int:
        return sync_once(self.chain, self._fetch, self.log)

    def start(self) -> None:
        def run():
            backoff = self.poll_interval
            while not self._stop.is_set():
                try:
                    self.run_once()
                    backoff = self.poll_interval
                except (BlockRejected, DecodeError) as exc:
                    # a bad block from the peer is fatal: do not skip it
                    self.error = str(exc)
                    return
                except requests.RequestException:
                    backoff = min(backoff * 2, 30.0)
                self._stop.wait(backoff)

        self._thread = threading.Thread(target=run, name="sync", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

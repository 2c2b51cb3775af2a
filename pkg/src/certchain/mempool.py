"""Admission queue for not-yet-included transactions.

Thread-safe: many RPC threads submit, the sealer drains. Admission
re-runs the validity conditions against the current head state so the
pool only ever holds transactions that could execute now or after their
sender's earlier pending nonces. Per-sender nonces must be gapless from
the account nonce upward to be drained; gapped transactions sit in the
pool until the missing nonce arrives.

Drain order is arrival order across senders, nonce order within a
sender (the arrival walk skips a transaction until its predecessor
nonce has been taken, which preserves both).
"""

from __future__ import annotations

import heapq
import threading

from .config import ChainConfig
from .crypto import SignatureError
from .encoding import tx_hash
from .signing import recover_signer
from .state import WorldState, gas_cost
from .types import SignedTransaction

DEFAULT_CAPACITY = 100_000


class MempoolRejected(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class Mempool:
    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        self.capacity = capacity
        self._lock = threading.Lock()
        self._txs: dict[bytes, SignedTransaction] = {}
        self._by_sender_nonce: dict[tuple[bytes, int], bytes] = {}
        self._arrival: list[bytes] = []  # hashes in acceptance order
        self._removed = 0

    def __len__(self) -> int:
        return len(self._txs)

    def submit(
        self, stx: SignedTransaction, state: WorldState, config: ChainConfig
    ) -> bytes:
        """Admit a transaction; returns its hash. Raises MempoolRejected."""
        txh = tx_hash(stx)
        try:
            sender = recover_signer(stx)
        except SignatureError:
            raise MempoolRejected("signature") from None
        if sender != stx.tx.sender:
            raise MempoolRejected("signature")
        tx = stx.tx
        if tx.chain_id != config.chain_id:
            raise MempoolRejected("chain_id")
        acct = state.account(sender)
        if tx.nonce < acct.nonce:
            raise MempoolRejected("stale nonce")
        if acct.balance < tx.gas_limit * tx.gas_price + tx.value:
            raise MempoolRejected("insufficient balance")
        cost = gas_cost(tx.payload)
        if tx.gas_limit < cost:
            raise MempoolRejected("gas limit below intrinsic cost")
        if cost > config.block_gas_limit:
            raise MempoolRejected("gas cost exceeds block gas limit")
        if tx.payload is not None and cost == 0:
            raise MempoolRejected("read-only function")

        with self._lock:
            if txh in self._txs:
                return txh  # idempotent re-submission
            key = (sender, tx.nonce)
            if key in self._by_sender_nonce:
                raise MempoolRejected("nonce occupied")
            if len(self._txs) >= self.capacity:
                raise MempoolRejected("capacity")
            self._txs[txh] = stx
            self._by_sender_nonce[key] = txh
            self._arrival.append(txh)
        return txh

    def ready_transactions(self, state: WorldState) -> list[tuple[bytes, SignedTransaction]]:
        """(hash, tx) pairs drainable now, in (arrival, sender-nonce) order.

        Earliest-arrived runnable transaction first; a sender's later
        nonces queue behind its earlier ones even when they arrived
        first, entering the merge at their own arrival position once
        unblocked.
        """
        with self._lock:
            per_sender: dict[bytes, dict[int, tuple[int, bytes]]] = {}
            for seq, txh in enumerate(self._arrival):
                stx = self._txs.get(txh)
                if stx is not None:
                    per_sender.setdefault(stx.tx.sender, {})[stx.tx.nonce] = (seq, txh)
            heap = []
            for sender, by_nonce in per_sender.items():
                nxt = state.account(sender).nonce
                if nxt in by_nonce:
                    heapq.heappush(heap, (by_nonce[nxt][0], sender, nxt))
            out = []
            while heap:
                _, sender, nonce = heapq.heappop(heap)
                txh = per_sender[sender][nonce][1]
                out.append((txh, self._txs[txh]))
                follow = per_sender[sender].get(nonce + 1)
                if follow is not None:
                    heapq.heappush(heap, (follow[0], sender, nonce + 1))
            return out

    def remove(self, hashes: list[bytes]) -> None:
        """Forget included (or dropped) transactions."""
        with self._lock:
            for txh in hashes:
                stx = self._txs.pop(txh, None)
                if stx is not None:
                    self._by_sender_nonce.pop((stx.tx.sender, stx.tx.nonce), None)
                    self._removed += 1
            self._compact()

    def prune_stale(self, state: WorldState) -> None:
        """Drop transactions whose nonce fell behind the account nonce."""
        with self._lock:
            stale = [
                txh
                for txh, stx in self._txs.items()
                if stx.tx.nonce < state.account(stx.tx.sender).nonce
            ]
            for txh in stale:
                stx = self._txs.pop(txh)
                self._by_sender_nonce.pop((stx.tx.sender, stx.tx.nonce), None)
                self._removed += 1
            self._compact()

    def _compact(self) -> None:
        # amortized cleanup of the arrival list (lock held)
        if self._removed > 1000 and self._removed > len(self._txs):
            self._arrival = [h for h in self._arrival if h in self._txs]
            self._removed = 0

"""Write load: submit one transaction per certificate, then watch
the on-chain counter until every record is confirmed.

Submission is single-threaded and sequential with locally assigned,
gapless nonces. Confirmation is detected by polling the certificate
counter (the aggregate observable), not per-transaction receipts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..config import DEFAULT_CHAIN_ID
from ..crypto import KeyPair, derive_address
from ..encoding import encode_signed_transaction, to_hex, tx_hash
from ..signing import sign_transaction
from ..types import CallPayload, CertificateRecord, Transaction, ZERO_ADDRESS
from .client import NodeClient, RpcError
from .dataset import CertificateDataset

WRITE_GAS_LIMIT = 400_000
WRITE_GAS_PRICE = 1


@dataclass(frozen=True)
class WriteReport:
    submitted: int
    submit_duration_s: float
    confirm_duration_s: float
    blocks_used: int
    txs_per_block: dict[int, int]  # txs in a block -> number of such blocks
    write_tps: float


class WriteLoadError(Exception):
    def __init__(self, index: int, reason: str):
        super().__init__(f"record {index}: {reason}")
        self.index = index
        self.reason = reason


def cert_transaction(
    rec: CertificateRecord,
    nonce: int,
    key: KeyPair,
    chain_id: int = DEFAULT_CHAIN_ID,
):
    payload = CallPayload(
        "addCertificate",
        (
            rec.certNo,
            rec.name,
            rec.ic,
            rec.studentId,
            rec.programme,
            rec.convoDate,
            rec.semesterFinish,
        ),
    )
    tx = Transaction(
        chain_id=chain_id,
        nonce=nonce,
        sender=derive_address(key.public),
        to=ZERO_ADDRESS,
        value=0,
        gas_limit=WRITE_GAS_LIMIT,
        gas_price=WRITE_GAS_PRICE,
        payload=payload,
    )
    return sign_transaction(tx, key)


def summarize_write(
    submitted_hashes: set[bytes],
    submit_duration_s: float,
    confirm_duration_s: float,
    blocks,
) -> WriteReport:
    """Fold durations and fetched blocks into a WriteReport.

    Durations may be wall time or simulated time; this function only
    does the arithmetic. Blocks are counted by how many of the
    submitted transactions each one contains.
    """
    histogram: dict[int, int] = {}
    blocks_used = 0
    for block in blocks:
        mine = sum(
            1 for stx in block.transactions if tx_hash(stx) in submitted_hashes
        )
        if mine:
            blocks_used += 1
            histogram[mine] = histogram.get(mine, 0) + 1
    return WriteReport(
        submitted=len(submitted_hashes),
        submit_duration_s=submit_duration_s,
        confirm_duration_s=confirm_duration_s,
        blocks_used=blocks_used,
        txs_per_block=histogram,
        write_tps=len(submitted_hashes) / confirm_duration_s if confirm_duration_s else 0.0,
    )


def run_write_load(
    dataset: CertificateDataset,
    rpc_url: str,
    key: KeyPair,
    start_nonce: int = 0,
    chain_id: int = DEFAULT_CHAIN_ID,
    poll_interval_s: float = 5.0,
    timeout_s: float | None = None,
) -> WriteReport:
    """Drive the full write experiment against a live node."""
    from ..encoding import decode_block, parse_hex

    client = NodeClient(rpc_url)
    target = client.certificate_count() + len(dataset.records)
    hashes: set[bytes] = set()

    start = time.perf_counter()
    for i, rec in enumerate(dataset.records):
        stx = cert_transaction(rec, start_nonce + i, key, chain_id)
        raw = to_hex(encode_signed_transaction(stx))
        try:
            client.submit_tx(raw)
        except RpcError as exc:
            raise WriteLoadError(i, exc.message) from None
        hashes.add(tx_hash(stx))
    submit_duration = time.perf_counter() - start

    if timeout_s is None:
        # everything fits in ceil(n/80) blocks; double it and pad
        timeout_s = (len(dataset.records) / 80 + 3) * poll_interval_s * 2 + 60
    while True:
        if client.certificate_count() >= target:
            break
        if time.perf_counter() - start > timeout_s:
            raise WriteLoadError(-1, "confirmation timed out")
        time.sleep(poll_interval_s)
    confirm_duration = time.perf_counter() - start

    height = client.head()["height"]
    blocks = []
    fetched = 0
    while fetched <= height:
        batch = client.get_blocks(fetched, 256)
        if not batch:
            break
        blocks.extend(decode_block(parse_hex(raw)) for raw in batch)
        fetched += len(batch)
    return summarize_write(hashes, submit_duration, confirm_duration, blocks)

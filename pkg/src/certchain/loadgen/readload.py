"""Read load: parallel certificate fetches with response verification.

Each thread count T gets its own pass over the whole dataset: the
certNos are split into T contiguous chunks, one worker per chunk, each
with its own HTTP session. Every response is checked against the
dataset; any mismatch invalidates the run. T=0 performs no requests
and just samples idle CPU, as a baseline row.

CPU percentages are process CPU time deltas over wall time: the client
number covers this process, the server number comes from the node's
/metrics counter. They describe relative load, not host utilization.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass

from .client import NodeClient
from .dataset import CertificateDataset

IDLE_SAMPLE_S = 1.0


@dataclass(frozen=True)
class ReadRow:
    threads: int
    duration_s: float
    avg_latency_s: float
    read_tps: float
    client_cpu_pct: float
    server_cpu_pct: float


@dataclass(frozen=True)
class ReadReport:
    rows: tuple[ReadRow, ...]


class ReadMismatch(Exception):
    def __init__(self, cert_no: str, got, expected):
        super().__init__(f"cert {cert_no}: got {got!r}, expected {expected!r}")
        self.cert_no = cert_no


def _process_cpu() -> float:
    t = os.times()
    return t.user + t.system


class _Worker(threading.Thread):
    def __init__(self, base_url: str, jobs, expected: dict):
        super().__init__(daemon=True)
        self.client = NodeClient(base_url)
        self.jobs = jobs
        self.expected = expected
        self.latency_sum = 0.0
        self.count = 0
        self.error: Exception | None = None

    def run(self):
        try:
            for cert_no in self.jobs:
                t0 = time.perf_counter()
                got = self.client.read_certificate(cert_no)
                self.latency_sum += time.perf_counter() - t0
                self.count += 1
                if got != self.expected[cert_no]:
                    raise ReadMismatch(cert_no, got, self.expected[cert_no])
        except Exception as exc:
            self.error = exc


def _run_one_pass(
    dataset: CertificateDataset, rpc_url: str, threads: int, client: NodeClient
) -> ReadRow:
    expected = {
        rec.certNo: (rec.certNo, rec.name, rec.programme, rec.convoDate)
        for rec in dataset.records
    }
    if threads == 0:
        cpu0, server0 = _process_cpu(), client.metrics()["process_cpu_seconds"]
        time.sleep(IDLE_SAMPLE_S)
        cpu1, server1 = _process_cpu(), client.metrics()["process_cpu_seconds"]
        return ReadRow(
            threads=0,
            duration_s=IDLE_SAMPLE_S,
            avg_latency_s=0.0,
            read_tps=0.0,
            client_cpu_pct=100.0 * (cpu1 - cpu0) / IDLE_SAMPLE_S,
            server_cpu_pct=100.0 * (server1 - server0) / IDLE_SAMPLE_S,
        )

    cert_nos = [rec.certNo for rec in dataset.records]
    chunk = (len(cert_nos) + threads - 1) // threads
    workers = [
        _Worker(rpc_url, cert_nos[i * chunk : (i + 1) * chunk], expected)
        for i in range(threads)
    ]
    cpu0 = _process_cpu()
    server0 = client.metrics()["process_cpu_seconds"]
    t0 = time.perf_counter()
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    duration = time.perf_counter() - t0
    cpu1 = _process_cpu()
    server1 = client.metrics()["process_cpu_seconds"]
    for w in workers:
        if w.error is not None:
            raise w.error
    total = sum(w.count for w in workers)
    latency_sum = sum(w.latency_sum for w in workers)
    return ReadRow(
        threads=threads,
        duration_s=duration,
        avg_latency_s=latency_sum / total if total else 0.0,
        read_tps=total / duration if duration else 0.0,
        client_cpu_pct=100.0 * (cpu1 - cpu0) / duration if duration else 0.0,
        server_cpu_pct=100.0 * (server1 - server0) / duration if duration else 0.0,
    )


def run_read_load(
    dataset: CertificateDataset, rpc_url: str, thread_counts: list[int]
) -> ReadReport:
    client = NodeClient(rpc_url)
    rows = tuple(
        _run_one_pass(dataset, rpc_url, t, client) for t in thread_counts
    )
    return ReadReport(rows)

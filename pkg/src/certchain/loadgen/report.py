"""CSV report emission and parsing.

The CSV has one row per thread count with the columns
threads,duration_s,client_cpu_pct,server_cpu_pct,avg_tx_latency_s,read_tps
preceded by a comment block (# key=value) summarizing the write run.
parse_report inverts emit_report exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .readload import ReadReport, ReadRow
from .writeload import WriteReport

COLUMNS = [
    "threads",
    "duration_s",
    "client_cpu_pct",
    "server_cpu_pct",
    "avg_tx_latency_s",
    "read_tps",
]


def render_report(write: WriteReport | None, read: ReadReport) -> str:
    out = io.StringIO()
    if write is not None:
        out.write(f"# submitted={write.submitted}\n")
        out.write(f"# submit_duration_s={write.submit_duration_s!r}\n")
        out.write(f"# confirm_duration_s={write.confirm_duration_s!r}\n")
        out.write(f"# blocks_used={write.blocks_used}\n")
        hist = {str(k): v for k, v in sorted(write.txs_per_block.items())}
        out.write(f"# txs_per_block={json.dumps(hist)}\n")
        out.write(f"# write_tps={write.write_tps!r}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in read.rows:
        writer.writerow(
            [
                row.threads,
                repr(row.duration_s),
                repr(row.client_cpu_pct),
                repr(row.server_cpu_pct),
                repr(row.avg_latency_s),
                repr(row.read_tps),
            ]
        )
    return out.getvalue()


def emit_report(write: WriteReport | None, read: ReadReport, out: str | Path) -> None:
    Path(out).write_text(render_report(write, read))


def parse_report(path: str | Path) -> tuple[WriteReport | None, ReadReport]:
    meta: dict[str, str] = {}
    csv_lines = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line:
            csv_lines.append(line)
    write = None
    if meta:
        write = WriteReport(
            submitted=int(meta["submitted"]),
            submit_duration_s=float(meta["submit_duration_s"]),
            confirm_duration_s=float(meta["confirm_duration_s"]),
            blocks_used=int(meta["blocks_used"]),
            txs_per_block={
                int(k): v for k, v in json.loads(meta["txs_per_block"]).items()
            },
            write_tps=float(meta["write_tps"]),
        )
    reader = csv.reader(csv_lines)
    header = next(reader)
    if header != COLUMNS:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = tuple(
        ReadRow(
            threads=int(r[0]),
            duration_s=float(r[1]),
            client_cpu_pct=float(r[2]),
            server_cpu_pct=float(r[3]),
            avg_latency_s=float(r[4]),
            read_tps=float(r[5]),
        )
        for r in reader
    )
    return write, ReadReport(rows)

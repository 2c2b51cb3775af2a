"""Load-generator command line: generate, write, read."""

from __future__ import annotations

import sys

import click

from ..config import DEFAULT_CHAIN_ID
from ..crypto import KeyPair
from .dataset import generate_dataset, load_dataset
from .readload import ReadMismatch, run_read_load
from .report import emit_report
from .writeload import WriteLoadError, run_write_load


def _parse_threads(text: str) -> list[int]:
    """Accept '0..11' ranges or comma lists like '1,2,4,8'."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part != ""]


@click.group()
def main():
    """Certificate write/read load generator."""


@main.command()
@click.option("--count", type=int, required=True, help="number of records")
@click.option("--seed", type=int, required=True, help="generation seed")
@click.option("--out", required=True, type=click.Path(), help="output JSONL path")
def generate(count, seed, out):
    """Generate a deterministic dummy-certificate dataset."""
    dataset = generate_dataset(count, seed, out)
    click.echo(f"wrote {len(dataset.records)} records to {out}")


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--rpc", required=True, help="node base URL")
@click.option("--key", required=True, help="hex private key of the registrar")
@click.option("--chain-id", type=int, default=DEFAULT_CHAIN_ID, show_default=True)
@click.option("--start-nonce", type=int, default=0, show_default=True)
@click.option("--poll-interval", type=float, default=5.0, show_default=True, help="seconds between counter polls")
def write(dataset_path, rpc, key, chain_id, start_nonce, poll_interval):
    """Submit every record as an addCertificate transaction and wait."""
    dataset = load_dataset(dataset_path)
    try:
        report = run_write_load(
            dataset,
            rpc,
            KeyPair.from_hex(key),
            start_nonce=start_nonce,
            chain_id=chain_id,
            poll_interval_s=poll_interval,
        )
    except WriteLoadError as exc:
        click.echo(f"write load failed: {exc}", err=True)
        sys.exit(1)
    click.echo(f"submitted={report.submitted}")
    click.echo(f"submit_duration_s={report.submit_duration_s:.3f}")
    click.echo(f"confirm_duration_s={report.confirm_duration_s:.3f}")
    click.echo(f"blocks_used={report.blocks_used}")
    click.echo(f"write_tps={report.write_tps:.2f}")


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--rpc", required=True, help="node base URL")
@click.option("--threads", default="0..11", show_default=True, help="'lo..hi' range or comma list")
@click.option("--out", required=True, type=click.Path(), help="CSV report path")
def read(dataset_path, rpc, threads, out):
    """Read every certificate at each thread count and write the report."""
    dataset = load_dataset(dataset_path)
    try:
        report = run_read_load(dataset, rpc, _parse_threads(threads))
    except ReadMismatch as exc:
        click.echo(f"data integrity failure: {exc}", err=True)
        sys.exit(1)
    emit_report(None, report, out)
    for row in report.rows:
        click.echo(
            f"T={row.threads:2d} duration={row.duration_s:8.3f}s "
            f"tps={row.read_tps:8.2f} cpu(client/server)="
            f"{row.client_cpu_pct:5.1f}%/{row.server_cpu_pct:5.1f}%"
        )
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()

"""Node command line: run a node, mint genesis files, make keys."""

from __future__ import annotations

import dataclasses
import json
import sys
import time

import click
import uvicorn

from .config import default_config, load_genesis, save_genesis
from .crypto import KeyPair, derive_address
from .encoding import parse_address, to_hex
from .node import Node
from .service import create_app


@click.group()
def main():
    """Certificate-registry chain node."""


@main.command()
@click.option("--listen", default="127.0.0.1:8545", show_default=True, help="host:port for the HTTP API")
@click.option("--genesis", "genesis_path", required=True, type=click.Path(exists=True), help="genesis JSON file")
@click.option("--datadir", type=click.Path(), default=None, help="directory for the block log (omit for in-memory)")
@click.option("--sealer-key", default=None, help="hex private key; enables sealing when it is an authority")
@click.option("--sync-from", default=None, help="peer base URL to replicate from (follower mode)")
def run(listen, genesis_path, datadir, sealer_key, sync_from):
    """Run a node (sealer, follower, or both)."""
    config = load_genesis(genesis_path)
    key = KeyPair.from_hex(sealer_key) if sealer_key else None
    node = Node(
        config,
        datadir=datadir,
        sealer_key=key,
        sync_from=sync_from,
    )
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise click.BadParameter("--listen must be host:port")
    node.start()
    try:
        uvicorn.run(create_app(node), host=host, port=int(port), log_level="warning")
    finally:
        node.stop()


@main.command("make-genesis")
@click.option("--out", required=True, type=click.Path(), help="where to write the genesis JSON")
@click.option("--authority", "authorities", multiple=True, help="authority address (repeatable)")
@click.option("--registrar", default=None, help="registrar address (default: the shipped funded address)")
@click.option("--extra-alloc", multiple=True, help="address:balance to pre-fund (repeatable)")
@click.option(
    "--genesis-timestamp",
    type=int,
    default=None,
    help="unix seconds of block 0 (default: now; a sealer back-dates one block per elapsed period)",
)
def make_genesis(out, authorities, registrar, extra_alloc, genesis_timestamp):
    """Write a genesis file with the shipped defaults."""
    if not authorities:
        raise click.BadParameter("at least one --authority is required")
    config = default_config(tuple(parse_address(a) for a in authorities))
    if genesis_timestamp is None:
        genesis_timestamp = int(time.time())
    config = dataclasses.replace(config, genesis_timestamp=genesis_timestamp)
    if registrar is not None:
        reg = parse_address(registrar)
        config = dataclasses.replace(config, registrar=reg, alloc=((reg, config.alloc[0][1]),))
    for item in extra_alloc:
        addr_text, _, balance_text = item.partition(":")
        config = dataclasses.replace(
            config, alloc=config.alloc + ((parse_address(addr_text), int(balance_text)),)
        )
    save_genesis(config, out)
    click.echo(f"wrote {out}")


@main.command("make-key")
def make_key():
    """Generate a keypair and print it as JSON."""
    key = KeyPair.generate()
    json.dump(
        {"private_key": key.secret_hex, "address": to_hex(derive_address(key.public))},
        sys.stdout,
        indent=2,
    )
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()

"""Chain configuration and the genesis file.

The genesis file is JSON: chain_id, block_period_ms, block_gas_limit,
genesis_timestamp (unix seconds of block 0), authorities (list of hex
addresses), registrar (hex address), alloc (hex address -> decimal
string balance). Balances are decimal strings because they exceed what
every JSON reader handles as a number.

Shipped defaults: chain id 496, 5000 ms period, 27,507,108 gas limit,
and 10^24 units pre-allocated to the registrar address.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .encoding import parse_address, to_hex

DEFAULT_CHAIN_ID = 496
DEFAULT_BLOCK_PERIOD_MS = 5000
DEFAULT_BLOCK_GAS_LIMIT = 27_507_108
DEFAULT_GENESIS_TIMESTAMP = 1_700_000_000
DEFAULT_REGISTRAR = "0x80ce17271ffa4a7f66e2cbf3561a6946587f470d"
DEFAULT_ALLOCATION = 10**24  # one million whole units at 10^18 per unit


class ConfigError(ValueError):
    """Invalid chain configuration."""


@dataclass(frozen=True)
class ChainConfig:
    chain_id: int = DEFAULT_CHAIN_ID
    block_period_ms: int = DEFAULT_BLOCK_PERIOD_MS
    block_gas_limit: int = DEFAULT_BLOCK_GAS_LIMIT
    genesis_timestamp: int = DEFAULT_GENESIS_TIMESTAMP
    authorities: tuple[bytes, ...] = ()
    registrar: bytes = b""
    alloc: tuple[tuple[bytes, int], ...] = ()

    def __post_init__(self):
        if self.chain_id <= 0:
            raise ConfigError("chain_id must be positive")
        if self.block_period_ms <= 0 or self.block_period_ms % 1000:
            # header timestamps are whole seconds
            raise ConfigError("block_period_ms must be a positive multiple of 1000")
        if self.block_gas_limit <= 0:
            raise ConfigError("block_gas_limit must be positive")
        if self.genesis_timestamp < 0:
            raise ConfigError("genesis_timestamp must be non-negative")
        if not self.authorities:
            raise ConfigError("authority set must be non-empty")
        for addr in self.authorities:
            if len(addr) != 20:
                raise ConfigError("authority addresses must be 20 bytes")
        if len(set(self.authorities)) != len(self.authorities):
            raise ConfigError("duplicate authority address")
        if len(self.registrar) != 20:
            raise ConfigError("registrar address must be 20 bytes")
        seen = set()
        for addr, balance in self.alloc:
            if len(addr) != 20:
                raise ConfigError("allocation addresses must be 20 bytes")
            if addr in seen:
                raise ConfigError(f"duplicate allocation address {to_hex(addr)}")
            seen.add(addr)
            if balance < 0:
                raise ConfigError("allocation balance must be non-negative")

    @property
    def block_period_s(self) -> int:
        return self.block_period_ms // 1000

    def in_turn_sealer(self, height: int) -> bytes:
        return self.authorities[height % len(self.authorities)]


def default_config(authorities: tuple[bytes, ...]) -> ChainConfig:
    """Shipped defaults with the given authority set."""
    registrar = parse_address(DEFAULT_REGISTRAR)
    return ChainConfig(
        authorities=tuple(authorities),
        registrar=registrar,
        alloc=((registrar, DEFAULT_ALLOCATION),),
    )


def config_to_json(config: ChainConfig) -> str:
    doc = {
        "chain_id": config.chain_id,
        "block_period_ms": config.block_period_ms,
        "block_gas_limit": config.block_gas_limit,
        "genesis_timestamp": config.genesis_timestamp,
        "authorities": [to_hex(a) for a in config.authorities],
        "registrar": to_hex(config.registrar),
        "alloc": {to_hex(a): str(balance) for a, balance in config.alloc},
    }
    return json.dumps(doc, indent=2) + "\n"


def config_from_json(text: str) -> ChainConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"genesis file is not valid JSON: {exc}") from None
    try:
        return ChainConfig(
            chain_id=int(doc["chain_id"]),
            block_period_ms=int(doc["block_period_ms"]),
            block_gas_limit=int(doc["block_gas_limit"]),
            genesis_timestamp=int(doc.get("genesis_timestamp", DEFAULT_GENESIS_TIMESTAMP)),
            authorities=tuple(parse_address(a) for a in doc["authorities"]),
            registrar=parse_address(doc["registrar"]),
            alloc=tuple(
                (parse_address(a), int(balance))
                for a, balance in doc.get("alloc", {}).items()
            ),
        )
    except KeyError as exc:
        raise ConfigError(f"genesis file missing field {exc}") from None


def load_genesis(path: str | Path) -> ChainConfig:
    return config_from_json(Path(path).read_text())


def save_genesis(config: ChainConfig, path: str | Path) -> None:
    Path(path).write_text(config_to_json(config))

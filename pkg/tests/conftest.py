"""Shared fixtures: deterministic keys, a small test chain config, and
a real HTTP server helper for tests that need actual sockets."""

from __future__ import annotations

import contextlib
import socket
import threading
import time

import pytest
import uvicorn

from certchain.config import ChainConfig
from certchain.crypto import KeyPair, derive_address
from certchain.loadgen.writeload import cert_transaction
from certchain.service import create_app

SEALER_SECRET = 0xA11CE
REGISTRAR_SECRET = 0xB0B


@pytest.fixture(scope="session")
def sealer_key() -> KeyPair:
    return KeyPair.from_secret(SEALER_SECRET)


@pytest.fixture(scope="session")
def registrar_key() -> KeyPair:
    return KeyPair.from_secret(REGISTRAR_SECRET)


@pytest.fixture(scope="session")
def registrar_address(registrar_key) -> bytes:
    return derive_address(registrar_key.public)


def make_config(sealer_key: KeyPair, registrar_key: KeyPair, **overrides) -> ChainConfig:
    registrar = derive_address(registrar_key.public)
    defaults = dict(
        authorities=(derive_address(sealer_key.public),),
        registrar=registrar,
        alloc=((registrar, 10**24),),
    )
    defaults.update(overrides)
    return ChainConfig(**defaults)


@pytest.fixture
def config(sealer_key, registrar_key) -> ChainConfig:
    return make_config(sealer_key, registrar_key)


@pytest.fixture(scope="session")
def session_config(sealer_key, registrar_key) -> ChainConfig:
    return make_config(sealer_key, registrar_key)


def make_cert_tx(config, registrar_key, i: int, nonce: int | None = None):
    """A signed addCertificate transaction for a synthetic record."""
    from certchain.types import CertificateRecord

    rec = CertificateRecord(
        certNo=f"T{i:05d}",
        name=f"Name {i}",
        ic=f"90010{i % 10}-14-{i:04d}",
        studentId=f"S{i:05d}",
        programme="Test Programme",
        convoDate="2024-10-12",
        semesterFinish="2024-1",
    )
    return cert_transaction(rec, nonce if nonce is not None else i, registrar_key, config.chain_id)


@contextlib.contextmanager
def http_server(node):
    """Serve a node's app on an ephemeral localhost port; yields the URL."""
    app = create_app(node)
    server_config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(server_config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.time() + 10
        while not server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        sock: socket.socket = server.servers[0].sockets[0]
        host, port = sock.getsockname()[:2]
        yield f"http://{host}:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)

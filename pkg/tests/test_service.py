"""HTTP endpoint shapes, error contract, and the node CLI commands."""

import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from certchain.cli import main as node_cli
from certchain.config import load_genesis
from certchain.crypto import KeyPair, derive_address
from certchain.encoding import decode_block, parse_address, parse_hex, to_hex, tx_hash
from certchain.node import Node
from certchain.sealer import ManualClock
from certchain.service import create_app
from certchain.signing import sign_transaction
from certchain.types import Transaction

from conftest import make_cert_tx


@pytest.fixture
def rig(config, sealer_key):
    node = Node(config, sealer_key=sealer_key, clock=ManualClock(config.genesis_timestamp))
    client = TestClient(create_app(node))
    return node, client


def submit(client, stx):
    from certchain.encoding import encode_signed_transaction

    return client.post("/tx", json={"raw": to_hex(encode_signed_transaction(stx))})


# --- /tx ---------------------------------------------------------------------


def test_submit_returns_tx_hash(rig, config, registrar_key):
    node, client = rig
    stx = make_cert_tx(config, registrar_key, 1, nonce=0)
    resp = submit(client, stx)
    assert resp.status_code == 200
    assert resp.json() == {"hash": to_hex(tx_hash(stx))}
    assert len(node.pool) == 1


def test_submit_bad_hex_is_parse_error(rig):
    _, client = rig
    resp = client.post("/tx", json={"raw": "0xzz"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"]["code"] == "parse_error"
    assert body["error"]["message"]


def test_submit_truncated_tx_is_parse_error(rig):
    _, client = rig
    resp = client.post("/tx", json={"raw": "0x" + "ab" * 40})
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "parse_error"


def test_submit_invalid_tx_is_rejected_with_reason(rig, config, registrar_key):
    _, client = rig
    stx = make_cert_tx(config, registrar_key, 1, nonce=7)  # nonce gap is fine; use chain_id
    tx = stx.tx
    wrong = Transaction(
        chain_id=config.chain_id + 1,
        nonce=0,
        sender=tx.sender,
        to=tx.to,
        value=tx.value,
        gas_limit=tx.gas_limit,
        gas_price=tx.gas_price,
        payload=tx.payload,
    )
    resp = submit(client, sign_transaction(wrong, registrar_key))
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"]["code"] == "rejected"
    assert "chain" in body["error"]["message"]


def test_submit_missing_field_is_422(rig):
    _, client = rig
    assert client.post("/tx", json={}).status_code == 422


# --- reads -------------------------------------------------------------------


def test_unknown_certificate_reads_as_empty(rig):
    _, client = rig
    resp = client.get("/cert/NOPE-0001")
    assert resp.status_code == 200
    assert resp.json() == {"certNo": "", "name": "", "programme": "", "convoDate": ""}


def test_submit_seal_read_loop(rig, config, registrar_key):
    node, client = rig
    stx = make_cert_tx(config, registrar_key, 7, nonce=0)
    assert submit(client, stx).status_code == 200
    node.clock.advance(5)
    assert node.sealer.poll() == 1

    resp = client.get(f"/cert/{stx.tx.payload.args[0]}")
    body = resp.json()
    assert body["certNo"] == stx.tx.payload.args[0]
    assert body["name"] == stx.tx.payload.args[1]
    assert body["programme"] == stx.tx.payload.args[4]
    assert body["convoDate"] == stx.tx.payload.args[5]
    assert client.get("/cert-count").json() == {"count": 1}


def test_cert_count_starts_at_zero(rig):
    _, client = rig
    assert client.get("/cert-count").json() == {"count": 0}


# --- /blocks -----------------------------------------------------------------


def test_blocks_window_and_decodability(rig, config):
    node, client = rig
    node.clock.advance(15)
    node.sealer.poll()
    resp = client.get("/blocks", params={"from": 1, "max": 2})
    assert resp.status_code == 200
    blocks = [decode_block(parse_hex(h)) for h in resp.json()["blocks"]]
    assert [b.header.number for b in blocks] == [1, 2]


def test_blocks_defaults_start_at_genesis(rig):
    _, client = rig
    blocks = client.get("/blocks").json()["blocks"]
    assert len(blocks) == 1
    assert decode_block(parse_hex(blocks[0])).header.number == 0


@pytest.mark.parametrize("params", [{"from": -1}, {"max": 0}, {"max": 1001}])
def test_blocks_bounds_are_validated(rig, params):
    _, client = rig
    assert client.get("/blocks", params=params).status_code == 422


# --- /head and /metrics ------------------------------------------------------


def test_head_shape(rig):
    node, client = rig
    body = client.get("/head").json()
    assert body["height"] == 0
    assert body["hash"] == to_hex(node.chain.snapshot.head_hash)
    assert body["stateRoot"] == to_hex(node.chain.head.header.state_root)
    assert body["hash"].startswith("0x") and len(body["hash"]) == 66


def test_head_advances_with_chain(rig):
    node, client = rig
    node.clock.advance(5)
    node.sealer.poll()
    assert client.get("/head").json()["height"] == 1


def test_metrics_shape_and_counters(rig, config, registrar_key):
    node, client = rig
    submit(client, make_cert_tx(config, registrar_key, 1, nonce=0))
    client.get("/cert/ANY")
    client.get("/cert-count")
    body = client.get("/metrics").json()
    assert body["process_cpu_seconds"] > 0
    assert body["txs_pending"] == 1
    assert body["chain_height"] == 0
    assert body["certs_total"] == 0
    assert body["requests_total"]["submit"] == 1
    assert body["requests_total"]["read"] == 1
    assert body["requests_total"]["cert_count"] == 1


# --- CLI ---------------------------------------------------------------------


def test_make_key_output_is_usable():
    result = CliRunner().invoke(node_cli, ["make-key"])
    assert result.exit_code == 0
    body = json.loads(result.output)
    key = KeyPair.from_hex(body["private_key"])
    assert to_hex(derive_address(key.public)) == body["address"]


def test_make_genesis_round_trip(tmp_path, sealer_key):
    import time

    out = tmp_path / "genesis.json"
    addr = to_hex(derive_address(sealer_key.public))
    result = CliRunner().invoke(node_cli, ["make-genesis", "--out", str(out), "--authority", addr])
    assert result.exit_code == 0, result.output
    config = load_genesis(out)
    assert config.authorities == (derive_address(sealer_key.public),)
    assert config.block_period_ms == 5000
    assert config.block_gas_limit == 27_507_108
    # stamped "now" so a fresh sealer does not mint years of catch-up blocks
    assert abs(config.genesis_timestamp - time.time()) < 60


def test_make_genesis_timestamp_override(tmp_path, sealer_key):
    out = tmp_path / "genesis.json"
    addr = to_hex(derive_address(sealer_key.public))
    result = CliRunner().invoke(
        node_cli,
        ["make-genesis", "--out", str(out), "--authority", addr, "--genesis-timestamp", "1700000000"],
    )
    assert result.exit_code == 0, result.output
    assert load_genesis(out).genesis_timestamp == 1_700_000_000


def test_make_genesis_custom_registrar_and_alloc(tmp_path, sealer_key, registrar_key):
    out = tmp_path / "genesis.json"
    auth = to_hex(derive_address(sealer_key.public))
    reg = to_hex(derive_address(registrar_key.public))
    extra = "0x" + "11" * 20
    result = CliRunner().invoke(
        node_cli,
        [
            "make-genesis",
            "--out", str(out),
            "--authority", auth,
            "--registrar", reg,
            "--extra-alloc", f"{extra}:5000",
        ],
    )
    assert result.exit_code == 0, result.output
    config = load_genesis(out)
    assert config.registrar == derive_address(registrar_key.public)
    assert (parse_address(extra), 5000) in config.alloc


def test_make_genesis_requires_authority(tmp_path):
    result = CliRunner().invoke(node_cli, ["make-genesis", "--out", str(tmp_path / "g.json")])
    assert result.exit_code != 0


def test_run_rejects_bad_listen(tmp_path, sealer_key):
    out = tmp_path / "genesis.json"
    addr = to_hex(derive_address(sealer_key.public))
    CliRunner().invoke(node_cli, ["make-genesis", "--out", str(out), "--authority", addr])
    result = CliRunner().invoke(node_cli, ["run", "--genesis", str(out), "--listen", "nohost"])
    assert result.exit_code != 0

"""World state and transaction execution.

State is account balances/nonces plus the certificate registry. The
sealer is the only writer; readers work on cloned snapshots, so the
mutating style here never races (see chain.py for snapshot handover).

Transaction validity is checked in a fixed order: signature, chain_id,
nonce, balance, gas limit. A validity failure rejects the transaction
outright (it never enters a block). A payload failure (duplicate
certificate, non-registrar caller, empty studentId) produces a reverted
receipt: the fee is charged and the nonce advances, but the registry
and value transfer are untouched. Fees are burned, not credited to the
sealer, so conservation is: sum of balances + sum of fees paid == sum
of genesis allocations.

Gas schedule: plain transfer 21,000; addCertificate 343,838 (the block
gas limit of 27,507,108 then fits exactly 80 adds per block). Read-only
functions cost nothing because they are served off-chain via RPC; a
transaction carrying one is rejected, never blocked in.
"""

from __future__ import annotations

import struct

from .config import ChainConfig
from .crypto import SignatureError, keccak256
from .encoding import tx_hash as _tx_hash
from .signing import recover_signer
from .types import (
    AccountState,
    CallPayload,
    CertificateRecord,
    Receipt,
    SignedTransaction,
    Transaction,
)

GAS_TRANSFER = 21_000
GAS_ADD_CERTIFICATE = 343_838

_READ_ONLY = frozenset(
    ["readCertificatePublic", "isValidCertificate", "getListCertificateStatus"]
)


class TxRejected(Exception):
    """Validity failure; the transaction can never enter a block."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def gas_cost(payload: CallPayload | None) -> int:
    if payload is None:
        return GAS_TRANSFER
    if payload.function == "addCertificate":
        return GAS_ADD_CERTIFICATE
    return 0  # read-only, served off-chain


class WorldState:
    """Mutable chain state; clone() gives an independent copy.

    Certificate records are immutable and append-only, so their
    serialized forms are cached per state and carried across clones.
    """

    __slots__ = ("accounts", "certificates", "cert_count", "registrar", "_cert_blobs")

    def __init__(self, registrar: bytes):
        self.accounts: dict[bytes, AccountState] = {}
        self.certificates: dict[str, CertificateRecord] = {}
        self.cert_count = 0
        self.registrar = registrar
        self._cert_blobs: dict[str, bytes] = {}

    def clone(self) -> "WorldState":
        out = WorldState(self.registrar)
        out.accounts = {a: AccountState(s.balance, s.nonce) for a, s in self.accounts.items()}
        out.certificates = dict(self.certificates)
        out.cert_count = self.cert_count
        out._cert_blobs = dict(self._cert_blobs)
        return out

    def ensure_account(self, addr: bytes) -> AccountState:
        acct = self.accounts.get(addr)
        if acct is None:
            acct = AccountState()
            self.accounts[addr] = acct
        return acct

    def account(self, addr: bytes) -> AccountState:
        """Read-only view; absent accounts report zero balance and nonce."""
        return self.accounts.get(addr, AccountState())


def genesis_state(config: ChainConfig) -> WorldState:
    state = WorldState(config.registrar)
    for addr, balance in config.alloc:
        state.ensure_account(addr).balance = balance
    return state


# --- registry functions ------------------------------------------------------


def _try_add(state: WorldState, caller: bytes, rec: CertificateRecord) -> str:
    """Empty string on success, else the revert reason."""
    if caller != state.registrar:
        return "not registrar"
    if rec.certNo in state.certificates:
        return "duplicate"
    if rec.studentId == "":
        return "empty studentId"
    state.certificates[rec.certNo] = rec
    state.cert_count += 1
    state._cert_blobs[rec.certNo] = _cert_blob(rec)
    return ""


def add_certificate(state: WorldState, caller: bytes, rec: CertificateRecord) -> bool:
    return _try_add(state, caller, rec) == ""


def read_certificate_public(state: WorldState, certNo: str) -> tuple[str, str, str, str]:
    """Public projection; private fields (ic, studentId, semesterFinish) never leave."""
    rec = state.certificates.get(certNo)
    if rec is None or rec.studentId == "":
        return ("", "", "", "")
    return (rec.certNo, rec.name, rec.programme, rec.convoDate)


def is_valid_certificate(state: WorldState, certNo: str) -> bool:
    return certNo in state.certificates


def get_list_certificate_status(state: WorldState) -> int:
    return state.cert_count


# --- execution ---------------------------------------------------------------


def apply_checked(
    state: WorldState, sender: bytes, tx: Transaction, config: ChainConfig, txh: bytes
) -> Receipt:
    """Execute a transaction whose signature was already verified.

    Mutates state on success or revert; raises TxRejected (state
    untouched) on any validity failure.
    """
    if tx.chain_id != config.chain_id:
        raise TxRejected("chain_id")
    acct = state.accounts.get(sender)
    current_nonce = acct.nonce if acct else 0
    if tx.nonce < current_nonce:
        raise TxRejected("stale nonce")
    if tx.nonce > current_nonce:
        raise TxRejected("nonce gap")
    balance = acct.balance if acct else 0
    if balance < tx.gas_limit * tx.gas_price + tx.value:
        raise TxRejected("insufficient balance")
    cost = gas_cost(tx.payload)
    if tx.gas_limit < cost:
        raise TxRejected("gas limit below intrinsic cost")
    if tx.payload is not None and tx.payload.function in _READ_ONLY:
        raise TxRejected("read-only function")

    acct = state.ensure_account(sender)
    acct.nonce += 1
    acct.balance -= cost * tx.gas_price
    if tx.payload is not None:
        rec = CertificateRecord(*tx.payload.args)
        reason = _try_add(state, sender, rec)
        if reason:
            return Receipt(txh, "reverted", cost, b"", reason)
        result = b"\x01"
    else:
        result = b""
    acct.balance -= tx.value
    state.ensure_account(tx.to).balance += tx.value
    return Receipt(txh, "success", cost, result)


def apply_transaction(
    state: WorldState, stx: SignedTransaction, config: ChainConfig
) -> Receipt:
    """Full path: recover and check the signer, then execute."""
    try:
        sender = recover_signer(stx)
    except SignatureError:
        raise TxRejected("signature") from None
    if sender != stx.tx.sender:
        raise TxRejected("signature")
    return apply_checked(state, sender, stx.tx, config, _tx_hash(stx))


# --- state commitment --------------------------------------------------------


def _cert_blob(rec: CertificateRecord) -> bytes:
    parts = []
    for value in (
        rec.certNo,
        rec.name,
        rec.ic,
        rec.studentId,
        rec.programme,
        rec.convoDate,
        rec.semesterFinish,
    ):
        raw = value.encode("utf-8")
        parts.append(struct.pack(">I", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def commit_state(state: WorldState) -> bytes:
    """Canonical state digest; independent of insertion order."""
    parts = [struct.pack(">I", len(state.accounts))]
    for addr in sorted(state.accounts):
        acct = state.accounts[addr]
        parts.append(addr)
        parts.append(acct.balance.to_bytes(16, "big"))
        parts.append(acct.nonce.to_bytes(8, "big"))
    parts.append(struct.pack(">I", len(state.certificates)))
    blobs = state._cert_blobs
    for certNo in sorted(state.certificates, key=lambda c: c.encode("utf-8")):
        blob = blobs.get(certNo)
        if blob is None:
            blob = _cert_blob(state.certificates[certNo])
            blobs[certNo] = blob
        parts.append(blob)
    parts.append(state.cert_count.to_bytes(8, "big"))
    parts.append(state.registrar)
    return keccak256(b"".join(parts))

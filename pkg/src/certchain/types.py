"""Core chain datatypes.

Addresses are 20 raw bytes, hashes 32. The transaction wire format calls
the sender field "from"; the Python attribute is `sender` because `from`
is a keyword.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ZERO_ADDRESS = b"\x00" * 20
ZERO_HASH = b"\x00" * 32

# function name -> (wire code, argument count)
FUNCTIONS = {
    "addCertificate": (1, 7),
    "readCertificatePublic": (2, 1),
    "isValidCertificate": (3, 1),
    "getListCertificateStatus": (4, 0),
}
FUNCTION_BY_CODE = {code: name for name, (code, _) in FUNCTIONS.items()}


@dataclass(frozen=True)
class CallPayload:
    """A registry function call; args are positional strings."""

    function: str
    args: tuple[str, ...]

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValueError(f"unknown function {self.function!r}")
        arity = FUNCTIONS[self.function][1]
        if len(self.args) != arity:
            raise ValueError(
                f"{self.function} takes {arity} args, got {len(self.args)}"
            )


@dataclass(frozen=True)
class Transaction:
    chain_id: int
    nonce: int
    sender: bytes
    to: bytes
    value: int
    gas_limit: int
    gas_price: int
    payload: CallPayload | None = None  # None is a plain transfer


@dataclass(frozen=True)
class Signature:
    r: int
    s: int
    recovery_id: int

    def __iter__(self):
        return iter((self.r, self.s, self.recovery_id))


@dataclass(frozen=True)
class SignedTransaction:
    tx: Transaction
    signature: Signature


@dataclass(frozen=True)
class CertificateRecord:
    certNo: str
    name: str
    ic: str
    studentId: str
    programme: str
    convoDate: str
    semesterFinish: str


@dataclass
class AccountState:
    balance: int = 0
    nonce: int = 0


@dataclass(frozen=True)
class Receipt:
    tx_hash: bytes
    status: str  # "success" | "reverted"
    gas_used: int
    return_value: bytes = b""
    error_reason: str = ""


@dataclass(frozen=True)
class BlockHeader:
    number: int
    parent_hash: bytes
    timestamp: int
    sealer: bytes
    gas_limit: int
    gas_used: int
    tx_root: bytes
    state_root: bytes


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    transactions: tuple[SignedTransaction, ...] = ()
    seal_signature: Signature = field(
        default_factory=lambda: Signature(0, 0, 0)
    )

"""Request/response bodies for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class SubmitTxRequest(BaseModel):
    raw: str = Field(description="hex-encoded canonical signed transaction")


class SubmitTxResponse(BaseModel):
    hash: str


class CertificateResponse(BaseModel):
    certNo: str
    name: str
    programme: str
    convoDate: str


class CertCountResponse(BaseModel):
    count: int


class BlocksResponse(BaseModel):
    blocks: list[str]


class HeadResponse(BaseModel):
    height: int
    hash: str
    stateRoot: str


class MetricsResponse(BaseModel):
    process_cpu_seconds: float
    requests_total: dict[str, int]
    txs_pending: int
    chain_height: int
    certs_total: int


class ErrorBody(BaseModel):
    code: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody

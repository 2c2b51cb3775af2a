"""HTTP surface of a node.

Endpoints are plain functions (not async) so the framework serves them
from its worker thread pool: handlers do CPU-bound signature checks and
state reads, and parallel read clients should not serialize behind one
event loop. Errors use one shape: {"error": {"code", "message"}}.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from ..encoding import DecodeError
from ..mempool import MempoolRejected
from ..node import Node
from .models import (
    BlocksResponse,
    CertCountResponse,
    CertificateResponse,
    ErrorResponse,
    HeadResponse,
    MetricsResponse,
    SubmitTxRequest,
    SubmitTxResponse,
)

_ERROR_RESPONSES = {400: {"model": ErrorResponse}}


def create_app(node: Node) -> FastAPI:
    app = FastAPI(title="certchain node", docs_url=None, redoc_url=None)

    def error(code: str, message: str, status: int = 400) -> JSONResponse:
        return JSONResponse(
            status_code=status, content={"error": {"code": code, "message": message}}
        )

    @app.exception_handler(DecodeError)
    def on_decode_error(request: Request, exc: DecodeError):
        return error("parse_error", str(exc))

    @app.exception_handler(MempoolRejected)
    def on_rejection(request: Request, exc: MempoolRejected):
        return error("rejected", exc.reason)

    @app.post("/tx", response_model=SubmitTxResponse, responses=_ERROR_RESPONSES)
    def submit_tx(body: SubmitTxRequest):
        return SubmitTxResponse(hash=node.submit_raw_transaction(body.raw))

    @app.get("/cert/{cert_no}", response_model=CertificateResponse)
    def read_certificate(cert_no: str):
        cert_no_out, name, programme, convo = node.read_certificate(cert_no)
        return CertificateResponse(
            certNo=cert_no_out, name=name, programme=programme, convoDate=convo
        )

    @app.get("/cert-count", response_model=CertCountResponse)
    def cert_count():
        return CertCountResponse(count=node.certificate_count())

    @app.get("/blocks", response_model=BlocksResponse)
    def blocks(
        from_height: int = Query(0, alias="from", ge=0),
        max_count: int = Query(100, alias="max", ge=1, le=1000),
    ):
        return BlocksResponse(blocks=node.get_blocks_hex(from_height, max_count))

    @app.get("/metrics", response_model=MetricsResponse)
    def metrics():
        return MetricsResponse(**node.metrics())

    @app.get("/head", response_model=HeadResponse)
    def head():
        return HeadResponse(**node.head_info())

    return app

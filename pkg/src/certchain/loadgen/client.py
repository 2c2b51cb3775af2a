"""Thin HTTP client for a node's API."""

from __future__ import annotations

import requests


class RpcError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class NodeClient:
    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = requests.Session()

    def _check(self, resp: requests.Response) -> dict:
        if resp.status_code >= 400:
            try:
                err = resp.json()["error"]
                raise RpcError(err["code"], err["message"])
            except (ValueError, KeyError):
                raise RpcError("http_error", f"status {resp.status_code}") from None
        return resp.json()

    def submit_tx(self, raw_hex: str) -> str:
        resp = self.session.post(
            f"{self.base_url}/tx", json={"raw": raw_hex}, timeout=self.timeout
        )
        return self._check(resp)["hash"]

    def read_certificate(self, cert_no: str) -> tuple[str, str, str, str]:
        doc = self._check(
            self.session.get(f"{self.base_url}/cert/{cert_no}", timeout=self.timeout)
        )
        return (doc["certNo"], doc["name"], doc["programme"], doc["convoDate"])

    def certificate_count(self) -> int:
        return self._check(
            self.session.get(f"{self.base_url}/cert-count", timeout=self.timeout)
        )["count"]

    def get_blocks(self, start: int, max_count: int) -> list[str]:
        return self._check(
            self.session.get(
                f"{self.base_url}/blocks",
                params={"from": start, "max": max_count},
                timeout=self.timeout,
            )
        )["blocks"]

    def head(self) -> dict:
        return self._check(self.session.get(f"{self.base_url}/head", timeout=self.timeout))

    def metrics(self) -> dict:
        return self._check(
            self.session.get(f"{self.base_url}/metrics", timeout=self.timeout)
        )

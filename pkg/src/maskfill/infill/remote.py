"""HTTP client for a remote infilling/scoring service.

Wire protocol (JSON bodies in the canonical record encoding):
    POST /infill  {tokens_with_mask, mask_token, num_candidates, max_fill_len,
                   top_k, top_p, beam_size, seed} -> {candidates: [{tokens, score}]}
    POST /score   {tokens} -> {neg_log_likelihood}
    GET  /health  -> {status: "ok", model_id}

Any non-2xx status or malformed body surfaces as BackendUnavailable.
"""

import random
import threading
import time

import requests

from .base import BackendUnavailable, InfillCandidate, InfillRequest


class RemoteBackend:
    """Client with bounded in-flight requests and idempotent retries."""

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        max_in_flight: int = 8,
        retries: int = 2,
        retry_wait: float = 0.2,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.retry_wait = retry_wait
        self._gate = threading.Semaphore(max_in_flight)
        self._session = session or requests.Session()

    @property
    def backend_id(self) -> str:
        return f"remote:{self.endpoint}"

    def _request(self, method: str, path: str, body=None) -> dict:
        url = self.endpoint + path
        last_error = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.retry_wait * attempt)
            try:
                with self._gate:
                    resp = self._session.request(method, url, json=body, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = f"{type(exc).__name__}: {exc}"
                continue  # connection-level failure: safe to retry
            if 500 <= resp.status_code < 600 or resp.status_code == 429:
                last_error = f"HTTP {resp.status_code}"
                continue
            if not (200 <= resp.status_code < 300):
                raise BackendUnavailable(f"{url}: HTTP {resp.status_code}")
            try:
                data = resp.json()
            except ValueError as exc:
                raise BackendUnavailable(f"{url}: malformed JSON body: {exc}") from exc
            if not isinstance(data, dict):
                raise BackendUnavailable(f"{url}: expected a JSON object")
            return data
        raise BackendUnavailable(f"{url}: {last_error}")

    def health(self) -> dict:
        data = self._request("GET", "/health")
        if data.get("status") != "ok" or "model_id" not in data:
            raise BackendUnavailable(f"{self.endpoint}/health: unexpected body {data!r}")
        return data

    def infill_candidates(self, req: InfillRequest, rng: random.Random):
        body = {
            "tokens_with_mask": req.tokens_with_mask,
            "mask_token": req.mask_token,
            "num_candidates": req.num_candidates,
            "max_fill_len": req.max_fill_len,
            "top_k": req.top_k,
            "top_p": req.top_p,
            "beam_size": req.beam_size,
            "seed": rng.getrandbits(32),
        }
        data = self._request("POST", "/infill", body)
        raw = data.get("candidates")
        if not isinstance(raw, list):
            raise BackendUnavailable(f"{self.endpoint}/infill: missing candidates array")
        out = []
        for item in raw:
            if (
                not isinstance(item, dict)
                or not isinstance(item.get("tokens"), list)
                or not isinstance(item.get("score"), (int, float))
            ):
                raise BackendUnavailable(f"{self.endpoint}/infill: malformed candidate {item!r}")
            out.append(InfillCandidate(tokens=list(item["tokens"]), score=float(item["score"])))
        return out

    def score_tokens(self, tokens: list[str]) -> float:
        data = self._request("POST", "/score", {"tokens": tokens})
        nll = data.get("neg_log_likelihood")
        if not isinstance(nll, (int, float)):
            raise BackendUnavailable(f"{self.endpoint}/score: missing neg_log_likelihood")
        return float(nll)

"""In-process HTTP service wrapping a native backend.

Lets the client tests exercise the wire protocol against a live socket
without the serving shim. Supports failure injection for retry tests.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from maskfill.infill import InfillRequest, NoCandidate, infill, score
from maskfill.seeding import derive_rng

REQUIRED_INFILL_FIELDS = ("tokens_with_mask", "mask_token", "num_candidates", "max_fill_len")


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _reply(self, code, obj=None, raw=None):
        body = raw if raw is not None else json.dumps(obj).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _inject_failure(self):
        if self.server.fail_remaining > 0:
            self.server.fail_remaining -= 1
            self._reply(503, {"error": "injected failure"})
            return True
        if self.server.garbage_mode:
            self._reply(200, raw=b"this is not json")
            return True
        return False

    def do_GET(self):
        self.server.request_count += 1
        if self._inject_failure():
            return
        if self.path == "/health":
            self._reply(200, {"status": "ok", "model_id": self.server.backend.backend_id})
        else:
            self._reply(404, {"error": "not found"})

    def do_POST(self):
        self.server.request_count += 1
        if self._inject_failure():
            return
        length = int(self.headers.get("Content-Length", 0))
        try:
            body = json.loads(self.rfile.read(length))
        except ValueError:
            self._reply(400, {"error": "malformed body"})
            return
        if self.path == "/infill":
            if not isinstance(body, dict) or any(f not in body for f in REQUIRED_INFILL_FIELDS):
                self._reply(400, {"error": "missing fields"})
                return
            try:
                req = InfillRequest(
                    tokens_with_mask=body["tokens_with_mask"],
                    num_candidates=body["num_candidates"],
                    max_fill_len=body["max_fill_len"],
                    top_k=body.get("top_k", 100),
                    top_p=body.get("top_p", 0.7),
                    beam_size=body.get("beam_size", 5),
                    mask_token=body["mask_token"],
                )
            except ValueError as exc:
                self._reply(400, {"error": str(exc)})
                return
            try:
                candidates = infill(self.server.backend, req, derive_rng(body.get("seed", 0)))
            except NoCandidate:
                candidates = []
            self._reply(
                200,
                {"candidates": [{"tokens": c.tokens, "score": c.score} for c in candidates]},
            )
        elif self.path == "/score":
            if not isinstance(body, dict) or not isinstance(body.get("tokens"), list):
                self._reply(400, {"error": "missing tokens"})
                return
            self._reply(200, {"neg_log_likelihood": score(self.server.backend, body["tokens"])})
        else:
            self._reply(404, {"error": "not found"})


class BackendServer:
    """Threaded stub server; use as a context manager."""

    def __init__(self, backend):
        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self._httpd.backend = backend
        self._httpd.fail_remaining = 0
        self._httpd.garbage_mode = False
        self._httpd.request_count = 0
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def endpoint(self) -> str:
        host, port = self._httpd.server_address
        return f"http://{host}:{port}"

    def fail_next(self, n: int) -> None:
        self._httpd.fail_remaining = n

    def set_garbage_mode(self, on: bool) -> None:
        self._httpd.garbage_mode = on

    @property
    def request_count(self) -> int:
        return self._httpd.request_count

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._httpd.shutdown()
        self._httpd.server_close()

"""Shared test utilities: an in-process HTTP stub server."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubServer:
    """Serves canned responses; routing is delegated to a callable.

    The handler callable receives (method, path, query, body) and returns
    (status, payload).  Payloads that are bytes go out raw, anything else
    is JSON-encoded.  Every handled request is appended to .requests.
    """

    def __init__(self, handler):
        self.handler = handler
        self.requests: list[tuple[str, str]] = []
        self._lock = threading.Lock()

        stub = self

        class _Handler(BaseHTTPRequestHandler):
            def _serve(self, method):
                path, _, query = self.path.partition("?")
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                with stub._lock:
                    stub.requests.append((method, self.path))
                status, payload = stub.handler(method, path, query, body)
                raw = payload if isinstance(payload, bytes) else \
                    json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(raw)))
                self.end_headers()
                self.wfile.write(raw)

            def do_GET(self):
                self._serve("GET")

            def do_POST(self):
                self._serve("POST")

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()

    @property
    def request_count(self) -> int:
        with self._lock:
            return len(self.requests)

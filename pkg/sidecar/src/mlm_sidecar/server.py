"""HTTP fill-mask inference service.

Wire protocol (JSON, UTF-8):
  POST /v1/predict  {"text": str, "mask_token": str, "k": int}
                    -> {"predictions": [{"token": str, "score": float}, ...]}
  GET  /v1/health   -> {"model": str, "ready": bool}

Validation: 400 when the text does not contain exactly one mask token,
422 when k is out of [1, 50], 503 while the model is still loading.
Scores are raw model probabilities in descending order; subword handling
is left to clients.
"""

from __future__ import annotations

import argparse
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

DEFAULT_MODEL = "bert-base-cased"
MAX_K = 50


class TransformersFillMask:
    """Fill-mask backend over a Hugging Face pipeline, loaded once."""

    def __init__(self, model_name: str = DEFAULT_MODEL):
        self.name = model_name
        import torch
        from transformers import pipeline
        torch.manual_seed(0)
        torch.set_grad_enabled(False)
        self._pipeline = pipeline("fill-mask", model=model_name,
                                  tokenizer=model_name, device=-1)
        self.mask_token = self._pipeline.tokenizer.mask_token

    def predict(self, text: str, k: int) -> list[tuple[str, float]]:
        results = self._pipeline(text, top_k=k)
        pairs = [(r["token_str"].strip(), float(r["score"])) for r in results]
        pairs.sort(key=lambda p: -p[1])
        return pairs


class SidecarState:
    def __init__(self):
        self.model = None
        self.error: str | None = None
        self.lock = threading.Lock()

    @property
    def ready(self) -> bool:
        return self.model is not None


def make_handler(state: SidecarState):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _send(self, status: int, payload: dict) -> None:
            raw = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(raw)))
            self.end_headers()
            self.wfile.write(raw)

        def do_GET(self):
            if self.path != "/v1/health":
                self._send(404, {"error": "not found"})
                return
            name = state.model.name if state.ready else \
                (state.error or "loading")
            self._send(200, {"model": name, "ready": state.ready})

        def do_POST(self):
            if self.path != "/v1/predict":
                self._send(404, {"error": "not found"})
                return
            if not state.ready:
                self._send(503, {"error": state.error or "model loading"})
                return
            try:
                length = int(self.headers.get("Content-Length") or 0)
                body = json.loads(self.rfile.read(length))
                text = body["text"]
                mask_token = body.get("mask_token", "[MASK]")
                k = body["k"]
            except (ValueError, KeyError, TypeError) as exc:
                self._send(400, {"error": f"bad request body: {exc}"})
                return
            if not isinstance(k, int) or not 1 <= k <= MAX_K:
                self._send(422, {"error": f"k must be an int in [1, {MAX_K}]"})
                return
            if not isinstance(text, str) or text.count(mask_token) != 1:
                self._send(400, {"error": "text must contain the mask token "
                                          "exactly once"})
                return
            model = state.model
            model_text = text.replace(mask_token, model.mask_token)
            try:
                pairs = model.predict(model_text, k)
            except Exception as exc:  # defensive: surface model failures
                self._send(500, {"error": f"inference failed: {exc}"})
                return
            self._send(200, {"predictions": [
                {"token": token, "score": score} for token, score in pairs]})

    return Handler


def build_server(model, host: str = "127.0.0.1",
                 port: int = 0) -> tuple[ThreadingHTTPServer, SidecarState]:
    """Server around an already-constructed model (used by tests)."""
    state = SidecarState()
    state.model = model
    server = ThreadingHTTPServer((host, port), make_handler(state))
    return server, state


def serve(model_name: str = DEFAULT_MODEL, port: int = 8800,
          host: str = "127.0.0.1") -> None:
    """Load the model in the background and serve until interrupted."""
    state = SidecarState()

    def load():
        try:
            model = TransformersFillMask(model_name)
        except Exception as exc:
            state.error = f"load failed: {exc}"
            return
        with state.lock:
            state.model = model

    threading.Thread(target=load, daemon=True).start()
    server = ThreadingHTTPServer((host, port), make_handler(state))
    print(f"serving {model_name} on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="mlm-sidecar",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help="model name or local model directory")
    parser.add_argument("--port", type=int, default=8800)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)
    serve(model_name=args.model, port=args.port, host=args.host)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Fill-mask inference sidecar speaking the /v1/predict JSON protocol."""

from .server import DEFAULT_MODEL, TransformersFillMask, build_server, serve

__all__ = ["DEFAULT_MODEL", "TransformersFillMask", "build_server", "serve"]

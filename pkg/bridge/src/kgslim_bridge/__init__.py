"""Adapter-protocol server exposing generation and scoring models.

The package answers line-delimited JSON requests (protocol v1) over a child
process's standard streams or over HTTP POST, advertising its capabilities in
a handshake. Each capability is backed by a configured model: deterministic
rule-based "dummy:" models for offline use and testing, or pretrained neural
models loaded lazily from local checkpoints or a model hub.
"""
from .config import BridgeConfig, BridgeConfigError, KNOWN_KINDS
from .models import BridgeModelError, build_handlers
from .server import PROTOCOL_VERSION, build_http_server, handle_request, serve_stdio

__all__ = [
    "BridgeConfig",
    "BridgeConfigError",
    "BridgeModelError",
    "KNOWN_KINDS",
    "PROTOCOL_VERSION",
    "build_handlers",
    "build_http_server",
    "handle_request",
    "serve_stdio",
]

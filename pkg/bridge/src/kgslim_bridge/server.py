"""Protocol v1 server over two transports.

Requests and responses are single-line JSON objects. Over standard streams the
server prints one handshake line at startup and then answers one request per
line; over HTTP each POST body carries one request and the response body the
matching answer. Both transports produce identical JSON bodies, and every
failure after startup is reported in-band (``ok: false``) so the server never
dies mid-conversation.
"""
from __future__ import annotations

import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import IO, Iterable

from .models import Handler

PROTOCOL_VERSION = 1


def handshake_response(capabilities: Iterable[str], request_id: str = "handshake") -> dict:
    return {
        "v": PROTOCOL_VERSION,
        "kind": "handshake",
        "request_id": request_id,
        "ok": True,
        "capabilities": sorted(capabilities),
    }


def handle_request(request: object, handlers: dict[str, Handler]) -> dict:
    """Answer one parsed request; every outcome is a response object."""
    if not isinstance(request, dict):
        return {"request_id": None, "ok": False, "error": "request is not a JSON object"}
    request_id = request.get("request_id")
    kind = request.get("kind")
    if kind == "handshake":
        response = handshake_response(handlers)
        if request_id is not None:
            response["request_id"] = request_id
        return response
    if request.get("v") != PROTOCOL_VERSION:
        return {
            "request_id": request_id,
            "ok": False,
            "error": f"unsupported protocol version {request.get('v')!r}",
        }
    handler = handlers.get(kind)
    if handler is None:
        return {"request_id": request_id, "ok": False, "error": f"unknown kind {kind!r}"}
    try:
        return {"request_id": request_id, "ok": True, **handler(request)}
    except Exception as exc:  # answer in-band; the server must survive
        return {
            "request_id": request_id,
            "ok": False,
            "error": f"{type(exc).__name__}: {exc}",
        }


def handle_line(line: str, handlers: dict[str, Handler]) -> dict:
    """Parse one request line and answer it; malformed JSON is an in-band error."""
    try:
        request = json.loads(line)
    except json.JSONDecodeError as exc:
        return {"request_id": None, "ok": False, "error": f"malformed JSON request: {exc}"}
    return handle_request(request, handlers)


def serve_stdio(
    handlers: dict[str, Handler],
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
) -> None:
    """Answer requests line by line until the input stream closes."""
    reader = stdin if stdin is not None else sys.stdin
    writer = stdout if stdout is not None else sys.stdout

    def emit(response: dict) -> None:
        writer.write(json.dumps(response, ensure_ascii=False) + "\n")
        writer.flush()

    emit(handshake_response(handlers))
    for line in reader:
        if not line.strip():
            continue
        emit(handle_line(line, handlers))


def build_http_server(
    handlers: dict[str, Handler], host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    """An HTTP server answering one protocol request per POST.

    Requests are dispatched under a lock: the transport accepts concurrent
    connections, but model calls are serialized because the underlying models
    are not guaranteed to be thread-safe.
    """
    lock = threading.Lock()

    class _Handler(BaseHTTPRequestHandler):
        def do_POST(self) -> None:  # noqa: N802 (http.server naming)
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length).decode("utf-8", errors="replace")
            with lock:
                response = handle_line(body, handlers)
            payload = json.dumps(response, ensure_ascii=False).encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, format: str, *args: object) -> None:
            print(f"{self.address_string()} {format % args}", file=sys.stderr)

    return ThreadingHTTPServer((host, port), _Handler)

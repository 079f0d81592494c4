"""Client side of the external-adapter protocol.

Requests are single-line JSON objects carrying `v` (protocol version), `kind`,
`request_id`, and kind-specific fields. Responses echo `request_id` and carry
either `ok: true` with a payload or `ok: false` with an `error` string. The
same envelope travels over a subprocess's stdin/stdout (one JSON object per
line) or as HTTP POST bodies.
"""
from __future__ import annotations

import json
import os
import queue
import shlex
import subprocess
import threading
import urllib.error
import urllib.request
from typing import Any

PROTOCOL_VERSION = 1
HANDSHAKE_TIMEOUT_ENV = "KGSLIM_ADAPTER_HANDSHAKE_TIMEOUT"
DEFAULT_REQUEST_TIMEOUT = 60.0

ADAPTER_KINDS = (
    "generate",
    "score_similarity",
    "score_lm",
    "extract_entities",
    "score_acceptability",
    "parse_stats",
)


class AdapterError(Exception):
    """Base class for adapter failures."""


class AdapterTimeoutError(AdapterError):
    """The adapter did not answer within the deadline."""


class AdapterProtocolError(AdapterError):
    """The adapter answered with something that is not valid protocol traffic."""


class GeneratorError(AdapterError):
    """The adapter answered ok=false; carries the adapter's error string."""


def _handshake_timeout() -> float:
    raw = os.environ.get(HANDSHAKE_TIMEOUT_ENV)
    if raw is None:
        return 30.0
    try:
        return float(raw)
    except ValueError as exc:
        raise AdapterProtocolError(
            f"{HANDSHAKE_TIMEOUT_ENV} must be a number of seconds, got {raw!r}"
        ) from exc


def _parse_response(line: str) -> dict:
    try:
        response = json.loads(line)
    except json.JSONDecodeError as exc:
        raise AdapterProtocolError(f"adapter sent malformed JSON: {line[:200]!r}") from exc
    if not isinstance(response, dict):
        raise AdapterProtocolError(f"adapter response is not an object: {line[:200]!r}")
    return response


def _check_result(response: dict) -> dict:
    if response.get("ok") is True:
        return response
    if response.get("ok") is False:
        raise GeneratorError(str(response.get("error", "adapter reported failure")))
    raise AdapterProtocolError(f"adapter response lacks an 'ok' field: {response!r}")


class _RequestCounter:
    def __init__(self) -> None:
        self._n = 0

    def next(self) -> str:
        self._n += 1
        return f"r{self._n}"


class StdioAdapterClient:
    """Speak the adapter protocol to a subprocess over line-delimited JSON.

    The server must print one handshake line on startup advertising its
    capabilities. One request is in flight at a time; a lock serializes
    callers so the client is safe to share across worker threads.
    """

    def __init__(self, command: str | list[str], handshake_timeout: float | None = None):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise AdapterProtocolError("adapter command is empty")
        self.command = argv
        self._lock = threading.Lock()
        self._counter = _RequestCounter()
        self._lines: queue.Queue[str | None] = queue.Queue()
        try:
            self._process = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise AdapterProtocolError(f"could not start adapter {argv!r}: {exc}") from exc
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        timeout = handshake_timeout if handshake_timeout is not None else _handshake_timeout()
        handshake = _check_result(self._read_response(timeout))
        if handshake.get("kind") != "handshake":
            raise AdapterProtocolError(f"expected a handshake, got {handshake!r}")
        if handshake.get("v") != PROTOCOL_VERSION:
            raise AdapterProtocolError(f"unsupported protocol version: {handshake.get('v')!r}")
        capabilities = handshake.get("capabilities")
        if not isinstance(capabilities, list):
            raise AdapterProtocolError("handshake lacks a capabilities list")
        self.capabilities = frozenset(str(c) for c in capabilities)

    def _pump(self) -> None:
        assert self._process.stdout is not None
        for line in self._process.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF sentinel

    def _read_response(self, timeout: float) -> dict:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise AdapterTimeoutError(
                f"adapter {self.command!r} sent nothing within {timeout}s"
            ) from None
        if line is None:
            raise AdapterProtocolError(f"adapter {self.command!r} closed its output")
        return _parse_response(line)

    def request(self, kind: str, payload: dict, timeout: float = DEFAULT_REQUEST_TIMEOUT) -> dict:
        """Send one request and wait for its matching response."""
        if kind not in self.capabilities:
            raise AdapterProtocolError(f"adapter does not advertise capability {kind!r}")
        with self._lock:
            request_id = self._counter.next()
            body = {"v": PROTOCOL_VERSION, "kind": kind, "request_id": request_id, **payload}
            if self._process.poll() is not None:
                raise AdapterProtocolError(f"adapter {self.command!r} has exited")
            assert self._process.stdin is not None
            try:
                self._process.stdin.write(json.dumps(body, ensure_ascii=False) + "\n")
                self._process.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise AdapterProtocolError(f"adapter pipe failed: {exc}") from exc
            while True:
                response = self._read_response(timeout)
                if response.get("request_id") == request_id:
                    return _check_result(response)
                # Stale response from an earlier timed-out request: drop it.

    def close(self) -> None:
        if self._process.poll() is None:
            try:
                if self._process.stdin is not None:
                    self._process.stdin.close()
            except OSError:
                pass
            self._process.terminate()
            try:
                self._process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._process.kill()

    def __enter__(self) -> "StdioAdapterClient":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


class HttpAdapterClient:
    """Speak the adapter protocol to an HTTP endpoint, one POST per request."""

    def __init__(self, url: str, handshake_timeout: float | None = None):
        self.url = url
        self._lock = threading.Lock()
        self._counter = _RequestCounter()
        timeout = handshake_timeout if handshake_timeout is not None else _handshake_timeout()
        handshake = self._post({"v": PROTOCOL_VERSION, "kind": "handshake", "request_id": "r0"}, timeout)
        handshake = _check_result(handshake)
        capabilities = handshake.get("capabilities")
        if not isinstance(capabilities, list):
            raise AdapterProtocolError("handshake lacks a capabilities list")
        self.capabilities = frozenset(str(c) for c in capabilities)

    def _post(self, body: dict, timeout: float) -> dict:
        data = json.dumps(body, ensure_ascii=False).encode("utf-8")
        request = urllib.request.Request(
            self.url, data=data, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(request, timeout=timeout) as response:
                return _parse_response(response.read().decode("utf-8"))
        except TimeoutError as exc:
            raise AdapterTimeoutError(f"adapter at {self.url} timed out") from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, TimeoutError):
                raise AdapterTimeoutError(f"adapter at {self.url} timed out") from exc
            raise AdapterProtocolError(f"adapter at {self.url} unreachable: {exc}") from exc

    def request(self, kind: str, payload: dict, timeout: float = DEFAULT_REQUEST_TIMEOUT) -> dict:
        if kind not in self.capabilities:
            raise AdapterProtocolError(f"adapter does not advertise capability {kind!r}")
        with self._lock:
            body = {
                "v": PROTOCOL_VERSION,
                "kind": kind,
                "request_id": self._counter.next(),
                **payload,
            }
            return _check_result(self._post(body, timeout))

    def close(self) -> None:  # symmetry with the stdio client
        return None

    def __enter__(self) -> "HttpAdapterClient":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


AdapterClient = StdioAdapterClient | HttpAdapterClient


def open_adapter(spec: str, handshake_timeout: float | None = None) -> AdapterClient:
    """Build a client from an endpoint spec: `cmd:<argv>` or an http(s) URL."""
    if spec.startswith("cmd:"):
        return StdioAdapterClient(spec[len("cmd:"):], handshake_timeout)
    if spec.startswith(("http://", "https://")):
        return HttpAdapterClient(spec, handshake_timeout)
    raise AdapterProtocolError(f"unrecognized adapter spec: {spec!r}")

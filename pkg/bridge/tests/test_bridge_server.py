import json
import subprocess
import sys
import threading
import urllib.request

import pytest

from kgslim_bridge import BridgeConfig, build_handlers, build_http_server, handle_request

FULL_MODELS = {
    "generate": "dummy:verbalizer",
    "score_lm": "dummy:lm",
    "score_similarity": "dummy:overlap",
    "extract_entities": "dummy:caps",
    "score_acceptability": "dummy:length",
}


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "bridge.json"
    path.write_text(json.dumps({"models": FULL_MODELS}), encoding="utf-8")
    return str(path)


# ------------------------------------------------------------ request dispatch

def test_every_response_echoes_the_request_id() -> None:
    handlers = build_handlers(BridgeConfig(models=FULL_MODELS))
    for request_id in ("r1", "weird-id", 17):
        response = handle_request(
            {"v": 1, "kind": "score_acceptability", "request_id": request_id, "text": "x"},
            handlers,
        )
        assert response["request_id"] == request_id
        assert response["ok"] is True


def test_unknown_kind_and_wrong_version_are_in_band_errors() -> None:
    handlers = build_handlers(BridgeConfig(models=FULL_MODELS))
    unknown = handle_request({"v": 1, "kind": "parse_stats", "request_id": "r1"}, handlers)
    assert unknown == {"request_id": "r1", "ok": False, "error": "unknown kind 'parse_stats'"}
    version = handle_request({"v": 2, "kind": "generate", "request_id": "r2"}, handlers)
    assert version["ok"] is False
    assert "protocol version" in version["error"]
    not_object = handle_request([1, 2, 3], handlers)
    assert not_object["ok"] is False


def test_handler_failures_never_escape(capsys) -> None:
    handlers = build_handlers(BridgeConfig(models=FULL_MODELS))
    response = handle_request(
        {"v": 1, "kind": "generate", "request_id": "r9", "graph": "not a list"}, handlers
    )
    assert response["ok"] is False
    assert "ValueError" in response["error"]


# ------------------------------------------------------------ stdio transport

class StdioBridge:
    def __init__(self, config_path: str):
        self.process = subprocess.Popen(
            [sys.executable, "-m", "kgslim_bridge", "--config", config_path],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            bufsize=1,
        )
        self.handshake = json.loads(self.process.stdout.readline())

    def send_line(self, line: str) -> dict:
        self.process.stdin.write(line + "\n")
        self.process.stdin.flush()
        return json.loads(self.process.stdout.readline())

    def send(self, request: dict) -> dict:
        return self.send_line(json.dumps(request))

    def close(self) -> None:
        self.process.stdin.close()
        self.process.wait(timeout=5)


@pytest.fixture()
def bridge(config_path):
    server = StdioBridge(config_path)
    yield server
    server.close()


def test_stdio_handshake_advertises_all_configured_kinds(bridge) -> None:
    assert bridge.handshake["ok"] is True
    assert bridge.handshake["v"] == 1
    assert bridge.handshake["kind"] == "handshake"
    assert bridge.handshake["capabilities"] == sorted(FULL_MODELS)


def test_stdio_round_trips_every_kind(bridge) -> None:
    answers = [
        bridge.send({"v": 1, "kind": "generate", "request_id": "r1",
                     "graph": [["Mara Hall", "locatedIn", "Dover"]]}),
        bridge.send({"v": 1, "kind": "score_lm", "request_id": "r2", "text": "a b"}),
        bridge.send({"v": 1, "kind": "score_similarity", "request_id": "r3",
                     "text_a": "x", "text_b": "x"}),
        bridge.send({"v": 1, "kind": "extract_entities", "request_id": "r4",
                     "text": "Mara Hall stands."}),
        bridge.send({"v": 1, "kind": "score_acceptability", "request_id": "r5", "text": "ok"}),
    ]
    assert [a["request_id"] for a in answers] == ["r1", "r2", "r3", "r4", "r5"]
    assert all(a["ok"] for a in answers)
    assert answers[0]["text"] == "Mara Hall located in Dover."
    assert answers[1]["log_probs"] == [-1.1, -1.1]
    assert answers[2]["score"] == 1.0
    assert answers[3]["entities"] == ["Mara Hall"]


def test_stdio_survives_malformed_lines_and_keeps_serving(bridge) -> None:
    garbage = bridge.send_line("{this is not json")
    assert garbage["ok"] is False
    assert "malformed JSON" in garbage["error"]
    assert garbage["request_id"] is None
    after = bridge.send({"v": 1, "kind": "score_acceptability", "request_id": "r2", "text": "x"})
    assert after["ok"] is True


def test_stdio_rejects_unknown_kind_in_band(bridge) -> None:
    response = bridge.send({"v": 1, "kind": "foo", "request_id": "r1"})
    assert response == {"request_id": "r1", "ok": False, "error": "unknown kind 'foo'"}


def test_stdio_answers_each_request_exactly_once(bridge) -> None:
    bridge.process.stdin.write(
        json.dumps({"v": 1, "kind": "score_acceptability", "request_id": "a", "text": "x"})
        + "\n"
        + json.dumps({"v": 1, "kind": "score_acceptability", "request_id": "b", "text": "x"})
        + "\n"
    )
    bridge.process.stdin.flush()
    first = json.loads(bridge.process.stdout.readline())
    second = json.loads(bridge.process.stdout.readline())
    assert (first["request_id"], second["request_id"]) == ("a", "b")


def test_cli_reports_config_errors_on_stderr(tmp_path) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"models": {"telepathy": "dummy:x"}}), encoding="utf-8")
    result = subprocess.run(
        [sys.executable, "-m", "kgslim_bridge", "--config", str(bad)],
        capture_output=True,
        text=True,
        timeout=30,
    )
    assert result.returncode == 2
    assert "unknown capability" in result.stderr
    assert result.stdout == ""


def test_cli_fails_fast_when_a_model_cannot_load(tmp_path, monkeypatch) -> None:
    config = tmp_path / "real.json"
    config.write_text(
        json.dumps({"models": {"generate": "no/such-model-anywhere"}}), encoding="utf-8"
    )
    result = subprocess.run(
        [sys.executable, "-m", "kgslim_bridge", "--config", str(config)],
        capture_output=True,
        text=True,
        timeout=120,
        env={"HF_HUB_OFFLINE": "1", "PATH": "/usr/bin:/bin", "HOME": "/root"},
    )
    assert result.returncode == 1
    assert "error:" in result.stderr
    assert result.stdout == ""  # no handshake was promised


# ------------------------------------------------------------ http transport

@pytest.fixture()
def http_url():
    handlers = build_handlers(BridgeConfig(models=FULL_MODELS))
    server = build_http_server(handlers, "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}/"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def post(url: str, body: dict) -> dict:
    data = json.dumps(body).encode("utf-8")
    request = urllib.request.Request(url, data=data, headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(request, timeout=10) as response:
        return json.loads(response.read().decode("utf-8"))


def test_http_handshake_and_generation_match_stdio_bodies(http_url, config_path) -> None:
    handshake = post(http_url, {"v": 1, "kind": "handshake", "request_id": "r0"})
    assert handshake["ok"] is True
    assert handshake["capabilities"] == sorted(FULL_MODELS)
    assert handshake["request_id"] == "r0"

    request = {"v": 1, "kind": "generate", "request_id": "r1",
               "graph": [["Mara Hall", "locatedIn", "Dover"]]}
    over_http = post(http_url, request)
    stdio = StdioBridge(config_path)
    try:
        over_stdio = stdio.send(request)
    finally:
        stdio.close()
    assert over_http == over_stdio


def test_http_reports_unknown_kind_in_band(http_url) -> None:
    response = post(http_url, {"v": 1, "kind": "foo", "request_id": "r1"})
    assert response == {"request_id": "r1", "ok": False, "error": "unknown kind 'foo'"}


def test_http_serves_concurrent_callers(http_url) -> None:
    results: list[dict] = []
    errors: list[Exception] = []

    def call(i: int) -> None:
        try:
            results.append(
                post(http_url, {"v": 1, "kind": "score_similarity",
                                "request_id": f"r{i}", "text_a": "a b", "text_b": "a b"})
            )
        except Exception as exc:  # pragma: no cover - failure reporting
            errors.append(exc)

    threads = [threading.Thread(target=call, args=(i,)) for i in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join(timeout=10)
    assert not errors
    assert len(results) == 8
    assert all(r["ok"] and r["score"] == 1.0 for r in results)

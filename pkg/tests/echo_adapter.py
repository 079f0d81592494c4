#!/usr/bin/env python3
"""Line-delimited JSON adapter used as a test double.

Speaks protocol v1 over stdin/stdout: prints one handshake line on startup,
then answers one response line per request line. Flags switch on the failure
modes the client tests need. Standard library only; deliberately independent
of the package under test.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

ALL_KINDS = [
    "generate",
    "score_similarity",
    "score_lm",
    "extract_entities",
    "score_acceptability",
    "parse_stats",
]


def emit(obj: dict) -> None:
    print(json.dumps(obj), flush=True)


def jaccard(a: str, b: str) -> float:
    sa, sb = set(a.lower().split()), set(b.lower().split())
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / max(1, len(sa | sb))


def answer(kind: str, request: dict) -> dict:
    if kind == "generate":
        triples = request.get("graph", [])
        return {"text": "ECHO: " + " | ".join("/".join(t) for t in triples)}
    if kind == "score_similarity":
        return {"score": jaccard(request.get("text_a", ""), request.get("text_b", ""))}
    if kind == "score_lm":
        tokens = str(request.get("text", "")).split()
        return {"log_probs": [-1.0] * len(tokens)}
    if kind == "extract_entities":
        words = str(request.get("text", "")).split()
        return {"entities": [w.strip(".,") for w in words if w[:1].isupper()]}
    if kind == "score_acceptability":
        return {"score": 0.5}
    if kind == "parse_stats":
        return {"height": 3, "diameter": 4}
    return {}


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--capabilities", default=",".join(ALL_KINDS))
    parser.add_argument("--fail", default="", help="kind to answer with ok=false")
    parser.add_argument("--garbage", action="store_true", help="answer the first request with a non-JSON line")
    parser.add_argument("--hang", action="store_true", help="never answer requests")
    parser.add_argument("--no-handshake", action="store_true")
    parser.add_argument("--bad-version", action="store_true")
    parser.add_argument("--stale", action="store_true", help="prepend a mismatched request_id response")
    parser.add_argument("--exit-after-handshake", action="store_true")
    parser.add_argument("--empty-text", action="store_true", help="generate returns whitespace text")
    args = parser.parse_args()

    capabilities = [c for c in args.capabilities.split(",") if c]
    if not args.no_handshake:
        emit(
            {
                "v": 2 if args.bad_version else 1,
                "kind": "handshake",
                "request_id": "handshake",
                "ok": True,
                "capabilities": capabilities,
            }
        )
    if args.exit_after_handshake:
        return 0

    sent_garbage = False
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        request_id = request.get("request_id")
        kind = request.get("kind")
        if args.hang:
            time.sleep(3600)
        if args.garbage and not sent_garbage:
            sent_garbage = True
            print("this is not json", flush=True)
            continue
        if args.stale:
            emit({"request_id": "bogus-earlier-id", "ok": True, "text": "stale"})
        if request.get("v") != 1:
            emit({"request_id": request_id, "ok": False, "error": "unsupported version"})
            continue
        if args.fail and kind == args.fail:
            emit({"request_id": request_id, "ok": False, "error": f"{kind} exploded"})
            continue
        if kind == "generate" and args.empty_text:
            emit({"request_id": request_id, "ok": True, "text": "   "})
            continue
        emit({"request_id": request_id, "ok": True, **answer(kind, request)})
    return 0


if __name__ == "__main__":
    sys.exit(main())

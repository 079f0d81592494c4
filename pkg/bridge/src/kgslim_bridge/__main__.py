"""Command-line entry: load the configured models and serve the protocol."""
from __future__ import annotations

import argparse
import sys

from .config import BridgeConfig, BridgeConfigError
from .models import BridgeModelError, build_handlers
from .server import build_http_server, serve_stdio


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgslim-bridge",
        description="Serve generation and scoring models over the adapter protocol.",
    )
    parser.add_argument("--config", required=True, help="JSON config file mapping capabilities to models")
    parser.add_argument("--transport", choices=("stdio", "http"), default="stdio")
    parser.add_argument("--host", default="127.0.0.1", help="HTTP bind address")
    parser.add_argument("--port", type=int, default=8080, help="HTTP port (0 picks a free one)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = BridgeConfig.load(args.config)
    except BridgeConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        handlers = build_handlers(config)
    except BridgeModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.transport == "stdio":
        serve_stdio(handlers)
        return 0

    server = build_http_server(handlers, args.host, args.port)
    host, port = server.server_address[:2]
    print(f"serving {', '.join(sorted(handlers))} on http://{host}:{port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Read-only HTTP API over one loaded profile.

The base profile is immutable; every what-if request evaluates a fresh
scenario against it, so concurrent requests need no locking.

Routes (JSON over HTTP/1.1):
    GET  /api/profile   flat rows, call-graph entries, totals
    GET  /api/ids       attribution record list
    POST /api/whatif    scenario document -> what-if result
    POST /api/sweep     {"target": name, "grid": [r...]} -> sweep curve
Errors return {"error": code, "message": text} with a 4xx status.
"""

from __future__ import annotations

import json
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import reports, whatif
from .errors import AccexError, ScenarioError
from .whatif import AttributedProfile

MAX_BODY_BYTES = 4 * 1024 * 1024


def _json_bytes(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()


def make_handler(ap: AttributedProfile, ui_dir: str | None = None):
    """Build a request handler class bound to one attributed profile."""
    profile_doc = reports.profile_payload(ap)
    ids_doc = reports.ids_payload(ap)
    static_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "accex"
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output quiet
            pass

        def _send(self, status: int, body: bytes, content_type="application/json"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, payload: dict):
            self._send(status, _json_bytes(payload))

        def _send_error_json(self, status: int, code: str, message: str):
            self._send_json(status, {"error": code, "message": message})

        def do_OPTIONS(self):
            self._send(204, b"")

        def do_GET(self):
            if self.path == "/api/profile":
                self._send_json(200, profile_doc)
            elif self.path == "/api/ids":
                self._send_json(200, ids_doc)
            elif static_root is not None and not self.path.startswith("/api/"):
                self._send_static()
            else:
                self._send_error_json(404, "NotFound", f"no route {self.path}")

        def _send_static(self):
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if static_root not in target.parents and target != static_root:
                self._send_error_json(404, "NotFound", "outside UI directory")
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                self._send_error_json(404, "NotFound", f"no file {rel}")
                return
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self._send(200, target.read_bytes(), content_type=ctype)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length > MAX_BODY_BYTES:
                raise ScenarioError("request body too large")
            raw = self.rfile.read(length) if length else b""
            try:
                doc = json.loads(raw or b"{}")
            except json.JSONDecodeError as exc:
                raise ScenarioError(f"body is not valid JSON: {exc}") from exc
            if not isinstance(doc, dict):
                raise ScenarioError("body must be a JSON object")
            return doc

        def do_POST(self):
            try:
                doc = self._read_body()
                if self.path == "/api/whatif":
                    scenario = whatif.load_scenario(doc)
                    result = whatif.run_scenario(ap, scenario)
                    self._send_json(200, result.to_json_dict())
                elif self.path == "/api/sweep":
                    target = doc.get("target")
                    if not isinstance(target, str):
                        raise ScenarioError("'target' must be a function name")
                    grid = doc.get("grid")
                    if grid is None:
                        curve = whatif.sweep(ap, target)
                    else:
                        if not isinstance(grid, list) or not all(
                            isinstance(g, (int, float)) for g in grid
                        ):
                            raise ScenarioError("'grid' must be a list of numbers")
                        curve = whatif.sweep(ap, target, grid)
                    self._send_json(200, curve.to_json_dict())
                else:
                    self._send_error_json(404, "NotFound", f"no route {self.path}")
            except AccexError as exc:
                self._send_error_json(400, type(exc).__name__, str(exc))

    return Handler


def make_server(
    ap: AttributedProfile, host: str = "127.0.0.1", port: int = 8000,
    ui_dir: str | None = None,
) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), make_handler(ap, ui_dir))

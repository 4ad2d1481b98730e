"""Local JSON game-session API.

Single-user service hosting live games for the browser client and scripted
integration tests.  Sessions are process-local; one logical writer per
session (a per-session lock serializes moves), concurrent reads allowed.

Endpoints (bodies are JSON; errors carry {"error": reason}):

    POST /sessions            {"fen"?: str, "config"?: {...}} -> session info
    GET  /sessions/<id>       full state: fen, mover, forced flag, legal moves
    POST /sessions/<id>/move  {"from": "b4", "to": "b7"} -> applied state
    GET  /sessions/<id>/hint?plies=N  bounded solve from the position
    GET  /sessions/<id>/status        terminal status + move log
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, List, Optional, Tuple
from urllib.parse import parse_qs, urlparse

from .fen import BRANDUBH_FEN, emit_fen, parse_fen
from .rules import (
    GameState,
    IllegalMove,
    Move,
    Owner,
    RuleConfig,
    ThroneAccess,
    KingCaptureMode,
    KingCapturePower,
    capture_or_winning_moves,
    apply_move,
    legal_moves,
    parse_square,
    terminal_status,
)
from .solver import SearchLimits, solve

_CONFIG_FIELDS = {
    "forced_capture": bool,
    "traps": bool,
    "king_protected_on_throne": bool,
    "throne_is_anvil": bool,
    "edge_escape": bool,
}

_ENUM_FIELDS = {
    "throne_access": ThroneAccess,
    "king_capture_mode": KingCaptureMode,
    "king_capture_power": KingCapturePower,
    "first_mover": Owner,
}


def config_from_json(data: Optional[dict]) -> RuleConfig:
    if not data:
        return RuleConfig()
    kwargs = {}
    for key, value in data.items():
        if key in _CONFIG_FIELDS:
            kwargs[key] = bool(value)
        elif key in _ENUM_FIELDS:
            kwargs[key] = _ENUM_FIELDS[key](value)
        else:
            raise ValueError(f"unknown config field {key!r}")
    return RuleConfig(**kwargs)


def config_to_json(config: RuleConfig) -> dict:
    out: dict = {k: getattr(config, k) for k in _CONFIG_FIELDS}
    out.update({k: getattr(config, k).value for k in _ENUM_FIELDS})
    return out


@dataclass
class Session:
    id: str
    initial_fen: str
    state: GameState
    moves: List[str] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def state_json(self) -> dict:
        forced = capture_or_winning_moves(self.state)
        legal = legal_moves(self.state)
        term = terminal_status(self.state)
        return {
            "session": self.id,
            "fen": emit_fen(self.state),
            "mover": self.state.to_move.value,
            "forced": bool(self.state.config.forced_capture and forced),
            "legal_moves": [
                {"from": m.src.name, "to": m.dst.name} for m in legal
            ],
            "terminal": term.value if term else None,
            "moves_played": list(self.moves),
            "config": config_to_json(self.state.config),
        }


class SessionStore:
    """Thread-safe session registry; the engine API the handlers call."""

    def __init__(self) -> None:
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, fen: Optional[str], config: Optional[dict]) -> Session:
        cfg = config_from_json(config)
        state = parse_fen(fen or BRANDUBH_FEN, config=cfg)
        sid = uuid.uuid4().hex[:12]
        session = Session(id=sid, initial_fen=emit_fen(state), state=state)
        with self._lock:
            self._sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise KeyError(sid)
        return session

    def play(self, sid: str, src: str, dst: str) -> Tuple[Session, dict]:
        session = self.get(sid)
        with session.lock:
            move = Move(parse_square(src), parse_square(dst))
            state, result = apply_move(session.state, move)
            session.state = state
            session.moves.append(move.name)
            return session, {
                "captures": sorted(s.name for s in result.captures),
                "terminal": result.terminal.value if result.terminal else None,
            }

    def hint(self, sid: str, plies: int) -> dict:
        session = self.get(sid)
        with session.lock:
            outcome = solve(session.state, SearchLimits(max_plies=plies))
        return {
            "verdict": outcome.verdict.value,
            "plies": outcome.plies,
            "line": [m.name for m in outcome.line],
            "move": outcome.line[0].name if outcome.line else None,
        }


def make_handler(store: SessionStore):
    class Handler(BaseHTTPRequestHandler):
        server_version = "fctafl/0.1"

        def log_message(self, fmt, *args):  # silence per-request stderr noise
            pass

        def _send(self, code: int, payload: dict) -> None:
            body = json.dumps(payload).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            try:
                return json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError:
                raise ValueError("request body is not valid JSON") from None

        def do_OPTIONS(self):  # CORS preflight for the browser client
            self._send(204, {})

        def do_POST(self):
            try:
                parts = urlparse(self.path).path.strip("/").split("/")
                if parts == ["sessions"]:
                    data = self._body()
                    session = store.create(data.get("fen"), data.get("config"))
                    self._send(201, session.state_json())
                elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "move":
                    data = self._body()
                    try:
                        session, result = store.play(
                            parts[1], data["from"], data["to"]
                        )
                    except IllegalMove as exc:
                        self._send(409, {"error": exc.reason, "detail": str(exc)})
                        return
                    payload = session.state_json()
                    payload["result"] = result
                    self._send(200, payload)
                else:
                    self._send(404, {"error": "not-found"})
            except KeyError as exc:
                self._send(404, {"error": "unknown-session", "detail": str(exc)})
            except (ValueError, TypeError) as exc:
                self._send(400, {"error": "bad-request", "detail": str(exc)})

        def do_GET(self):
            try:
                url = urlparse(self.path)
                parts = url.path.strip("/").split("/")
                if len(parts) == 2 and parts[0] == "sessions":
                    self._send(200, store.get(parts[1]).state_json())
                elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "hint":
                    query = parse_qs(url.query)
                    plies = int(query.get("plies", ["4"])[0])
                    self._send(200, store.hint(parts[1], plies))
                elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "status":
                    session = store.get(parts[1])
                    term = terminal_status(session.state)
                    self._send(
                        200,
                        {
                            "terminal": term.value if term else None,
                            "moves_played": list(session.moves),
                            "initial_fen": session.initial_fen,
                        },
                    )
                elif parts == ["health"]:
                    self._send(200, {"ok": True})
                else:
                    self._send(404, {"error": "not-found"})
            except KeyError as exc:
                self._send(404, {"error": "unknown-session", "detail": str(exc)})
            except (ValueError, TypeError) as exc:
                self._send(400, {"error": "bad-request", "detail": str(exc)})

    return Handler


def serve_api(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Build the HTTP server (call .serve_forever() to run)."""
    store = SessionStore()
    server = ThreadingHTTPServer((host, port), make_handler(store))
    server.store = store  # handy for tests
    return server

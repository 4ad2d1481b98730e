"""Command-line entry points.

Subcommands: fen, moves, play, solve, perft, gadget, compile, verify, serve.
Human-readable tables by default; ``--json`` switches to machine output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from .circuits import parse_circuit
from .compiler import (
    InterferenceError,
    check_interference,
    compile_circuit,
    emit_manifest,
    simulate_strategy,
)
from .fen import BRANDUBH_FEN, emit_fen, parse_fen, render_board
from .rules import (
    IllegalMove,
    Move,
    capture_or_winning_moves,
    apply_move,
    legal_moves,
    parse_square,
    terminal_status,
)
from .solver import NoProvenWin, SearchLimits, perft, solve
from .traces import all_traces, catalog, verify_trace

DEFAULT_PORT = int(os.environ.get("FCTAFL_PORT", "8024"))


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _load_state(args):
    return parse_fen(args.fen)


def cmd_fen(args) -> int:
    state = _load_state(args)
    payload = {"fen": emit_fen(state), "mover": state.to_move.value}
    _emit(args, payload, render_board(state) + "\n" + emit_fen(state))
    return 0


def cmd_moves(args) -> int:
    state = _load_state(args)
    moves = legal_moves(state)
    forced = capture_or_winning_moves(state)
    payload = {
        "forced": bool(state.config.forced_capture and forced),
        "moves": [m.name for m in moves],
    }
    human = f"{len(moves)} moves" + (" (forced)" if payload["forced"] else "")
    if moves:
        human += ": " + " ".join(m.name for m in moves)
    _emit(args, payload, human)
    return 0


def cmd_play(args) -> int:
    state = _load_state(args)
    for text in args.moves:
        src, dst = text.split("-")
        move = Move(parse_square(src), parse_square(dst))
        try:
            state, result = apply_move(state, move)
        except IllegalMove as exc:
            _emit(args, {"error": exc.reason, "move": text}, f"{text}: {exc.reason}")
            return 1
    term = terminal_status(state)
    payload = {
        "fen": emit_fen(state),
        "terminal": term.value if term else None,
    }
    _emit(args, payload, render_board(state) + "\n" + emit_fen(state))
    return 0


def cmd_solve(args) -> int:
    state = _load_state(args)
    t0 = time.time()
    outcome = solve(state, SearchLimits(max_plies=args.max_plies))
    payload = {
        "verdict": outcome.verdict.value,
        "plies": outcome.plies,
        "line": [m.name for m in outcome.line],
        "seconds": round(time.time() - t0, 3),
    }
    human = f"{outcome.verdict.value}"
    if outcome.plies is not None:
        human += f" in {outcome.plies} plies"
    if outcome.line:
        human += ": " + " ".join(m.name for m in outcome.line)
    _emit(args, payload, human)
    return 0


def cmd_perft(args) -> int:
    state = _load_state(args)
    counts = [perft(state, d) for d in range(args.depth + 1)]
    payload = {"counts": counts}
    _emit(args, payload, "\n".join(f"depth {d}: {n}" for d, n in enumerate(counts)))
    return 0


def cmd_gadget(args) -> int:
    cat = catalog()
    if args.action == "list":
        payload = {
            "templates": sorted(cat["templates"]),
            "template_traces": sorted(cat["template_traces"]),
            "composite_traces": sorted(cat["composite_traces"]),
        }
        human = (
            "templates: " + " ".join(payload["templates"]) + "\n"
            "template traces: " + " ".join(payload["template_traces"]) + "\n"
            "composite traces: " + " ".join(payload["composite_traces"])
        )
        _emit(args, payload, human)
        return 0
    # verify
    if args.all:
        traces = all_traces()
    else:
        by_name = {t.name: t for t in all_traces()}
        missing = [n for n in args.names if n not in by_name]
        if missing:
            _emit(args, {"error": f"unknown traces {missing}"}, f"unknown traces: {missing}")
            return 2
        traces = [by_name[n] for n in args.names]
    reports = [verify_trace(t) for t in traces]
    passed = sum(1 for r in reports if r.passed)
    payload = {
        "passed": passed,
        "total": len(reports),
        "failures": [r.name for r in reports if not r.passed],
    }
    lines = [r.summary() for r in reports] + [f"{passed}/{len(reports)} traces pass"]
    _emit(args, payload, "\n".join(lines))
    return 0 if passed == len(reports) else 1


def cmd_compile(args) -> int:
    text = sys.stdin.read() if args.circuit == "-" else open(args.circuit).read()
    graph = parse_circuit(text)
    try:
        state, placement = compile_circuit(graph, spacing=args.spacing)
    except InterferenceError as exc:
        _emit(
            args,
            {"error": "interference", "violations": [str(v) for v in exc.report.violations]},
            exc.report.summary(),
        )
        return 1
    manifest = emit_manifest(placement)
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(manifest)
    payload = {"fen": emit_fen(state), "manifest": manifest}
    human = emit_fen(state) + ("\n" + manifest if not args.manifest else "")
    _emit(args, payload, human)
    if args.simulate is not None:
        picks = [p for p in args.simulate.split(",") if p]
        report = simulate_strategy(state, placement, graph, picks)
        _emit(
            args,
            {"simulation": report.summary(), "plies": len(report.plies)},
            "simulation: " + report.summary(),
        )
    return 0


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.circuit == "-" else open(args.circuit).read()
    graph = parse_circuit(text)
    try:
        state, placement = compile_circuit(graph, spacing=args.spacing)
    except InterferenceError as exc:
        _emit(
            args,
            {"clean": False, "violations": [str(v) for v in exc.report.violations]},
            exc.report.summary(),
        )
        return 1
    report = check_interference(state, placement)
    payload = {"clean": report.clean, "violations": [str(v) for v in report.violations]}
    _emit(args, payload, report.summary())
    return 0 if report.clean else 1


def cmd_serve(args) -> int:
    from .server import serve_api

    server = serve_api(args.port, host=args.host)
    print(f"serving on http://{args.host}:{args.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(
        prog="fctafl",
        description="Forced-capture tafl engine: rules, solver, gadget lab, compiler.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("fen", help="parse and render a position")
    p.add_argument("--fen", default=BRANDUBH_FEN)
    p.set_defaults(func=cmd_fen)

    p = add_parser("moves", help="list legal moves (forced filter applied)")
    p.add_argument("--fen", default=BRANDUBH_FEN)
    p.set_defaults(func=cmd_moves)

    p = add_parser("play", help="apply moves to a position")
    p.add_argument("--fen", default=BRANDUBH_FEN)
    p.add_argument("moves", nargs="+", metavar="MOVE", help="moves like b4-b7")
    p.set_defaults(func=cmd_play)

    p = add_parser("solve", help="bounded exhaustive solve")
    p.add_argument("--fen", default=BRANDUBH_FEN)
    p.add_argument("--max-plies", type=int, default=5)
    p.set_defaults(func=cmd_solve)

    p = add_parser("perft", help="forced-filtered leaf counts")
    p.add_argument("--fen", default=BRANDUBH_FEN)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_perft)

    p = add_parser("gadget", help="gadget catalog and trace verification")
    p.add_argument("action", choices=["list", "verify"])
    p.add_argument("names", nargs="*", help="trace names (verify)")
    p.add_argument("--all", action="store_true", help="verify every trace")
    p.set_defaults(func=cmd_gadget)

    p = add_parser("compile", help="compile a circuit file to a board")
    p.add_argument("circuit", help="circuit file path, or - for stdin")
    p.add_argument("--spacing", type=int, default=2)
    p.add_argument("--manifest", help="write the placement manifest here")
    p.add_argument(
        "--simulate",
        metavar="PICKS",
        help="comma-separated variable picks to replay after compiling",
    )
    p.set_defaults(func=cmd_compile)

    p = add_parser("verify", help="re-run the interference check on a circuit")
    p.add_argument("circuit", help="circuit file path, or - for stdin")
    p.add_argument("--spacing", type=int, default=2)
    p.set_defaults(func=cmd_verify)

    p = add_parser("serve", help="run the local JSON game API")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

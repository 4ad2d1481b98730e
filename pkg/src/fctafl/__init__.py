"""Forced-capture tafl: rules engine, bounded solver, gadget lab,
constraint-logic board compiler, and a local game API."""

from .fen import BRANDUBH_FEN, brandubh_start, emit_fen, parse_fen, render_board
from .rules import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    IllegalMove,
    KING,
    Kind,
    KingCaptureMode,
    KingCapturePower,
    Move,
    MoveResult,
    Owner,
    Piece,
    RuleConfig,
    Square,
    Terminal,
    ThroneAccess,
    apply_move,
    capture_or_winning_moves,
    captures_of,
    legal_moves,
    legal_moves_unfiltered,
    mv,
    parse_square,
    sq,
    terminal_status,
)
from .solver import NoProvenWin, Outcome, SearchLimits, Verdict, best_line, perft, solve

__version__ = "0.1.0"

__all__ = [
    "ATTACKER",
    "BRANDUBH_FEN",
    "BoardGeometry",
    "DEFENDER",
    "GameState",
    "IllegalMove",
    "KING",
    "Kind",
    "KingCaptureMode",
    "KingCapturePower",
    "Move",
    "MoveResult",
    "NoProvenWin",
    "Outcome",
    "Owner",
    "Piece",
    "RuleConfig",
    "SearchLimits",
    "Square",
    "Terminal",
    "ThroneAccess",
    "Verdict",
    "apply_move",
    "best_line",
    "brandubh_start",
    "capture_or_winning_moves",
    "captures_of",
    "emit_fen",
    "legal_moves",
    "legal_moves_unfiltered",
    "mv",
    "parse_fen",
    "parse_square",
    "perft",
    "render_board",
    "solve",
    "sq",
    "terminal_status",
]

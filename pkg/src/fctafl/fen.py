"""Bit-exact position serialization (tafl-FEN dialect).

Layout: ``<W>x<H> <rows> <mover> <throne> <havens> [flags]``.  Rows run top
to bottom, '/'-separated, with decimal empty-run counts (multi-digit fine),
'p' attacker soldier, 'P' defender soldier, 'K' King.  Short FENs (fewer
rows than H) pad the remaining bottom rows empty, matching figure practice.
"""

from __future__ import annotations

from typing import List, Optional

from .rules import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    KING,
    Kind,
    Owner,
    Piece,
    RuleConfig,
    Square,
    col_name,
    parse_square,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


_FLAGS = ("fragment",)


def parse_fen(text: str, config: Optional[RuleConfig] = None) -> GameState:
    """Parse one FEN line into a GameState (fresh history)."""
    parts = text.strip().split()
    if len(parts) < 5:
        raise ParseError(f"expected at least 5 fields, got {len(parts)}")
    size, rows_text, mover_text, throne_text, havens_text = parts[:5]
    flags = parts[5:]

    try:
        w_text, h_text = size.lower().split("x")
        width, height = int(w_text), int(h_text)
    except ValueError:
        raise ParseError(f"bad size field {size!r}") from None
    if width < 1 or height < 1:
        raise ParseError(f"bad board size {size!r}")

    rows = rows_text.split("/")
    if len(rows) > height:
        raise ParseError(f"{len(rows)} rows on a {height}-row board")

    pieces = {}
    king_seen = False
    for i, row_text in enumerate(rows):
        row = height - 1 - i  # rows serialize top-down
        col = 0
        j = 0
        while j < len(row_text):
            ch = row_text[j]
            if ch.isdigit():
                k = j
                while k < len(row_text) and row_text[k].isdigit():
                    k += 1
                col += int(row_text[j:k])
                j = k
                continue
            if ch == "p":
                piece = ATTACKER
            elif ch == "P":
                piece = DEFENDER
            elif ch == "K":
                if king_seen:
                    raise ParseError("two Kings", i + 1, j)
                king_seen = True
                piece = KING
            else:
                raise ParseError(f"bad symbol {ch!r}", i + 1, j)
            if col >= width:
                raise ParseError(f"row expands past {width} squares", i + 1, j)
            pieces[Square(col, row)] = piece
            col += 1
            j += 1
        if col != width:
            raise ParseError(
                f"row expands to {col} squares, expected {width}", i + 1, len(row_text)
            )

    if mover_text == "a":
        mover = Owner.ATTACKER
    elif mover_text == "d":
        mover = Owner.DEFENDER
    else:
        raise ParseError(f"bad mover {mover_text!r}")

    throne = None
    if throne_text != "-":
        try:
            throne = parse_square(throne_text)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    havens = frozenset()
    if havens_text != "-":
        try:
            havens = frozenset(parse_square(h) for h in havens_text.split(","))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    fragment = False
    cfg = config or RuleConfig()
    for flag in flags:
        if flag in _FLAGS:
            fragment = True
        else:
            raise ParseError(f"unknown flag {flag!r}")

    try:
        geometry = BoardGeometry(width, height, throne=throne, havens=havens)
        for s, p in pieces.items():
            if s in havens and p.kind is not Kind.KING:
                raise ParseError(f"soldier on haven {s.name}")
        return GameState(
            geometry=geometry,
            pieces=pieces,
            to_move=mover,
            config=cfg,
            fragment_mode=fragment,
        )
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def emit_fen(state: GameState) -> str:
    """Canonical form: maximal runs, full row count; parse∘emit = identity."""
    geo = state.geometry
    rows: List[str] = []
    for row in range(geo.height - 1, -1, -1):
        run = 0
        text = ""
        for col in range(geo.width):
            piece = state.pieces.get(Square(col, row))
            if piece is None:
                run += 1
                continue
            if run:
                text += str(run)
                run = 0
            text += piece.symbol
        if run:
            text += str(run)
        rows.append(text)
    mover = "a" if state.to_move is Owner.ATTACKER else "d"
    throne = geo.throne.name if geo.throne else "-"
    havens = ",".join(s.name for s in sorted(geo.havens)) if geo.havens else "-"
    line = f"{geo.width}x{geo.height} {'/'.join(rows)} {mover} {throne} {havens}"
    if state.fragment_mode:
        line += " fragment"
    return line


def render_board(state: GameState) -> str:
    """ASCII board, row 1 at the bottom, for CLI output."""
    geo = state.geometry
    lines = []
    for row in range(geo.height - 1, -1, -1):
        cells = []
        for col in range(geo.width):
            s = Square(col, row)
            piece = state.pieces.get(s)
            if piece is not None:
                cells.append(piece.symbol)
            elif s in geo.havens:
                cells.append("#")
            elif geo.throne is not None and s == geo.throne:
                cells.append("+")
            else:
                cells.append(".")
        lines.append(f"{row + 1:>3} " + " ".join(cells))
    lines.append("    " + " ".join(col_name(c) for c in range(geo.width)))
    return "\n".join(lines)


BRANDUBH_FEN = "7x7 3p3/3p3/3P3/ppPKPpp/3P3/3p3/3p3 a d4 a1,a7,g1,g7"


def brandubh_start(config: Optional[RuleConfig] = None) -> GameState:
    """The 7x7 starting position used throughout the figures."""
    return parse_fen(BRANDUBH_FEN, config=config)

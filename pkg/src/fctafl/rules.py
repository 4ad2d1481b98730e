"""Board geometry, move generation, captures and terminal detection.

Implements the forced-capture tafl ruleset with its variant matrix:
custodial (hammer/anvil) captures, optional trap captures, throne access
levels, king capture modes and the forced-capture move filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple


class Owner(Enum):
    ATTACKER = "attacker"
    DEFENDER = "defender"

    @property
    def opponent(self) -> "Owner":
        return Owner.DEFENDER if self is Owner.ATTACKER else Owner.ATTACKER


class Kind(Enum):
    SOLDIER = "soldier"
    KING = "king"


class KingCapturePower(Enum):
    """How much the King may participate in captures."""

    FULL = "full"
    NO_HAMMER = "no_hammer"
    NO_PARTICIPATION = "no_participation"


class ThroneAccess(Enum):
    KING_ONLY = "king_only"
    KING_THROUGH_ONCE_ONLY = "king_through_once_only"
    DEFENDERS_THROUGH_ONLY = "defenders_through_only"
    ALL_THROUGH_ONLY = "all_through_only"
    DEFENDERS_THROUGH_AND_STOP = "defenders_through_and_stop"
    ALL_NORMAL = "all_normal"
    KING_THROUGH_NOT_BACK = "king_through_not_back"


class KingCaptureMode(Enum):
    HAMMER_ANVIL = "hammer_anvil"
    TRAP_ONLY = "trap_only"
    TRAP_NO_EDGES = "trap_no_edges"


class Terminal(Enum):
    DEFENDER_WIN = "defender_win"
    ATTACKER_WIN = "attacker_win"


DIRECTIONS: Tuple[Tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))

_COL_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True, order=True)
class Square:
    """0-based board coordinate; rendered as letter+number with row 1 at bottom."""

    col: int
    row: int

    def __hash__(self) -> int:  # hot path: board dicts are keyed by Square
        return self.col * 1024 + self.row

    @property
    def name(self) -> str:
        return col_name(self.col) + str(self.row + 1)

    def __repr__(self) -> str:  # keeps test diffs readable
        return self.name

    def shifted(self, dc: int, dr: int) -> "Square":
        return Square(self.col + dc, self.row + dr)


def col_name(col: int) -> str:
    """Spreadsheet-style column name: a..z, aa, ab, ..."""
    if col < 0:
        raise ValueError(f"negative column {col}")
    name = ""
    col += 1
    while col:
        col, rem = divmod(col - 1, 26)
        name = _COL_LETTERS[rem] + name
    return name


def parse_square(name: str) -> Square:
    """Parse a square name like 'c4' or 'aa12'."""
    i = 0
    while i < len(name) and name[i].isalpha():
        i += 1
    letters, digits = name[:i], name[i:]
    if not letters or not digits or not digits.isdigit():
        raise ValueError(f"bad square name {name!r}")
    col = 0
    for ch in letters.lower():
        if ch not in _COL_LETTERS:
            raise ValueError(f"bad square name {name!r}")
        col = col * 26 + _COL_LETTERS.index(ch) + 1
    return Square(col - 1, int(digits) - 1)


def sq(name: str) -> Square:
    return parse_square(name)


@dataclass(frozen=True)
class Piece:
    owner: Owner
    kind: Kind = Kind.SOLDIER

    @property
    def symbol(self) -> str:
        if self.kind is Kind.KING:
            return "K"
        return "p" if self.owner is Owner.ATTACKER else "P"


ATTACKER = Piece(Owner.ATTACKER)
DEFENDER = Piece(Owner.DEFENDER)
KING = Piece(Owner.DEFENDER, Kind.KING)


@dataclass(frozen=True)
class BoardGeometry:
    width: int
    height: int
    throne: Optional[Square] = None
    havens: FrozenSet[Square] = frozenset()

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("board must be at least 1x1")
        for s in list(self.havens) + ([self.throne] if self.throne else []):
            if not self.contains(s):
                raise ValueError(f"{s} outside {self.width}x{self.height} board")
        if self.throne is not None and self.throne in self.havens:
            raise ValueError("throne cannot be a haven")

    def contains(self, s: Square) -> bool:
        return 0 <= s.col < self.width and 0 <= s.row < self.height

    def is_edge(self, s: Square) -> bool:
        return (
            s.col in (0, self.width - 1) or s.row in (0, self.height - 1)
        )

    @staticmethod
    def standard(side: int) -> "BoardGeometry":
        """Standard (2n+1)x(2n+1) board, n a positive odd integer: centre
        throne, corner havens."""
        n = (side - 1) // 2
        if side < 3 or side != 2 * n + 1 or n % 2 != 1:
            raise ValueError(f"standard board side must be 2n+1 with n odd, got {side}")
        c = side - 1
        return BoardGeometry(
            side,
            side,
            throne=Square(n, n),
            havens=frozenset({Square(0, 0), Square(0, c), Square(c, 0), Square(c, c)}),
        )

    @staticmethod
    def fragment(width: int, height: int,
                 havens: Iterable[Square] = ()) -> "BoardGeometry":
        """Rectangular gadget-fragment board: no throne, optional havens."""
        return BoardGeometry(width, height, throne=None, havens=frozenset(havens))


@dataclass(frozen=True)
class RuleConfig:
    """The variant matrix.  Defaults are the playability configuration:
    forced captures, throne not an anvil, king-only throne access, attacker
    first, king capturable anywhere by hammer and anvil."""

    forced_capture: bool = True
    traps: bool = False
    king_protected_on_throne: bool = False
    throne_is_anvil: bool = False
    king_capture_power: KingCapturePower = KingCapturePower.FULL
    throne_access: ThroneAccess = ThroneAccess.KING_ONLY
    king_capture_mode: KingCaptureMode = KingCaptureMode.HAMMER_ANVIL
    edge_escape: bool = False
    first_mover: Owner = Owner.ATTACKER


@dataclass(frozen=True)
class Move:
    src: Square
    dst: Square

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError("null move")
        if self.src.col != self.dst.col and self.src.row != self.dst.row:
            raise ValueError(f"move {self} is not orthogonal")

    @property
    def name(self) -> str:
        return f"{self.src.name}-{self.dst.name}"

    def __repr__(self) -> str:
        return self.name

    def sort_key(self) -> Tuple[int, int, int, int]:
        # canonical order: columns left to right, rows top-down (the FEN
        # serialization order); all tie-breaks derive from this
        return (self.src.col, -self.src.row, self.dst.col, -self.dst.row)


def mv(text: str) -> Move:
    a, b = text.split("-")
    return Move(parse_square(a), parse_square(b))


@dataclass(frozen=True)
class MoveResult:
    captures: FrozenSet[Square]
    terminal: Optional[Terminal]


class IllegalMove(Exception):
    """Raised by apply_move; .reason is a stable machine-readable code."""

    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# Zobrist hashing (deterministic, sized on demand)

_ZOBRIST_CACHE: Dict[Tuple[int, int], Tuple[List[List[int]], List[int]]] = {}

_PIECE_INDEX = {
    (Owner.ATTACKER, Kind.SOLDIER): 0,
    (Owner.DEFENDER, Kind.SOLDIER): 1,
    (Owner.DEFENDER, Kind.KING): 2,
    (Owner.ATTACKER, Kind.KING): 3,  # never legal, kept for safety
}


def _zobrist(width: int, height: int) -> Tuple[List[List[int]], List[int]]:
    key = (width, height)
    table = _ZOBRIST_CACHE.get(key)
    if table is None:
        import random

        rng = random.Random(0x7AF1 ^ (width << 16) ^ height)
        squares = [
            [rng.getrandbits(64) for _ in range(4)] for _ in range(width * height)
        ]
        movers = [rng.getrandbits(64), rng.getrandbits(64)]
        table = (squares, movers)
        _ZOBRIST_CACHE[key] = table
    return table


@dataclass(frozen=True)
class GameState:
    """Immutable position: geometry, placement, mover, config, history."""

    geometry: BoardGeometry
    pieces: Dict[Square, Piece]
    to_move: Owner
    config: RuleConfig = field(default_factory=RuleConfig)
    history: Tuple[int, ...] = ()
    fragment_mode: bool = False
    king_left_throne: bool = False

    def __post_init__(self) -> None:
        kings = [s for s, p in self.pieces.items() if p.kind is Kind.KING]
        if len(kings) > 1:
            raise ValueError("at most one King")
        for s, p in self.pieces.items():
            if not self.geometry.contains(s):
                raise ValueError(f"piece outside board at {s}")
            if p.kind is Kind.KING and p.owner is not Owner.DEFENDER:
                raise ValueError("the King's owner is the Defender")
            if s in self.geometry.havens and p.kind is not Kind.KING:
                raise ValueError(f"soldier on haven {s}")

    # -- basic queries ------------------------------------------------------

    def piece_at(self, s: Square) -> Optional[Piece]:
        return self.pieces.get(s)

    def king_square(self) -> Optional[Square]:
        for s, p in self.pieces.items():
            if p.kind is Kind.KING:
                return s
        return None

    def count(self, owner: Owner) -> int:
        return sum(1 for p in self.pieces.values() if p.owner is owner)

    def position_hash(self) -> int:
        squares, movers = _zobrist(self.geometry.width, self.geometry.height)
        h = movers[0 if self.to_move is Owner.ATTACKER else 1]
        w = self.geometry.width
        for s, p in self.pieces.items():
            h ^= squares[s.row * w + s.col][_PIECE_INDEX[(p.owner, p.kind)]]
        return h

    def position_key(self) -> Tuple:
        """Exact repetition key (guards zobrist collisions)."""
        return (
            self.to_move,
            tuple(sorted((s.col, s.row, p.owner, p.kind) for s, p in self.pieces.items())),
        )

    def with_to_move(self, owner: Owner) -> "GameState":
        return replace(self, to_move=owner)


# ---------------------------------------------------------------------------
# Movement

def _may_land(state: GameState, piece: Piece, s: Square) -> bool:
    geo = state.geometry
    if s in geo.havens:
        return piece.kind is Kind.KING
    if geo.throne is not None and s == geo.throne:
        acc = state.config.throne_access
        if acc is ThroneAccess.ALL_NORMAL:
            return True
        if acc is ThroneAccess.DEFENDERS_THROUGH_AND_STOP:
            return piece.owner is Owner.DEFENDER
        if acc is ThroneAccess.KING_ONLY:
            return piece.kind is Kind.KING
        if acc is ThroneAccess.KING_THROUGH_NOT_BACK:
            return piece.kind is Kind.KING and not state.king_left_throne
        return False  # through-only levels: nobody stops on it
    return True


def _may_transit(state: GameState, piece: Piece, s: Square) -> bool:
    geo = state.geometry
    if s in geo.havens:
        # corner havens can never be mid-path; non-corner havens stay king-only
        return piece.kind is Kind.KING
    if geo.throne is not None and s == geo.throne:
        acc = state.config.throne_access
        if acc is ThroneAccess.ALL_NORMAL or acc is ThroneAccess.ALL_THROUGH_ONLY:
            return True
        if acc in (
            ThroneAccess.DEFENDERS_THROUGH_ONLY,
            ThroneAccess.DEFENDERS_THROUGH_AND_STOP,
        ):
            return piece.owner is Owner.DEFENDER
        return piece.kind is Kind.KING  # king-only flavours all allow transit
    return True


def _piece_moves(state: GameState, src: Square, piece: Piece) -> Iterable[Move]:
    geo = state.geometry
    for dc, dr in DIRECTIONS:
        cur = src
        while True:
            cur = cur.shifted(dc, dr)
            if not geo.contains(cur) or cur in state.pieces:
                break
            if _may_land(state, piece, cur):
                yield Move(src, cur)
            if not _may_transit(state, piece, cur):
                break


def legal_moves_unfiltered(state: GameState) -> List[Move]:
    """All rook-style moves for the side to move, ignoring the forced filter."""
    moves: List[Move] = []
    for src in state.pieces:
        piece = state.pieces[src]
        if piece.owner is state.to_move:
            moves.extend(_piece_moves(state, src, piece))
    moves.sort(key=Move.sort_key)
    return moves


def _protected_by_throne_king(state: GameState, target: Square) -> bool:
    if not state.config.king_protected_on_throne:
        return False
    geo = state.geometry
    if geo.throne is None:
        return False
    king = state.pieces.get(geo.throne)
    if king is None or king.kind is not Kind.KING:
        return False
    piece = state.pieces.get(target)
    return (
        piece is not None
        and piece.owner is Owner.DEFENDER
        and abs(target.col - geo.throne.col) + abs(target.row - geo.throne.row) == 1
    )


def _hostile_for_trap(state: GameState, victim_owner: Owner, s: Square) -> bool:
    geo = state.geometry
    if not geo.contains(s):
        return True  # board edge
    occ = state.pieces.get(s)
    if occ is not None:
        return occ.owner is not victim_owner
    return s in geo.havens or (geo.throne is not None and s == geo.throne)


def _trapped(state: GameState, victim: Square, include_edges: bool) -> bool:
    owner = state.pieces[victim].owner
    for dc, dr in DIRECTIONS:
        n = victim.shifted(dc, dr)
        if not state.geometry.contains(n):
            if include_edges:
                continue
            return False
        if not _hostile_for_trap(state, owner, n):
            return False
    return True


def _make_state(
    base: GameState,
    pieces: Dict[Square, Piece],
    to_move: Owner,
    history: Tuple[int, ...],
    king_left_throne: bool,
) -> GameState:
    """Successor constructor for generated moves; skips re-validation."""
    st = object.__new__(GameState)
    object.__setattr__(st, "geometry", base.geometry)
    object.__setattr__(st, "pieces", pieces)
    object.__setattr__(st, "to_move", to_move)
    object.__setattr__(st, "config", base.config)
    object.__setattr__(st, "history", history)
    object.__setattr__(st, "fragment_mode", base.fragment_mode)
    object.__setattr__(st, "king_left_throne", king_left_throne)
    return st


def _captures_after(state: GameState, move: Move, piece: Piece) -> FrozenSet[Square]:
    """Captures produced by *move*, evaluated on the pre-move board."""
    mover = piece.owner
    cfg = state.config
    geo = state.geometry
    pieces = state.pieces
    src, dst = move.src, move.dst

    def occ(s: Square) -> Optional[Piece]:
        if s == dst:
            return piece
        if s == src:
            return None
        return pieces.get(s)

    king_on_throne = False
    if cfg.king_protected_on_throne and geo.throne is not None:
        holder = occ(geo.throne)
        king_on_throne = holder is not None and holder.kind is Kind.KING

    captured: set = set()
    if not (piece.kind is Kind.KING and cfg.king_capture_power is not KingCapturePower.FULL):
        for dc, dr in DIRECTIONS:
            t = dst.shifted(dc, dr)
            victim = occ(t)
            if victim is None or victim.owner is mover:
                continue
            if victim.kind is Kind.KING and cfg.king_capture_mode is not KingCaptureMode.HAMMER_ANVIL:
                continue
            if (
                king_on_throne
                and victim.owner is Owner.DEFENDER
                and victim.kind is not Kind.KING
                and abs(t.col - geo.throne.col) + abs(t.row - geo.throne.row) == 1
            ):
                continue
            a = t.shifted(dc, dr)
            if not geo.contains(a):
                continue
            holder = occ(a)
            if holder is not None:
                is_anvil = holder.owner is mover and not (
                    holder.kind is Kind.KING
                    and cfg.king_capture_power is KingCapturePower.NO_PARTICIPATION
                )
            else:
                is_anvil = a in geo.havens or (
                    cfg.throne_is_anvil and geo.throne is not None and a == geo.throne
                )
            if is_anvil:
                captured.add(t)

    # trap captures run against the mover's opponent, after hammer-anvil removals
    need_king_surround = (
        cfg.king_capture_mode is not KingCaptureMode.HAMMER_ANVIL
        and mover is Owner.ATTACKER
    )
    if cfg.traps or need_king_surround:
        board = dict(pieces)
        del board[src]
        board[dst] = piece
        trap_board = {s: p for s, p in board.items() if s not in captured}
        trap_state = _make_state(state, trap_board, state.to_move, (), state.king_left_throne)
        king_mode = cfg.king_capture_mode
        for s in sorted(trap_board):
            p = trap_board[s]
            if p.owner is mover:
                continue
            if p.kind is Kind.KING:
                if king_mode is KingCaptureMode.HAMMER_ANVIL:
                    if cfg.traps and _trapped(trap_state, s, include_edges=True):
                        captured.add(s)
                else:
                    include_edges = king_mode is KingCaptureMode.TRAP_ONLY
                    if _trapped(trap_state, s, include_edges=include_edges):
                        captured.add(s)
            elif cfg.traps and _trapped(trap_state, s, include_edges=True):
                if not _protected_by_throne_king(trap_state, s):
                    captured.add(s)
    return frozenset(captured)


def captures_of(state: GameState, move: Move) -> FrozenSet[Square]:
    """Squares captured by *move*.  Raises IllegalMove on a malformed move."""
    piece = state.pieces.get(move.src)
    if piece is None or piece.owner is not state.to_move:
        raise IllegalMove("not-your-piece", f"no {state.to_move.value} piece on {move.src}")
    if move not in set(_piece_moves(state, move.src, piece)):
        # distinguish a blocked path from forbidden terrain for the error code
        if move.dst in state.pieces:
            raise IllegalMove("path-blocked", f"{move.dst} is occupied")
        if not _may_land(state, piece, move.dst):
            raise IllegalMove("throne-restricted", f"{piece.symbol} may not stop on {move.dst}")
        raise IllegalMove("path-blocked", f"{move.name} is not an open rook path")
    return _captures_after(state, move, piece)


def _move_ends_game(state: GameState, move: Move, captures: FrozenSet[Square]) -> bool:
    """Immediate end: haven/edge arrival by the King, King capture, or the
    capture of the last attacker piece.  Stalemating the opponent does not
    count."""
    piece = state.pieces[move.src]
    geo = state.geometry
    if piece.kind is Kind.KING:
        if move.dst in geo.havens:
            return True
        if state.config.edge_escape and geo.is_edge(move.dst):
            return True
    for s in captures:
        victim = state.pieces[s]
        if victim.kind is Kind.KING and not state.fragment_mode:
            return True
    if piece.owner is Owner.DEFENDER and captures:
        att_left = sum(
            1
            for s, p in state.pieces.items()
            if p.owner is Owner.ATTACKER and s not in captures
        )
        if att_left == 0 and state.count(Owner.ATTACKER) > 0:
            return True
    return False


def _annotated_moves(state: GameState) -> List[Tuple[Move, FrozenSet[Square], bool]]:
    """(move, captures, ends_game) for every unfiltered move."""
    out = []
    for move in legal_moves_unfiltered(state):
        caps = _captures_after(state, move, state.pieces[move.src])
        out.append((move, caps, _move_ends_game(state, move, caps)))
    return out


def capture_or_winning_moves(state: GameState) -> List[Move]:
    """The forced set C: every legal move that captures or immediately ends
    the game.  Empty when the mover is unforced."""
    return [m for m, caps, ends in _annotated_moves(state) if caps or ends]


def legal_moves(state: GameState) -> List[Move]:
    """Legal moves for the side to move, forced-capture filter applied."""
    annotated = _annotated_moves(state)
    if state.config.forced_capture:
        forced = [m for m, caps, ends in annotated if caps or ends]
        if forced:
            return forced
    return [m for m, _, _ in annotated]


def successors(
    state: GameState,
) -> List[Tuple[Move, FrozenSet[Square], bool, GameState]]:
    """Forced-filtered moves as (move, captures, ends_game, successor).

    The fast path for search: skips per-child re-validation.  An ends_game
    move always wins for its mover (king capture, haven or edge arrival,
    last attacker taken).
    """
    annotated = _annotated_moves(state)
    if state.config.forced_capture:
        forced = [entry for entry in annotated if entry[1] or entry[2]]
        if forced:
            annotated = forced
    hist = state.history + (state.position_hash(),)
    out = []
    for move, caps, ends in annotated:
        piece = state.pieces[move.src]
        board = dict(state.pieces)
        del board[move.src]
        for s in caps:
            del board[s]
        board[move.dst] = piece
        left = state.king_left_throne or (
            piece.kind is Kind.KING
            and state.geometry.throne is not None
            and move.src == state.geometry.throne
        )
        out.append(
            (move, caps, ends, _make_state(state, board, state.to_move.opponent, hist, left))
        )
    return out


def is_forced(state: GameState) -> bool:
    return state.config.forced_capture and bool(capture_or_winning_moves(state))


def _has_any_move(state: GameState, owner: Owner) -> bool:
    probe = state if state.to_move is owner else state.with_to_move(owner)
    slow = []
    for src in probe.pieces:
        piece = probe.pieces[src]
        if piece.owner is not owner:
            continue
        for dc, dr in DIRECTIONS:
            n = src.shifted(dc, dr)
            if probe.geometry.contains(n) and n not in probe.pieces:
                if _may_land(probe, piece, n):
                    return True
                slow.append((src, piece))  # transit-only neighbour: walk fully
                break
    for src, piece in slow:
        for _ in _piece_moves(probe, src, piece):
            return True
    return False


def is_stalemated(state: GameState) -> bool:
    """True when the side to move has no legal move at all."""
    return not _has_any_move(state, state.to_move)


def terminal_status(state: GameState) -> Optional[Terminal]:
    """Win detection; King-absence checks are suppressed in fragment mode."""
    geo = state.geometry
    king = state.king_square()
    if king is not None:
        if king in geo.havens:
            return Terminal.DEFENDER_WIN
        if state.config.edge_escape and geo.is_edge(king):
            return Terminal.DEFENDER_WIN
    elif not state.fragment_mode:
        return Terminal.ATTACKER_WIN
    if state.count(Owner.ATTACKER) == 0:
        return Terminal.DEFENDER_WIN
    if not _has_any_move(state, state.to_move):
        return (
            Terminal.ATTACKER_WIN
            if state.to_move is Owner.DEFENDER
            else Terminal.DEFENDER_WIN
        )
    return None


def apply_move(state: GameState, move: Move) -> Tuple[GameState, MoveResult]:
    """Apply *move*, honouring the forced filter; returns the successor and
    the capture set plus terminal effect."""
    piece = state.pieces.get(move.src)
    if piece is None or piece.owner is not state.to_move:
        raise IllegalMove("not-your-piece", f"no {state.to_move.value} piece on {move.src}")
    caps = captures_of(state, move)
    if state.config.forced_capture and not (caps or _move_ends_game(state, move, caps)):
        if capture_or_winning_moves(state):
            raise IllegalMove(
                "not-forced",
                f"{move.name} ignores an available capture or winning move",
            )
    board = dict(state.pieces)
    del board[move.src]
    for s in caps:
        del board[s]
    board[move.dst] = piece
    left_throne = state.king_left_throne or (
        piece.kind is Kind.KING
        and state.geometry.throne is not None
        and move.src == state.geometry.throne
    )
    nxt = _make_state(
        state,
        board,
        state.to_move.opponent,
        state.history + (state.position_hash(),),
        left_throne,
    )
    return nxt, MoveResult(captures=caps, terminal=terminal_status(nxt))

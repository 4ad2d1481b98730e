"""Independent brute-force oracle for move generation and captures.

Deliberately naive: walks every direction square by square and re-derives
captures from the rule statements, sharing no code path with the engine.
Only covers the default-config rules plus the forced filter (the corpus the
equivalence tests draw from).
"""

from fctafl import GameState, Kind, Move, Owner, Square


def _occupied(state: GameState, col: int, row: int):
    return state.pieces.get(Square(col, row))


def naive_moves(state: GameState):
    """Every rook move for the mover under king-only throne access."""
    geo = state.geometry
    out = []
    for src, piece in state.pieces.items():
        if piece.owner is not state.to_move:
            continue
        is_king = piece.kind is Kind.KING
        for dc, dr in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            col, row = src.col, src.row
            while True:
                col += dc
                row += dr
                if not (0 <= col < geo.width and 0 <= row < geo.height):
                    break
                if _occupied(state, col, row) is not None:
                    break
                square = Square(col, row)
                on_throne = geo.throne is not None and square == geo.throne
                on_haven = square in geo.havens
                if on_haven:
                    if is_king:
                        out.append(Move(src, square))
                    break  # nobody passes through a haven but the King
                if on_throne:
                    if is_king:
                        out.append(Move(src, square))
                        continue  # king may also pass over
                    break  # forbidden terrain for soldiers, even transit
                out.append(Move(src, square))
    out.sort(key=lambda m: (m.src.col, -m.src.row, m.dst.col, -m.dst.row))
    return out


def naive_captures(state: GameState, move: Move):
    """Hammer-and-anvil captures of *move* under the default config."""
    geo = state.geometry
    mover = state.pieces[move.src].owner
    board = dict(state.pieces)
    piece = board.pop(move.src)
    board[move.dst] = piece
    taken = set()
    for dc, dr in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        t = Square(move.dst.col + dc, move.dst.row + dr)
        if not geo.contains(t):
            continue
        victim = board.get(t)
        if victim is None or victim.owner is mover:
            continue
        a = Square(t.col + dc, t.row + dr)
        if not geo.contains(a):
            continue
        holder = board.get(a)
        anvil = (holder is not None and holder.owner is mover) or (
            holder is None and a in geo.havens
        )
        if anvil:
            taken.add(t)
    return frozenset(taken)


def naive_game_ending(state: GameState, move: Move, captures) -> bool:
    piece = state.pieces[move.src]
    geo = state.geometry
    if piece.kind is Kind.KING and move.dst in geo.havens:
        return True
    for s in captures:
        if state.pieces[s].kind is Kind.KING and not state.fragment_mode:
            return True
    if piece.owner is Owner.DEFENDER and captures:
        remaining = [
            s
            for s, p in state.pieces.items()
            if p.owner is Owner.ATTACKER and s not in captures
        ]
        if not remaining and any(
            p.owner is Owner.ATTACKER for p in state.pieces.values()
        ):
            return True
    return False


def naive_forced(state: GameState):
    """The capture-or-game-ending subset of naive_moves."""
    out = []
    for move in naive_moves(state):
        caps = naive_captures(state, move)
        if caps or naive_game_ending(state, move, caps):
            out.append(move)
    return out


def naive_legal(state: GameState):
    """Forced filter applied: the forced subset when nonempty."""
    if state.config.forced_capture:
        forced = naive_forced(state)
        if forced:
            return forced
    return naive_moves(state)

"""Depth-bounded exhaustive search over forced-capture play.

Two cooperating searches share one contract (bounded minimax over the
forced-filtered tree, path-local repetition counted as a draw, wins
preferred fastest, losses delayed longest, lexicographic move tie-break):

* a win prover with sound cutoffs (an opponent node fails as soon as one
  reply survives), run with iterative deepening so the proven ply count is
  minimal, and
* a plain exact minimax used to classify positions the mover cannot win
  (opponent win / draw / unknown).

Memo entries are keyed by position, remaining depth and the "quiet chain"
of same-piece-count path ancestors; only those ancestors can ever repeat
inside the subtree (captures are irreversible), so table and no-table runs
are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

from .rules import (
    GameState,
    Kind,
    Move,
    Owner,
    Terminal,
    is_stalemated,
    successors,
    terminal_status,
)


class Verdict(Enum):
    ATTACKER_WIN = "attacker_win"
    DEFENDER_WIN = "defender_win"
    DRAW = "draw"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    plies: Optional[int] = None
    line: Tuple[Move, ...] = ()


@dataclass(frozen=True)
class SearchLimits:
    max_plies: int
    node_budget: Optional[int] = None
    table_capacity: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_plies < 1:
            raise ValueError("max_plies must be >= 1")


class NoProvenWin(Exception):
    pass


class _Budget(Exception):
    pass


_WIN_FOR = {
    Owner.ATTACKER: Verdict.ATTACKER_WIN,
    Owner.DEFENDER: Verdict.DEFENDER_WIN,
}

_TERMINAL_VERDICT = {
    Terminal.ATTACKER_WIN: Verdict.ATTACKER_WIN,
    Terminal.DEFENDER_WIN: Verdict.DEFENDER_WIN,
}


def _quick_terminal(state: GameState) -> Optional[Terminal]:
    """Terminal checks minus stalemate (which falls out of empty successors)."""
    geo = state.geometry
    king = None
    attackers = 0
    for s, p in state.pieces.items():
        if p.kind is Kind.KING:
            king = s
        elif p.owner is Owner.ATTACKER:
            attackers += 1
    if king is not None:
        if king in geo.havens:
            return Terminal.DEFENDER_WIN
        if state.config.edge_escape and geo.is_edge(king):
            return Terminal.DEFENDER_WIN
    elif not state.fragment_mode:
        return Terminal.ATTACKER_WIN
    if attackers == 0:
        return Terminal.DEFENDER_WIN
    return None


class _Path:
    """Search path: repetition lookups plus the quiet-chain memo context."""

    def __init__(self) -> None:
        self.by_hash: Dict[int, Tuple] = {}
        self.by_count: Dict[int, Set[int]] = {}

    def repeats(self, h: int, key: Tuple) -> bool:
        return self.by_hash.get(h) == key

    def context(self, count: int) -> frozenset:
        chain = self.by_count.get(count)
        return frozenset(chain) if chain else frozenset()

    def push(self, h: int, key: Tuple, count: int) -> None:
        self.by_hash[h] = key
        self.by_count.setdefault(count, set()).add(h)

    def pop(self, h: int, count: int) -> None:
        del self.by_hash[h]
        self.by_count[count].discard(h)


class _Search:
    def __init__(self, limits: SearchLimits):
        self.limits = limits
        self.nodes = 0
        use_table = limits.table_capacity is None or limits.table_capacity > 0
        self.capacity = limits.table_capacity
        self.table: Optional[Dict[Tuple, Tuple]] = {} if use_table else None

    def _tick(self) -> None:
        self.nodes += 1
        if self.limits.node_budget is not None and self.nodes > self.limits.node_budget:
            raise _Budget()

    def _load(self, memo_key: Tuple, full_key: Tuple):
        if self.table is None:
            return None
        hit = self.table.get(memo_key)
        if hit is not None and hit[0] == full_key:  # guard hash collisions
            return hit[1]
        return None

    def _store(self, memo_key: Tuple, full_key: Tuple, value) -> None:
        if self.table is not None and (
            self.capacity is None or len(self.table) < self.capacity
        ):
            self.table[memo_key] = (full_key, value)

    # -- win prover: wins(s, d) - the mover forces a win within d plies -----

    def wins(self, state: GameState, depth: int, path: _Path) -> bool:
        self._tick()
        if _quick_terminal(state) is not None:
            return False  # reaching one's turn in a terminal position is a loss
        if depth == 0:
            return False
        h = state.position_hash()
        key = state.position_key()
        if path.repeats(h, key):
            return False  # repetition: a draw, not a win
        count = len(state.pieces)
        memo_key = ("w", h, depth, path.context(count))
        hit = self._load(memo_key, key)
        if hit is not None:
            return hit

        children = successors(state)
        result = False
        if children:
            path.push(h, key, count)
            for _, _, ends, child in children:
                if ends or self.loses(child, depth - 1, path):
                    result = True
                    break
            path.pop(h, count)
        self._store(memo_key, key, result)
        return result

    # loses(s, d): the mover loses within d plies whatever they do ----------

    def loses(self, state: GameState, depth: int, path: _Path) -> bool:
        self._tick()
        if _quick_terminal(state) is not None:
            return True
        if depth == 0:
            return is_stalemated(state)  # a stuck side has already lost
        h = state.position_hash()
        key = state.position_key()
        if path.repeats(h, key):
            return False  # the mover can claim the repetition draw
        count = len(state.pieces)
        memo_key = ("l", h, depth, path.context(count))
        hit = self._load(memo_key, key)
        if hit is not None:
            return hit

        children = successors(state)
        if not children:
            return True  # stalemated: the side to move loses
        path.push(h, key, count)
        result = True
        for _, _, ends, child in children:
            if ends or not self.wins(child, depth - 1, path):
                result = False
                break
        path.pop(h, count)
        self._store(memo_key, key, result)
        return result

    def loss_distance(self, state: GameState, cap: int, path: _Path) -> Optional[int]:
        """Minimal d <= cap with loses(state, d), else None."""
        for d in range(cap + 1):
            if self.loses(state, d, path):
                return d
        return None

    def win_distance(self, state: GameState, cap: int, path: _Path) -> Optional[int]:
        """Minimal d <= cap with wins(state, d), else None."""
        for d in range(cap + 1):
            if self.wins(state, d, path):
                return d
        return None

    # -- exact minimax for non-win classification ---------------------------

    def exact(self, state: GameState, depth: int, path: _Path):
        """(verdict, plies, line) under bounded minimax."""
        self._tick()
        term = _quick_terminal(state)
        if term is not None:
            return (_TERMINAL_VERDICT[term], 0, ())
        h = state.position_hash()
        key = state.position_key()
        if path.repeats(h, key):
            return (Verdict.DRAW, None, ())
        if depth == 0:
            return (Verdict.UNKNOWN, None, ())
        count = len(state.pieces)
        memo_key = ("e", h, depth, path.context(count))
        hit = self._load(memo_key, key)
        if hit is not None:
            return hit

        children = successors(state)
        if not children:
            loser = state.to_move
            verdict = (
                Verdict.ATTACKER_WIN if loser is Owner.DEFENDER else Verdict.DEFENDER_WIN
            )
            return (verdict, 0, ())

        mover = state.to_move
        win = _WIN_FOR[mover]
        path.push(h, key, count)
        best_win = None
        best_loss = None
        draw_line = None
        saw_unknown = False
        for move, _, ends, child in children:
            if ends:
                best_win = (1, (move,))
                break  # nothing beats winning in one ply; canonical order
            verdict, plies, line = self.exact(child, depth - 1, path)
            if verdict is win:
                if best_win is None or plies + 1 < best_win[0]:
                    best_win = (plies + 1, (move,) + line)
            elif verdict is Verdict.UNKNOWN:
                saw_unknown = True
            elif verdict is Verdict.DRAW:
                if draw_line is None:
                    draw_line = (move,) + line
            else:
                if best_loss is None or plies + 1 > best_loss[1]:
                    best_loss = (verdict, plies + 1, (move,) + line)
        path.pop(h, count)

        if best_win is not None:
            result = (win, best_win[0], best_win[1])
        elif saw_unknown:
            result = (Verdict.UNKNOWN, None, ())
        elif draw_line is not None:
            result = (Verdict.DRAW, None, draw_line)
        else:
            result = best_loss
        self._store(memo_key, key, result)
        return result


def _extract_line(
    search: _Search, state: GameState, plies: int, winner: Owner
) -> Tuple[Move, ...]:
    """Principal variation of a proven win: winner plays the lexicographically
    first fastest move, the loser the lexicographically first longest-lasting
    reply."""
    line: List[Move] = []
    cur = state
    dist = plies  # exact win/loss distance of the current node
    path = _Path()
    while dist > 0:
        h = cur.position_hash()
        key = cur.position_key()
        count = len(cur.pieces)
        children = successors(cur)
        if cur.to_move is winner:
            path.push(h, key, count)
            target = None
            for move, _, _, child in children:
                d = search.loss_distance(child, dist - 1, path)
                if d is not None and (target is None or d < target[0]):
                    target = (d, move, child)
                    if d == 0:
                        break  # cannot be beaten
            path.pop(h, count)
            assert target is not None, "win extraction lost the proof"
        else:
            path.push(h, key, count)
            target = None
            for move, _, ends, child in children:
                assert not ends, "losing side cannot have a winning move"
                d = search.win_distance(child, dist - 1, path)
                assert d is not None, "opponent had a non-losing reply"
                if target is None or d > target[0]:
                    target = (d, move, child)
            path.pop(h, count)
        d, move, child = target
        line.append(move)
        path.push(h, key, count)
        cur = child
        dist = d
    return tuple(line)


def solve(state: GameState, limits: SearchLimits) -> Outcome:
    """Exhaustive bounded minimax; Unknown only at the horizon or budget."""
    term = terminal_status(state)
    if term is not None:
        return Outcome(_TERMINAL_VERDICT[term], 0, ())
    search = _Search(limits)
    try:
        for depth in range(1, limits.max_plies + 1):
            if search.wins(state, depth, _Path()):
                line = _extract_line(search, state, depth, state.to_move)
                return Outcome(_WIN_FOR[state.to_move], depth, line)
        verdict, plies, line = search.exact(state, limits.max_plies, _Path())
        if verdict in (Verdict.ATTACKER_WIN, Verdict.DEFENDER_WIN):
            return Outcome(verdict, plies, tuple(line))
        return Outcome(verdict, None, tuple(line))
    except _Budget:
        return Outcome(Verdict.UNKNOWN, None, ())


def refute(state: GameState, limits: SearchLimits) -> Outcome:
    """Prove the side to move loses: the opponent's win with ply count and
    line, or Unknown within the horizon.

    The cheap direction when the mover is known to be busted: it never has
    to consider the mover's own winning chances the way solve() does.
    """
    term = terminal_status(state)
    if term is not None:
        return Outcome(_TERMINAL_VERDICT[term], 0, ())
    search = _Search(limits)
    try:
        for depth in range(1, limits.max_plies + 1):
            if search.loses(state, depth, _Path()):
                line = _extract_line(search, state, depth, state.to_move.opponent)
                return Outcome(_WIN_FOR[state.to_move.opponent], depth, line)
    except _Budget:
        pass
    return Outcome(Verdict.UNKNOWN, None, ())


def best_line(state: GameState, limits: SearchLimits) -> List[Move]:
    """Principal variation of a proven win; raises NoProvenWin otherwise."""
    outcome = solve(state, limits)
    if outcome.verdict not in (Verdict.ATTACKER_WIN, Verdict.DEFENDER_WIN):
        raise NoProvenWin(f"no proven win within {limits.max_plies} plies")
    return list(outcome.line)


def perft(state: GameState, depth: int) -> int:
    """Leaf count of the forced-filtered move tree."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == 0:
        return 1
    if terminal_status(state) is not None:
        return 0
    total = 0
    for _, _, _, child in successors(state):
        total += perft(child, depth - 1)
    return total

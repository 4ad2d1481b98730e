"""Rules engine: movement, captures, the forced filter and terminal logic."""

import random

import pytest

from conftest import random_state
from fctafl import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    IllegalMove,
    KING,
    Kind,
    KingCaptureMode,
    KingCapturePower,
    Owner,
    Piece,
    RuleConfig,
    Square,
    Terminal,
    ThroneAccess,
    apply_move,
    brandubh_start,
    capture_or_winning_moves,
    captures_of,
    legal_moves,
    legal_moves_unfiltered,
    mv,
    parse_fen,
    sq,
    terminal_status,
)
from naive import naive_captures, naive_legal, naive_moves


def fragment(fen: str) -> GameState:
    return parse_fen(fen)


class TestGeometry:
    def test_standard_board(self):
        geo = BoardGeometry.standard(7)
        assert geo.throne == sq("d4")
        assert geo.havens == frozenset({sq("a1"), sq("a7"), sq("g1"), sq("g7")})

    @pytest.mark.parametrize("side", [5, 9, 13, 6, 2])
    def test_standard_board_rejects_bad_sides(self, side):
        with pytest.raises(ValueError):
            BoardGeometry.standard(side)

    def test_square_names(self):
        assert sq("a1") == Square(0, 0)
        assert sq("aa7") == Square(26, 6)
        assert Square(26, 6).name == "aa7"


class TestLegalMoves:
    def test_brandubh_opening_including_fig_move(self):
        state = brandubh_start()
        moves = legal_moves(state)
        assert mv("b4-b7") in moves
        assert len(moves) == 40

    def test_fully_blocked_soldier_has_no_moves(self):
        state = fragment("3x3 1p1/pPp/1p1 d - - fragment")
        assert legal_moves(state) == []

    def test_wire_fragment_forced_filter_is_exact(self):
        state = fragment("4x5 2p1/Pp2/3p/4/2P1 d - - fragment")
        assert legal_moves(state) == [mv("c1-c4")]
        assert capture_or_winning_moves(state) == [mv("c1-c4")]

    def test_soldier_cannot_stop_on_or_cross_vacated_throne(self):
        state = parse_fen("7x7 7/7/7/p6/7/7/3K3 a d4 -")
        moves = {m.name for m in legal_moves(state)}
        assert "a4-d4" not in moves
        assert "a4-e4" not in moves  # transit over the throne is barred too
        assert "a4-c4" in moves

    def test_king_may_cross_and_stop_on_throne(self):
        state = parse_fen("7x7 7/7/7/K6/7/7/7 d d4 -")
        moves = {m.name for m in legal_moves(state)}
        assert "a4-d4" in moves and "a4-g4" in moves


class TestThroneAccessVariants:
    @pytest.mark.parametrize(
        "access,stop_ok,cross_ok",
        [
            (ThroneAccess.ALL_NORMAL, True, True),
            (ThroneAccess.ALL_THROUGH_ONLY, False, True),
            (ThroneAccess.KING_ONLY, False, False),
        ],
    )
    def test_attacker_throne_access(self, access, stop_ok, cross_ok):
        cfg = RuleConfig(throne_access=access)
        state = parse_fen("7x7 7/7/7/p6/7/7/7 a d4 -", config=cfg)
        moves = {m.name for m in legal_moves(state)}
        assert ("a4-d4" in moves) == stop_ok
        assert ("a4-g4" in moves) == cross_ok

    @pytest.mark.parametrize(
        "access,stop_ok,cross_ok",
        [
            (ThroneAccess.DEFENDERS_THROUGH_ONLY, False, True),
            (ThroneAccess.DEFENDERS_THROUGH_AND_STOP, True, True),
            (ThroneAccess.KING_ONLY, False, False),
        ],
    )
    def test_defender_throne_access(self, access, stop_ok, cross_ok):
        cfg = RuleConfig(throne_access=access)
        state = parse_fen("7x7 7/7/7/P6/7/7/7 d d4 -", config=cfg)
        moves = {m.name for m in legal_moves(state)}
        assert ("a4-d4" in moves) == stop_ok
        assert ("a4-g4" in moves) == cross_ok

    def test_king_through_once_only_forbids_landing(self):
        cfg = RuleConfig(throne_access=ThroneAccess.KING_THROUGH_ONCE_ONLY)
        state = parse_fen("7x7 7/7/7/K6/7/7/7 d d4 -", config=cfg)
        moves = {m.name for m in legal_moves(state)}
        assert "a4-d4" not in moves and "a4-g4" in moves

    def test_king_through_not_back(self):
        cfg = RuleConfig(throne_access=ThroneAccess.KING_THROUGH_NOT_BACK)
        state = parse_fen("7x7 7/7/7/3K3/7/7/7 d d4 -", config=cfg)
        state, _ = apply_move(state, mv("d4-b4"))
        state = state.with_to_move(Owner.DEFENDER)
        moves = {m.name for m in legal_moves(state)}
        assert "b4-d4" not in moves  # cannot return after leaving
        assert "b4-g4" in moves  # passing across is allowed


class TestCaptures:
    def test_defender_victory_double_capture(self):
        state = fragment("5x7 1PPp1/p1K2/2p1p/1p1pP/5/5/2P2 d - e7")
        assert captures_of(state, mv("c1-c4")) == frozenset({sq("c5"), sq("d4")})

    def test_no_adjacent_enemy_no_capture(self):
        state = fragment("5x5 5/5/4p/5/P4 d - - fragment")
        assert captures_of(state, mv("a1-a2")) == frozenset()

    def test_attacker_victory_takes_king_against_haven_anchor(self):
        state = fragment("5x7 p2P1/K4/1PPpp/4P/5/3P1/p2p1 a - e7")
        assert captures_of(state, mv("a1-a5")) == frozenset({sq("a6")})

    def test_haven_is_anvil_for_both_sides(self):
        state = fragment("4x4 4/p3/2P1/4 d - a4 fragment")
        # white lands a2, black a3 pinned against the a4 haven
        assert captures_of(state, mv("c2-a2")) == frozenset({sq("a3")})
        flipped = fragment("4x4 4/P3/2p1/4 a - a4 fragment")
        assert captures_of(flipped, mv("c2-a2")) == frozenset({sq("a3")})

    def test_self_capture_never_happens(self):
        state = fragment("5x3 5/P1P2/1p3 a - - fragment")
        # black walks in between two whites: no self-capture
        nxt, result = apply_move(state, mv("b1-b2"))
        assert result.captures == frozenset()
        assert sq("b2") in nxt.pieces

    def test_moved_piece_never_captured(self):
        state = fragment("3x3 3/p1p/1P1 d - - fragment")
        caps = captures_of(state, mv("b1-b2"))
        assert sq("b2") not in caps

    def test_throne_is_anvil_toggle(self):
        # attacker lands d6; defender d5 pinned against the empty throne d4
        fen = "7x7 7/p6/3P3/7/7/7/7 a d4 -"
        on = parse_fen(fen, config=RuleConfig(throne_is_anvil=True))
        off = parse_fen(fen, config=RuleConfig(throne_is_anvil=False))
        assert captures_of(on, mv("a6-d6")) == frozenset({sq("d5")})
        assert captures_of(off, mv("a6-d6")) == frozenset()

    def test_trap_capture_variant(self):
        cfg = RuleConfig(traps=True)
        # c3 is already fully surrounded; a remote attacker move collects it,
        # which the hammer-and-anvil rule alone never would
        fen = "5x5 5/2p2/1pPp1/2p2/p4 a - - fragment"
        state = parse_fen(fen, config=cfg)
        assert captures_of(state, mv("a1-a2")) == frozenset({sq("c3")})
        off = parse_fen(fen)
        assert captures_of(off, mv("a1-a2")) == frozenset()

    def test_trap_uses_board_edge(self):
        cfg = RuleConfig(traps=True)
        fen = "5x5 5/5/2p2/5/1pPp1 a - - fragment"
        state = parse_fen(fen, config=cfg)
        # c1 hemmed by b1, d1, the arriving c2 and the bottom edge
        assert captures_of(state, mv("c3-c2")) == frozenset({sq("c1")})
        assert captures_of(parse_fen(fen), mv("c3-c2")) == frozenset()

    def test_king_capture_modes(self):
        fen = "7x7 7/7/7/1pK1p2/7/2P4/7 a - -"
        hammer = parse_fen(fen, config=RuleConfig())
        assert captures_of(hammer, mv("e4-d4")) == frozenset({sq("c4")})
        trap_only = parse_fen(fen, config=RuleConfig(king_capture_mode=KingCaptureMode.TRAP_ONLY))
        assert captures_of(trap_only, mv("e4-d4")) == frozenset()

    def test_king_trap_only_surround(self):
        # the king on the bottom edge: a1, c1, the arriving b2 and the edge
        # complete the surround without ever forming a flank
        fen = "5x5 5/5/1p3/5/pKp2 a - - fragment"
        trap_only = parse_fen(fen, config=RuleConfig(king_capture_mode=KingCaptureMode.TRAP_ONLY))
        assert captures_of(trap_only, mv("b3-b2")) == frozenset({sq("b1")})
        hammer = parse_fen(fen)
        assert captures_of(hammer, mv("b3-b2")) == frozenset()
        no_edges = parse_fen(
            fen, config=RuleConfig(king_capture_mode=KingCaptureMode.TRAP_NO_EDGES)
        )
        assert captures_of(no_edges, mv("b3-b2")) == frozenset()

    def test_king_cannot_hammer_when_restricted(self):
        fen = "5x5 5/5/2K2/1p3/1P3 d - - fragment"
        full = parse_fen(fen)
        assert captures_of(full, mv("c3-b3")) == frozenset({sq("b2")})
        no_hammer = parse_fen(
            fen, config=RuleConfig(king_capture_power=KingCapturePower.NO_HAMMER)
        )
        assert captures_of(no_hammer, mv("c3-b3")) == frozenset()

    def test_king_cannot_anvil_when_fully_restricted(self):
        fen = "5x5 5/1K3/1p3/5/1P3 d - - fragment"
        full = parse_fen(fen)
        assert captures_of(full, mv("b1-b2")) == frozenset({sq("b3")})
        no_part = parse_fen(
            fen, config=RuleConfig(king_capture_power=KingCapturePower.NO_PARTICIPATION)
        )
        assert captures_of(no_part, mv("b1-b2")) == frozenset()

    def test_king_protected_on_throne(self):
        # defender d5 adjacent to the throne-sitting king, flanked на row 5
        fen = "7x7 7/7/p2Pp2/3K3/7/7/7 a d4 -"
        protected = parse_fen(fen, config=RuleConfig(king_protected_on_throne=True))
        plain = parse_fen(fen)
        assert captures_of(plain, mv("a5-c5")) == frozenset({sq("d5")})
        assert captures_of(protected, mv("a5-c5")) == frozenset()


class TestApplyMove:
    def test_brandubh_line_replays(self):
        state = brandubh_start()
        expected = [
            ("b4-b7", set(), None),
            ("c4-c7", {"b7"}, None),
            ("a4-c4", set(), None),
            ("e4-e7", {"d7"}, None),
            ("f4-e4", {"d4"}, Terminal.ATTACKER_WIN),
        ]
        for text, caps, term in expected:
            state, result = apply_move(state, mv(text))
            assert {s.name for s in result.captures} == caps
            assert result.terminal is term

    def test_not_forced_rejected_with_reason(self):
        state = brandubh_start()
        state, _ = apply_move(state, mv("b4-b7"))
        with pytest.raises(IllegalMove) as err:
            apply_move(state, mv("d5-c5"))
        assert err.value.reason == "not-forced"

    def test_wrong_side_rejected(self):
        state = brandubh_start()
        with pytest.raises(IllegalMove) as err:
            apply_move(state, mv("c4-c5"))
        assert err.value.reason == "not-your-piece"

    def test_blocked_path_rejected(self):
        state = brandubh_start()
        with pytest.raises(IllegalMove) as err:
            apply_move(state, mv("d1-d3"))
        assert err.value.reason == "path-blocked"

    def test_throne_restricted_rejected(self):
        state = parse_fen("7x7 7/7/7/p6/7/7/7 a d4 -")
        with pytest.raises(IllegalMove) as err:
            apply_move(state, mv("a4-d4"))
        assert err.value.reason == "throne-restricted"

    def test_apply_is_pure(self):
        state = brandubh_start()
        before = state.position_hash()
        apply_move(state, mv("b4-b7"))
        assert state.position_hash() == before
        assert sq("b4") in state.pieces


class TestTerminal:
    def test_king_on_haven_wins(self):
        state = parse_fen("7x7 6K/7/7/7/7/7/3p3 a - a1,a7,g1,g7")
        assert terminal_status(state) is Terminal.DEFENDER_WIN

    def test_king_absent_is_attacker_win(self):
        state = parse_fen("5x5 5/5/2p2/5/2P2 a - -")
        assert terminal_status(state) is Terminal.ATTACKER_WIN

    def test_fragment_mode_suppresses_king_checks(self):
        state = parse_fen("4x5 2p1/Pp2/3p/4/4 d - - fragment")
        assert terminal_status(state) is None

    def test_no_attackers_is_defender_win(self):
        state = parse_fen("5x5 5/5/2K2/5/2P2 a - -")
        assert terminal_status(state) is Terminal.DEFENDER_WIN

    def test_stuck_side_loses(self):
        state = parse_fen("3x3 1p1/pPp/1p1 d - - fragment")
        assert terminal_status(state) is Terminal.ATTACKER_WIN

    def test_edge_escape_variant(self):
        cfg = RuleConfig(edge_escape=True)
        state = parse_fen("7x7 7/7/7/K6/7/7/3p3 a - -", config=cfg)
        assert terminal_status(state) is Terminal.DEFENDER_WIN
        plain = parse_fen("7x7 7/7/7/K6/7/7/3p3 a - -")
        assert terminal_status(plain) is None


class TestProperties:
    N = 500

    def test_oracle_equivalence_and_forced_law(self):
        rng = random.Random(7)
        for _ in range(self.N):
            state = random_state(rng)
            unfiltered = legal_moves_unfiltered(state)
            assert unfiltered == naive_moves(state)
            forced = capture_or_winning_moves(state)
            filtered = legal_moves(state)
            if forced:
                assert filtered == forced
            else:
                assert filtered == unfiltered
            assert filtered == naive_legal(state)

    def test_captures_match_oracle(self):
        rng = random.Random(11)
        for _ in range(200):
            state = random_state(rng)
            for move in legal_moves_unfiltered(state)[:10]:
                assert captures_of(state, move) == naive_captures(state, move)

    def test_no_self_capture_and_monotonic_counts(self):
        rng = random.Random(13)
        for _ in range(self.N):
            state = random_state(rng)
            moves = legal_moves(state)
            if not moves:
                continue
            move = rng.choice(moves)
            mover = state.to_move
            nxt, result = apply_move(state, move)
            assert move.dst not in result.captures
            assert nxt.count(mover) == state.count(mover)
            assert nxt.count(mover.opponent) <= state.count(mover.opponent)

    def test_path_soundness(self):
        rng = random.Random(17)
        for _ in range(100):
            state = random_state(rng)
            for move in legal_moves_unfiltered(state):
                dc = (move.dst.col > move.src.col) - (move.dst.col < move.src.col)
                dr = (move.dst.row > move.src.row) - (move.dst.row < move.src.row)
                cur = move.src.shifted(dc, dr)
                while cur != move.dst:
                    assert cur not in state.pieces
                    cur = cur.shifted(dc, dr)

    def test_trap_variant_isolation(self):
        # toggling traps on adds captures only for pieces the move leaves
        # fully surrounded; otherwise capture sets are identical
        rng = random.Random(19)
        for _ in range(120):
            state = random_state(rng)
            trap_state = GameState(
                geometry=state.geometry,
                pieces=state.pieces,
                to_move=state.to_move,
                config=RuleConfig(traps=True),
                fragment_mode=state.fragment_mode,
            )
            for move in legal_moves_unfiltered(state)[:8]:
                no_trap = captures_of(state, move)
                with_trap = captures_of(trap_state, move)
                assert no_trap <= with_trap
                extra = with_trap - no_trap
                board = dict(state.pieces)
                piece = board.pop(move.src)
                board[move.dst] = piece
                for s in no_trap:
                    board.pop(s, None)
                for victim in extra:
                    for d in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                        n = victim.shifted(*d)
                        hostile = (
                            not state.geometry.contains(n)
                            or (n in board and board[n].owner is not board[victim].owner)
                            or n in state.geometry.havens
                            or (state.geometry.throne is not None and n == state.geometry.throne)
                        )
                        assert hostile, f"{move} trap-captured unsurrounded {victim}"

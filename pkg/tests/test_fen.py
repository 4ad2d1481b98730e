"""Position serialization: parsing, canonical emit, round trips."""

import random

import pytest

from conftest import random_state
from fctafl import (
    BRANDUBH_FEN,
    Kind,
    Owner,
    brandubh_start,
    emit_fen,
    parse_fen,
    sq,
)
from fctafl.fen import ParseError


class TestParse:
    def test_brandubh_start(self):
        state = parse_fen(BRANDUBH_FEN)
        attackers = [s for s, p in state.pieces.items() if p.owner is Owner.ATTACKER]
        defenders = [
            s
            for s, p in state.pieces.items()
            if p.owner is Owner.DEFENDER and p.kind is Kind.SOLDIER
        ]
        assert len(attackers) == 8
        assert len(defenders) == 4
        assert state.king_square() == sq("d4")
        assert state.geometry.throne == sq("d4")

    def test_empty_fragment(self):
        state = parse_fen("3x3 3/3/3 a - -")
        assert state.pieces == {}
        assert state.geometry.width == 3

    def test_wire_fragment(self):
        state = parse_fen("4x5 2p1/Pp2/3p/4/4 d - -")
        names = {s.name: p.symbol for s, p in state.pieces.items()}
        assert names == {"c5": "p", "a4": "P", "b4": "p", "d3": "p"}

    def test_short_fen_pads_bottom_rows(self):
        state = parse_fen("6x9 1P1p2/6/6/6/6/3pPp/6/3P2 d - -")
        assert sq("b9") in state.pieces
        assert sq("d2") in state.pieces
        assert all(s.row != 0 for s in state.pieces)

    def test_multidigit_runs(self):
        state = parse_fen("15x3 13p1/15/15 a - -")
        assert list(state.pieces) == [sq("n3")]

    @pytest.mark.parametrize(
        "bad",
        [
            "3x3 4/3/3 a - -",  # row too wide
            "3x3 2/3/3 a - -",  # row too narrow
            "3x3 3/3/3/3 a - -",  # too many rows
            "3x3 3/3/3 x - -",  # bad mover
            "3x3 K1K/3/3 d - -",  # two kings
            "3x3 3/3 a",  # missing fields
            "3x3 3/q2/3 a - -",  # bad symbol
            "3x3 P2/3/3 a - a3",  # soldier on haven
            "3x3 3/3/3 a - - weird",  # unknown flag
        ],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_fen(bad)

    def test_king_on_haven_is_allowed(self):
        state = parse_fen("3x3 K2/3/2p a - a3")
        assert state.king_square() == sq("a3")


class TestEmit:
    def test_brandubh_round_trip_text(self):
        assert emit_fen(brandubh_start()) == BRANDUBH_FEN

    def test_one_by_one(self):
        assert emit_fen(parse_fen("1x1 1 a - -")) == "1x1 1 a - -"

    def test_fragment_flag_round_trips(self):
        text = "4x5 2p1/Pp2/3p/4/4 d - - fragment"
        assert emit_fen(parse_fen(text)) == text

    def test_round_trip_corpus(self):
        rng = random.Random(23)
        for _ in range(1000):
            state = random_state(rng, max_side=7)
            text = emit_fen(state)
            back = parse_fen(text)
            assert back.pieces == state.pieces
            assert back.to_move is state.to_move
            assert back.geometry == state.geometry
            assert back.fragment_mode == state.fragment_mode
            assert emit_fen(back) == text  # emit-parse-emit fixed point

    def test_round_trip_wide_boards_with_multidigit_runs(self):
        rng = random.Random(29)
        from fctafl import ATTACKER, DEFENDER, BoardGeometry, GameState, Square

        for _ in range(50):
            geo = BoardGeometry.fragment(15, rng.randint(3, 9))
            pieces = {}
            for _ in range(rng.randint(1, 6)):
                s = Square(rng.randrange(15), rng.randrange(geo.height))
                pieces[s] = rng.choice([ATTACKER, DEFENDER])
            state = GameState(
                geometry=geo,
                pieces=pieces,
                to_move=Owner.ATTACKER,
                fragment_mode=True,
            )
            text = emit_fen(state)
            assert parse_fen(text).pieces == pieces
            assert emit_fen(parse_fen(text)) == text

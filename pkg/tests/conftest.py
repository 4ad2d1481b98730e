import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fctafl import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    KING,
    Owner,
    RuleConfig,
    Square,
    terminal_status,
)


def random_state(rng: random.Random, max_side: int = 7) -> GameState:
    """A random non-terminal position on a fragment or standard board."""
    while True:
        standard = rng.random() < 0.4
        if standard:
            geo = BoardGeometry.standard(7)
        else:
            geo = BoardGeometry.fragment(
                rng.randint(3, max_side), rng.randint(3, max_side)
            )
        blocked = set(geo.havens)
        if geo.throne is not None:
            blocked.add(geo.throne)
        squares = [
            Square(c, r)
            for c in range(geo.width)
            for r in range(geo.height)
            if Square(c, r) not in blocked
        ]
        rng.shuffle(squares)
        n_att = rng.randint(1, max(1, len(squares) // 4))
        n_def = rng.randint(1, max(1, len(squares) // 4))
        with_king = standard or rng.random() < 0.5
        pieces = {}
        idx = 0
        for _ in range(n_att):
            pieces[squares[idx]] = ATTACKER
            idx += 1
        for _ in range(n_def):
            pieces[squares[idx]] = DEFENDER
            idx += 1
        if with_king and idx < len(squares):
            pieces[squares[idx]] = KING
        state = GameState(
            geometry=geo,
            pieces=pieces,
            to_move=rng.choice([Owner.ATTACKER, Owner.DEFENDER]),
            config=RuleConfig(),
            fragment_mode=not with_king,
        )
        if terminal_status(state) is None:
            return state


@pytest.fixture
def rng():
    return random.Random(20260810)

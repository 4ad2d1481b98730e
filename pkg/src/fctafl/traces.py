"""Frozen forced-move scripts for every gadget and gadget pairing, plus the
verifier that replays them.

Each trace pins, ply by ply, the exact capture-or-winning move set the
engine must produce (set equality, not containment) and the move the script
plays.  Postconditions assert exit lanes are open (or provably blocked) and,
for the one-way turn property, that no backward landing exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .gadgets import PlacedGadget, TEMPLATES, Transform, instantiate, fragment_state
from .rules import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    Move,
    Owner,
    Piece,
    Square,
    Terminal,
    capture_or_winning_moves,
    apply_move,
    legal_moves,
    mv,
    parse_square,
    terminal_status,
)

NORTH, SOUTH, EAST, WEST = (0, 1), (0, -1), (1, 0), (-1, 0)

_OWNER = {"a": Owner.ATTACKER, "d": Owner.DEFENDER}


@dataclass(frozen=True)
class TracePly:
    mover: Owner
    forced: FrozenSet[Move]  # expected capture-or-winning set, exact
    play: Move


@dataclass(frozen=True)
class LineCheck:
    start: Square
    heading: Tuple[int, int]
    blocked: bool = False  # asserts at least one occupied square when True


@dataclass(frozen=True)
class GadgetSpec:
    template: str
    transform: Transform
    swap_colors: bool = False


@dataclass(frozen=True)
class GadgetTrace:
    name: str
    width: int
    height: int
    havens: Tuple[Square, ...]
    gadgets: Tuple[GadgetSpec, ...]
    extra: Tuple[Tuple[Square, Piece], ...]  # entry soldiers
    start: Owner
    plies: Tuple[TracePly, ...]
    final_forced: Optional[FrozenSet[Move]] = None  # next mover's forced set at the end
    lines: Tuple[LineCheck, ...] = ()
    forbidden_landings: Tuple[Tuple[Owner, FrozenSet[Square]], ...] = ()
    expect_terminal: Optional[Terminal] = None

    def placed_gadgets(self) -> List[PlacedGadget]:
        board = BoardGeometry.fragment(self.width, self.height, self.havens)
        out = []
        occupied: Dict[Square, Piece] = {}
        for spec in self.gadgets:
            placed = instantiate(
                TEMPLATES[spec.template],
                spec.transform,
                board,
                occupied=occupied,
                swap_colors=spec.swap_colors,
            )
            occupied.update(placed.pieces)
            out.append(placed)
        return out

    def initial_state(self) -> GameState:
        return fragment_state(
            self.width,
            self.height,
            self.placed_gadgets(),
            dict(self.extra),
            self.start,
            havens=self.havens,
        )


@dataclass
class PlyReport:
    index: int
    mover: Owner
    expected: FrozenSet[Move]
    observed: FrozenSet[Move]
    played: Move
    ok: bool

    def describe(self) -> str:
        state = "ok" if self.ok else "DIVERGED"
        exp = sorted(m.name for m in self.expected)
        obs = sorted(m.name for m in self.observed)
        text = f"ply {self.index} [{self.mover.value}] {self.played.name}: {state}"
        if not self.ok:
            text += f" expected={exp} observed={obs}"
        return text


@dataclass
class TraceReport:
    name: str
    passed: bool
    plies: List[PlyReport] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    def first_divergence(self) -> Optional[int]:
        for ply in self.plies:
            if not ply.ok:
                return ply.index
        return None

    def summary(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        lines = [head]
        lines.extend("  " + p.describe() for p in self.plies)
        lines.extend("  " + f for f in self.failures)
        return "\n".join(lines)


def _walk_clear(state: GameState, check: LineCheck) -> bool:
    cur = check.start
    dx, dy = check.heading
    clear = True
    while True:
        cur = cur.shifted(dx, dy)
        if not state.geometry.contains(cur):
            break
        if cur in state.pieces:
            clear = False
            break
    return clear


def verify_trace(trace: GadgetTrace) -> TraceReport:
    """Replay *trace*, asserting exact forced-set equality at every scripted
    ply; failures pinpoint the first divergent ply."""
    report = TraceReport(name=trace.name, passed=True)
    state = trace.initial_state()
    for i, ply in enumerate(trace.plies, 1):
        ok = True
        if state.to_move is not ply.mover:
            report.failures.append(
                f"ply {i}: expected {ply.mover.value} to move, engine says {state.to_move.value}"
            )
            ok = False
        observed = frozenset(capture_or_winning_moves(state))
        if observed != ply.forced:
            ok = False
        legal = set(legal_moves(state))
        if ply.play not in legal:
            report.failures.append(f"ply {i}: scripted move {ply.play.name} is illegal")
            ok = False
        report.plies.append(
            PlyReport(i, ply.mover, ply.forced, observed, ply.play, ok)
        )
        if not ok:
            report.passed = False
            return report
        state, _ = apply_move(state, ply.play)

    term = terminal_status(state)
    if trace.expect_terminal is not None:
        if term is not trace.expect_terminal:
            report.failures.append(
                f"expected terminal {trace.expect_terminal.value}, got {term}"
            )
            report.passed = False
    elif term is not None:
        report.failures.append(f"unexpected terminal {term.value}")
        report.passed = False

    if trace.final_forced is not None and term is None:
        observed = frozenset(capture_or_winning_moves(state))
        if observed != trace.final_forced:
            report.failures.append(
                "final forced set mismatch: expected "
                f"{sorted(m.name for m in trace.final_forced)}, observed "
                f"{sorted(m.name for m in observed)}"
            )
            report.passed = False

    for check in trace.lines:
        clear = _walk_clear(state, check)
        if check.blocked and clear:
            report.failures.append(f"line from {check.start.name} should be blocked")
            report.passed = False
        elif not check.blocked and not clear:
            report.failures.append(f"exit line from {check.start.name} is obstructed")
            report.passed = False

    for owner, squares in trace.forbidden_landings:
        probe = state if state.to_move is owner else state.with_to_move(owner)
        if term is None:
            for move in legal_moves(probe):
                if move.dst in squares:
                    report.failures.append(
                        f"{owner.value} can still land on {move.dst.name}"
                    )
                    report.passed = False
    return report


# ---------------------------------------------------------------------------
# Construction helpers for the frozen data below.

def _plies(*specs: str) -> Tuple[TracePly, ...]:
    """Each spec reads 'mover expected_set played', e.g. 'd c1-c4|c6-e6 c1-c4';
    '-' is the empty expected set."""
    out = []
    for spec in specs:
        mover, exp, play = spec.split()
        forced = frozenset() if exp == "-" else frozenset(mv(m) for m in exp.split("|"))
        out.append(TracePly(_OWNER[mover], forced, mv(play)))
    return tuple(out)


def _set(exp: str) -> FrozenSet[Move]:
    return frozenset() if exp == "-" else frozenset(mv(m) for m in exp.split("|"))


def _sq_tuple(names: str) -> Tuple[Square, ...]:
    return tuple(parse_square(n) for n in names.split())


def _extra(blacks: str = "", whites: str = "") -> Tuple[Tuple[Square, Piece], ...]:
    out = []
    for n in blacks.split():
        out.append((parse_square(n), ATTACKER))
    for n in whites.split():
        out.append((parse_square(n), DEFENDER))
    return tuple(out)


def _g(template: str, kind: str = "identity", ox: int = 0, oy: int = 0,
       swap: bool = False) -> GadgetSpec:
    return GadgetSpec(template, Transform(kind, (ox, oy)), swap)


# ---------------------------------------------------------------------------
# Single-gadget traces (one per figure of the main construction).

TEMPLATE_TRACES: Tuple[GadgetTrace, ...] = (
    GadgetTrace(
        name="wire_forward",
        width=4, height=5, havens=(),
        gadgets=(_g("wire"),),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies("d c1-c4 c1-c4", "a d3-c3 d3-c3", "d - a4-d4"),
    ),
    GadgetTrace(
        name="wire_backward_one_way",
        width=4, height=5, havens=(),
        gadgets=(_g("wire"),),
        extra=_extra(whites="d4"),
        start=Owner.DEFENDER,
        plies=_plies("d d4-c4 d4-c4", "a d3-c3 d3-c3"),
        final_forced=_set("-"),
        forbidden_landings=(
            (Owner.DEFENDER, frozenset(_sq_tuple("c1 c2 c3"))),
        ),
    ),
    GadgetTrace(
        name="defender_victory_activated",
        width=5, height=7, havens=_sq_tuple("e7"),
        gadgets=(_g("defender_victory"),),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4|c6-e6 c1-c4",
            "a d7-d4 d7-d4",
            "d c6-e6|c6-c4 c6-e6",
            "a - d4-d5",
            "d e6-e7 e6-e7",
        ),
        expect_terminal=Terminal.DEFENDER_WIN,
    ),
    GadgetTrace(
        name="attacker_victory_activated",
        width=5, height=7, havens=_sq_tuple("e7"),
        gadgets=(_g("attacker_victory"),),
        extra=_extra(blacks="a1"),
        start=Owner.ATTACKER,
        plies=_plies("a a1-a5|a7-c7|d5-d3 a1-a5"),
        expect_terminal=Terminal.ATTACKER_WIN,
    ),
    GadgetTrace(
        name="attacker_victory_inactive",
        width=5, height=7, havens=_sq_tuple("e7"),
        gadgets=(_g("attacker_victory"),),
        extra=(),
        start=Owner.ATTACKER,
        plies=_plies(
            "a a7-c7|d5-d3 d5-d3",
            "d a6-e6 a6-e6",
            "a a7-c7 a7-c7",
            "d e6-e7 e6-e7",
        ),
        expect_terminal=Terminal.DEFENDER_WIN,
    ),
    GadgetTrace(
        name="variable_claimed",
        width=6, height=2, havens=(),
        gadgets=(_g("variable"),),
        extra=(),
        start=Owner.DEFENDER,
        plies=_plies("d f2-e2 f2-e2", "a - a2-a1"),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("d1"), NORTH),),
    ),
    GadgetTrace(
        name="variable_declined",
        width=6, height=2, havens=(),
        gadgets=(_g("variable"),),
        extra=(),
        start=Owner.ATTACKER,
        plies=_plies("a a2-b2 a2-b2"),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("d1"), NORTH, blocked=True),),
    ),
    GadgetTrace(
        name="fanout_both_outputs",
        width=4, height=5, havens=(),
        gadgets=(_g("fanout"),),
        extra=_extra(whites="b1"),
        start=Owner.DEFENDER,
        plies=_plies("d b1-b4 b1-b4", "a a3-b3 a3-b3"),
        final_forced=_set("-"),
        lines=(
            LineCheck(parse_square("d4"), WEST),
            LineCheck(parse_square("c2"), NORTH),
        ),
    ),
    GadgetTrace(
        name="choice_exit_up",
        width=6, height=6, havens=(),
        gadgets=(_g("choice"),),
        extra=_extra(whites="d1"),
        start=Owner.DEFENDER,
        plies=_plies("d d1-d3 d1-d3", "a c4-c3|c2-c3 c4-c3", "d - d3-d6"),
    ),
    GadgetTrace(
        name="choice_exit_side",
        width=6, height=6, havens=(),
        gadgets=(_g("choice"),),
        extra=_extra(whites="d1"),
        start=Owner.DEFENDER,
        plies=_plies("d d1-d3 d1-d3", "a c4-c3|c2-c3 c2-c3", "d - d3-f3"),
    ),
    GadgetTrace(
        name="and_both_inputs",
        width=5, height=9, havens=(),
        gadgets=(_g("and"),),
        extra=_extra(whites="a3 d1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d a3-b3 a3-b3",
            "a c4-c3 c4-c3",
            "d d1-d3 d1-d3",
            "a c9-c3 c9-c3",
            "d - a9-e9",
        ),
    ),
    GadgetTrace(
        name="or_input_up",
        width=6, height=9, havens=(),
        gadgets=(_g("or"),),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies("d c1-c4 c1-c4", "a d9-d4 d9-d4", "d - b9-f9"),
    ),
    GadgetTrace(
        name="or_input_side",
        width=6, height=9, havens=(),
        gadgets=(_g("or"),),
        extra=_extra(whites="a4"),
        start=Owner.DEFENDER,
        plies=_plies("d a4-c4 a4-c4", "a d9-d4 d9-d4", "d - b9-f9"),
    ),
)


# ---------------------------------------------------------------------------
# Pairing traces: every gadget joined to connecting wires, replayed end to
# end.  Offsets reproduce the published pairings exactly.

COMPOSITE_TRACES: Tuple[GadgetTrace, ...] = (
    GadgetTrace(
        name="wire_into_wire",
        width=9, height=6, havens=(),
        gadgets=(_g("wire"), _g("wire", "transpose", 4, 1)),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4 c1-c4",
            "a d3-c3 d3-c3",
            "d a4-h4 a4-h4",
            "a g5-g4 g5-g4",
            "d - h2-h6",
        ),
    ),
    GadgetTrace(
        name="wire_into_defender_victory",
        width=9, height=6, havens=_sq_tuple("i6"),
        gadgets=(_g("wire"), _g("defender_victory", "transpose", 2, 1)),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4|h4-h6 c1-c4",
            "a d3-c3 d3-c3",
            "d a4-f4|h4-h6 a4-f4",
            "a i5-f5|c5-f5 i5-f5",
            "d h4-h6|h4-f4 h4-h6",
            "a - f5-g5",
            "d h6-i6 h6-i6",
        ),
        expect_terminal=Terminal.DEFENDER_WIN,
    ),
    GadgetTrace(
        name="wire_into_attacker_victory",
        width=12, height=7, havens=_sq_tuple("l7"),
        gadgets=(
            _g("wire", "identity", 0, -1, swap=True),
            _g("attacker_victory", "transpose", 5, 2),
        ),
        extra=_extra(blacks="c1"),
        start=Owner.ATTACKER,
        plies=_plies(
            "a c1-c3|l3-l5|j6-h6 c1-c3",
            "d d2-c2|k3-k7 d2-c2",
            "a a3-j3|l3-l5|j6-h6 a3-j3",
        ),
        expect_terminal=Terminal.ATTACKER_WIN,
    ),
    GadgetTrace(
        name="variable_wire_declined",
        width=6, height=6, havens=(),
        gadgets=(_g("variable", "rot270"), _g("wire", "transpose", 1, 0)),
        extra=(),
        start=Owner.ATTACKER,
        plies=_plies("a b6-b5 b6-b5"),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("a3"), EAST, blocked=True),),
    ),
    GadgetTrace(
        name="variable_wire_claimed",
        width=6, height=6, havens=(),
        gadgets=(_g("variable", "rot270"), _g("wire", "transpose", 1, 0)),
        extra=(),
        start=Owner.DEFENDER,
        plies=_plies(
            "d b1-b2 b1-b2",
            "a - b6-a6",
            "d a3-e3 a3-e3",
            "a d4-d3 d4-d3",
            "d - e1-e6",
        ),
    ),
    GadgetTrace(
        name="fanout_with_wires",
        width=13, height=9, havens=(),
        gadgets=(
            _g("wire"),
            _g("fanout", "rot270", 4, 1),
            _g("wire", "identity", 5, 4),
            _g("wire", "transpose", 8, 0),
        ),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4 c1-c4",
            "a d3-c3 d3-c3",
            "d a4-h4 a4-h4",
            "a g5-g4 g5-g4",
            "d h2-h8|f3-l3 h2-h8",
            "a i7-h7 i7-h7",
            "d f3-l3 f3-l3",
            "a k4-k3|c3-k3 k4-k3",
        ),
        final_forced=_set("-"),
        lines=(
            LineCheck(parse_square("f8"), EAST),
            LineCheck(parse_square("l1"), NORTH),
        ),
    ),
    GadgetTrace(
        name="and_with_wires",
        width=15, height=14, havens=(),
        gadgets=(
            _g("wire", "identity", 0, 5),
            _g("wire", "transpose", 4, 0),
            _g("and", "transpose", 5, 5),
            _g("wire", "identity", 11, 9),
        ),
        extra=_extra(whites="c1 a3"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c9|a3-h3|h9-c9 c1-c9",
            "a d8-c8 d8-c8",
            "d a3-h3 a3-h3",
            "a g4-g3 g4-g3",
            "d h1-h7 h1-h7",
            "a i8-h8 i8-h8",
            "d a9-h9 a9-h9",
            "a n8-h8 n8-h8",
            "d n6-n13 n6-n13",
            "a o12-n12 o12-n12",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("l13"), EAST),),
    ),
    GadgetTrace(
        name="choice_with_wires_up",
        width=15, height=9, havens=(),
        gadgets=(
            _g("wire"),
            _g("choice", "transpose", 5, 0),
            _g("wire", "identity", 5, 4),
            _g("wire", "transpose", 10, 1),
        ),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4 c1-c4",
            "a d3-c3 d3-c3",
            "d a4-h4|a4-n4 a4-h4",
            "a g3-h3|i3-h3 g3-h3",
            "d h4-h8|h4-n4 h4-h8",
            "a i7-h7|h3-h7 i7-h7",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("f8"), EAST),),
    ),
    GadgetTrace(
        name="choice_with_wires_side",
        width=15, height=9, havens=(),
        gadgets=(
            _g("wire"),
            _g("choice", "transpose", 5, 0),
            _g("wire", "identity", 5, 4),
            _g("wire", "transpose", 10, 1),
        ),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c4 c1-c4",
            "a d3-c3 d3-c3",
            "d a4-h4|a4-n4 a4-h4",
            "a g3-h3|i3-h3 g3-h3",
            "d h4-h8|h4-n4 h4-n4",
            "a m5-m4 m5-m4",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("n2"), NORTH),),
    ),
    GadgetTrace(
        name="or_with_wires_first_input",
        width=14, height=14, havens=(),
        gadgets=(
            _g("wire", "transpose", 3, 0),
            _g("wire", "identity", 0, 4),
            _g("or", "identity", 4, 4),
            _g("wire", "transpose", 9, 10),
        ),
        extra=_extra(whites="a3"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d a3-g3 a3-g3",
            "a f4-f3 f4-f3",
            "d g1-g8 g1-g8",
            "a h13-h8 h13-h8",
            "d f13-m13|g8-c8 f13-m13",
            "a l14-l13|f3-f8|b8-f8 l14-l13",
            "d g8-c8 g8-c8",
            "a d7-c7 d7-c7",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("m11"), NORTH),),
    ),
    GadgetTrace(
        name="or_with_wires_second_input",
        width=14, height=14, havens=(),
        gadgets=(
            _g("wire", "transpose", 3, 0),
            _g("wire", "identity", 0, 4),
            _g("or", "identity", 4, 4),
            _g("wire", "transpose", 9, 10),
        ),
        extra=_extra(whites="c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d c1-c8 c1-c8",
            "a d7-c7 d7-c7",
            "d a8-g8 a8-g8",
            "a h13-h8 h13-h8",
            "d f13-m13|g8-g3 f13-m13",
            "a l14-l13|f4-f8 l14-l13",
            "d g8-g3 g8-g3",
            "a f4-f3 f4-f3",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("m11"), NORTH),),
    ),
    GadgetTrace(
        name="or_with_wires_both_inputs_first_then_second",
        width=14, height=14, havens=(),
        gadgets=(
            _g("wire", "transpose", 3, 0),
            _g("wire", "identity", 0, 4),
            _g("or", "identity", 4, 4),
            _g("wire", "transpose", 9, 10),
        ),
        extra=_extra(whites="a3 c1"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d a3-g3|c1-c8 a3-g3",
            "a f4-f3 f4-f3",
            "d g1-g8|c1-c8 g1-g8",
            "a h13-h8 h13-h8",
            "d f13-m13|g8-c8|c1-c8 f13-m13",
            "a l14-l13|f3-f8|b8-f8 l14-l13",
            "d g8-c8|c1-c8 c1-c8",
            "a d7-c7|f3-f8 d7-c7",
        ),
        final_forced=_set("-"),
        lines=(LineCheck(parse_square("m11"), NORTH),),
    ),
    GadgetTrace(
        name="or_with_wires_both_inputs_second_then_first",
        width=14, height=14, havens=(),
        gadgets=(
            _g("wire", "transpose", 3, 0),
            _g("wire", "identity", 0, 4),
            _g("or", "identity", 4, 4),
            _g("wire", "transpose", 9, 10),
        ),
        extra=_extra(whites="c1 a3"),
        start=Owner.DEFENDER,
        plies=_plies(
            "d a3-g3|c1-c8 c1-c8",
            "a d7-c7 d7-c7",
            "d a8-g8|a3-g3 a8-g8",
            "a h13-h8 h13-h8",
            "d f13-m13|a3-g3|g8-g3 f13-m13",
            "a l14-l13|f4-f8 l14-l13",
            "d a3-g3|g8-g3 a3-g3",
            "a f4-f3|f4-f8 f4-f3",
        ),
        final_forced=_set("-"),
        lines=(
            LineCheck(parse_square("m11"), NORTH),
            LineCheck(parse_square("g1"), NORTH, blocked=True),
        ),
    ),
)


def catalog() -> Dict[str, object]:
    """All templates plus every transcribed trace suite."""
    return {
        "templates": dict(TEMPLATES),
        "template_traces": {t.name: t for t in TEMPLATE_TRACES},
        "composite_traces": {t.name: t for t in COMPOSITE_TRACES},
    }


def all_traces() -> Tuple[GadgetTrace, ...]:
    return TEMPLATE_TRACES + COMPOSITE_TRACES


def verify_all(traces: Optional[Sequence[GadgetTrace]] = None) -> List[TraceReport]:
    return [verify_trace(t) for t in (traces if traces is not None else all_traces())]

"""Gadget template catalog: figure layouts, ports and placement transforms.

Each template is a frozen coordinate list transcribed once from the figures
(several figure FENs drop trailing empty rows, so coordinates are the golden
form).  Templates are placed on boards through the eight orthogonal
transforms plus translation; soldier colors can be swapped for kingless
templates (the True-player flip).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from .rules import (
    ATTACKER,
    BoardGeometry,
    DEFENDER,
    GameState,
    KING,
    Kind,
    Move,
    Owner,
    Piece,
    RuleConfig,
    Square,
    parse_square,
)


class PortDirection(Enum):
    INBOUND = "inbound"
    OUTBOUND = "outbound"


class Axis(Enum):
    ROW = "row"
    COLUMN = "column"


@dataclass(frozen=True)
class Port:
    """A signal line of a gadget.

    ``entry_square`` is where an activating soldier lands (inbound) or the
    square the departing soldier leaves from (outbound); ``heading`` is the
    direction of travel of the soldier using the port.
    """

    name: str
    axis: Axis
    index: int
    direction: PortDirection
    entry_square: Square
    heading: Tuple[int, int]


@dataclass(frozen=True)
class GadgetTemplate:
    name: str
    width: int
    height: int
    pieces: Dict[Square, Piece]
    ports: Tuple[Port, ...]
    haven_anchor: Optional[Square] = None  # relative corner that must be a haven

    def port(self, name: str) -> Port:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(f"{self.name} has no port {name!r}")

    @property
    def has_king(self) -> bool:
        return any(p.kind is Kind.KING for p in self.pieces.values())


class OverlapError(ValueError):
    pass


class AnchorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Orthogonal transforms (the dihedral group of the square) plus translation.

_MATRICES = {
    "identity": (1, 0, 0, 1),
    "rot90": (0, -1, 1, 0),  # counter-clockwise quarter turn
    "rot180": (-1, 0, 0, -1),
    "rot270": (0, 1, -1, 0),
    "flip_x": (-1, 0, 0, 1),  # mirror columns
    "flip_y": (1, 0, 0, -1),  # mirror rows
    "transpose": (0, 1, 1, 0),
    "anti_transpose": (0, -1, -1, 0),
}


@dataclass(frozen=True)
class Transform:
    """box-normalized orthogonal map plus translation: a template square is
    mapped into the transformed box [0,w')x[0,h'), then shifted by offset."""

    kind: str = "identity"
    offset: Tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if self.kind not in _MATRICES:
            raise ValueError(f"unknown transform {self.kind!r}")

    def swaps_axes(self) -> bool:
        a, b, c, d = _MATRICES[self.kind]
        return a == 0

    def box(self, width: int, height: int) -> Tuple[int, int]:
        return (height, width) if self.swaps_axes() else (width, height)

    def apply(self, s: Square, width: int, height: int) -> Square:
        a, b, c, d = _MATRICES[self.kind]
        x = a * s.col + b * s.row
        y = c * s.col + d * s.row
        # normalize into the transformed box
        xs = [a * u + b * v for u in (0, width - 1) for v in (0, height - 1)]
        ys = [c * u + d * v for u in (0, width - 1) for v in (0, height - 1)]
        return Square(x - min(xs) + self.offset[0], y - min(ys) + self.offset[1])

    def apply_heading(self, heading: Tuple[int, int]) -> Tuple[int, int]:
        a, b, c, d = _MATRICES[self.kind]
        dx, dy = heading
        return (a * dx + b * dy, c * dx + d * dy)

    def then_translate(self, dx: int, dy: int) -> "Transform":
        return Transform(self.kind, (self.offset[0] + dx, self.offset[1] + dy))


@dataclass(frozen=True)
class PlacedGadget:
    """A template instantiated on a board."""

    template: GadgetTemplate
    transform: Transform
    swap_colors: bool
    pieces: Dict[Square, Piece]
    ports: Tuple[Port, ...]
    box: Tuple[Square, Square]  # inclusive corners (low, high)

    def port(self, name: str) -> Port:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(f"no port {name!r}")


def instantiate(
    template: GadgetTemplate,
    transform: Transform,
    board: BoardGeometry,
    occupied: Optional[Dict[Square, Piece]] = None,
    swap_colors: bool = False,
) -> PlacedGadget:
    """Place *template* on *board*; errors on overlap or a missing haven
    anchor.  Color swap is the True-player flip and needs a kingless
    template."""
    if swap_colors and template.has_king:
        raise ValueError(f"{template.name} holds the King; colors cannot swap")
    w, h = template.width, template.height

    pieces: Dict[Square, Piece] = {}
    anchored: List[Square] = []
    for s, p in template.pieces.items():
        target = transform.apply(s, w, h)
        if not board.contains(target):
            raise OverlapError(f"{template.name} piece at {target.name} leaves the board")
        if swap_colors:
            p = Piece(p.owner.opponent, p.kind)
        if occupied is not None and target in occupied:
            raise OverlapError(f"{template.name} collides at {target.name}")
        pieces[target] = p
        anchored.append(target)
    for p in template.ports:
        target = transform.apply(p.entry_square, w, h)
        if not board.contains(target):
            raise OverlapError(f"{template.name} port square {target.name} leaves the board")
        anchored.append(target)
    lo = Square(min(s.col for s in anchored), min(s.row for s in anchored))
    hi = Square(max(s.col for s in anchored), max(s.row for s in anchored))

    if template.haven_anchor is not None:
        anchor = transform.apply(template.haven_anchor, w, h)
        if anchor not in board.havens:
            raise AnchorError(
                f"{template.name} needs a haven at {anchor.name}"
            )

    ports = tuple(
        Port(
            name=p.name,
            axis=(
                p.axis
                if not transform.swaps_axes()
                else (Axis.ROW if p.axis is Axis.COLUMN else Axis.COLUMN)
            ),
            index=(
                transform.apply(p.entry_square, w, h).row
                if (p.axis is Axis.ROW) != transform.swaps_axes()
                else transform.apply(p.entry_square, w, h).col
            ),
            direction=p.direction,
            entry_square=transform.apply(p.entry_square, w, h),
            heading=transform.apply_heading(p.heading),
        )
        for p in template.ports
    )
    return PlacedGadget(
        template=template,
        transform=transform,
        swap_colors=swap_colors,
        pieces=pieces,
        ports=ports,
        box=(lo, hi),
    )


# ---------------------------------------------------------------------------
# The transcribed templates (native figure orientation, 0-based coordinates).

def _pieces(blacks: str = "", whites: str = "", king: str = "") -> Dict[Square, Piece]:
    out: Dict[Square, Piece] = {}
    for name in blacks.split():
        out[parse_square(name)] = ATTACKER
    for name in whites.split():
        out[parse_square(name)] = DEFENDER
    if king:
        out[parse_square(king)] = KING
    return out


def _port(name, axis, direction, entry, heading) -> Port:
    entry_sq = parse_square(entry)
    index = entry_sq.row if axis is Axis.ROW else entry_sq.col
    return Port(name, axis, index, direction, entry_sq, heading)


NORTH, SOUTH, EAST, WEST = (0, 1), (0, -1), (1, 0), (-1, 0)

WIRE = GadgetTemplate(
    name="wire",
    width=4,
    height=5,
    pieces=_pieces(blacks="c5 b4 d3", whites="a4"),
    ports=(
        _port("in", Axis.COLUMN, PortDirection.INBOUND, "c4", NORTH),
        _port("out", Axis.ROW, PortDirection.OUTBOUND, "a4", EAST),
    ),
)

DEFENDER_VICTORY = GadgetTemplate(
    name="defender_victory",
    width=5,
    height=7,
    pieces=_pieces(
        blacks="d7 a6 c5 e5 b4 d4",
        whites="b7 c7 e4",
        king="c6",
    ),
    ports=(_port("in", Axis.COLUMN, PortDirection.INBOUND, "c4", NORTH),),
    haven_anchor=parse_square("e7"),
)

ATTACKER_VICTORY = GadgetTemplate(
    name="attacker_victory",
    width=5,
    height=7,
    pieces=_pieces(
        blacks="a7 d5 e5 d1",
        whites="d7 b5 c5 e4 d2",
        king="a6",
    ),
    ports=(_port("in", Axis.COLUMN, PortDirection.INBOUND, "a5", NORTH),),
    haven_anchor=parse_square("e7"),
)

VARIABLE = GadgetTemplate(
    name="variable",
    width=6,
    height=2,
    pieces=_pieces(blacks="a2 d2", whites="c2 f2 d1"),
    ports=(_port("out", Axis.COLUMN, PortDirection.OUTBOUND, "d1", NORTH),),
)

DUMMY_VARIABLE = GadgetTemplate(
    name="dummy_variable",
    width=6,
    height=2,
    pieces=_pieces(blacks="a2 d2", whites="c2 f2"),
    ports=(),
)

FANOUT = GadgetTemplate(
    name="fanout",
    width=4,
    height=5,
    pieces=_pieces(blacks="b5 c4 a3", whites="d4 c2"),
    ports=(
        _port("in", Axis.COLUMN, PortDirection.INBOUND, "b4", NORTH),
        _port("out_side", Axis.ROW, PortDirection.OUTBOUND, "d4", WEST),
        _port("out_up", Axis.COLUMN, PortDirection.OUTBOUND, "c2", NORTH),
    ),
)

CHOICE = GadgetTemplate(
    name="choice",
    width=6,
    height=6,
    pieces=_pieces(blacks="b5 c4 a3 c3 c2", whites="a6 b3"),
    ports=(
        _port("in", Axis.COLUMN, PortDirection.INBOUND, "d3", NORTH),
        _port("out_up", Axis.COLUMN, PortDirection.OUTBOUND, "d3", NORTH),
        _port("out_side", Axis.ROW, PortDirection.OUTBOUND, "d3", EAST),
    ),
)

AND = GadgetTemplate(
    name="and",
    width=5,
    height=9,
    pieces=_pieces(blacks="c9 d5 c4 c3 e3", whites="a9 d3 c1"),
    ports=(
        _port("in_first", Axis.ROW, PortDirection.INBOUND, "b3", EAST),
        _port("in_second", Axis.COLUMN, PortDirection.INBOUND, "d3", NORTH),
        _port("out", Axis.ROW, PortDirection.OUTBOUND, "a9", EAST),
    ),
)

OR = GadgetTemplate(
    name="or",
    width=6,
    height=9,
    pieces=_pieces(blacks="d9 d4 f4", whites="b9 e4 d2"),
    ports=(
        _port("in_up", Axis.COLUMN, PortDirection.INBOUND, "c4", NORTH),
        _port("in_side", Axis.ROW, PortDirection.INBOUND, "c4", EAST),
        _port("out", Axis.ROW, PortDirection.OUTBOUND, "b9", EAST),
    ),
)

TEMPLATES: Dict[str, GadgetTemplate] = {
    t.name: t
    for t in (
        WIRE,
        DEFENDER_VICTORY,
        ATTACKER_VICTORY,
        VARIABLE,
        DUMMY_VARIABLE,
        FANOUT,
        CHOICE,
        AND,
        OR,
    )
}


def fragment_state(
    width: int,
    height: int,
    placed: Iterable[PlacedGadget],
    extra: Dict[Square, Piece],
    to_move: Owner,
    havens: Iterable[Square] = (),
    config: Optional[RuleConfig] = None,
) -> GameState:
    """Assemble a gadget-fragment position.  Kingless boards run in fragment
    mode (King-absence terminal checks suppressed)."""
    pieces: Dict[Square, Piece] = {}
    for g in placed:
        for s, p in g.pieces.items():
            if s in pieces:
                raise OverlapError(f"two gadgets share {s.name}")
            pieces[s] = p
    for s, p in extra.items():
        if s in pieces:
            raise OverlapError(f"extra piece collides at {s.name}")
        pieces[s] = p
    geometry = BoardGeometry.fragment(width, height, havens)
    has_king = any(p.kind is Kind.KING for p in pieces.values())
    return GameState(
        geometry=geometry,
        pieces=pieces,
        to_move=to_move,
        config=config or RuleConfig(),
        fragment_mode=not has_king,
    )

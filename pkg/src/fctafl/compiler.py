"""Compile a constraint-logic graph into one legal board position.

Layout: a deterministic diagonal staircase.  Variables sit along the bottom
edge, interior nodes climb in topological layers up and to the right, and
the victory gadget anchors on the top-right corner haven.  Every edge is
realized as a chain of at least one turning wire; signals always travel
north or east, so three wire orientations cover all routes.  A static
interference pass rejects layouts whose pieces could reach foreign gadgets,
and a scripted simulation replays whole games on compiled boards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .circuits import CircuitGraph, Edge, Node
from .fen import emit_fen
from .gadgets import (
    GadgetTemplate,
    PlacedGadget,
    Port,
    TEMPLATES,
    Transform,
    instantiate,
)
from .rules import (
    BoardGeometry,
    GameState,
    Kind,
    Move,
    Owner,
    Piece,
    RuleConfig,
    Square,
    Terminal,
    capture_or_winning_moves,
    apply_move,
    legal_moves,
    parse_square,
    terminal_status,
)
from .solver import Outcome, SearchLimits, Verdict, refute, solve

NORTH, SOUTH, EAST, WEST = (0, 1), (0, -1), (1, 0), (-1, 0)


class LayoutError(ValueError):
    pass


class InterferenceError(ValueError):
    def __init__(self, report: "InterferenceReport"):
        super().__init__(f"{len(report.violations)} interference violations")
        self.report = report


class ScriptDiverged(AssertionError):
    def __init__(self, ply: int, message: str, observed: Sequence[Move] = ()):
        super().__init__(f"ply {ply}: {message}")
        self.ply = ply
        self.observed = list(observed)


# wire orientation lookup: (in-heading, out-heading) -> transform kind
_WIRE_KINDS = {
    (NORTH, EAST): "identity",
    (NORTH, WEST): "flip_x",
    (SOUTH, EAST): "flip_y",
    (SOUTH, WEST): "rot180",
    (EAST, NORTH): "transpose",
    (EAST, SOUTH): "rot270",
    (WEST, NORTH): "rot90",
    (WEST, SOUTH): "anti_transpose",
}

# template orientation per node kind: variables stand upright with their
# free soldier exiting east (the figures' variable-plus-wire pairing), and
# fanout is mirrored so both of its outputs leave north or east
_NODE_KINDS = {
    "variable": ("variable", "rot270"),
    "dummy_variable": ("dummy_variable", "rot270"),
    "fanout": ("fanout", "flip_x"),
    "choice": ("choice", "identity"),
    "and": ("and", "identity"),
    "or": ("or", "identity"),
}

# circuit-file port names -> template port names
_PORT_MAP = {
    ("variable", "out"): "out",
    ("fanout", "in"): "in",
    ("fanout", "out1"): "out_side",
    ("fanout", "out2"): "out_up",
    ("choice", "in"): "in",
    ("choice", "out1"): "out_up",
    ("choice", "out2"): "out_side",
    ("and", "in1"): "in_first",
    ("and", "in2"): "in_second",
    ("and", "out"): "out",
    ("or", "in1"): "in_up",
    ("or", "in2"): "in_side",
    ("or", "out"): "out",
    ("victory", "in"): "in",
}


def _template_port(kind: str, circuit_port: str) -> str:
    return _PORT_MAP[(kind, circuit_port)]


# relative reply scripts per (template, inbound port): the moves the False
# player is forced to answer with after that port's entry capture
_ENTRY_REPLIES: Dict[Tuple[str, str], Tuple[str, ...]] = {
    ("wire", "in"): ("d3-c3",),
    ("fanout", "in"): ("a3-b3",),
    ("choice", "in"): ("c4-c3", "c2-c3"),
    ("and", "in_first"): ("c4-c3",),
    ("and", "in_second"): ("c9-c3",),
    ("or", "in_up"): ("d9-d4",),
    ("or", "in_side"): ("d9-d4",),
    ("defender_victory", "in"): ("d7-d4",),
    ("attacker_victory", "in"): (),
}

# action squares (entries, reply landings, completion paths) per template,
# used as gadget territory by the interference check
_ACTION_SQUARES: Dict[str, Tuple[str, ...]] = {
    "wire": ("c4", "c3"),
    "variable": ("e2", "b2"),
    "dummy_variable": ("e2", "b2"),
    "fanout": ("b4", "b3"),
    "choice": ("d3", "c3"),
    "and": ("b3", "c3", "d3"),
    "or": ("c4", "d4"),
    "defender_victory": ("c4", "d4", "d6", "e6", "e7"),
    "attacker_victory": ("a5", "d3", "b6", "c6", "d6", "e6", "e7"),
}


@dataclass(frozen=True)
class Lane:
    """The straight corridor a signal travels between two placed gadgets."""

    edge_id: str
    index: int
    squares: Tuple[Square, ...]
    src_key: str
    dst_key: str


@dataclass
class Placement:
    board: BoardGeometry
    true_side: Owner
    spacing: int
    nodes: Dict[str, PlacedGadget] = field(default_factory=dict)
    chains: Dict[str, List[PlacedGadget]] = field(default_factory=dict)
    lanes: List[Lane] = field(default_factory=list)

    def gadget_items(self) -> List[Tuple[str, PlacedGadget]]:
        items = [(f"node:{nid}", g) for nid, g in sorted(self.nodes.items())]
        for eid in sorted(self.chains):
            for i, g in enumerate(self.chains[eid]):
                items.append((f"wire:{eid}:{i}", g))
        return items


@dataclass
class Violation:
    description: str
    squares: Tuple[Square, ...]
    gadgets: Tuple[str, str]

    def __str__(self) -> str:
        where = ",".join(s.name for s in self.squares[:4])
        return f"{self.description} [{self.gadgets[0]} / {self.gadgets[1]}] at {where}"


@dataclass
class InterferenceReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.clean:
            return "clean"
        return "\n".join(str(v) for v in self.violations)


def _territory(g: PlacedGadget) -> FrozenSet[Square]:
    squares = set(g.pieces)
    t = g.template
    for name in _ACTION_SQUARES.get(t.name, ()):
        squares.add(g.transform.apply(parse_square(name), t.width, t.height))
    return frozenset(squares)


def check_interference(state: GameState, placement: Placement) -> InterferenceReport:
    """Static cross-gadget safety: no overlapping territory, no foreign piece
    on a signal lane, no open ray into foreign territory off-lane, and no
    orthogonal adjacency between pieces of different gadgets."""
    report = InterferenceReport()
    items = placement.gadget_items()
    territory = {key: _territory(g) for key, g in items}
    owner_of: Dict[Square, str] = {}
    for key, g in items:
        for s in territory[key]:
            if s in owner_of and owner_of[s] != key:
                report.violations.append(
                    Violation("territory overlap", (s,), (owner_of[s], key))
                )
            owner_of[s] = key
    piece_owner: Dict[Square, str] = {}
    for key, g in items:
        for s in g.pieces:
            piece_owner[s] = key

    lane_squares: Dict[Square, List[Lane]] = {}
    for lane in placement.lanes:
        for s in lane.squares:
            lane_squares.setdefault(s, []).append(lane)

    # a signal lane may only hold pieces of its source gadget (those are the
    # ones its script clears); anything else blocks the signal
    for lane in placement.lanes:
        for s in lane.squares[1:-1]:
            holder = piece_owner.get(s)
            if holder is not None and holder != lane.src_key:
                report.violations.append(
                    Violation(
                        f"lane for {lane.edge_id} obstructed", (s,), (holder, lane.edge_id)
                    )
                )

    # port entry squares of each gadget, the sensitive spots for stray rays
    entry_of: Dict[Square, str] = {}
    for key, g in items:
        for port in g.ports:
            entry_of.setdefault(port.entry_square, key)

    geo = state.geometry
    for key, g in items:
        for s in sorted(g.pieces):
            for d in (NORTH, SOUTH, EAST, WEST):
                cur = s
                while True:
                    cur = cur.shifted(*d)
                    if not geo.contains(cur) or cur in state.pieces:
                        break
                    holder = entry_of.get(cur)
                    if holder is not None and holder != key and cur not in lane_squares:
                        report.violations.append(
                            Violation(
                                "open ray onto foreign port entry", (s, cur), (key, holder)
                            )
                        )
                        break
            for d in (NORTH, SOUTH, EAST, WEST):
                n = s.shifted(*d)
                other = piece_owner.get(n)
                if other is not None and other != key:
                    report.violations.append(
                        Violation("adjacent foreign pieces", (s, n), (key, other))
                    )

    # the False player must have no rest-position capture reaching into a
    # foreign gadget (the True player's useless wire deviations are tolerated
    # by the construction; a False cross-gadget capture can derail a script)
    from .rules import legal_moves_unfiltered, _captures_after  # noqa: PLC0415

    false_side = placement.true_side.opponent
    probe = state if state.to_move is false_side else state.with_to_move(false_side)
    for move in legal_moves_unfiltered(probe):
        caps = _captures_after(probe, move, probe.pieces[move.src])
        mover_key = piece_owner.get(move.src)
        for victim in caps:
            victim_key = piece_owner.get(victim)
            if victim_key is not None and victim_key != mover_key:
                report.violations.append(
                    Violation(
                        f"cross-gadget capture threat {move.name}",
                        (move.src, victim),
                        (mover_key or "?", victim_key),
                    )
                )
    # deduplicate symmetric adjacency findings
    seen = set()
    unique = []
    for v in report.violations:
        key = (v.description, frozenset(v.squares))
        if key not in seen:
            seen.add(key)
            unique.append(v)
    report.violations = unique
    return report


# ---------------------------------------------------------------------------
# Layout

_SLOT_W = 6
_NODE_H = 9  # tallest interior template


def _heading_of(port: Port) -> Tuple[int, int]:
    return port.heading


@dataclass
class _Router:
    spacing: int
    occupied: Dict[Square, Piece]
    swap_colors: bool = False

    def place_wire(
        self,
        in_heading: Tuple[int, int],
        out_heading: Tuple[int, int],
        entry: Square,
        board: BoardGeometry,
    ) -> PlacedGadget:
        kind = _WIRE_KINDS[(in_heading, out_heading)]
        template = TEMPLATES["wire"]
        base = Transform(kind).apply(
            parse_square("c4"), template.width, template.height
        )
        transform = Transform(kind, (entry.col - base.col, entry.row - base.row))
        placed = instantiate(
            template, transform, board, occupied=self.occupied,
            swap_colors=self.swap_colors,
        )
        self.occupied.update(placed.pieces)
        return placed


def _layers(graph: CircuitGraph) -> Dict[str, int]:
    order = graph.toposort()
    depth: Dict[str, int] = {}
    for node in order:
        ins = graph.inputs_of(node.id)
        if node.kind == "variable":
            depth[node.id] = 0
        elif ins:
            depth[node.id] = 1 + max(depth[e.src] for e in ins)
        else:
            depth[node.id] = 1
    return depth


def compile_circuit(
    graph: CircuitGraph, spacing: int = 2
) -> Tuple[GameState, Placement]:
    """Lay the graph out as one board position under the default rules.

    Raises LayoutError when the graph is unroutable (or has no victory node)
    and InterferenceError when the static safety pass flags the layout.
    """
    graph.validate()
    victory = graph.victory()
    if victory is None:
        raise LayoutError("no victory node")
    true_side = Owner.DEFENDER if victory.side == "defender" else Owner.ATTACKER
    swap = true_side is Owner.ATTACKER
    victory_template = (
        "defender_victory" if true_side is Owner.DEFENDER else "attacker_victory"
    )

    variables = graph.variables()
    if not variables:
        raise LayoutError("no variable nodes")
    names = {n.id for n in graph.nodes.values()}
    dummy_id = None
    if len(variables) % 2 == 1:
        dummy_id = "dummy"
        while dummy_id in names:
            dummy_id += "_"

    layers = _layers(graph)
    interior = sorted(
        (n for n in graph.nodes.values() if n.kind not in ("variable", "victory")),
        key=lambda n: (layers[n.id], n.id),
    )

    # provisional oversized board; the real one is sized after layout
    big = BoardGeometry(512, 512)
    occupied: Dict[Square, Piece] = {}
    placements: Dict[str, PlacedGadget] = {}

    def put(node_id: str, template: str, kind: str, ox: int, oy: int) -> PlacedGadget:
        placed = instantiate(
            TEMPLATES[template],
            Transform(kind, (ox, oy)),
            big,
            occupied=occupied,
            swap_colors=swap and template not in ("defender_victory", "attacker_victory"),
        )
        occupied.update(placed.pieces)
        placements[node_id] = placed
        return placed

    # band 0: variables stepped along the bottom, each slot on its own rows
    # so no slot's pieces can sight another slot down a shared rank
    stride_x = _SLOT_W + 6 + 2 * spacing
    x_cursor = 2
    riser_col: Dict[str, int] = {}
    slot_index = 0
    band_top = 1
    for var in variables:
        y = 1 + 7 * slot_index
        put(var.id, "variable", "rot270", x_cursor, y)
        # the riser column is offset so that no black piece's file lines up
        # with the hammer square of any downstream wire's exit soldier
        riser_col[var.id] = x_cursor + 5
        band_top = max(band_top, y + 5)
        x_cursor += stride_x
        slot_index += 1
    if dummy_id is not None:
        y = 1 + 7 * slot_index
        put(dummy_id, "dummy_variable", "rot270", x_cursor, y)
        band_top = max(band_top, y + 5)
        x_cursor += stride_x
        slot_index += 1

    # interior nodes: diagonal staircase by topological layer, with every
    # routing lane above the whole variable band
    y_cursor = band_top + 2 + spacing
    for node in interior:
        in_count = len(graph.inputs_of(node.id))
        y_cursor += 3 + 6 * in_count  # routing gap for this node's inbound turns
        template, kind = _NODE_KINDS[node.kind]
        put(node.id, template, kind, x_cursor, y_cursor)
        y_cursor += TEMPLATES[template].height + spacing
        x_cursor += stride_x

    # routing: every edge becomes a chain of >=1 wire; signals go north/east
    router = _Router(spacing, occupied, swap_colors=swap)
    chains: Dict[str, List[PlacedGadget]] = {}
    lanes: List[Lane] = []
    turn_rows: Dict[str, int] = {}

    def lane_between(eid, idx, a: Square, b: Square, src_key: str, dst_key: str):
        dx = (b.col > a.col) - (b.col < a.col)
        dy = (b.row > a.row) - (b.row < a.row)
        squares = [a]
        cur = a
        while cur != b:
            cur = cur.shifted(dx, dy)
            squares.append(cur)
        lanes.append(Lane(eid, idx, tuple(squares), src_key, dst_key))

    def route(edge: Edge, extra_rows: Iterable[int],
              extra_cols: Iterable[int] = ()) -> None:
        src = placements[edge.src]
        dst = placements[edge.dst]
        sport = src.port(_template_port(graph.nodes[edge.src].kind, edge.src_port))
        dport = dst.port(_template_port(graph.nodes[edge.dst].kind, edge.dst_port))
        s0, h1 = sport.entry_square, sport.heading
        s2, h2 = dport.entry_square, dport.heading
        src_origin = s0
        chain: List[PlacedGadget] = []

        def add_wire(in_h, out_h, entry: Square) -> PlacedGadget:
            placed = router.place_wire(in_h, out_h, entry, big)
            chain.append(placed)
            return placed

        if edge.src in riser_col:
            # variables exit east into a slot-local riser that turns north
            w = add_wire(EAST, NORTH, Square(riser_col[edge.src], s0.row))
            s0, h1 = w.port("out").entry_square, NORTH

        if h1 == NORTH and h2 == EAST:
            if s2.col <= s0.col - 2:
                raise LayoutError(f"{edge.id}: side target west of source lane")
            add_wire(NORTH, EAST, Square(s0.col, s2.row))
        elif h1 == EAST and h2 == NORTH:
            if s2.col <= s0.col:
                raise LayoutError(f"{edge.id}: column target west of source")
            add_wire(EAST, NORTH, Square(s2.col, s0.row))
        elif h1 == NORTH and h2 == NORTH:
            if s2.col <= s0.col - 2:
                raise LayoutError(f"{edge.id}: target column west of source lane")
            r = next(iter(extra_rows))
            add_wire(NORTH, EAST, Square(s0.col, r))
            add_wire(EAST, NORTH, Square(s2.col, r))
        elif h1 == EAST and h2 == EAST:
            c = next(iter(extra_cols), None)
            if c is None:
                raise LayoutError(f"{edge.id}: no turn column for east-to-east route")
            if not (s0.col < c and c - 2 < s2.col):
                raise LayoutError(f"{edge.id}: turn column {c} out of range")
            w = add_wire(EAST, NORTH, Square(c, s0.row))
            add_wire(NORTH, EAST, Square(c, s2.row))
        else:
            raise LayoutError(f"{edge.id}: unsupported headings {h1}->{h2}")

        # record lanes between consecutive stops
        stops: List[Tuple[Square, str]] = [(src_origin, f"node:{edge.src}")]
        for i, w in enumerate(chain):
            stops.append((w.port("in").entry_square, f"wire:{edge.id}:{i}"))
            stops.append((w.port("out").entry_square, f"wire:{edge.id}:{i}"))
        stops.append((s2, f"node:{edge.dst}"))
        idx = 0
        for i in range(0, len(stops) - 1, 2):
            a, akey = stops[i]
            b, bkey = stops[i + 1]
            lane_between(edge.id, idx, a, b, akey, bkey)
            idx += 1
        chains[edge.id] = chain

    # allocate turn rows per target node (deterministic) and route non-victory
    # edges first
    row_alloc: Dict[str, List[int]] = {}
    for node in interior:
        ins = sorted(graph.inputs_of(node.id), key=lambda e: e.id)
        base = placements[node.id].box[0].row - (3 + 6 * len(ins)) + 3
        row_alloc[node.id] = [base + 6 * i for i in range(len(ins))]
        cols = [placements[node.id].box[0].col - 3 - 6 * i for i in range(len(ins))]
        for i, e in enumerate(ins):
            route(e, [row_alloc[node.id][i]], [cols[i]])

    # victory last: extent-driven corner anchoring
    vic_edges = graph.inputs_of(victory.id)
    if len(vic_edges) != 1:
        raise LayoutError("victory node needs exactly one input")
    vic_edge = vic_edges[0]
    feeder = placements[vic_edge.src]
    fport = feeder.port(vic_edge.src_port)
    fx, fy = fport.entry_square.col, fport.entry_square.row

    extent_x = max(s.col for s in occupied) if occupied else 0
    extent_y = max(s.row for s in occupied) if occupied else 0
    turn_row = extent_y + 3 + spacing

    side = 7
    # a variable feeder climbs through its riser, so it reaches the victory
    # heading north and turns at turn_row like any other north feeder
    feeds_north = fport.heading == NORTH or vic_edge.src in riser_col
    need = max(
        extent_x + 6 + spacing,  # victory box right of everything
        # four clear rows between the last turn and the victory's bottom so
        # no wire soldier's rank lines up with the victory's own pieces
        (turn_row + 4 if feeds_north else fy + 4) + 7 + spacing,
        extent_y + 7 + spacing,
    )
    while side < need or ((side - 1) // 2) % 2 != 1:
        side += 2
    board = BoardGeometry(
        side,
        side,
        throne=None,
        havens=frozenset(
            {
                Square(0, 0),
                Square(0, side - 1),
                Square(side - 1, 0),
                Square(side - 1, side - 1),
            }
        ),
    )
    vx, vy = side - 5, side - 7
    vic_placed = instantiate(
        TEMPLATES[victory_template],
        Transform("identity", (vx, vy)),
        board,
        occupied=occupied,
    )
    occupied.update(vic_placed.pieces)
    placements[victory.id] = vic_placed
    route(vic_edge, [turn_row])

    # move everything onto the real board (re-instantiate to validate bounds)
    placement = Placement(board=board, true_side=true_side, spacing=spacing)
    placement.nodes = placements
    placement.chains = chains
    placement.lanes = lanes

    pieces: Dict[Square, Piece] = {}
    for key, g in placement.gadget_items():
        for s, p in g.pieces.items():
            if not board.contains(s):
                raise LayoutError(f"{key} spills off the {side}x{side} board at {s.name}")
            if s in pieces:
                raise LayoutError(f"{key} overlaps at {s.name}")
            pieces[s] = p

    state = GameState(
        geometry=board,
        pieces=pieces,
        to_move=true_side,
        config=RuleConfig(),
    )
    report = check_interference(state, placement)
    if not report.clean:
        raise InterferenceError(report)
    return state, placement


def emit_manifest(placement: Placement) -> str:
    """Diff-friendly text mapping node ids to rectangles and transforms."""
    lines = [
        f"board {placement.board.width}x{placement.board.height}",
        f"true-side {placement.true_side.value}",
        f"spacing {placement.spacing}",
    ]
    for nid in sorted(placement.nodes):
        g = placement.nodes[nid]
        lo, hi = g.box
        lines.append(
            f"node {nid} {g.template.name} {g.transform.kind} "
            f"{g.transform.offset[0]},{g.transform.offset[1]} {lo.name}:{hi.name}"
        )
    for eid in sorted(placement.chains):
        for i, g in enumerate(placement.chains[eid]):
            lo, hi = g.box
            lines.append(
                f"wire {eid} {i} {g.transform.kind} "
                f"{g.transform.offset[0]},{g.transform.offset[1]} {lo.name}:{hi.name}"
            )
    for lane in placement.lanes:
        path = f"{lane.squares[0].name}:{lane.squares[-1].name}"
        lines.append(f"lane {lane.edge_id} {lane.index} {path}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Scripted whole-game simulation

@dataclass
class SimPly:
    mover: Owner
    move: Move
    forced_size: int
    note: str = ""


@dataclass
class SimulationReport:
    victory_activated: bool
    confirmed: Optional[Outcome]
    plies: List[SimPly] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def summary(self) -> str:
        head = "victory activated" if self.victory_activated else "victory inactive"
        out = [head]
        if self.confirmed is not None:
            out.append(
                f"solver: {self.confirmed.verdict.value}"
                + (f" in {self.confirmed.plies}" if self.confirmed.plies else "")
            )
        out.extend(self.notes)
        return "; ".join(out)


def _abs_move(g: PlacedGadget, rel: str) -> Move:
    a, b = rel.split("-")
    t = g.template
    return Move(
        g.transform.apply(parse_square(a), t.width, t.height),
        g.transform.apply(parse_square(b), t.width, t.height),
    )


@dataclass
class _Hop:
    white_move: Move
    replies: FrozenSet[Move]  # False player's expected exact reply set
    reply: Optional[Move]  # the scripted pick
    gadget_key: str
    terminal: bool = False


def _edge_hops(placement: Placement, graph: CircuitGraph, edge: Edge,
               victory_template: str) -> List[_Hop]:
    """The white move / black reply skeleton of one edge's signal."""
    src = placement.nodes[edge.src]
    sport = src.port(_template_port(graph.nodes[edge.src].kind, edge.src_port))
    cur = sport.entry_square
    hops: List[_Hop] = []
    for i, wire in enumerate(placement.chains[edge.id]):
        entry = wire.port("in").entry_square
        replies = frozenset(_abs_move(wire, r) for r in _ENTRY_REPLIES[("wire", "in")])
        hops.append(
            _Hop(Move(cur, entry), replies, sorted(replies, key=Move.sort_key)[0],
                 f"wire:{edge.id}:{i}")
        )
        cur = wire.port("out").entry_square
    dst = placement.nodes[edge.dst]
    dst_node = graph.nodes[edge.dst]
    template = dst.template.name
    port = _template_port(dst_node.kind, edge.dst_port)
    entry = dst.port(port).entry_square
    reply_specs = _ENTRY_REPLIES[(template, port)]
    replies = frozenset(_abs_move(dst, r) for r in reply_specs)
    hops.append(
        _Hop(
            Move(cur, entry),
            replies,
            sorted(replies, key=Move.sort_key)[0] if replies else None,
            f"node:{edge.dst}",
            terminal=dst_node.kind == "victory" and template == "attacker_victory",
        )
    )
    return hops


def simulate_strategy(
    state: GameState,
    placement: Placement,
    graph: CircuitGraph,
    variable_choices: Sequence[str],
    choice_directions: Optional[Dict[str, str]] = None,
) -> SimulationReport:
    """Play the True player's scripted strategy: claim variables alternately,
    then propagate activations gadget by gadget.

    Every False-player ply asserts the engine's forced set equals the local
    script exactly; divergence raises ScriptDiverged.  Ends by confirming the
    outcome with the bounded solver.
    """
    choice_directions = dict(choice_directions or {})
    true_side = placement.true_side
    false_side = true_side.opponent
    victory = graph.victory()
    victory_template = placement.nodes[victory.id].template.name

    # claim bookkeeping
    variables = [n.id for n in graph.variables()]
    dummies = [nid for nid in placement.nodes if nid not in graph.nodes]
    unclaimed = sorted(variables) + sorted(dummies)
    white_queue = list(variable_choices)
    for pick in white_queue:
        if pick not in variables:
            raise ValueError(f"unknown variable {pick!r}")

    def claim_moves(owner: Owner) -> Dict[str, Move]:
        out = {}
        for nid in unclaimed:
            g = placement.nodes[nid]
            rel = "f2-e2" if owner is true_side else "a2-b2"
            out[nid] = _abs_move(g, rel)
        return out

    # precomputed edge scripts
    edge_hops = {
        e.id: _edge_hops(placement, graph, e, victory_template) for e in graph.edges
    }
    progress = {e.id: 0 for e in graph.edges}  # hops completed
    armed: List[str] = []  # edge ids whose next hop is playable
    waiting: List[str] = []  # edges delivered but gated (second AND input)
    and_first_done: Dict[str, bool] = {
        n.id: False for n in graph.nodes.values() if n.kind == "and"
    }
    or_fired: Dict[str, bool] = {
        n.id: False for n in graph.nodes.values() if n.kind == "or"
    }
    pending_reply: Optional[_Hop] = None
    victory_fired = False

    report = SimulationReport(victory_activated=False, confirmed=None)
    ply = 0

    def forced_now() -> List[Move]:
        return capture_or_winning_moves(state_ref[0])

    state_ref = [state]

    def play(move: Move, note: str) -> None:
        nonlocal ply
        ply += 1
        cur = state_ref[0]
        if move not in set(legal_moves(cur)):
            raise ScriptDiverged(ply, f"scripted move {move.name} illegal", legal_moves(cur))
        nxt, _ = apply_move(cur, move)
        report.plies.append(SimPly(cur.to_move, move, len(forced_now()), note))
        state_ref[0] = nxt

    def assert_false_set(scripted: FrozenSet[Move], allowed: FrozenSet[Move]) -> None:
        """The engine's forced set must contain every scripted reply, and
        every observed move must be scripted, a known standing capture, or a
        result-equivalent alternative (same landing square as a scripted
        reply; the alternatives the construction declares interchangeable)."""
        observed = frozenset(forced_now())
        landing = {m.dst for m in scripted}
        stray = [
            m
            for m in observed
            if m not in scripted and m not in allowed and m.dst not in landing
        ]
        missing = [m for m in scripted if m not in observed]
        if stray or missing:
            raise ScriptDiverged(
                ply + 1,
                f"false-player forced set mismatch: scripted "
                f"{sorted(m.name for m in scripted)}, observed "
                f"{sorted(m.name for m in observed)}"
                + (f", stray {sorted(m.name for m in stray)}" if stray else "")
                + (f", missing {sorted(m.name for m in missing)}" if missing else ""),
                sorted(observed, key=Move.sort_key),
            )

    def standing_false_captures() -> FrozenSet[Move]:
        """Known standing captures of the False player outside the scripts:
        un-fired OR inputs sniping the spent entry soldier."""
        cur = state_ref[0]
        out = set()
        for nid, g in placement.nodes.items():
            if g.template.name != "or":
                continue
            entry = g.port("in_up").entry_square
            holder = cur.pieces.get(entry)
            anvil = cur.pieces.get(entry.shifted(1, 0))
            hammer = entry.shifted(-1, 0)
            if (
                holder is not None
                and holder.owner is true_side
                and anvil is not None
                and anvil.owner is false_side
                and hammer not in cur.pieces
            ):
                # any false soldier with a clear path onto the hammer square
                col = hammer.col
                for row_dir in (-1, 1):
                    r = hammer.row
                    while True:
                        r += row_dir
                        s = Square(col, r)
                        if not cur.geometry.contains(s):
                            break
                        p = cur.pieces.get(s)
                        if p is not None:
                            if p.owner is false_side and p.kind is Kind.SOLDIER:
                                out.add(Move(s, hammer))
                            break
                for col_dir in (-1, 1):
                    c = hammer.col
                    while True:
                        c += col_dir
                        s = Square(c, hammer.row)
                        if not cur.geometry.contains(s):
                            break
                        p = cur.pieces.get(s)
                        if p is not None:
                            if p.owner is false_side and p.kind is Kind.SOLDIER:
                                out.add(Move(s, hammer))
                            break
        return frozenset(out)

    def false_standing_victory() -> FrozenSet[Move]:
        """The False player's permanent capture inside an attacker-victory
        gadget (the King taking the bait soldier)."""
        if victory_template != "attacker_victory":
            return frozenset()
        g = placement.nodes[victory.id]
        move = _abs_move(g, "a6-e6")
        cur = state_ref[0]
        if move.src in cur.pieces and move.dst not in cur.pieces:
            return frozenset({move})
        return frozenset()

    def arm_outputs(node_id: str, via_port: str) -> None:
        node = graph.nodes[node_id]
        outs = graph.outputs_of(node_id)
        ready: List[str] = []
        if node.kind == "variable":
            ready = [e.id for e in outs]
        elif node.kind == "fanout":
            ready = [e.id for e in outs]
        elif node.kind == "or":
            if not or_fired[node_id]:
                or_fired[node_id] = True
                ready = [e.id for e in outs]
        elif node.kind == "and":
            if via_port == "in_first":
                and_first_done[node_id] = True
            else:
                ready = [e.id for e in outs]
        elif node.kind == "choice":
            direction = choice_directions.get(node_id, "up")
            port = "out_up" if direction == "up" else "out_side"
            ready = [e.id for e in outs if e.src_port == port]
        for eid in sorted(ready):
            armed.append(eid)

    def next_hop_id() -> Optional[str]:
        for eid in sorted(armed):
            edge = next(e for e in graph.edges if e.id == eid)
            hops = edge_hops[eid]
            k = progress[eid]
            if k >= len(hops):
                continue
            # gate the AND's second input until the first fired
            if k == len(hops) - 1:
                node = graph.nodes[edge.dst]
                if node.kind == "and" and edge.dst_port == "in_second":
                    if not and_first_done[edge.dst]:
                        continue
                if node.kind == "and" and edge.dst_port == "in_first":
                    pass
                if node.kind == "or" and or_fired[edge.dst]:
                    continue  # second input is dead but harmless
            return eid
        return None

    # ---- claim phase -------------------------------------------------------
    while unclaimed:
        if state_ref[0].to_move is true_side:
            if white_queue:
                pick = white_queue.pop(0)
                if pick not in unclaimed:
                    raise ScriptDiverged(ply + 1, f"variable {pick} already claimed")
            else:
                spare = [nid for nid in unclaimed if nid in dummies]
                pick = (spare or sorted(unclaimed))[0]
            move = claim_moves(true_side)[pick]
            play(move, f"claim {pick}")
            unclaimed.remove(pick)
            if pick not in dummies:
                arm_outputs(pick, "out")
        else:
            scripted = frozenset(claim_moves(false_side).values())
            assert_false_set(scripted, standing_false_captures() | false_standing_victory())
            targets = [nid for nid in sorted(unclaimed) if nid not in dummies]
            pick = (targets or sorted(unclaimed))[0]
            move = claim_moves(false_side)[pick]
            play(move, f"blocked {pick}")
            unclaimed.remove(pick)

    # ---- propagation -------------------------------------------------------
    while True:
        if state_ref[0].to_move is false_side:
            if pending_reply is not None and pending_reply.replies:
                assert_false_set(
                    pending_reply.replies,
                    standing_false_captures() | false_standing_victory(),
                )
                play(pending_reply.reply, f"reply in {pending_reply.gadget_key}")
                pending_reply = None
                continue
            break  # False has no scripted reply: quiescent
        eid = next_hop_id()
        if eid is None:
            break
        hops = edge_hops[eid]
        k = progress[eid]
        hop = hops[k]
        play(hop.white_move, f"signal {eid} hop {k}")
        progress[eid] = k + 1
        if k + 1 == len(hops):
            armed.remove(eid)
            edge = next(e for e in graph.edges if e.id == eid)
            if graph.nodes[edge.dst].kind == "victory":
                victory_fired = True
            else:
                arm_outputs(edge.dst, edge.dst_port)
        if hop.terminal:
            pending_reply = None
            break
        pending_reply = hop if hop.replies else None

    # ---- resolution --------------------------------------------------------
    cur = state_ref[0]
    report.victory_activated = victory_fired
    if victory_fired and victory_template == "defender_victory":
        g = placement.nodes[victory.id]
        king_move = _abs_move(g, "c6-e6")
        if terminal_status(cur) is None and cur.to_move is true_side:
            if king_move in set(legal_moves(cur)):
                play(king_move, "victory completion")
        # the False player is now busted: prove it and surface the win line
        outcome = refute(state_ref[0], SearchLimits(max_plies=4))
        report.confirmed = outcome
        report.notes.append("win line: " + " ".join(m.name for m in outcome.line))
    elif victory_fired:
        term = terminal_status(state_ref[0])
        report.confirmed = Outcome(
            Verdict.ATTACKER_WIN if term is Terminal.ATTACKER_WIN else Verdict.DEFENDER_WIN,
            0,
            (),
        )
    else:
        outcome = refute(state_ref[0], SearchLimits(max_plies=4))
        report.confirmed = outcome
        report.notes.append("quiescent refutation: " + outcome.verdict.value)
    return report

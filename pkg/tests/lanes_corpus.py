"""Placement wrappers for the published pairings: gadgets plus their signal
lanes, so the static interference analysis can run over the whole corpus."""

from fctafl import GameState, Owner, Square
from fctafl.compiler import Lane, Placement
from fctafl.rules import BoardGeometry

# (src, src_port) -> (dst, dst_port); gadgets by index, "e:<square>" for an
# external entry square, "edge" for an exit running off the board
CONNECTIONS = {
    "wire_into_wire": [("0.out", "1.in"), ("1.out", "edge")],
    "wire_into_defender_victory": [("0.out", "1.in")],
    "wire_into_attacker_victory": [("0.out", "1.in")],
    "variable_wire_declined": [("0.out", "1.in"), ("1.out", "edge")],
    "variable_wire_claimed": [("0.out", "1.in"), ("1.out", "edge")],
    "fanout_with_wires": [
        ("0.out", "1.in"),
        ("1.out_side", "2.in"),
        ("1.out_up", "3.in"),
        ("2.out", "edge"),
        ("3.out", "edge"),
    ],
    "and_with_wires": [
        ("0.out", "2.in_second"),
        ("1.out", "2.in_first"),
        ("2.out", "3.in"),
        ("3.out", "edge"),
    ],
    "choice_with_wires_up": [
        ("0.out", "1.in"),
        ("1.out_side", "2.in"),
        ("1.out_up", "3.in"),
        ("2.out", "edge"),
        ("3.out", "edge"),
    ],
    "choice_with_wires_side": [
        ("0.out", "1.in"),
        ("1.out_side", "2.in"),
        ("1.out_up", "3.in"),
        ("2.out", "edge"),
        ("3.out", "edge"),
    ],
    "or_with_wires_first_input": [
        ("0.out", "2.in_up"),
        ("1.out", "2.in_side"),
        ("2.out", "3.in"),
        ("3.out", "edge"),
    ],
    "or_with_wires_second_input": [
        ("0.out", "2.in_up"),
        ("1.out", "2.in_side"),
        ("2.out", "3.in"),
        ("3.out", "edge"),
    ],
    "or_with_wires_both_inputs_first_then_second": [
        ("0.out", "2.in_up"),
        ("1.out", "2.in_side"),
        ("2.out", "3.in"),
        ("3.out", "edge"),
    ],
    "or_with_wires_both_inputs_second_then_first": [
        ("0.out", "2.in_up"),
        ("1.out", "2.in_side"),
        ("2.out", "3.in"),
        ("3.out", "edge"),
    ],
}


def _segment(a: Square, b: Square):
    dx = (b.col > a.col) - (b.col < a.col)
    dy = (b.row > a.row) - (b.row < a.row)
    squares = [a]
    cur = a
    while cur != b:
        cur = cur.shifted(dx, dy)
        squares.append(cur)
    return tuple(squares)


def composite_placement(trace):
    """(state-at-rest, Placement) for a published pairing."""
    board = BoardGeometry.fragment(trace.width, trace.height, trace.havens)
    placed = trace.placed_gadgets()
    placement = Placement(board=board, true_side=Owner.DEFENDER, spacing=0)
    placement.nodes = {f"g{i}": g for i, g in enumerate(placed)}
    lanes = []
    for i, (src, dst) in enumerate(CONNECTIONS[trace.name]):
        s_idx, s_port = src.split(".")
        src_g = placed[int(s_idx)]
        a = src_g.port(s_port).entry_square
        heading = src_g.port(s_port).heading
        if dst == "edge":
            cur = a
            while True:
                nxt = cur.shifted(*heading)
                if not board.contains(nxt):
                    break
                cur = nxt
            b = cur
            dst_key = "edge"
        else:
            d_idx, d_port = dst.split(".")
            b = placed[int(d_idx)].port(d_port).entry_square
            dst_key = f"node:g{d_idx}"
        lanes.append(Lane(f"lane{i}", 0, _segment(a, b), f"node:g{s_idx}", dst_key))
    # entry approach lanes from the scripted entry soldiers
    for j, (square, _piece) in enumerate(trace.extra):
        target = None
        for g_idx, g in enumerate(placed):
            for port in g.ports:
                e = port.entry_square
                if e.col == square.col or e.row == square.row:
                    if target is None:
                        target = (e, g_idx)
        if target is not None:
            lanes.append(
                Lane(
                    f"entry{j}",
                    0,
                    _segment(square, target[0]),
                    f"entry:{j}",
                    f"node:g{target[1]}",
                )
            )
    placement.lanes = lanes
    pieces = {}
    for g in placed:
        pieces.update(g.pieces)
    state = GameState(
        geometry=board,
        pieces=pieces,
        to_move=trace.start,
        fragment_mode=not any(p.kind.value == "king" for p in pieces.values()),
    )
    return state, placement

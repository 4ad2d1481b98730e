"""Gadget templates, placement transforms, and the catalog."""

import pytest

from fctafl import BoardGeometry, Kind, Owner, parse_square, sq
from fctafl.gadgets import (
    AnchorError,
    OverlapError,
    TEMPLATES,
    Transform,
    instantiate,
)
from fctafl.traces import (
    COMPOSITE_TRACES,
    TEMPLATE_TRACES,
    GadgetTrace,
    catalog,
    verify_trace,
)


class TestTemplates:
    def test_catalog_has_all_nine(self):
        assert set(TEMPLATES) == {
            "wire",
            "defender_victory",
            "attacker_victory",
            "variable",
            "dummy_variable",
            "fanout",
            "choice",
            "and",
            "or",
        }

    def test_wire_layout(self):
        wire = TEMPLATES["wire"]
        assert {s.name: p.symbol for s, p in wire.pieces.items()} == {
            "c5": "p",
            "a4": "P",
            "b4": "p",
            "d3": "p",
        }
        assert wire.port("in").entry_square == sq("c4")
        assert wire.port("out").entry_square == sq("a4")

    def test_victory_gadgets_carry_the_king_and_anchor(self):
        dv = TEMPLATES["defender_victory"]
        av = TEMPLATES["attacker_victory"]
        assert dv.has_king and av.has_king
        assert dv.haven_anchor == sq("e7")
        assert av.haven_anchor == sq("e7")

    def test_dummy_variable_is_the_variable_without_the_free_soldier(self):
        var = TEMPLATES["variable"]
        dummy = TEMPLATES["dummy_variable"]
        assert set(dummy.pieces) == set(var.pieces) - {sq("d1")}

    def test_choice_has_two_outputs(self):
        choice = TEMPLATES["choice"]
        outs = [p for p in choice.ports if p.name.startswith("out")]
        assert len(outs) == 2

    def test_or_inputs_share_one_entry(self):
        template = TEMPLATES["or"]
        assert template.port("in_up").entry_square == template.port("in_side").entry_square


class TestInstantiate:
    def test_identity_is_the_native_figure(self):
        board = BoardGeometry.fragment(4, 5)
        placed = instantiate(TEMPLATES["wire"], Transform(), board)
        assert {s.name: p.symbol for s, p in placed.pieces.items()} == {
            "c5": "p",
            "a4": "P",
            "b4": "p",
            "d3": "p",
        }

    def test_translation_equivariance(self):
        from fctafl import DEFENDER
        from fctafl.traces import GadgetSpec, _plies

        board = BoardGeometry.fragment(20, 6)
        base = instantiate(TEMPLATES["wire"], Transform(), board)
        moved = instantiate(TEMPLATES["wire"], Transform("identity", (7, 0)), board)
        assert {s.shifted(7, 0) for s in base.pieces} == set(moved.pieces)
        trace = GadgetTrace(
            name="wire_forward_shifted",
            width=20,
            height=6,
            havens=(),
            gadgets=(GadgetSpec("wire", Transform("identity", (7, 0))),),
            extra=((sq("j1"), DEFENDER),),
            start=Owner.DEFENDER,
            plies=_plies("d j1-j4 j1-j4", "a k3-j3 k3-j3"),
        )
        assert verify_trace(trace).passed

    def test_transpose_matches_the_paired_wire(self):
        board = BoardGeometry.fragment(9, 6)
        placed = instantiate(TEMPLATES["wire"], Transform("transpose", (4, 1)), board)
        assert {s.name: p.symbol for s, p in placed.pieces.items()} == {
            "g5": "p",
            "i4": "p",
            "h3": "p",
            "h2": "P",
        }
        assert placed.port("in").entry_square == sq("h4")
        assert placed.port("in").heading == (1, 0)
        assert placed.port("out").heading == (0, 1)

    def test_overlap_rejected(self):
        board = BoardGeometry.fragment(8, 8)
        first = instantiate(TEMPLATES["wire"], Transform(), board)
        with pytest.raises(OverlapError):
            instantiate(
                TEMPLATES["wire"], Transform("identity", (1, 0)), board,
                occupied=first.pieces,
            )

    def test_board_bounds_rejected(self):
        board = BoardGeometry.fragment(4, 4)
        with pytest.raises(OverlapError):
            instantiate(TEMPLATES["wire"], Transform("identity", (2, 2)), board)

    def test_haven_anchor_enforced(self):
        board = BoardGeometry.fragment(5, 7)  # no havens
        with pytest.raises(AnchorError):
            instantiate(TEMPLATES["defender_victory"], Transform(), board)
        anchored = BoardGeometry.fragment(5, 7, havens=[sq("e7")])
        placed = instantiate(TEMPLATES["defender_victory"], Transform(), anchored)
        assert any(p.kind is Kind.KING for p in placed.pieces.values())

    def test_color_swap_flips_soldiers(self):
        board = BoardGeometry.fragment(4, 5)
        swapped = instantiate(TEMPLATES["wire"], Transform(), board, swap_colors=True)
        assert {s.name: p.symbol for s, p in swapped.pieces.items()} == {
            "c5": "P",
            "a4": "p",
            "b4": "P",
            "d3": "P",
        }

    def test_color_swap_refused_for_king_templates(self):
        board = BoardGeometry.fragment(5, 7, havens=[sq("e7")])
        with pytest.raises(ValueError):
            instantiate(
                TEMPLATES["defender_victory"], Transform(), board, swap_colors=True
            )

    def test_transform_composition_is_a_transform(self):
        t = Transform("transpose", (2, 1)).then_translate(3, 4)
        assert t.kind == "transpose"
        assert t.offset == (5, 5)


class TestCatalog:
    def test_counts(self):
        cat = catalog()
        assert len(cat["templates"]) == 9
        assert len(cat["composite_traces"]) == 13
        assert len(cat["template_traces"]) >= 13

    def test_choice_both_exits_present(self):
        names = {t.name for t in TEMPLATE_TRACES}
        assert {"choice_exit_up", "choice_exit_side"} <= names

    def test_or_harmless_second_input_covered(self):
        names = {t.name for t in COMPOSITE_TRACES}
        assert "or_with_wires_both_inputs_second_then_first" in names

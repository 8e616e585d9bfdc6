import time

import numpy as np
import pytest

from bitlet.catalog import OpKind, OpSpec, microprogram_of
from bitlet.simulator import (ArrayState, ColRange, HMove, InvalidProgram, Nor,
                              NorProgram, VMove, apply_instr, count_cycles,
                              from_text, pack_ints, run, to_text, unpack_ints)


def prog(*instrs, max_fanin=2, **kw):
    return NorProgram(tuple(instrs), max_fanin=max_fanin, **kw)


class TestNorSemantics:
    @pytest.mark.parametrize("a,b,expect", [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 0)])
    def test_two_input_truth_table(self, a, b, expect):
        state = ArrayState(np.array([[a, b, 0]], dtype=bool))
        final, cycles = run(prog(Nor(2, (0, 1))), state)
        assert cycles == 1
        assert final.bits[0, 2] == bool(expect)

    def test_single_input_is_inverter(self):
        state = ArrayState(np.array([[0, 0], [1, 0]], dtype=bool))
        final, _ = run(prog(Nor(1, (0,))), state)
        assert final.bits[:, 1].tolist() == [True, False]

    def test_duplicate_sources_allowed(self):
        state = ArrayState(np.array([[1, 0]], dtype=bool))
        final, _ = run(prog(Nor(1, (0, 0))), state)
        assert final.bits[0, 1] == False  # noqa: E712

    def test_applies_to_all_rows_at_once(self, rng):
        bits = rng.integers(0, 2, (64, 3)).astype(bool)
        final, _ = run(prog(Nor(2, (0, 1))), ArrayState(bits.copy()))
        assert np.array_equal(final.bits[:, 2], ~(bits[:, 0] | bits[:, 1]))


class TestMoves:
    def test_hmove_copies_whole_column(self, rng):
        bits = rng.integers(0, 2, (32, 4)).astype(bool)
        final, cycles = run(prog(HMove(3, 1)), ArrayState(bits.copy()))
        assert cycles == 1
        assert np.array_equal(final.bits[:, 3], bits[:, 1])
        assert np.array_equal(final.bits[:, :3], bits[:, :3])

    def test_vmove_moves_one_row_range(self, rng):
        bits = rng.integers(0, 2, (8, 6)).astype(bool)
        final, _ = run(prog(VMove(-1, 2, 4, 3)), ArrayState(bits.copy()))
        assert np.array_equal(final.bits[2, 2:5], bits[3, 2:5])
        # everything else untouched, including the source row
        mask = np.ones_like(bits)
        mask[2, 2:5] = False
        assert np.array_equal(final.bits[mask], bits[mask])

    def test_cross_array_vmove_costs_a_cycle_but_changes_nothing(self, rng):
        bits = rng.integers(0, 2, (4, 3)).astype(bool)
        outgoing = VMove(-1, 0, 2, 0, crosses_array=True)   # leaves the array
        incoming = VMove(-1, 0, 2, 4, crosses_array=True)   # arrives from outside
        final, cycles = run(prog(outgoing, incoming), ArrayState(bits.copy()))
        assert cycles == 2
        assert np.array_equal(final.bits, bits)


class TestValidation:
    def test_dest_cannot_be_source(self):
        with pytest.raises(InvalidProgram, match="destination"):
            run(prog(Nor(0, (0, 1))), ArrayState.zeros(1, 2))

    def test_fanin_limit_default_two(self):
        p = prog(Nor(3, (0, 1, 2)))
        with pytest.raises(InvalidProgram, match="fan-in"):
            run(p, ArrayState.zeros(1, 4))
        p4 = prog(Nor(3, (0, 1, 2)), max_fanin=4)
        run(p4, ArrayState.zeros(1, 4))  # fine at the wider limit

    def test_column_bounds(self):
        with pytest.raises(InvalidProgram, match="out of range"):
            run(prog(Nor(5, (0,))), ArrayState.zeros(1, 3))
        with pytest.raises(InvalidProgram, match="out of range"):
            run(prog(HMove(0, 9)), ArrayState.zeros(1, 3))

    def test_vmove_bounds_and_flag(self):
        state = ArrayState.zeros(4, 2)
        with pytest.raises(InvalidProgram, match="neither endpoint"):
            run(prog(VMove(1, 0, 1, 9)), state)
        with pytest.raises(InvalidProgram, match="flag"):
            run(prog(VMove(-1, 0, 1, 4)), state)  # source outside, not flagged
        with pytest.raises(InvalidProgram, match="flag"):
            run(prog(VMove(-1, 0, 1, 2, crosses_array=True)), state)
        with pytest.raises(InvalidProgram, match="zero row offset"):
            run(prog(VMove(0, 0, 1, 1)), state)

    def test_validation_happens_before_any_mutation(self):
        bits = np.ones((2, 3), dtype=bool)
        state = ArrayState(bits)
        bad = prog(Nor(2, (0,)), Nor(9, (0,)))
        with pytest.raises(InvalidProgram):
            run(bad, state)
        assert np.array_equal(state.bits, np.ones((2, 3), dtype=bool))

    def test_max_fanin_range(self):
        with pytest.raises(InvalidProgram):
            NorProgram((), max_fanin=0)
        with pytest.raises(InvalidProgram):
            NorProgram((), max_fanin=5)


class TestProgramProperties:
    def test_count_cycles_empty(self):
        assert count_cycles(prog()) == 0

    def test_count_matches_run(self, rng):
        p = microprogram_of(OpSpec(OpKind.AND, 16))
        assert count_cycles(p) == 48
        _, cycles = run(p, ArrayState.zeros(4, p.cols_required))
        assert cycles == 48

    def test_determinism(self, rng):
        p = microprogram_of(OpSpec(OpKind.ADD, 8))
        state = ArrayState(rng.integers(0, 2, (32, p.cols_required)).astype(bool))
        a, _ = run(p, state)
        b, _ = run(p, state)
        assert a == b

    def test_row_independence(self, rng):
        # no VMove: permuting input rows permutes output rows identically
        p = microprogram_of(OpSpec(OpKind.XOR, 8))
        bits = rng.integers(0, 2, (50, p.cols_required)).astype(bool)
        perm = rng.permutation(50)
        straight, _ = run(p, ArrayState(bits.copy()))
        shuffled, _ = run(p, ArrayState(bits[perm].copy()))
        assert np.array_equal(straight.bits[perm], shuffled.bits)

    def test_locality_frame_check(self, rng):
        # every instruction changes its destination cells and nothing else
        p = microprogram_of(OpSpec(OpKind.ADD, 4))
        bits = rng.integers(0, 2, (16, p.cols_required)).astype(bool)
        for ins in p.instructions:
            before = bits.copy()
            apply_instr(bits, ins)
            changed = np.nonzero(bits != before)
            if isinstance(ins, Nor):
                assert set(changed[1].tolist()) <= {ins.dest}
            elif isinstance(ins, HMove):
                assert set(changed[1].tolist()) <= {ins.dest}
            else:
                assert set(changed[0].tolist()) <= {ins.row + ins.offset}

    def test_cols_required(self):
        p = prog(Nor(7, (0, 1)))
        assert p.cols_required == 8
        assert NorProgram((), inputs=(ColRange("a", 0, 4),)).cols_required == 4

    def test_range_lookup(self):
        p = NorProgram((), inputs=(ColRange("a", 0, 4),),
                       outputs=(ColRange("out", 4, 4),))
        assert p.range("out").start == 4
        with pytest.raises(KeyError):
            p.range("nope")


class TestPacking:
    def test_round_trip(self, rng):
        state = ArrayState.zeros(100, 40)
        values = rng.integers(0, 1 << 32, 100, dtype=np.int64)
        pack_ints(state, 3, 32, values)
        assert np.array_equal(unpack_ints(state, 3, 32), values)

    def test_little_endian_layout(self):
        state = ArrayState.zeros(1, 8)
        pack_ints(state, 2, 4, [0b1010])
        assert state.bits[0].tolist() == [False, False,
                                          False, True, False, True,
                                          False, False]

    def test_row_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pack_ints(ArrayState.zeros(4, 8), 0, 4, [1, 2])


class TestTextFormat:
    def test_round_trip(self):
        p = prog(Nor(2, (0, 1)), Nor(3, (2,)), HMove(4, 3),
                 VMove(-1, 0, 3, 1), VMove(-1, 0, 3, 8, crosses_array=True),
                 max_fanin=2)
        text = to_text(p)
        assert text.splitlines() == [
            "NOR 2 0 1",
            "NOR 3 2",
            "HMOVE 4 3",
            "VMOVE -1 0 3 1",
            "VMOVE -1 0 3 8 x",
        ]
        back = from_text(text)
        assert back.instructions == p.instructions

    def test_fanin_inferred_from_widest_nor(self):
        p = from_text("NOR 4 0 1 2 3\n")
        assert p.max_fanin == 4

    def test_comments_and_blanks_ignored(self):
        p = from_text("# header\n\nNOR 1 0\n")
        assert len(p) == 1

    @pytest.mark.parametrize("line", [
        "NOR 1", "HMOVE 1", "HMOVE 1 2 3", "VMOVE 1 2 3", "VMOVE 1 2 3 4 y",
        "FROB 1 2", "NOR a b",
    ])
    def test_parse_errors(self, line):
        with pytest.raises(InvalidProgram, match="line 1"):
            from_text(line)

    def test_empty_program_serializes_to_empty(self):
        assert to_text(prog()) == ""


def test_large_array_run_is_fast():
    # a multiply-sized instruction stream over a full array stays well
    # under the ten-second budget
    cols = 1024
    instrs = [Nor((i + 7) % cols, (i % cols, (i + 3) % cols)) for i in range(3104)]
    program = NorProgram(tuple(instrs))
    state = ArrayState.zeros(1024, cols)
    start = time.monotonic()
    _, cycles = run(program, state)
    elapsed = time.monotonic() - start
    assert cycles == 3104
    assert elapsed < 10.0

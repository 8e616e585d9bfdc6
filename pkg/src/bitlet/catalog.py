"""Operation complexity catalog and NOR microprogram generators.

Maps (operation kind, bit width) to a cycle count, and builds executable
NOR programs whose simulated behaviour and cycle counts back those numbers:

    NOT         n          one single-input NOR (inverter) per bit
    OR          2n         t = NOR(a,b); out = NOR(t)
    AND         3n         out = NOR(NOR(a), NOR(b))
    XOR         5n         the minimal two-input-NOR construction
    ADD         9n         classic nine-NOR full adder, rippled
    ADD_FANIN4  7n         seven NOR gates per bit using fan-in up to 4
    MPY         13n^2-14n  catalog value; the generated program is a plain
                           shift-and-add multiplier validated for function
                           only (its own gate count is reported separately)
    MPY_LOWPREC 1544       point value, 16-bit only (low-precision multiply
                           keeping an n-bit result)
    CUSTOM      payload    caller-supplied cycle count

The 7n adder passes its carry between bits as a two-column rail holding the
inverted carry in distributed form (the NOR of the two columns is the true
carry). A seven-gate-per-bit adder with a single carry column does not
exist, in any polarity; the rail form does, at fan-in 3. Consequences:
the carry-in column of ADD_FANIN4 programs is active low (preset 1 means
"no carry in"), and the carry-out is exposed as the two-column rail named
``ncout`` rather than as a single cell.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .simulator import ColRange, Instr, Nor, NorProgram

WIDTH_CAP = 1024  # keeps generated programs within one array's columns


class UnsupportedWidth(ValueError):
    """No cycle count is defined for this (kind, width) pair."""


class UnsupportedOperation(ValueError):
    """No canonical microprogram exists for this operation kind."""


class ColumnOverflow(ValueError):
    """The generated program does not fit the column budget."""


class OpKind(enum.Enum):
    NOT = "NOT"
    OR = "OR"
    AND = "AND"
    XOR = "XOR"
    ADD = "ADD"
    ADD_FANIN4 = "ADD_FANIN4"
    MPY = "MPY"
    MPY_LOWPREC = "MPY_LOWPREC"
    CUSTOM = "CUSTOM"


# closed-form cycle counts per bit width
_FORMULAS = {
    OpKind.NOT: lambda n: n,
    OpKind.OR: lambda n: 2 * n,
    OpKind.AND: lambda n: 3 * n,
    OpKind.XOR: lambda n: 5 * n,
    OpKind.ADD: lambda n: 9 * n,
    OpKind.ADD_FANIN4: lambda n: 7 * n,
    OpKind.MPY: lambda n: 13 * n * n - 14 * n,
}

_POINT_VALUES = {
    (OpKind.MPY_LOWPREC, 16): 1544,
}


@dataclass(frozen=True)
class OpSpec:
    """An operation kind at a concrete bit width."""

    kind: OpKind
    width_bits: int
    custom_oc: int | None = None

    def __post_init__(self) -> None:
        n = self.width_bits
        if not isinstance(n, int) or not 1 <= n <= WIDTH_CAP:
            raise UnsupportedWidth(f"width_bits must be in 1..{WIDTH_CAP}, got {n!r}")
        if self.kind is OpKind.CUSTOM:
            if not isinstance(self.custom_oc, int) or self.custom_oc < 1:
                raise ValueError("CUSTOM requires a positive custom_oc cycle count")
        elif self.custom_oc is not None:
            raise ValueError(f"custom_oc only applies to CUSTOM, not {self.kind.name}")
        if self.kind is OpKind.MPY_LOWPREC and (self.kind, n) not in _POINT_VALUES:
            raise UnsupportedWidth(f"MPY_LOWPREC has a known cycle count only for "
                                   f"n=16, got n={n}")
        if self.kind is OpKind.MPY and n < 2:
            raise UnsupportedWidth("MPY cycle formula is positive only for n >= 2")


def oc_of(spec: OpSpec) -> int:
    """Operation complexity in cycles for one operation on one row."""
    if spec.kind is OpKind.CUSTOM:
        return spec.custom_oc
    if spec.kind in _FORMULAS:
        return _FORMULAS[spec.kind](spec.width_bits)
    return _POINT_VALUES[(spec.kind, spec.width_bits)]


def catalog_table(widths=(4, 8, 16, 32, 64), kinds=None) -> list[dict]:
    """Tabulate cycle counts as rows of {kind, n, oc} (skipping undefined pairs)."""
    if kinds is None:
        kinds = [OpKind.NOT, OpKind.OR, OpKind.AND, OpKind.XOR,
                 OpKind.ADD, OpKind.ADD_FANIN4, OpKind.MPY]
    rows = []
    for kind in kinds:
        for n in widths:
            try:
                rows.append({"kind": kind.value, "n": n,
                             "oc": oc_of(OpSpec(kind, n))})
            except UnsupportedWidth:
                continue
    return rows


def to_json_table(widths=(4, 8, 16, 32, 64), kinds=None) -> str:
    return json.dumps(catalog_table(widths, kinds), indent=2)


# -- microprogram generation ---------------------------------------------

class _Plan:
    """Sequential column allocator for one program."""

    def __init__(self) -> None:
        self.next = 0
        self.ranges: list[ColRange] = []

    def block(self, name: str, width: int) -> ColRange:
        r = ColRange(name, self.next, width)
        self.next += width
        self.ranges.append(r)
        return r


def _not_program(n: int) -> tuple[list[Instr], _Plan, list[str], list[str]]:
    plan = _Plan()
    a = plan.block("a", n)
    out = plan.block("out", n)
    instrs = [Nor(out.start + j, (a.start + j,)) for j in range(n)]
    return instrs, plan, ["a"], ["out"]


def _or_program(n: int):
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", n)
    t = plan.block("scratch", 1)
    instrs: list[Instr] = []
    for j in range(n):
        instrs.append(Nor(t.start, (a.start + j, b.start + j)))
        instrs.append(Nor(out.start + j, (t.start,)))
    return instrs, plan, ["a", "b"], ["out"]


def _and_program(n: int):
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", n)
    t = plan.block("scratch", 2)
    instrs: list[Instr] = []
    for j in range(n):
        instrs.append(Nor(t.start, (a.start + j,)))
        instrs.append(Nor(t.start + 1, (b.start + j,)))
        instrs.append(Nor(out.start + j, (t.start, t.start + 1)))
    return instrs, plan, ["a", "b"], ["out"]


def _xor_program(n: int):
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", n)
    t = plan.block("scratch", 4)
    t1, t2, t3, t4 = (t.start + k for k in range(4))
    instrs: list[Instr] = []
    for j in range(n):
        aj, bj = a.start + j, b.start + j
        instrs.append(Nor(t1, (aj, bj)))
        instrs.append(Nor(t2, (aj, t1)))
        instrs.append(Nor(t3, (bj, t1)))
        instrs.append(Nor(t4, (t2, t3)))        # XNOR
        instrs.append(Nor(out.start + j, (t4,)))
    return instrs, plan, ["a", "b"], ["out"]


def _full_adder9(instrs: list[Instr], aj: int, bj: int, cin: int,
                 sum_dest: int, cout_dest: int, t: int) -> None:
    """Nine-gate two-input-NOR full adder; scratch columns t..t+4."""
    n1, n2, n3, n4, n5 = t, t + 1, t + 2, t + 3, t + 4
    n6, n7 = t + 5, t + 6
    instrs.append(Nor(n1, (aj, bj)))
    instrs.append(Nor(n2, (aj, n1)))
    instrs.append(Nor(n3, (bj, n1)))
    instrs.append(Nor(n4, (n2, n3)))            # XNOR(a, b)
    instrs.append(Nor(n5, (n4, cin)))
    instrs.append(Nor(n6, (n4, n5)))
    instrs.append(Nor(n7, (cin, n5)))
    instrs.append(Nor(sum_dest, (n6, n7)))
    instrs.append(Nor(cout_dest, (n1, n5)))


def _add_program(n: int):
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", n)
    carry = plan.block("carry", 1)  # carry-in on entry, carry-out on exit
    t = plan.block("scratch", 7)
    instrs: list[Instr] = []
    for j in range(n):
        _full_adder9(instrs, a.start + j, b.start + j, carry.start,
                     out.start + j, carry.start, t.start)
    return instrs, plan, ["a", "b", "carry"], ["out", "carry"]


def _add_fanin4_program(n: int):
    # Carry travels as a two-column rail holding the inverted carry in
    # distributed form: rail OR == NOT carry, so NOR(rail) == carry.
    # Per bit (7 gates, fan-in <= 3 once the rail replaces nc):
    #     p = NOR(rail, b)        c & ~b
    #     q = NOR(p, rail)        c & b
    #     r = NOR(p, b)           ~b & ~c      > rail half
    #     s = NOR(r, q, a)        ~a & (b^c)   > rail half
    #     t = NOR(s, a)           ~a & ~(b^c)
    #     u = NOR(s, r, q)        a & (b^c)
    #     out = NOR(t, u)         a ^ b ^ c
    # Two scratch banks alternate so bit i+1 can still read bit i's rail.
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", n)
    ncin = plan.block("ncin", 1)                # active low: 1 means carry-in 0
    banks = [plan.block("scratch_even", 6), plan.block("scratch_odd", 6)]
    rail_cols: tuple[int, ...] = (ncin.start,)  # bit 0 reads ncin directly
    ncout = ColRange("ncout", 0, 0)
    instrs: list[Instr] = []
    for j in range(n):
        bank = banks[j % 2].start
        p, q, r, s, t, u = (bank + k for k in range(6))
        aj, bj = a.start + j, b.start + j
        instrs.append(Nor(p, (*rail_cols, bj)))
        instrs.append(Nor(q, (p, *rail_cols)))
        instrs.append(Nor(r, (p, bj)))
        instrs.append(Nor(s, (r, q, aj)))
        instrs.append(Nor(t, (s, aj)))
        instrs.append(Nor(u, (s, r, q)))
        instrs.append(Nor(out.start + j, (t, u)))
        rail_cols = (r, s)
        ncout = ColRange("ncout", r, 2)         # r, s are adjacent
    plan.ranges.append(ncout)
    return instrs, plan, ["a", "b", "ncin"], ["out", "ncout"]


def _mpy_program(n: int):
    # Shift-and-add: out accumulates a * b_i << i, one nine-gate ripple add
    # per partial product. Functionally exact; the cycle count is this
    # construction's own, not the catalog's 13n^2-14n.
    plan = _Plan()
    a, b = plan.block("a", n), plan.block("b", n)
    out = plan.block("out", 2 * n)
    na = plan.block("not_a", n)
    pp = plan.block("partial", n)
    nb = plan.block("not_b", 1)
    zero = plan.block("zero", 1)                # never written, stays 0
    cc = plan.block("carry", 1)
    t = plan.block("scratch", 7)
    instrs: list[Instr] = []
    for j in range(n):
        instrs.append(Nor(na.start + j, (a.start + j,)))
    for i in range(n):
        instrs.append(Nor(nb.start, (b.start + i,)))
        for j in range(n):
            instrs.append(Nor(pp.start + j, (na.start + j, nb.start)))
        for j in range(n):
            cin = zero.start if j == 0 else cc.start
            cout = out.start + i + n if j == n - 1 else cc.start
            _full_adder9(instrs, pp.start + j, out.start + i + j, cin,
                         out.start + i + j, cout, t.start)
    return instrs, plan, ["a", "b"], ["out"]


_GENERATORS = {
    OpKind.NOT: _not_program,
    OpKind.OR: _or_program,
    OpKind.AND: _and_program,
    OpKind.XOR: _xor_program,
    OpKind.ADD: _add_program,
    OpKind.ADD_FANIN4: _add_fanin4_program,
    OpKind.MPY: _mpy_program,
}


def microprogram_of(spec: OpSpec, cols: int | None = None) -> NorProgram:
    """Build the executable NOR program for an operation.

    Columns are packed from 0; `cols` bounds the budget (defaults to exactly
    what the program needs). Raises ColumnOverflow if the budget is too
    small and UnsupportedOperation for kinds with no canonical netlist.

    Programs expect every cell outside the declared input ranges to start
    at 0 (a blank array); scratch is overwritten before it is read except
    for columns that are deliberately kept at 0.
    """
    gen = _GENERATORS.get(spec.kind)
    if gen is None:
        raise UnsupportedOperation(f"no canonical microprogram for {spec.kind.name}")
    instrs, plan, in_names, out_names = gen(spec.width_bits)
    if cols is not None and plan.next > cols:
        raise ColumnOverflow(f"{spec.kind.name} n={spec.width_bits} needs "
                             f"{plan.next} columns, budget is {cols}")
    by_name = {r.name: r for r in plan.ranges}
    return NorProgram(
        tuple(instrs),
        inputs=tuple(by_name[x] for x in in_names),
        outputs=tuple(by_name[x] for x in out_names),
        max_fanin=4 if spec.kind is OpKind.ADD_FANIN4 else 2,
    )

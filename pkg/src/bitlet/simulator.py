"""Row-parallel NOR microprogram simulator.

Models computation inside one memory array as a dense ROW x COL bit matrix
operated on by three instruction kinds, each costing exactly one cycle:

  * ``Nor``    writes NOR of 1..max_fanin source columns into a destination
               column, in every row at once.
  * ``HMove``  copies one whole column into another (row-parallel move).
  * ``VMove``  relocates one row's cell range to ``row + offset`` (per-element
               serial move). A move whose source or destination row falls
               outside the array must be flagged ``crosses_array``; it still
               costs one cycle but no local cells change (neighbouring arrays
               are not simulated).

Programs are static: they are validated in full against the array dimensions
before any cell is touched, and the cycle count of a run always equals the
instruction count. Rows never interact except through explicit ``VMove``.

A line-oriented text form is provided for golden files::

    NOR dest src1 [src2 src3 src4]
    HMOVE dest src
    VMOVE offset col_lo col_hi row [x]     (trailing "x" marks crosses_array)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidProgram(ValueError):
    """A program failed static validation against the array dimensions."""


@dataclass(frozen=True)
class Nor:
    """One NOR cycle: dest <- NOR(src columns), applied to all rows."""

    dest: int
    srcs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "srcs", tuple(self.srcs))


@dataclass(frozen=True)
class HMove:
    """One horizontal move cycle: column src copied to column dest, all rows."""

    dest: int
    src: int


@dataclass(frozen=True)
class VMove:
    """One vertical move cycle: row's cells [col_lo, col_hi] go to row+offset."""

    offset: int
    col_lo: int
    col_hi: int
    row: int
    crosses_array: bool = False


Instr = Nor | HMove | VMove


@dataclass(frozen=True)
class ColRange:
    """A named block of columns [start, start+width)."""

    name: str
    start: int
    width: int

    @property
    def stop(self) -> int:
        return self.start + self.width


@dataclass(frozen=True)
class NorProgram:
    """An ordered instruction sequence plus its declared column interface."""

    instructions: tuple[Instr, ...]
    inputs: tuple[ColRange, ...] = ()
    outputs: tuple[ColRange, ...] = ()
    max_fanin: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not 1 <= self.max_fanin <= 4:
            raise InvalidProgram(f"max_fanin must be in 1..4, got {self.max_fanin}")

    def __len__(self) -> int:
        return len(self.instructions)

    def range(self, name: str) -> ColRange:
        for r in self.inputs + self.outputs:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def cols_required(self) -> int:
        """Smallest column count this program fits in."""
        top = 0
        for ins in self.instructions:
            if isinstance(ins, Nor):
                top = max(top, ins.dest, *ins.srcs)
            elif isinstance(ins, HMove):
                top = max(top, ins.dest, ins.src)
            else:
                top = max(top, ins.col_hi)
        for r in self.inputs + self.outputs:
            top = max(top, r.stop - 1)
        return top + 1

    def validate(self, rows: int, cols: int) -> None:
        """Raise InvalidProgram unless every instruction is legal for rows x cols."""
        for i, ins in enumerate(self.instructions):
            where = f"instruction {i}: {ins!r}"
            if isinstance(ins, Nor):
                if not 1 <= len(ins.srcs) <= self.max_fanin:
                    raise InvalidProgram(f"{where}: fan-in {len(ins.srcs)} exceeds "
                                         f"limit {self.max_fanin}")
                if ins.dest in ins.srcs:
                    raise InvalidProgram(f"{where}: destination is also a source")
                for c in (ins.dest, *ins.srcs):
                    if not 0 <= c < cols:
                        raise InvalidProgram(f"{where}: column {c} out of range")
            elif isinstance(ins, HMove):
                if ins.dest == ins.src:
                    raise InvalidProgram(f"{where}: destination equals source")
                for c in (ins.dest, ins.src):
                    if not 0 <= c < cols:
                        raise InvalidProgram(f"{where}: column {c} out of range")
            elif isinstance(ins, VMove):
                if ins.offset == 0:
                    raise InvalidProgram(f"{where}: zero row offset")
                if not 0 <= ins.col_lo <= ins.col_hi < cols:
                    raise InvalidProgram(f"{where}: bad column range")
                src_in = 0 <= ins.row < rows
                dst_in = 0 <= ins.row + ins.offset < rows
                if not (src_in or dst_in):
                    raise InvalidProgram(f"{where}: neither endpoint is inside the array")
                if ins.crosses_array == (src_in and dst_in):
                    raise InvalidProgram(
                        f"{where}: crosses_array flag does not match endpoints "
                        f"(src in={src_in}, dest in={dst_in})")
            else:
                raise InvalidProgram(f"{where}: unknown instruction type")


class ArrayState:
    """Dense bit state of one memory array."""

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError("bits must be a 2-D matrix")
        self.bits = bits

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ArrayState":
        return cls(np.zeros((rows, cols), dtype=bool))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def copy(self) -> "ArrayState":
        return ArrayState(self.bits.copy())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ArrayState) and np.array_equal(self.bits, other.bits)


def apply_instr(bits: np.ndarray, ins: Instr) -> None:
    """Apply one validated instruction to a bit matrix, in place."""
    if isinstance(ins, Nor):
        bits[:, ins.dest] = ~bits[:, list(ins.srcs)].any(axis=1)
    elif isinstance(ins, HMove):
        bits[:, ins.dest] = bits[:, ins.src]
    else:
        rows = bits.shape[0]
        src, dst = ins.row, ins.row + ins.offset
        if 0 <= src < rows and 0 <= dst < rows:
            bits[dst, ins.col_lo:ins.col_hi + 1] = bits[src, ins.col_lo:ins.col_hi + 1]
        # cross-array endpoint: cycle is paid, no local cells change


def run(program: NorProgram, initial: ArrayState) -> tuple[ArrayState, int]:
    """Execute a program on a copy of `initial`; return (final state, cycles)."""
    program.validate(initial.rows, initial.cols)
    state = initial.copy()
    for ins in program.instructions:
        apply_instr(state.bits, ins)
    return state, len(program)


def count_cycles(program: NorProgram) -> int:
    """Cycle cost of a program: one cycle per instruction."""
    return len(program)


# -- operand packing helpers -------------------------------------------------

def pack_ints(state: ArrayState, col_lo: int, width: int, values) -> None:
    """Store values[r] little-endian into row r, columns col_lo..col_lo+width-1."""
    values = np.asarray(values, dtype=np.int64)
    if values.shape != (state.rows,):
        raise ValueError(f"need one value per row ({state.rows}), got {values.shape}")
    shifts = np.arange(width, dtype=np.int64)
    state.bits[:, col_lo:col_lo + width] = (values[:, None] >> shifts) & 1


def unpack_ints(state: ArrayState, col_lo: int, width: int) -> np.ndarray:
    """Read one little-endian integer per row from a column block."""
    weights = (np.int64(1) << np.arange(width, dtype=np.int64))
    return state.bits[:, col_lo:col_lo + width].astype(np.int64) @ weights


# -- text serialization ------------------------------------------------------

def to_text(program: NorProgram) -> str:
    """Serialize instructions, one per line (interface ranges are not stored)."""
    lines = []
    for ins in program.instructions:
        if isinstance(ins, Nor):
            lines.append(" ".join(["NOR", str(ins.dest), *map(str, ins.srcs)]))
        elif isinstance(ins, HMove):
            lines.append(f"HMOVE {ins.dest} {ins.src}")
        else:
            flag = " x" if ins.crosses_array else ""
            lines.append(f"VMOVE {ins.offset} {ins.col_lo} {ins.col_hi} {ins.row}{flag}")
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(text: str, max_fanin: int | None = None) -> NorProgram:
    """Parse the line format back into a program.

    Blank lines and lines starting with ``#`` are ignored. When max_fanin
    is not given it is inferred as max(2, widest NOR in the program).
    """
    instrs: list[Instr] = []
    widest = 1
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        op, args = parts[0].upper(), parts[1:]
        try:
            if op == "NOR":
                if len(args) < 2:
                    raise ValueError("NOR needs a destination and at least one source")
                instrs.append(Nor(int(args[0]), tuple(int(a) for a in args[1:])))
                widest = max(widest, len(args) - 1)
            elif op == "HMOVE":
                if len(args) != 2:
                    raise ValueError("HMOVE needs exactly 2 arguments")
                instrs.append(HMove(int(args[0]), int(args[1])))
            elif op == "VMOVE":
                crosses = False
                if len(args) == 5 and args[4].lower() == "x":
                    crosses = True
                    args = args[:4]
                if len(args) != 4:
                    raise ValueError("VMOVE needs 4 arguments plus optional 'x'")
                off, lo, hi, row = (int(a) for a in args)
                instrs.append(VMove(off, lo, hi, row, crosses_array=crosses))
            else:
                raise ValueError(f"unknown instruction {op!r}")
        except ValueError as exc:
            raise InvalidProgram(f"line {ln}: {exc}") from None
    if max_fanin is None:
        max_fanin = max(2, widest)
    return NorProgram(tuple(instrs), max_fanin=max_fanin)

"""Comparative analyses over the throughput model.

Answers the questions the raw equations only imply: at what operation
complexity do the two sides break even, which side wins a concrete
workload (raw and under a power budget), how do the curves behave when one
parameter sweeps across a grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from . import model
from .catalog import OpSpec, oc_of
from .layout import LayoutSpec, pac_of
from .machine import CpuMachine, PimMachine, PowerBudget, WorkloadPoint

TIE_REL_TOL = 1e-9  # relative throughput gap treated as a dead heat


class UnknownParameter(ValueError):
    """Sweep parameter name is not one the model knows."""


class Winner(enum.Enum):
    PIM = "PIM"
    CPU = "CPU"
    TIE = "TIE"


@dataclass(frozen=True)
class Workload:
    """A named workload: an operation plus its data layout and traffic.

    The operation complexity comes from the catalog unless oc_override is
    given; the layout (optional) prices the placement/alignment cycles.
    """

    name: str
    dio_bits: int
    op: OpSpec | None = None
    layout: LayoutSpec | None = None
    oc_override: int | None = None

    def __post_init__(self) -> None:
        if self.op is None and self.oc_override is None:
            raise ValueError(f"workload {self.name!r} needs an op or an oc_override")
        if self.oc_override is not None and self.oc_override < 1:
            raise ValueError(f"oc_override must be >= 1, got {self.oc_override}")

    def resolve(self, pim: PimMachine) -> WorkloadPoint:
        oc = self.oc_override if self.oc_override is not None else oc_of(self.op)
        pac = pac_of(self.layout, pim) if self.layout is not None else 0
        return WorkloadPoint(oc_cycles=oc, pac_cycles=pac, dio_bits=self.dio_bits)


@dataclass(frozen=True)
class Verdict:
    """Both sides' throughput plus the decisive comparison for one workload."""

    name: str
    oc_cycles: int
    pac_cycles: int
    dio_bits: int
    pim_gops: float
    cpu_gops: float
    pl_pim_gops: float
    pl_cpu_gops: float
    winner: Winner
    speedup: float          # memory-side over CPU-side, on the deciding pair
    crossover_oc: float
    energy_ratio: float     # CPU pJ/op over memory-side pJ/op
    power_limited: bool     # True when the verdict used the capped numbers


def crossover_oc(pim: PimMachine, cpu: CpuMachine, dio_bits: int,
                 pac_cycles: int = 0) -> float:
    """Operation complexity at which both sides' raw throughput is equal.

    Below the returned value the memory side is faster, above it the CPU
    is. May be <= 0, meaning the memory side never wins at this setting.
    """
    budget = pim.rows * pim.mats * dio_bits / (cpu.bandwidth_bps * pim.cycle_time_s)
    return budget - pac_cycles


def energy_breakeven_oc(pim: PimMachine, cpu: CpuMachine, dio_bits: int,
                        pac_cycles: int = 0) -> float:
    """Operation complexity at which both sides spend equal energy per op."""
    return cpu.energy_per_bit_pj * dio_bits / pim.energy_per_cycle_pj - pac_cycles


def _decide(pim_ops: float, cpu_ops: float) -> tuple[Winner, float]:
    gap = abs(pim_ops - cpu_ops)
    if gap <= TIE_REL_TOL * max(pim_ops, cpu_ops):
        return Winner.TIE, 1.0
    return (Winner.PIM if pim_ops > cpu_ops else Winner.CPU), pim_ops / cpu_ops


def litmus(pim: PimMachine, cpu: CpuMachine,
           workload: Workload | WorkloadPoint,
           power: PowerBudget | None = None) -> Verdict:
    """Decide workload affinity: memory-side or CPU-side execution.

    With a power budget the verdict compares the capped throughputs;
    otherwise the raw ones. Both pairs are always reported.
    """
    if isinstance(workload, WorkloadPoint):
        name, point = "workload", workload
    else:
        name, point = workload.name, workload.resolve(pim)
    raw_pim = model.perf_pim(pim, point)
    raw_cpu = model.perf_cpu(cpu, point)
    if power is not None:
        pl_pim = model.pl_perf_pim(pim, point, power)
        pl_cpu = model.pl_perf_cpu(cpu, point, power)
    else:
        pl_pim, pl_cpu = raw_pim, raw_cpu
    deciding = (pl_pim, pl_cpu) if power is not None else (raw_pim, raw_cpu)
    winner, speedup = _decide(deciding[0].ops_per_second, deciding[1].ops_per_second)
    return Verdict(
        name=name,
        oc_cycles=point.oc_cycles,
        pac_cycles=point.pac_cycles,
        dio_bits=point.dio_bits,
        pim_gops=raw_pim.gops,
        cpu_gops=raw_cpu.gops,
        pl_pim_gops=pl_pim.gops,
        pl_cpu_gops=pl_cpu.gops,
        winner=winner,
        speedup=speedup,
        crossover_oc=crossover_oc(pim, cpu, point.dio_bits, point.pac_cycles),
        energy_ratio=(model.energy_per_op_cpu(cpu, point)
                      / model.energy_per_op_pim(pim, point)),
        power_limited=power is not None,
    )


SWEEP_PARAMS = ("OC", "PAC", "MAT", "BW", "DIO", "TDP")
INTEGER_PARAMS = frozenset({"OC", "PAC", "MAT", "DIO"})


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over a value grid, everything else fixed."""

    param: str
    grid: tuple
    pim: PimMachine
    cpu: CpuMachine
    workload: WorkloadPoint
    power: PowerBudget | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "grid", tuple(self.grid))
        if self.param.upper() not in SWEEP_PARAMS:
            raise UnknownParameter(f"unknown sweep parameter {self.param!r}; "
                                   f"expected one of {', '.join(SWEEP_PARAMS)}")
        object.__setattr__(self, "param", self.param.upper())
        if not self.grid:
            raise ValueError("sweep grid must not be empty")
        if any(x <= 0 for x in self.grid):
            raise ValueError("sweep grid values must be positive")


@dataclass(frozen=True)
class SweepRow:
    x: float
    pim_gops: float
    cpu_gops: float
    pl_pim_gops: float
    pl_cpu_gops: float


def _at(spec: SweepSpec, x) -> tuple[PimMachine, CpuMachine, WorkloadPoint,
                                     PowerBudget | None]:
    pim, cpu, w, power = spec.pim, spec.cpu, spec.workload, spec.power
    if spec.param == "OC":
        w = replace(w, oc_cycles=int(x))
    elif spec.param == "PAC":
        w = replace(w, pac_cycles=int(x))
    elif spec.param == "DIO":
        w = replace(w, dio_bits=int(x))
    elif spec.param == "MAT":
        pim = replace(pim, mats=int(x))
    elif spec.param == "BW":
        cpu = replace(cpu, bandwidth_bps=float(x))
    elif spec.param == "TDP":
        power = PowerBudget(float(x))
    return pim, cpu, w, power


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate all four throughput columns at every grid point.

    Grid values for integer-valued parameters (OC, PAC, MAT, DIO) are
    rounded to integers; the reported x is the value actually evaluated.
    Without a power budget the capped columns equal the raw ones.
    """
    rows = []
    for x in spec.grid:
        x = int(round(x)) if spec.param in INTEGER_PARAMS else float(x)
        pim, cpu, w, power = _at(spec, x)
        raw_pim = model.perf_pim(pim, w)
        raw_cpu = model.perf_cpu(cpu, w)
        pl_pim = model.pl_perf_pim(pim, w, power) if power is not None else raw_pim
        pl_cpu = model.pl_perf_cpu(cpu, w, power) if power is not None else raw_cpu
        rows.append(SweepRow(x, raw_pim.gops, raw_cpu.gops, pl_pim.gops, pl_cpu.gops))
    return rows

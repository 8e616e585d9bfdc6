"""Machine and workload parameter types for the bitlet model.

All types are immutable and validated on construction, so every function
that consumes them is total: there is no "invalid machine" state to check
for at evaluation time.

Unit conventions (pinned once, here):
  * 1 Gbps = 10^9 bits/s and 1 Tbps = 1024 Gbps (binary terabit).
  * 1 GOPS = 10^9 operations/s.
  * Cycle times are stored in nanoseconds, energies in picojoules; the
    properties `cycle_time_s`, `energy_per_cycle_j` and `energy_per_bit_j`
    expose SI values for the throughput math.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

GBPS = 1e9                # bits/s per Gbps
TBPS = 1024 * GBPS        # bits/s per Tbps (binary convention)
GOPS = 1e9                # ops/s per GOPS
NS = 1e-9                 # seconds per nanosecond
PJ = 1e-12                # joules per picojoule


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class PimMachine:
    """A bank of memory arrays computing with row-parallel NOR cycles.

    rows/cols describe one array; `mats` arrays run in lockstep.
    `energy_per_cycle_pj` is the energy of a single one-cycle row-group
    operation, i.e. the cost of a unit-complexity operation.
    """

    rows: int = 1024
    cols: int = 1024
    mats: int = 1024
    cycle_time_ns: float = 10.0
    energy_per_cycle_pj: float = 0.1

    def __post_init__(self) -> None:
        _check(self.rows >= 1, f"rows must be >= 1, got {self.rows}")
        _check(self.cols >= 1, f"cols must be >= 1, got {self.cols}")
        _check(self.mats >= 1, f"mats must be >= 1, got {self.mats}")
        _check(self.cycle_time_ns > 0, f"cycle_time_ns must be > 0, got {self.cycle_time_ns}")
        _check(self.energy_per_cycle_pj > 0,
               f"energy_per_cycle_pj must be > 0, got {self.energy_per_cycle_pj}")

    @property
    def cycle_time_s(self) -> float:
        return self.cycle_time_ns * NS

    @property
    def energy_per_cycle_j(self) -> float:
        return self.energy_per_cycle_pj * PJ


@dataclass(frozen=True)
class CpuMachine:
    """CPU side of the comparison, reduced to its memory traffic costs."""

    bandwidth_bps: float = 4 * TBPS
    energy_per_bit_pj: float = 15.0

    def __post_init__(self) -> None:
        _check(self.bandwidth_bps > 0, f"bandwidth_bps must be > 0, got {self.bandwidth_bps}")
        _check(self.energy_per_bit_pj > 0,
               f"energy_per_bit_pj must be > 0, got {self.energy_per_bit_pj}")

    @classmethod
    def from_gbps(cls, gbps: float, energy_per_bit_pj: float = 15.0) -> "CpuMachine":
        return cls(bandwidth_bps=gbps * GBPS, energy_per_bit_pj=energy_per_bit_pj)

    @classmethod
    def from_tbps(cls, tbps: float, energy_per_bit_pj: float = 15.0) -> "CpuMachine":
        return cls(bandwidth_bps=tbps * TBPS, energy_per_bit_pj=energy_per_bit_pj)

    @property
    def bandwidth_gbps(self) -> float:
        return self.bandwidth_bps / GBPS

    @property
    def energy_per_bit_j(self) -> float:
        return self.energy_per_bit_pj * PJ


@dataclass(frozen=True)
class WorkloadPoint:
    """One operation's cost coordinates.

    oc_cycles:  NOR cycles to compute the operation on one row (OC).
    pac_cycles: data placement/alignment move cycles paid before compute (PAC).
    dio_bits:   bits moved between CPU and memory per operation (DIO).
    """

    oc_cycles: int
    pac_cycles: int = 0
    dio_bits: int = 48

    def __post_init__(self) -> None:
        _check(isinstance(self.oc_cycles, int) and self.oc_cycles >= 1,
               f"oc_cycles must be an integer >= 1, got {self.oc_cycles!r}")
        _check(isinstance(self.pac_cycles, int) and self.pac_cycles >= 0,
               f"pac_cycles must be an integer >= 0, got {self.pac_cycles!r}")
        _check(isinstance(self.dio_bits, int) and self.dio_bits >= 1,
               f"dio_bits must be an integer >= 1, got {self.dio_bits!r}")

    @property
    def pim_cycles(self) -> int:
        """Total cycles billed on the memory side (compute plus moves)."""
        return self.oc_cycles + self.pac_cycles


@dataclass(frozen=True)
class PowerBudget:
    """Thermal design power cap applied to one side of the comparison."""

    tdp_watts: float

    def __post_init__(self) -> None:
        _check(self.tdp_watts > 0, f"tdp_watts must be > 0, got {self.tdp_watts}")


@dataclass(frozen=True)
class Throughput:
    """Operations per second, kept at full precision until presentation."""

    ops_per_second: float

    def __post_init__(self) -> None:
        _check(math.isfinite(self.ops_per_second) and self.ops_per_second >= 0,
               f"ops_per_second must be finite and >= 0, got {self.ops_per_second}")

    @property
    def gops(self) -> float:
        return self.ops_per_second / GOPS

    def __str__(self) -> str:
        return f"{self.gops:.6g} GOPS"

"""Core throughput and energy equations of the bitlet model.

The memory side computes one operation per row per (OC + PAC) cycles,
across all rows of all arrays at once; the CPU side is bandwidth-bound
and pays DIO transferred bits per operation. Both sides can additionally
be capped by a power budget through their per-operation energy.

All functions are pure; machine and workload types validate themselves,
so nothing here raises for in-domain values.
"""

from __future__ import annotations

import math

from .machine import CpuMachine, PimMachine, PowerBudget, Throughput, WorkloadPoint


def perf_pim(pim: PimMachine, w: WorkloadPoint) -> Throughput:
    """Raw memory-side throughput: ROW x MAT rows finish every (OC+PAC) cycles."""
    return Throughput(pim.rows * pim.mats / (w.pim_cycles * pim.cycle_time_s))


def pl_perf_pim(pim: PimMachine, w: WorkloadPoint, power: PowerBudget) -> Throughput:
    """Power-limited memory-side throughput.

    The budget divided by the per-operation energy bounds how many
    operations can complete per second regardless of array count.
    """
    cap = power.tdp_watts / (pim.energy_per_cycle_j * w.pim_cycles)
    return Throughput(min(perf_pim(pim, w).ops_per_second, cap))


def mat_power_cap(pim: PimMachine, power: PowerBudget) -> int:
    """Largest array count the budget can keep fully active.

    Algebraically TDP*CT / (E_cycle * ROW): the point where the raw and
    power-limited branches of `pl_perf_pim` meet. Independent of the
    workload, because both branches scale identically with (OC+PAC).
    """
    exact = (power.tdp_watts * pim.cycle_time_s
             / (pim.energy_per_cycle_j * pim.rows))
    # one-ulp guard so an analytically-integer cap never floors one short
    return int(math.floor(exact * (1.0 + 1e-12) + 1e-12))


def perf_cpu(cpu: CpuMachine, w: WorkloadPoint) -> Throughput:
    """Raw CPU-side throughput: bandwidth divided by bits moved per op."""
    return Throughput(cpu.bandwidth_bps / w.dio_bits)


def pl_perf_cpu(cpu: CpuMachine, w: WorkloadPoint, power: PowerBudget) -> Throughput:
    """Power-limited CPU-side throughput (transfer energy pays the budget)."""
    cap = power.tdp_watts / (cpu.energy_per_bit_j * w.dio_bits)
    return Throughput(min(perf_cpu(cpu, w).ops_per_second, cap))


def energy_per_op_pim(pim: PimMachine, w: WorkloadPoint) -> float:
    """Memory-side energy per operation, in picojoules."""
    return pim.energy_per_cycle_pj * w.pim_cycles


def energy_per_op_cpu(cpu: CpuMachine, w: WorkloadPoint) -> float:
    """CPU-side energy per operation (transfer energy only), in picojoules."""
    return cpu.energy_per_bit_pj * w.dio_bits

"""Command line front end.

Subcommands:
    eval / litmus   affinity verdict for every workload in a config
    crossover       break-even operation complexity per workload
    sweep           one-parameter sweep of all four throughput columns
    power           power-cap analysis (array-count cap, capped throughput)
    reproduce       emit the standard figure datasets as CSV
    validate        run the catalog/move-program validation suite

Configuration comes from --config PATH or the BITLET_CONFIG environment
variable. Data outputs are deterministic: metadata lives on '#'-prefixed
header lines, values are printed with six significant digits, files end
with a newline and use LF endings.

Exit codes: 0 success, 1 validation-suite failure, 2 bad input,
3 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import model
from .analysis import (INTEGER_PARAMS, SWEEP_PARAMS, SweepSpec, UnknownParameter,
                       crossover_oc, energy_breakeven_oc, litmus, sweep)
from .catalog import catalog_table
from .config import Config, ConfigError, load_config
from .machine import GBPS, CpuMachine, PimMachine, PowerBudget, WorkloadPoint
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3

FIG_MATS = (1, 16, 256, 1024, 4096, 16384)
FIG_DIOS = (24, 48)
FIG_BWS_TBPS = (1, 4, 16)
FIG_TDP_WATTS = 20.0


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _csv(meta: list[str], columns: list[str], rows: list[tuple]) -> str:
    lines = [f"# {m}" for m in meta]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _load(args) -> Config:
    path = args.config or os.environ.get("BITLET_CONFIG")
    if not path:
        raise ConfigError("<none>", "no config given; use --config or BITLET_CONFIG")
    return load_config(path)


def _parse_grid(spec: str) -> tuple[np.ndarray, bool]:
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"grid must be lo:hi:steps[:log], got {spec!r}")
    lo, hi = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    log = False
    if len(parts) == 4:
        if parts[3] not in ("log", "lin"):
            raise ValueError(f"grid scale must be 'log' or 'lin', got {parts[3]!r}")
        log = parts[3] == "log"
    if steps < 1:
        raise ValueError("grid needs at least one step")
    if hi < lo:
        raise ValueError("grid upper bound below lower bound")
    if log and lo <= 0:
        raise ValueError("log grids need a positive lower bound")
    if steps == 1:
        return np.array([lo]), log
    values = np.geomspace(lo, hi, steps) if log else np.linspace(lo, hi, steps)
    return values, log


def _verdict_rows(cfg: Config):
    for w in cfg.workloads:
        yield litmus(cfg.pim, cfg.cpu, w, cfg.power)


def cmd_eval(args) -> int:
    cfg = _load(args)
    verdicts = list(_verdict_rows(cfg))
    human = []
    for v in verdicts:
        basis = "power-limited" if v.power_limited else "raw"
        pim, cpu = ((v.pl_pim_gops, v.pl_cpu_gops) if v.power_limited
                    else (v.pim_gops, v.cpu_gops))
        human.append(f"{v.name}: winner {v.winner.value} ({basis})  "
                     f"pim {_fmt(pim)} GOPS vs cpu {_fmt(cpu)} GOPS  "
                     f"speedup {_fmt(v.speedup)}")
        human.append(f"    oc={v.oc_cycles} pac={v.pac_cycles} dio={v.dio_bits}  "
                     f"crossover_oc={_fmt(v.crossover_oc)}  "
                     f"energy_ratio={_fmt(v.energy_ratio)}x")
    if not verdicts:
        human.append("no workloads in config")

    payload = [{**asdict(v), "winner": v.winner.value} for v in verdicts]
    if args.format == "json":
        doc = json.dumps(payload, indent=2) + "\n"
    else:
        cols = ["name", "oc_cycles", "pac_cycles", "dio_bits", "pim_gops",
                "cpu_gops", "pl_pim_gops", "pl_cpu_gops", "winner", "speedup",
                "crossover_oc", "energy_ratio"]
        doc = _csv(["bitlet eval"], cols,
                   [tuple(p[c] for c in cols) for p in payload])
    if args.out:
        print("\n".join(human))
        return _emit(doc, args.out)
    if args.format == "json":
        return _emit(doc, None)   # clean document for piping
    print("\n".join(human))
    return EXIT_OK


def cmd_crossover(args) -> int:
    cfg = _load(args)
    rows = []
    for w in cfg.workloads:
        point = w.resolve(cfg.pim)
        oc_star = crossover_oc(cfg.pim, cfg.cpu, point.dio_bits, point.pac_cycles)
        rows.append((w.name, point.dio_bits, point.pac_cycles, oc_star,
                     math.ceil(oc_star),
                     energy_breakeven_oc(cfg.pim, cfg.cpu, point.dio_bits,
                                         point.pac_cycles)))
    cols = ["name", "dio_bits", "pac_cycles", "crossover_oc",
            "cpu_wins_at_oc", "energy_breakeven_oc"]
    if args.format == "json":
        doc = json.dumps([dict(zip(cols, r)) for r in rows], indent=2) + "\n"
    else:
        doc = _csv(["bitlet crossover"], cols, rows)
    return _emit(doc, args.out)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    if not cfg.workloads:
        print("error: sweep needs at least one workload in the config",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        values, _ = _parse_grid(args.grid)
        param = args.param.upper()
        if param not in SWEEP_PARAMS:
            raise UnknownParameter(f"unknown sweep parameter {args.param!r}; "
                                   f"expected one of {', '.join(SWEEP_PARAMS)}")
        scale = GBPS if param == "BW" else 1.0  # BW grids are written in Gbps
        if param in INTEGER_PARAMS:
            grid = tuple(dict.fromkeys(int(round(v)) for v in values))
            if any(v < 1 for v in grid):
                raise ValueError(f"{param} grid values must round to >= 1")
        else:
            grid = tuple(float(v) * scale for v in values)
        rows = []
        for w in cfg.workloads:
            spec = SweepSpec(param=param, grid=grid, pim=cfg.pim, cpu=cfg.cpu,
                             workload=w.resolve(cfg.pim), power=cfg.power)
            for r in sweep(spec):
                rows.append((w.name, r.x / scale, r.pim_gops, r.cpu_gops,
                             r.pl_pim_gops, r.pl_cpu_gops))
    except (UnknownParameter, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    x_col = "bw_gbps" if param == "BW" else param.lower()
    cols = ["workload", x_col, "pim_gops", "cpu_gops",
            "pl_pim_gops", "pl_cpu_gops"]
    if args.format == "json":
        doc = json.dumps([dict(zip(cols, r)) for r in rows], indent=2) + "\n"
    else:
        doc = _csv([f"bitlet sweep param={param} grid={args.grid}"], cols, rows)
    return _emit(doc, args.out)


def cmd_power(args) -> int:
    cfg = _load(args)
    if cfg.power is None:
        print("error: power analysis needs a power section in the config",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    cap = model.mat_power_cap(cfg.pim, cfg.power)
    rows = []
    for w in cfg.workloads:
        point = w.resolve(cfg.pim)
        rows.append((w.name, point.oc_cycles, point.pac_cycles, point.dio_bits,
                     model.perf_pim(cfg.pim, point).gops,
                     model.pl_perf_pim(cfg.pim, point, cfg.power).gops,
                     model.perf_cpu(cfg.cpu, point).gops,
                     model.pl_perf_cpu(cfg.cpu, point, cfg.power).gops,
                     model.energy_per_op_pim(cfg.pim, point),
                     model.energy_per_op_cpu(cfg.cpu, point)))
    cols = ["name", "oc_cycles", "pac_cycles", "dio_bits", "pim_gops",
            "pl_pim_gops", "cpu_gops", "pl_cpu_gops", "pim_pj_per_op",
            "cpu_pj_per_op"]
    meta = [f"bitlet power tdp_watts={_fmt(cfg.power.tdp_watts)}",
            f"mat_power_cap={cap}"]
    if args.format == "json":
        doc = json.dumps({"tdp_watts": cfg.power.tdp_watts, "mat_power_cap": cap,
                          "workloads": [dict(zip(cols, r)) for r in rows]},
                         indent=2) + "\n"
    else:
        doc = _csv(meta, cols, rows)
    return _emit(doc, args.out)


def _fig_oc_grid() -> list[int]:
    # quarter-octave log spacing over 1..32768, deduplicated after rounding
    raw = (2 ** (k / 4) for k in range(0, 15 * 4 + 1))
    return sorted(dict.fromkeys(int(round(v)) for v in raw))


def _fig_machines():
    pim_by_mat = {m: PimMachine(mats=m) for m in FIG_MATS}
    cpu_by_bw = {bw: CpuMachine.from_tbps(bw) for bw in FIG_BWS_TBPS}
    return pim_by_mat, cpu_by_bw


def _reproduce_fig1() -> str:
    rows = [(r["n"], r["kind"], r["oc"]) for r in catalog_table()]
    rows.sort(key=lambda r: (r[1], r[0]))
    return _csv(["bitlet reproduce fig1: operation complexity in cycles"],
                ["n", "op", "oc"], rows)


def _reproduce_fig2(power: PowerBudget | None = None) -> str:
    pim_by_mat, cpu_by_bw = _fig_machines()
    cols = ["oc"]
    cols += [f"pim_gops_mat{m}" for m in FIG_MATS]
    cols += [f"cpu_gops_dio{d}_bw{bw}tbps" for d in FIG_DIOS for bw in FIG_BWS_TBPS]
    if power is not None:
        cols += [f"pl_pim_gops_mat{m}" for m in FIG_MATS]
        cols += [f"pl_cpu_gops_dio{d}_bw{bw}tbps"
                 for d in FIG_DIOS for bw in FIG_BWS_TBPS]
    rows = []
    for oc in _fig_oc_grid():
        w = WorkloadPoint(oc_cycles=oc, pac_cycles=0, dio_bits=FIG_DIOS[0])
        row = [oc]
        row += [model.perf_pim(pim_by_mat[m], w).gops for m in FIG_MATS]
        row += [model.perf_cpu(cpu_by_bw[bw],
                               WorkloadPoint(oc, 0, d)).gops
                for d in FIG_DIOS for bw in FIG_BWS_TBPS]
        if power is not None:
            row += [model.pl_perf_pim(pim_by_mat[m], w, power).gops
                    for m in FIG_MATS]
            row += [model.pl_perf_cpu(cpu_by_bw[bw], WorkloadPoint(oc, 0, d),
                                      power).gops
                    for d in FIG_DIOS for bw in FIG_BWS_TBPS]
        rows.append(tuple(row))
    which = "fig3" if power is not None else "fig2"
    meta = [f"bitlet reproduce {which}: throughput vs operation complexity",
            f"mats={','.join(map(str, FIG_MATS))} "
            f"dio={','.join(map(str, FIG_DIOS))} "
            f"bw_tbps={','.join(map(str, FIG_BWS_TBPS))}"]
    if power is not None:
        meta.append(f"tdp_watts={_fmt(power.tdp_watts)}")
    return _csv(meta, cols, rows)


def cmd_reproduce(args) -> int:
    out = args.out or f"{args.figure}.csv"
    if args.figure == "fig1":
        doc = _reproduce_fig1()
    elif args.figure == "fig2":
        doc = _reproduce_fig2()
    else:
        doc = _reproduce_fig2(PowerBudget(FIG_TDP_WATTS))
    return _emit(doc, out)


def cmd_validate(args) -> int:
    checks = run_validation(args.scope)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<{width}}  {c.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitlet",
        description="Throughput/energy model for bit-serial in-memory compute")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmt=True):
        p.add_argument("--config", help="config JSON path "
                                        "(default: $BITLET_CONFIG)")
        p.add_argument("--out", help="write output to this file")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv",
                           help="output document format (default csv)")

    p_eval = sub.add_parser("eval", help="workload affinity verdicts")
    add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)
    p_litmus = sub.add_parser("litmus", help="alias of eval")
    add_common(p_litmus)
    p_litmus.set_defaults(func=cmd_eval)

    p_cross = sub.add_parser("crossover",
                             help="break-even operation complexity per workload")
    add_common(p_cross)
    p_cross.set_defaults(func=cmd_crossover)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter over a grid")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True,
                         help=f"one of {', '.join(SWEEP_PARAMS)} "
                              f"(BW grid values are Gbps)")
    p_sweep.add_argument("--grid", required=True,
                         help="lo:hi:steps[:log] value grid")
    p_sweep.set_defaults(func=cmd_sweep)

    p_power = sub.add_parser("power", help="power-cap analysis")
    add_common(p_power)
    p_power.set_defaults(func=cmd_power)

    p_rep = sub.add_parser("reproduce", help="emit standard figure datasets")
    p_rep.add_argument("figure", choices=("fig1", "fig2", "fig3"))
    p_rep.add_argument("--out", help="output CSV path (default <figure>.csv)")
    p_rep.set_defaults(func=cmd_reproduce)

    p_val = sub.add_parser("validate", help="run the validation suite")
    p_val.add_argument("--scope", choices=("catalog", "pac", "all"),
                       default="all")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: simulate | criteria | verify | sweep.

Exit codes: 0 success (simulate: horizon reached), 10 blow-up detected
(the scientifically expected outcome, distinguished for automation), 1
failed verification checks, 2 configuration error, 3 corrupted state,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import blowup, verify
from .config import ConfigError, FourierInit, RunConfig, build_initial, parse_config
from .evolution import ModelParams, Termination, evolve
from .field import CorruptionError
from .output import fmt, summary_dict, write_json, write_timeseries_csv

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_CORRUPTION = 3
EXIT_IO = 4
EXIT_BLOWUP = 10

SWEEP_COLUMNS = (
    ("case",)
    + ("mu0", "mu1", "mu2")
    + tuple(
        f"{crit}_{suffix}"
        for crit in blowup.ALL_CRITERIA
        for suffix in ("holds", "bound")
    )
    + ("t_star", "rate_sigma")
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mulab",
        description=(
            "Numerical laboratory for the periodic mu-family of nonlinear "
            "nonlocal wave equations (muCH, muDP and relatives)."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "evolve the configured initial profile and write outputs"),
        ("criteria", "evaluate blow-up criteria without time integration"),
        ("verify", "run a named property suite"),
        ("sweep", "run a parameter sweep and aggregate a master CSV"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="path to config file")
        sp.add_argument("--out", default=None, help="override output directory")
        sp.add_argument("--n", type=int, default=None, help="override grid size")
        sp.add_argument("--quiet", action="store_true", help="suppress stdout")
        if name == "verify":
            sp.add_argument(
                "--suite", required=True, choices=verify.SUITES,
                help="property suite to run",
            )
        if name == "sweep":
            sp.add_argument(
                "--jobs", type=int, default=None,
                help="worker count (default: available parallelism)",
            )
    return p


def _load(args) -> RunConfig:
    cfg = parse_config(args.config)
    if args.out is not None:
        cfg.out_dir = args.out
    if args.n is not None:
        cfg.n = args.n
    return cfg


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _run_case(cfg: RunConfig, out_dir: Path, prefix: str, simulate: bool):
    """Shared simulate/criteria body; returns (record, report)."""
    u0 = build_initial(cfg)
    record = None
    if simulate:
        params = ModelParams.from_initial(u0, cfg.lam)
        record = evolve(u0, params, cfg.solver)
        report = blowup.evaluate_all(u0, cfg.lam, record=record, w_gate=cfg.w_gate)
        write_timeseries_csv(out_dir / f"{prefix}_timeseries.csv", record)
        write_json(out_dir / f"{prefix}_summary.json", summary_dict(record, report))
    else:
        report = blowup.evaluate_all(u0, cfg.lam)
        write_json(out_dir / f"{prefix}_criteria.json", report.to_dict())
    return record, report


def cmd_simulate(args) -> int:
    cfg = _load(args)
    out_dir = Path(cfg.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        record, report = _run_case(cfg, out_dir, cfg.prefix, simulate=True)
    except CorruptionError as exc:
        print(f"corrupted state: {exc}", file=sys.stderr)
        return EXIT_CORRUPTION
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    term = record.termination
    _say(
        args,
        f"termination={term.value} t_final={fmt(record.t_final)} "
        f"t_star={fmt(report.t_star)} rate_sigma={fmt(report.rate_sigma)}",
    )
    if term == Termination.CORRUPTION:
        return EXIT_CORRUPTION
    if term in (Termination.SLOPE_STOP, Termination.DT_COLLAPSE):
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_criteria(args) -> int:
    cfg = _load(args)
    out_dir = Path(cfg.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _, report = _run_case(cfg, out_dir, cfg.prefix, simulate=False)
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    for entry in report.criteria:
        _say(
            args,
            f"{entry.criterion}: applicable={fmt(entry.applicable)} "
            f"holds={fmt(entry.hypothesis_holds)} t_bound={fmt(entry.t_bound)}",
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args)
    out_dir = Path(cfg.out_dir)
    try:
        checks = verify.run_suite(args.suite, n=cfg.n)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_json(
            out_dir / f"{cfg.prefix}_verify_{args.suite}.json",
            {"suite": args.suite, "checks": [c.to_dict() for c in checks]},
        )
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    ok = True
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        _say(args, f"[{status}] {c.name}: {fmt(c.value)} vs {fmt(c.threshold)}")
        ok = ok and c.passed
    return EXIT_OK if ok else EXIT_CHECKS_FAILED


def _sweep_cases(cfg: RunConfig) -> list[tuple[str, RunConfig]]:
    axes = cfg.sweep.axes
    names = list(axes.keys())
    cases = []
    for idx, combo in enumerate(itertools.product(*(axes[k] for k in names))):
        case_cfg = RunConfig(
            lam=cfg.lam,
            n=cfg.n,
            init=cfg.init,
            solver=cfg.solver,
            w_gate=cfg.w_gate,
            out_dir=cfg.out_dir,
            prefix=cfg.prefix,
        )
        for name, value in zip(names, combo):
            if name == "lambda":
                case_cfg.lam = float(value)
            elif name == "n":
                case_cfg.n = int(value)
            elif name == "mean":
                if not isinstance(case_cfg.init, FourierInit):
                    raise ConfigError("sweep over mean requires a fourier init")
                case_cfg.init = replace(case_cfg.init, mean=float(value))
            elif name == "amplitude":
                if not isinstance(case_cfg.init, FourierInit):
                    raise ConfigError("sweep over amplitude requires a fourier init")
                scaled = tuple(
                    (k, ca * float(value), sa * float(value))
                    for k, ca, sa in case_cfg.init.modes
                )
                case_cfg.init = replace(case_cfg.init, modes=scaled)
        cases.append((f"case{idx:03d}", case_cfg))
    return cases


def _sweep_row(case_id: str, case_cfg: RunConfig, simulate: bool) -> dict:
    out_dir = Path(case_cfg.out_dir) / case_id
    out_dir.mkdir(parents=True, exist_ok=True)
    u0 = build_initial(case_cfg)
    record = None
    if simulate:
        params = ModelParams.from_initial(u0, case_cfg.lam)
        record = evolve(u0, params, case_cfg.solver)
        write_timeseries_csv(out_dir / f"{case_cfg.prefix}_timeseries.csv", record)
    report = blowup.evaluate_all(
        u0, case_cfg.lam, record=record, w_gate=case_cfg.w_gate
    )
    write_json(
        out_dir / f"{case_cfg.prefix}_summary.json",
        summary_dict(record, report) if record is not None else report.to_dict(),
    )
    row = {
        "case": case_id,
        "mu0": report.params.mu0,
        "mu1": report.params.mu1,
        "mu2": report.params.mu2,
        "t_star": report.t_star,
        "rate_sigma": report.rate_sigma,
    }
    for entry in report.criteria:
        row[f"{entry.criterion}_holds"] = entry.hypothesis_holds
        row[f"{entry.criterion}_bound"] = entry.t_bound
    return row


def cmd_sweep(args) -> int:
    cfg = _load(args)
    if cfg.sweep is None:
        print("config has no sweep section", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cases = _sweep_cases(cfg)
        jobs = args.jobs if args.jobs and args.jobs > 0 else None
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(
                pool.map(
                    lambda item: _sweep_row(item[0], item[1], cfg.sweep.simulate),
                    cases,
                )
            )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    rows.sort(key=lambda r: r["case"])
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join(fmt(row[c]) for c in SWEEP_COLUMNS))
    master = Path(cfg.out_dir) / f"{cfg.prefix}_sweep.csv"
    try:
        master.parent.mkdir(parents=True, exist_ok=True)
        master.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    _say(args, f"wrote {master} ({len(rows)} cases)")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "criteria":
            return cmd_criteria(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_sweep(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

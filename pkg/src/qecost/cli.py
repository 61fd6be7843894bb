"""``qecost`` command line: ``estimate``, ``sweep`` and ``composition``.

Exit status is decided by outcome class alone: 0 success, 1 bad input,
2 infeasible (the report is still written, with an N/A body).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import analysis, report
from .config import load_code_configs
from .errors import Infeasible, QECostError
from .estimator import CODES, estimate
from .model import (EstimatorOptions, effective_error, load_algorithm, load_technology,
                    resolve_spec_path)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; that status is reserved for infeasible runs.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _add_selection(sp: argparse.ArgumentParser, tech_required: bool = True) -> None:
    sp.add_argument("--tech", required=tech_required, help="technology spec (path or bundled name)")
    sp.add_argument("--alg", required=True, help="algorithm spec (path or bundled name)")
    sp.add_argument("--code", choices=CODES, required=tech_required)
    sp.add_argument("--epsilon", type=_positive, default=0.5,
                    help="allowed whole-run failure probability (default 0.5)")
    sp.add_argument("--include-memory-error", action="store_true",
                    help="add idle error over one average gate time to p")
    sp.add_argument("--codes-dir", help="directory holding code config overrides")
    sp.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qecost", description="Fault-tolerant resource estimates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    est = sub.add_parser("estimate", help="resources for one algorithm/technology/code")
    _add_selection(est)
    est.add_argument("--out", choices=("table", "csv", "json"), default="table")

    sw = sub.add_parser("sweep", help="compare both codes across physical error rates")
    sw.add_argument("--p-min", type=_positive, default=1e-10)
    sw.add_argument("--p-max", type=_positive, default=1e-2)
    sw.add_argument("--points", type=int, default=33)
    sw.add_argument("--target", type=_positive, default=1e-10, help="logical error per gate")
    sw.add_argument("--gate-time-ns", type=_positive, default=1000.0)
    sw.add_argument("--mix", help="JSON gate mix (weights or an algorithm spec); default Shor-1024")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", choices=("csv", "json"), default="csv")
    sw.add_argument("--codes-dir")
    sw.add_argument("--output")

    comp = sub.add_parser("composition", help="physical (or logical) gate-kind fractions")
    _add_selection(comp, tech_required=False)
    comp.add_argument("--logical", action="store_true", help="unencoded algorithm mix")
    comp.add_argument("--out", choices=("table", "csv", "json"), default="table")
    return parser


def _load_inputs(args):
    alg = load_algorithm(resolve_spec_path(args.alg))
    tech = load_technology(resolve_spec_path(args.tech)) if args.tech else None
    return alg, tech


def _options(args) -> EstimatorOptions:
    return EstimatorOptions(target_failure=args.epsilon, include_memory_error=args.include_memory_error)


def cmd_estimate(args) -> tuple[int, str]:
    alg, tech = _load_inputs(args)
    configs = load_code_configs(args.codes_dir)
    opts = _options(args)
    echo = {"epsilon": args.epsilon, "include_memory_error": args.include_memory_error}
    status = EXIT_OK
    notes = []
    try:
        est = estimate(alg, tech, args.code, opts, configs)
    except Infeasible as exc:
        est = None
        status = EXIT_INFEASIBLE
        notes.append(str(exc))
    else:
        if args.include_memory_error:
            notes.append(f"effective physical error {effective_error(tech, True):.3g}")
    doc = report.ReportDocument(alg.name, tech.name, args.code, echo, est, tuple(notes))
    render = {"table": report.render_table, "csv": report.render_estimate_csv,
              "json": report.render_json}[args.out]
    return status, render(doc)


def cmd_sweep(args) -> tuple[int, str]:
    if args.points < 1:
        raise InputError("--points: must be >= 1")
    if args.points > 1 and args.p_min >= args.p_max:
        raise InputError("--p-min must be smaller than --p-max")
    if args.workers < 1:
        raise InputError("--workers: must be >= 1")
    mix = analysis.GateMix.load(resolve_spec_path(args.mix)) if args.mix else None
    configs = load_code_configs(args.codes_dir)
    grid = analysis.default_grid(args.p_min, args.p_max, args.points)
    rows = analysis.sweep(grid, args.target, mix, args.gate_time_ns,
                          bs_cfg=configs.bacon_shor, sc_cfg=configs.surface, workers=args.workers)
    if args.out == "json":
        return EXIT_OK, report.render_sweep_json(rows)
    return EXIT_OK, report.render_sweep_csv(rows)


def cmd_composition(args) -> tuple[int, str]:
    alg, tech = _load_inputs(args)
    if args.logical:
        fractions = analysis.logical_composition(alg)
    else:
        if tech is None or args.code is None:
            raise InputError("--tech and --code are required unless --logical is given")
        try:
            est = estimate(alg, tech, args.code, _options(args), load_code_configs(args.codes_dir))
        except Infeasible as exc:
            return EXIT_INFEASIBLE, f"gate  fraction\nN/A   N/A\n\n[1] {exc}\n"
        fractions = analysis.count_fractions(est.gate_counts)
    pairs = analysis.report_fractions(fractions)
    if args.out == "csv":
        return EXIT_OK, report.render_fractions(pairs)
    if args.out == "json":
        return EXIT_OK, json.dumps({str(k): f for k, f in pairs}, indent=2) + "\n"
    width = max([len("gate")] + [len(str(k)) for k, _ in pairs])
    lines = [f"{'gate'.ljust(width)}  fraction"]
    lines += [f"{str(k).ljust(width)}  {f:.4f}" for k, f in pairs]
    return EXIT_OK, "\n".join(lines) + "\n"


COMMANDS = {"estimate": cmd_estimate, "sweep": cmd_sweep, "composition": cmd_composition}


def _describe(exc: Exception) -> str:
    key = getattr(exc, "key", None)
    text = str(exc)
    if key and key not in text:
        text = f"{key}: {text}"
    return text


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status, text = COMMANDS[args.command](args)
    except (QECostError, InputError) as exc:
        print(f"qecost {args.command}: error: {_describe(exc)}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"qecost {args.command}: error: {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

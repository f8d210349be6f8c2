"""Command-line front end: table generation, point evaluation, sweeps, verification.

Defaults reproduce the flagship configuration everywhere: period 0.125,
Q2.13 words, round to nearest even, computed t-vector.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, export
from .datapath import BasisRom, DatapathConfig, build_basis_rom, tanh_eval_fixed
from .kernels import active_backend
from .qformat import Q2_13, FixedWord, QFormat, RoundingMode, encode
from .spline import RANGE_MAX, build_control_table, tanh_ref

__all__ = ["build_parser", "main"]

# test-only hook: corrupts one basis ROM row so the verify failure path
# can be exercised end to end
FAULT_ENV = "CRTANH_FAULT_ROM_ROW"

_ROUNDING_CHOICES = [m.value for m in RoundingMode]


def _add_rounding(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--rounding",
        choices=_ROUNDING_CHOICES,
        default=RoundingMode.NEAREST_EVEN.value,
        help="rounding used for quantization and the final datapath round",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crtanh",
        description="Bit-accurate model of a Q2.13 Catmull-Rom tanh unit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "gen-lut",
        help="generate control-point and basis-ROM memory images",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--period", type=float, default=0.125, help="grid period")
    p.add_argument("--range-max", type=float, default=RANGE_MAX, help="interpolated range")
    p.add_argument("--frac-bits", type=int, default=13, help="fraction bits of a 16-bit word")
    _add_rounding(p)
    p.add_argument("--out", default="lut.memh", help="control-point memh path")
    p.add_argument("--rom", default=None, help="also write the basis ROM memh here")
    p.set_defaults(func=cmd_gen_lut)

    p = sub.add_parser(
        "eval",
        help="evaluate one input through the fixed datapath",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--raw", help="raw Q2.13 input word, decimal or 0x hex")
    g.add_argument("--real", type=float, help="real input, encoded to Q2.13 first")
    _add_rounding(p)
    p.add_argument(
        "--t-strategy",
        choices=["computed", "rom"],
        default="computed",
        help="basis numerator source",
    )
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "sweep",
        help="exhaustive error sweep of one configuration",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument(
        "--method",
        choices=list(analysis.METHODS),
        default=analysis.METHOD_CR,
        help="interpolation method",
    )
    p.add_argument(
        "--mode",
        choices=list(analysis.MODES),
        default=analysis.MODE_REAL,
        help="measurement mode",
    )
    p.add_argument("--period", type=float, default=0.125, help="grid period")
    _add_rounding(p)
    p.add_argument(
        "--fine-grid",
        type=int,
        default=None,
        metavar="N",
        help="use a uniform real grid of N points instead of the input codes",
    )
    p.add_argument("--chunk-size", type=int, default=None, help="sweep partition size")
    p.add_argument("--out", default=None, help="write the report here")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="report format")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "tables",
        help="reproduce the accuracy/size study against the reference targets",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument(
        "--mode",
        choices=[analysis.MODE_REAL, analysis.MODE_QLUT],
        default=analysis.MODE_REAL,
        help="measurement mode",
    )
    _add_rounding(p)
    p.add_argument("--out", default=None, help="write the report here")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="report format")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser(
        "verify",
        help="run the exhaustive datapath self-checks",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_rounding(p)
    p.set_defaults(func=cmd_verify)

    return parser


def cmd_gen_lut(args: argparse.Namespace) -> int:
    fmt = QFormat(total_bits=16, frac_bits=args.frac_bits)
    rounding = RoundingMode(args.rounding)
    table = build_control_table(
        args.period, args.range_max, quantized=True, fmt=fmt, rounding=rounding
    )
    path = export.emit_memh(table, args.out)
    print(
        f"control points: {len(table.raw)} entries "
        f"({table.n_segments} in range + 2 extension), "
        f"Q{fmt.total_bits - fmt.frac_bits - 1}.{fmt.frac_bits}, "
        f"rounding {rounding.value}"
    )
    print(f"wrote {path} ({len(table.raw)} lines) and {path}.json")
    if args.rom is not None:
        rom = build_basis_rom()
        rom_path = export.emit_memh(rom, args.rom)
        n_lines = rom.rows.shape[0] * rom.rows.shape[1]
        print(
            f"basis rom: {rom.rows.shape[0]} rows x {rom.rows.shape[1]} words, "
            f"{export.ROM_VALUE_BITS}-bit words"
        )
        print(f"wrote {rom_path} ({n_lines} lines) and {rom_path}.json")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    rounding = RoundingMode(args.rounding)
    if args.raw is not None:
        word = FixedWord(int(args.raw, 0), Q2_13)
    else:
        word = encode(args.real, Q2_13, rounding)
    cfg = DatapathConfig(t_strategy=args.t_strategy, rounding=rounding)
    table = build_control_table(cfg.period, quantized=True, rounding=rounding)
    rom: BasisRom | None = build_basis_rom() if cfg.t_strategy == "rom" else None
    out = tanh_eval_fixed(word, cfg, table, rom)
    ref = tanh_ref(word.value)
    err = out.value - ref
    print(f"input    raw 0x{word.raw & 0xffff:04x} ({word.raw})  value {word.value!r}")
    print(f"output   raw 0x{out.raw & 0xffff:04x} ({out.raw})  value {out.value!r}")
    print(f"tanh     {ref!r}")
    print(f"error    {err!r} ({abs(err) / Q2_13.ulp:.3f} ulp)")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    rounding = RoundingMode(args.rounding)
    report = analysis.sweep_error(
        args.method,
        args.mode,
        args.period,
        rounding=rounding,
        chunk_size=args.chunk_size,
        fine_grid_points=args.fine_grid,
    )
    print(
        f"method {report.method}   mode {report.mode}   "
        f"period {report.period}   rounding {report.rounding.value}"
    )
    if isinstance(report.argmax_input, int):
        where = f"argmax raw {report.argmax_input}"
    else:
        where = f"argmax x {report.argmax_input!r}"
    print(
        f"points {report.n_points}   rms {report.rms!r}   "
        f"max {report.max_abs!r}   {where}"
    )
    if args.out is not None:
        path = export.emit_report(report, args.out, args.format)
        print(f"wrote {path}")
    return 0


def cmd_tables(args: argparse.Namespace) -> int:
    rounding = RoundingMode(args.rounding)
    report = analysis.reproduce_tables(args.mode, rounding=rounding)
    cmp_by_key = {
        (c.period, c.method, c.metric): c for c in report.comparisons()
    }
    print(
        f"mode {report.mode}   rounding {report.rounding.value}   "
        f"grid {report.rows[0].pwl.n_points} codes   backend {active_backend()}"
    )
    header = (
        f"{'period':<8}{'depth':<7}{'quantity':<13}"
        f"{'rms':>10}{'target':>10}{'dev':>8}"
        f"{'max':>11}{'target':>10}{'dev':>8}"
    )
    print(header)
    for row in report.rows:
        for method in (analysis.METHOD_PWL, analysis.METHOD_CR, "gain"):
            c_rms = cmp_by_key[(row.period, method, "rms")]
            c_max = cmp_by_key[(row.period, method, "max")]
            prec = 2 if method == "gain" else 6
            print(
                f"{row.period:<8}{row.depth:<7}{method:<13}"
                f"{c_rms.measured:>10.{prec}f}{c_rms.target:>10.{prec}f}"
                f"{c_rms.rel_dev:>+7.1%}"
                f"{c_max.measured:>11.{prec}f}{c_max.target:>10.{prec}f}"
                f"{c_max.rel_dev:>+7.1%}"
            )
    ok = report.interpolation_ok()
    print(f"catmull-rom cells within {analysis.CELL_TOLERANCE:.0%}: {'yes' if ok else 'NO'}")
    if args.out is not None:
        path = export.emit_report(report, args.out, args.format)
        print(f"wrote {path}")
    return 0 if ok else 1


def cmd_verify(args: argparse.Namespace) -> int:
    rounding = RoundingMode(args.rounding)
    fault = os.environ.get(FAULT_ENV)
    fault_row = int(fault, 0) if fault else None
    suite = analysis.run_verification_suite(rounding=rounding, fault_rom_row=fault_row)
    n = len(suite.checks)
    for i, check in enumerate(suite.checks, 1):
        status = "INFO" if check.passed is None else ("PASS" if check.passed else "FAIL")
        print(f"[{i}/{n}] {check.name:<36} {status}  {check.detail}")
    print(f"result: {'PASS' if suite.passed else 'FAIL'}")
    return 0 if suite.passed else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Exhaustive error analysis and self-verification sweeps.

Errors are measured against float64 tanh over every 16-bit input code (a
finer real grid is available for sensitivity studies).  RMS accumulation
uses ``math.fsum``, so reports are independent of sweep partitioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .datapath import T_BITS, BasisRom, build_basis_rom
from .qformat import Q2_13, QFormat, RoundingMode, decode_array, encode_array
from .spline import TABLE_PERIODS, build_control_table, tanh_ref_array
from .targets import (
    CELL_TOLERANCE,
    GAIN_TOLERANCE,
    LUT_DEPTHS,
    TARGET_GAIN_MAX,
    TARGET_GAIN_RMS,
    TARGET_MAX,
    TARGET_RMS,
)

__all__ = [
    "METHOD_PWL",
    "METHOD_CR",
    "METHODS",
    "MODE_REAL",
    "MODE_QLUT",
    "MODE_FIXED",
    "MODES",
    "ErrorReport",
    "TableRow",
    "TableReport",
    "CellComparison",
    "EquivalenceResult",
    "MonotonicityReport",
    "CheckResult",
    "VerificationSuite",
    "full_code_range",
    "sweep_error",
    "reproduce_tables",
    "verify_equivalence",
    "check_monotonicity",
    "run_verification_suite",
]

METHOD_PWL = "pwl"
METHOD_CR = "catmull-rom"
METHODS = (METHOD_PWL, METHOD_CR)

# Measurement modes:
#   real          real-valued table entries, real arithmetic, real output
#   quantized-lut Q2.13 table entries, real arithmetic, output rounded to Q2.13
#   fixed-datapath the bit-accurate integer pipeline (catmull-rom, period 0.125)
MODE_REAL = "real"
MODE_QLUT = "quantized-lut"
MODE_FIXED = "fixed-datapath"
MODES = (MODE_REAL, MODE_QLUT, MODE_FIXED)


@dataclass(frozen=True)
class ErrorReport:
    """Error summary of one (method, mode, period) sweep.

    ``argmax_input`` is the raw input code on full code sweeps and the real
    abscissa on fine-grid sweeps.  Where several inputs attain the maximum,
    the one with the smallest magnitude is reported, non-negative first.
    """

    period: float
    depth: int
    method: str
    mode: str
    rounding: RoundingMode
    rms: float
    max_abs: float
    argmax_input: int | float
    n_points: int

    def __post_init__(self) -> None:
        if self.rms > self.max_abs:
            raise ValueError("rms cannot exceed the maximum error")


@dataclass(frozen=True)
class TableRow:
    """PWL and Catmull-Rom reports for one table depth."""

    period: float
    depth: int
    pwl: ErrorReport
    cr: ErrorReport

    @property
    def gain_rms(self) -> float:
        return self.pwl.rms / self.cr.rms

    @property
    def gain_max(self) -> float:
        return self.pwl.max_abs / self.cr.max_abs


@dataclass(frozen=True)
class CellComparison:
    """One measured cell or gain against its reference target."""

    period: float
    method: str  # "pwl", "catmull-rom", or "gain"
    metric: str  # "rms" or "max"
    measured: float
    target: float
    rel_dev: float
    within: bool


@dataclass(frozen=True)
class TableReport:
    """Full accuracy/size trade-off study: four depths, both methods."""

    mode: str
    rounding: RoundingMode
    rows: tuple[TableRow, ...]

    def row(self, period: float) -> TableRow:
        for r in self.rows:
            if r.period == period:
                return r
        raise KeyError(f"no row for period {period}")

    def comparisons(self) -> tuple[CellComparison, ...]:
        out = []
        for r in self.rows:
            cells = (
                (METHOD_PWL, "rms", r.pwl.rms, TARGET_RMS[r.period][0]),
                (METHOD_CR, "rms", r.cr.rms, TARGET_RMS[r.period][1]),
                (METHOD_PWL, "max", r.pwl.max_abs, TARGET_MAX[r.period][0]),
                (METHOD_CR, "max", r.cr.max_abs, TARGET_MAX[r.period][1]),
                ("gain", "rms", r.gain_rms, TARGET_GAIN_RMS[r.period]),
                ("gain", "max", r.gain_max, TARGET_GAIN_MAX[r.period]),
            )
            for method, metric, measured, target in cells:
                dev = measured / target - 1.0
                tol = GAIN_TOLERANCE if method == "gain" else CELL_TOLERANCE
                out.append(
                    CellComparison(
                        period=r.period,
                        method=method,
                        metric=metric,
                        measured=measured,
                        target=target,
                        rel_dev=dev,
                        within=abs(dev) <= tol,
                    )
                )
        return tuple(out)

    def interpolation_ok(self) -> bool:
        """True when every Catmull-Rom cell reproduces its target within tolerance."""
        return all(
            c.within
            for c in self.comparisons()
            if c.method == METHOD_CR
        )


def full_code_range(fmt: QFormat = Q2_13) -> np.ndarray:
    """Every raw input code of the format, ascending."""
    return np.arange(fmt.raw_min, fmt.raw_max + 1, dtype=np.int64)


def _validate_combo(method: str, mode: str, period: float) -> None:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == MODE_FIXED:
        if method != METHOD_CR:
            raise ValueError("the fixed datapath implements catmull-rom only")
        if period != 0.125:
            raise ValueError("the fixed datapath supports period 0.125 only")


def _approximation(
    method: str,
    mode: str,
    period: float,
    fmt: QFormat,
    rounding: RoundingMode,
    x: np.ndarray,
    raw: np.ndarray | None,
) -> np.ndarray:
    """Decoded model output over an input batch, per measurement mode."""
    if mode == MODE_FIXED:
        table = build_control_table(period, quantized=True, fmt=fmt, rounding=rounding)
        out, _ = kernels.fixed_eval_batch(raw, table.raw, rounding)
        return decode_array(out, fmt)
    table = build_control_table(
        period, quantized=(mode == MODE_QLUT), fmt=fmt, rounding=rounding
    )
    if method == METHOD_CR:
        f = kernels.cr_eval_batch(x, table.values, period, table.range_max)
    else:
        f = kernels.pwl_eval_batch(x, table.values, period, table.range_max)
    if mode == MODE_QLUT:
        # the output register rounds to the same format as the table words
        f = decode_array(encode_array(f, fmt, rounding), fmt)
    return f


def _canonical_argmax(err: np.ndarray, raw: np.ndarray | None, x: np.ndarray):
    """Pick the reported argmax: smallest input magnitude, non-negative first."""
    amax = float(np.max(np.abs(err)))
    hits = np.flatnonzero(np.abs(err) == amax)
    if raw is not None:
        cand = raw[hits]
        order = np.lexsort((cand < 0, np.abs(cand)))
        return amax, int(cand[order[0]])
    cand = x[hits]
    order = np.lexsort((cand < 0, np.abs(cand)))
    return amax, float(cand[order[0]])


def sweep_error(
    method: str,
    mode: str,
    period: float = 0.125,
    *,
    fmt: QFormat = Q2_13,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
    chunk_size: int | None = None,
    fine_grid_points: int | None = None,
) -> ErrorReport:
    """Measure one configuration exhaustively against float64 tanh.

    The default grid is all 2**total_bits input codes.  ``fine_grid_points``
    switches the real-valued modes to a uniform real grid for sensitivity
    analysis; the fixed datapath is defined on codes only.  ``chunk_size``
    partitions the sweep without changing any reported digit.
    """
    _validate_combo(method, mode, period)
    if fine_grid_points is not None:
        if mode == MODE_FIXED:
            raise ValueError("fine grids apply to the real-valued modes only")
        if fine_grid_points < 2:
            raise ValueError("fine_grid_points must be at least 2")
        x = np.linspace(fmt.value_min, fmt.value_max, fine_grid_points)
        raw = None
        n_points = fine_grid_points
    else:
        raw = full_code_range(fmt)
        x = decode_array(raw, fmt)
        n_points = len(raw)

    if chunk_size is None or chunk_size >= n_points:
        approx = _approximation(method, mode, period, fmt, rounding, x, raw)
    else:
        if chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        parts = []
        for lo in range(0, n_points, chunk_size):
            hi = lo + chunk_size
            parts.append(
                _approximation(
                    method, mode, period, fmt, rounding,
                    x[lo:hi], None if raw is None else raw[lo:hi],
                )
            )
        approx = np.concatenate(parts)

    err = approx - tanh_ref_array(x)
    sq = err * err
    rms = math.sqrt(math.fsum(sq.tolist()) / n_points)
    max_abs, argmax_input = _canonical_argmax(err, raw, x)
    return ErrorReport(
        period=float(period),
        depth=LUT_DEPTHS.get(period, round(4.0 / period)),
        method=method,
        mode=mode,
        rounding=rounding,
        rms=rms,
        max_abs=max_abs,
        argmax_input=argmax_input,
        n_points=n_points,
    )


def reproduce_tables(
    mode: str = MODE_REAL,
    *,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
    chunk_size: int | None = None,
) -> TableReport:
    """Run the full accuracy/size study at all four depths.

    Table reproduction is defined for the real-valued modes; the fixed
    datapath exists at one depth only and is covered by ``sweep_error``.
    """
    if mode not in (MODE_REAL, MODE_QLUT):
        raise ValueError("table reproduction runs in 'real' or 'quantized-lut' mode")
    rows = []
    for period in TABLE_PERIODS:
        pwl = sweep_error(
            METHOD_PWL, mode, period, rounding=rounding, chunk_size=chunk_size
        )
        cr = sweep_error(
            METHOD_CR, mode, period, rounding=rounding, chunk_size=chunk_size
        )
        rows.append(TableRow(period=period, depth=pwl.depth, pwl=pwl, cr=cr))
    return TableReport(mode=mode, rounding=rounding, rows=tuple(rows))


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of the computed-vs-ROM basis strategy comparison."""

    passed: bool
    n_checked: int
    first_divergence: tuple[int, int, int, int] | None  # (raw, u, acc computed, acc rom)

    def __str__(self) -> str:
        if self.passed:
            return f"{self.n_checked}/{self.n_checked} inputs identical"
        raw, u, a, b = self.first_divergence
        return f"first divergence at raw {raw} (u={u}): acc {a} vs {b}"


def verify_equivalence(
    table=None,
    rom: BasisRom | None = None,
    *,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
    fmt: QFormat = Q2_13,
) -> EquivalenceResult:
    """Compare the two t-vector strategies bit-exactly over every input code.

    Both the rounded outputs and the raw accumulators must match, so even a
    single-lsb ROM corruption that rounding would mask is still caught.
    """
    if table is None:
        table = build_control_table(0.125, quantized=True, fmt=fmt, rounding=rounding)
    if rom is None:
        rom = build_basis_rom()
    raw = full_code_range(fmt)
    out_c, acc_c = kernels.fixed_eval_batch(raw, table.raw, rounding)
    out_r, acc_r = kernels.fixed_eval_rom_batch(raw, table.raw, rom.rows, rounding)
    bad = np.flatnonzero((out_c != out_r) | (acc_c != acc_r))
    if bad.size == 0:
        return EquivalenceResult(passed=True, n_checked=len(raw), first_divergence=None)
    i = int(bad[0])
    r = int(raw[i])
    u = min(abs(r), fmt.raw_max) & ((1 << T_BITS) - 1)
    return EquivalenceResult(
        passed=False,
        n_checked=len(raw),
        first_divergence=(r, u, int(acc_c[i]), int(acc_r[i])),
    )


@dataclass(frozen=True)
class MonotonicityReport:
    """Adjacent-code regressions of one evaluator over the full input range."""

    violations: int
    locations: tuple[int, ...]  # raw x of the first few (x, x+1) regressions
    n_pairs: int


def check_monotonicity(
    method: str = METHOD_CR,
    mode: str = MODE_FIXED,
    period: float = 0.125,
    *,
    fmt: QFormat = Q2_13,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
    max_locations: int = 16,
) -> MonotonicityReport:
    """Count adjacent input pairs (x, x+1) where the evaluation decreases."""
    _validate_combo(method, mode, period)
    raw = full_code_range(fmt)
    x = decode_array(raw, fmt)
    approx = _approximation(method, mode, period, fmt, rounding, x, raw)
    drops = np.flatnonzero(np.diff(approx) < 0)
    return MonotonicityReport(
        violations=int(drops.size),
        locations=tuple(int(raw[i]) for i in drops[:max_locations]),
        n_pairs=len(raw) - 1,
    )


@dataclass(frozen=True)
class CheckResult:
    """One named verification check; ``passed`` is None for informational checks."""

    name: str
    passed: bool | None
    detail: str


@dataclass(frozen=True)
class VerificationSuite:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.passed is not None)


def run_verification_suite(
    *,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
    fmt: QFormat = Q2_13,
    fault_rom_row: int | None = None,
) -> VerificationSuite:
    """Self-checks of the fixed datapath, exhaustive over all input codes.

    ``fault_rom_row`` corrupts one basis ROM row by one lsb before the
    strategy comparison; it exists so the failure path of the equivalence
    check stays testable end to end.
    """
    table = build_control_table(0.125, quantized=True, fmt=fmt, rounding=rounding)
    rom = build_basis_rom()
    if fault_rom_row is not None:
        rows = rom.rows.copy()
        rows[fault_rom_row, 1] ^= 1
        rom = BasisRom(rows=rows)

    checks = []

    eq = verify_equivalence(table, rom, rounding=rounding, fmt=fmt)
    checks.append(
        CheckResult("t-vector strategy equivalence", eq.passed, str(eq))
    )

    raw = full_code_range(fmt)
    out, acc = kernels.fixed_eval_batch(raw, table.raw, rounding)
    zero_i = -fmt.raw_min  # index of raw 0

    pos = out[zero_i + 1 :]
    neg = out[zero_i - 1 : 0 : -1]
    top = int(out[-1])
    sym_ok = (
        bool(np.all(neg == -pos))
        and int(out[zero_i]) == 0
        and int(out[0]) == (fmt.raw_max if top == fmt.raw_min else -top)
    )
    checks.append(
        CheckResult(
            "odd symmetry",
            sym_ok,
            "f(-x) == -f(x) for all codes, minimum word saturates",
        )
    )

    grid_i = zero_i + (np.arange(table.n_segments, dtype=np.int64) << 10)
    grid_ok = bool(np.all(out[grid_i] == table.raw[: table.n_segments]))
    checks.append(
        CheckResult(
            "grid-point exactness",
            grid_ok,
            f"table entries returned verbatim at all {table.n_segments} grid codes",
        )
    )

    amax_out = int(np.max(np.abs(out)))
    range_ok = amax_out < fmt.scale
    checks.append(
        CheckResult(
            "output range",
            range_ok,
            f"max |output| = {amax_out} < {fmt.scale}; no saturation events",
        )
    )

    amax_acc = int(np.max(np.abs(acc)))
    acc_ok = amax_acc < (1 << 47)
    checks.append(
        CheckResult(
            "accumulator bound",
            acc_ok,
            f"max |acc| = 2**{math.log2(amax_acc):.3f} < 2**47",
        )
    )

    mono = check_monotonicity(rounding=rounding, fmt=fmt)
    checks.append(
        CheckResult(
            "monotonicity (informational)",
            None,
            f"{mono.violations} adjacent-code regressions over {mono.n_pairs} pairs",
        )
    )

    return VerificationSuite(checks=tuple(checks))

"""Hardware- and analysis-facing serialization.

memh images load directly into Verilog ``$readmemh``; CSV/JSON reports
carry the sweep results.  All writers are deterministic: same
configuration, same bytes, no timestamps.  Floats are serialized with
``repr`` so every digit round-trips exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .analysis import ErrorReport, TableReport, TableRow
from .datapath import BASIS_SCALE_BITS, BasisRom, T_BITS
from .qformat import RoundingMode
from .spline import ControlPointTable

__all__ = [
    "ROM_VALUE_BITS",
    "ROM_LINE_BITS",
    "emit_memh",
    "read_memh",
    "emit_report",
    "read_error_report",
    "read_table_report",
]

# Basis numerators reach exactly +/-2**31, so they need 33 signed bits; the
# memh lines pad to 36 bits (9 hex digits) with zero extension.
ROM_VALUE_BITS = 33
ROM_LINE_BITS = 36

_REPORT_COLUMNS = (
    "period",
    "depth",
    "method",
    "mode",
    "rounding",
    "rms",
    "max_abs",
    "argmax_input",
    "n_points",
    "gain_rms",
    "gain_max",
)


def _check_dest(dest) -> Path:
    if not str(dest):
        raise ValueError("destination path must not be empty")
    return Path(dest)


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="ascii")


def emit_memh(obj: ControlPointTable | BasisRom, dest) -> Path:
    """Write a memory image plus a sidecar JSON describing its layout.

    Control tables emit one 16-bit two's-complement word per line; basis
    ROMs emit one 33-bit word per line (zero-extended to 36 bits), u-major
    with the four numerators of each u on consecutive lines.
    """
    path = _check_dest(dest)
    if isinstance(obj, ControlPointTable):
        if not obj.quantized:
            raise ValueError("memh export requires a quantized control table")
        bits = obj.fmt.total_bits
        mask = (1 << bits) - 1
        width = (bits + 3) // 4
        lines = [f"{int(r) & mask:0{width}x}" for r in obj.raw]
        sidecar = {
            "kind": "control-points",
            "function": "tanh",
            "grid_origin": 0.0,
            "period": obj.period,
            "range_max": obj.range_max,
            "entry_count": len(obj.raw),
            "in_range_entries": obj.n_segments,
            "extension_entries": 2,
            "word_bits": bits,
            "frac_bits": obj.fmt.frac_bits,
            "rounding": obj.rounding.value,
        }
    elif isinstance(obj, BasisRom):
        mask = (1 << ROM_VALUE_BITS) - 1
        width = ROM_LINE_BITS // 4
        lines = [
            f"{int(v) & mask:0{width}x}" for row in obj.rows for v in row
        ]
        sidecar = {
            "kind": "basis-rom",
            "rows": obj.rows.shape[0],
            "words_per_row": obj.rows.shape[1],
            "word_order": ["n_m1", "n_0", "n_p1", "n_p2"],
            "value_bits": ROM_VALUE_BITS,
            "line_bits": ROM_LINE_BITS,
            "scale_bits": BASIS_SCALE_BITS,
            "t_bits": T_BITS,
        }
    else:
        raise TypeError(f"cannot emit memh for {type(obj).__name__}")
    _write_text(path, "\n".join(lines) + "\n")
    _write_text(
        path.with_name(path.name + ".json"),
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n",
    )
    return path


def read_memh(path, *, line_bits: int, value_bits: int) -> list[int]:
    """Parse a memh image back to exact signed integers.

    Validates line width, the zero-extension padding, and interprets the
    low ``value_bits`` as two's complement.
    """
    if value_bits > line_bits:
        raise ValueError("value_bits cannot exceed line_bits")
    width = (line_bits + 3) // 4
    sign_bit = 1 << (value_bits - 1)
    full = 1 << value_bits
    out = []
    for ln, line in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        word = line.strip()
        if len(word) != width:
            raise ValueError(f"{path}:{ln}: expected {width} hex digits, got {word!r}")
        v = int(word, 16)
        if v >> value_bits:
            raise ValueError(f"{path}:{ln}: padding bits above bit {value_bits} are set")
        out.append(v - full if v & sign_bit else v)
    return out


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _error_cells(r: ErrorReport, gain_rms=None, gain_max=None) -> list[str]:
    return [
        _fmt_cell(r.period),
        _fmt_cell(r.depth),
        r.method,
        r.mode,
        r.rounding.value,
        _fmt_cell(r.rms),
        _fmt_cell(r.max_abs),
        _fmt_cell(r.argmax_input),
        _fmt_cell(r.n_points),
        _fmt_cell(gain_rms),
        _fmt_cell(gain_max),
    ]


def _error_obj(r: ErrorReport) -> dict:
    return {
        "period": r.period,
        "depth": r.depth,
        "method": r.method,
        "mode": r.mode,
        "rounding": r.rounding.value,
        "rms": r.rms,
        "max_abs": r.max_abs,
        "argmax_input": r.argmax_input,
        "n_points": r.n_points,
    }


def emit_report(report: ErrorReport | TableReport, dest, fmt: str = "csv") -> Path:
    """Write a sweep report or a full table study as CSV or JSON."""
    path = _check_dest(dest)
    if fmt not in ("csv", "json"):
        raise ValueError(f"report format must be 'csv' or 'json', got {fmt!r}")
    if isinstance(report, ErrorReport):
        if fmt == "csv":
            lines = [",".join(_REPORT_COLUMNS), ",".join(_error_cells(report))]
            _write_text(path, "\n".join(lines) + "\n")
        else:
            obj = _error_obj(report) | {"gain_rms": None, "gain_max": None}
            _write_text(path, json.dumps(obj, indent=2) + "\n")
    elif isinstance(report, TableReport):
        if fmt == "csv":
            lines = [",".join(_REPORT_COLUMNS)]
            for row in report.rows:
                lines.append(",".join(_error_cells(row.pwl)))
                lines.append(",".join(_error_cells(row.cr, row.gain_rms, row.gain_max)))
            _write_text(path, "\n".join(lines) + "\n")
        else:
            obj = {
                "mode": report.mode,
                "rounding": report.rounding.value,
                "rows": [
                    {
                        "period": row.period,
                        "depth": row.depth,
                        "pwl": _error_obj(row.pwl),
                        "cr": _error_obj(row.cr),
                        "gain_rms": row.gain_rms,
                        "gain_max": row.gain_max,
                    }
                    for row in report.rows
                ],
            }
            _write_text(path, json.dumps(obj, indent=2) + "\n")
    else:
        raise TypeError(f"cannot emit report for {type(report).__name__}")
    return path


def _parse_argmax(s: str) -> int | float:
    return float(s) if any(c in s for c in ".eE") else int(s)


def _error_from_cells(cells: dict[str, str]) -> ErrorReport:
    return ErrorReport(
        period=float(cells["period"]),
        depth=int(cells["depth"]),
        method=cells["method"],
        mode=cells["mode"],
        rounding=RoundingMode(cells["rounding"]),
        rms=float(cells["rms"]),
        max_abs=float(cells["max_abs"]),
        argmax_input=_parse_argmax(cells["argmax_input"]),
        n_points=int(cells["n_points"]),
    )


def _error_from_obj(obj: dict) -> ErrorReport:
    return ErrorReport(
        period=obj["period"],
        depth=obj["depth"],
        method=obj["method"],
        mode=obj["mode"],
        rounding=RoundingMode(obj["rounding"]),
        rms=obj["rms"],
        max_abs=obj["max_abs"],
        argmax_input=obj["argmax_input"],
        n_points=obj["n_points"],
    )


def _csv_rows(path) -> list[dict[str, str]]:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    header = lines[0].split(",")
    if tuple(header) != _REPORT_COLUMNS:
        raise ValueError(f"{path}: unexpected report columns {header}")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:] if ln]


def _infer_fmt(path, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    return "json" if str(path).endswith(".json") else "csv"


def read_error_report(path, fmt: str | None = None) -> ErrorReport:
    """Parse a single-sweep report; exact inverse of ``emit_report``."""
    if _infer_fmt(path, fmt) == "json":
        return _error_from_obj(json.loads(Path(path).read_text(encoding="ascii")))
    rows = _csv_rows(path)
    if len(rows) != 1:
        raise ValueError(f"{path}: expected one data row, found {len(rows)}")
    return _error_from_cells(rows[0])


def read_table_report(path, fmt: str | None = None) -> TableReport:
    """Parse a table study report; exact inverse of ``emit_report``."""
    if _infer_fmt(path, fmt) == "json":
        obj = json.loads(Path(path).read_text(encoding="ascii"))
        rows = tuple(
            TableRow(
                period=row["period"],
                depth=row["depth"],
                pwl=_error_from_obj(row["pwl"]),
                cr=_error_from_obj(row["cr"]),
            )
            for row in obj["rows"]
        )
        return TableReport(
            mode=obj["mode"], rounding=RoundingMode(obj["rounding"]), rows=rows
        )
    rows = _csv_rows(path)
    if len(rows) % 2:
        raise ValueError(f"{path}: expected pwl/cr row pairs")
    table_rows = []
    for i in range(0, len(rows), 2):
        pwl = _error_from_cells(rows[i])
        cr = _error_from_cells(rows[i + 1])
        table_rows.append(
            TableRow(period=pwl.period, depth=pwl.depth, pwl=pwl, cr=cr)
        )
    first = _error_from_cells(rows[0])
    return TableReport(
        mode=first.mode, rounding=first.rounding, rows=tuple(table_rows)
    )

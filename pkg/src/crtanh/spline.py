"""Real-valued reference models: tanh oracle, Catmull-Rom interpolant, PWL baseline.

These are the plain-float golden implementations that the integer datapath
and the batch kernels are checked against.  The scalar evaluators use the
same expression structure as the kernels so results match bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qformat import Q2_13, QFormat, RoundingMode, decode_array, encode_array

__all__ = [
    "RANGE_MAX",
    "TABLE_PERIODS",
    "tanh_ref",
    "tanh_ref_array",
    "cr_basis",
    "segment_locate",
    "ControlPointTable",
    "build_control_table",
    "cr_eval_real",
    "pwl_eval_real",
]

# Approximation range: |x| < 4.0 interpolated, |x| >= 4.0 handled by clamping.
# tanh(4.0) = 0.99933, already within one output lsb of saturation.
RANGE_MAX = 4.0

# Table depths studied for the accuracy/size trade-off (depth = 4.0 / period).
TABLE_PERIODS = (0.5, 0.25, 0.125, 0.0625)


def tanh_ref(x: float) -> float:
    """Full-precision hyperbolic tangent, exactly odd by construction."""
    if x < 0:
        return -float(np.tanh(-x))
    return float(np.tanh(x))


def tanh_ref_array(x: np.ndarray) -> np.ndarray:
    """Vectorized ``tanh_ref`` with the same sign fold."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < 0, -np.tanh(-x), np.tanh(x))


def cr_basis(t: float) -> tuple[float, float, float, float]:
    """The four Catmull-Rom basis weights at interpolation fraction t in [0, 1].

    The 1/2 normalisation of the standard basis is folded in, so the weights
    sum to exactly 1 and the spline interpolates its control points at
    t = 0 and t = 1.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    t2 = t * t
    t3 = t2 * t
    w_m1 = 0.5 * (-t3 + 2.0 * t2 - t)
    w_0 = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0)
    w_p1 = 0.5 * (-3.0 * t3 + 4.0 * t2 + t)
    w_p2 = 0.5 * (t3 - t2)
    return w_m1, w_0, w_p1, w_p2


def _segment_count(period: float, range_max: float) -> int:
    """Number of interpolation segments; range_max must be a whole number of periods."""
    if period <= 0 or range_max <= 0:
        raise ValueError(f"period and range_max must be positive, got {period}/{range_max}")
    n = range_max / period
    r = round(n)
    if r < 1 or abs(n - r) > 1e-9:
        raise ValueError(
            f"range_max {range_max} is not an integer number of periods {period}"
        )
    return int(r)


def segment_locate(
    x: float, period: float, range_max: float = RANGE_MAX
) -> tuple[int, float]:
    """Map a non-negative x to (segment index k, fraction t in [0, 1]).

    Inputs at or beyond range_max clamp to the top of the last segment,
    which evaluates to the last in-range control point.
    """
    if x < 0:
        raise ValueError("x must be non-negative; fold the sign before locating")
    nseg = _segment_count(period, range_max)
    if x >= range_max:
        return nseg - 1, 1.0
    xi = x / period
    k = min(int(xi), nseg - 1)  # floor; guard against xi rounding up to nseg
    return k, xi - k


@dataclass(frozen=True, eq=False)
class ControlPointTable:
    """Uniform tanh samples plus two upper extension entries.

    ``values[i]`` holds tanh(i * period) for i = 0 .. n_segments + 1.  The two
    entries past range_max give the last segment a full neighbour quad; the
    left neighbour of segment 0 is synthesised from odd symmetry (-values[1])
    and is never stored.
    """

    period: float
    range_max: float
    values: np.ndarray  # float64, decoded values when quantized
    raw: np.ndarray | None  # int64 raw words when quantized, else None
    fmt: QFormat = Q2_13
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN

    @property
    def n_segments(self) -> int:
        return len(self.values) - 2

    @property
    def quantized(self) -> bool:
        return self.raw is not None

    def grid(self) -> np.ndarray:
        """Sample abscissae i * period, including the two extension points."""
        return np.arange(len(self.values), dtype=np.float64) * self.period

    def neighbor_values(self, k: int) -> tuple[float, float, float, float]:
        """Decoded control quad (P[k-1], P[k], P[k+1], P[k+2]) for segment k."""
        if not 0 <= k < self.n_segments:
            raise ValueError(f"segment index {k} out of range 0..{self.n_segments - 1}")
        v = self.values
        pm1 = -v[1] if k == 0 else v[k - 1]
        return float(pm1), float(v[k]), float(v[k + 1]), float(v[k + 2])

    def neighbor_raw(self, k: int) -> tuple[int, int, int, int]:
        """Raw control quad for segment k; table must be quantized."""
        if self.raw is None:
            raise ValueError("raw neighbour quads require a quantized table")
        if not 0 <= k < self.n_segments:
            raise ValueError(f"segment index {k} out of range 0..{self.n_segments - 1}")
        r = self.raw
        pm1 = -r[1] if k == 0 else r[k - 1]
        return int(pm1), int(r[k]), int(r[k + 1]), int(r[k + 2])


def build_control_table(
    period: float,
    range_max: float = RANGE_MAX,
    *,
    quantized: bool = False,
    fmt: QFormat = Q2_13,
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN,
) -> ControlPointTable:
    """Sample tanh on a uniform grid and optionally quantize the samples."""
    nseg = _segment_count(period, range_max)
    grid = np.arange(nseg + 2, dtype=np.float64) * period
    values = tanh_ref_array(grid)
    raw = None
    if quantized:
        raw = encode_array(values, fmt, rounding)
        values = decode_array(raw, fmt)
    if values[0] != 0.0:
        raise ValueError("first control point must be exactly zero")
    diffs = np.diff(values)
    if quantized:
        # adjacent samples may quantize to the same word deep in the
        # saturated tail (period 0.0625 does), so only non-decreasing holds
        if np.any(diffs < 0):
            raise ValueError("quantized control points must be non-decreasing")
    elif np.any(diffs <= 0):
        raise ValueError("control points must be strictly increasing")
    return ControlPointTable(
        period=float(period),
        range_max=float(range_max),
        values=values,
        raw=raw,
        fmt=fmt,
        rounding=rounding,
    )


def cr_eval_real(x: float, table: ControlPointTable) -> float:
    """Evaluate the Catmull-Rom interpolant at x, folding the sign for x < 0."""
    if x < 0:
        return -cr_eval_real(-x, table)
    k, t = segment_locate(x, table.period, table.range_max)
    pm1, p0, p1, p2 = table.neighbor_values(k)
    w_m1, w_0, w_p1, w_p2 = cr_basis(t)
    return w_m1 * pm1 + w_0 * p0 + w_p1 * p1 + w_p2 * p2


def pwl_eval_real(x: float, table: ControlPointTable) -> float:
    """Piecewise-linear baseline over the same control points."""
    if x < 0:
        return -pwl_eval_real(-x, table)
    k, t = segment_locate(x, table.period, table.range_max)
    _, p0, p1, _ = table.neighbor_values(k)
    return (1.0 - t) * p0 + t * p1

"""Bit-accurate integer model of the spline evaluator datapath.

Input and output are 16-bit Q2.13 words.  The five msbs of the magnitude
select the table segment, the ten lsbs are the interpolation fraction u.
The four basis numerators are exact integers at scale 2**31 (the cubic in
u at scale 2**30 with the basis 1/2 folded in), the dot product against the
Q2.13 control quad accumulates exactly at scale 2**44, and the single
rounding in the whole pipeline is the final shift back to Q2.13.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qformat import Q2_13, FixedWord, QFormat, RoundingMode, round_shift
from .spline import RANGE_MAX, ControlPointTable

__all__ = [
    "INDEX_BITS",
    "T_BITS",
    "BASIS_SCALE_BITS",
    "ACC_SCALE_BITS",
    "BasisFixed",
    "BasisRom",
    "DatapathConfig",
    "split_input",
    "t_vector_compute",
    "build_basis_rom",
    "mac_dot",
    "tanh_eval_fixed",
]

INDEX_BITS = 5
T_BITS = 10
U_MAX = (1 << T_BITS) - 1

# Basis numerators are w_i * 2**31: u is t * 2**10, the cubic terms land on
# scale 2**30, and the basis' 1/2 folds into one extra doubling of the
# integer coefficients.  The widest numerator is exactly +/-2**31 (33-bit
# signed), and together with 16-bit control words the accumulator stays
# within 48 bits signed.
BASIS_SCALE_BITS = 3 * T_BITS + 1
ACC_SCALE_BITS = BASIS_SCALE_BITS + Q2_13.frac_bits

T_STRATEGIES = ("computed", "rom")


class BasisFixed(NamedTuple):
    """Integer basis numerators at scale 2**31 for one value of u."""

    n_m1: int
    n_0: int
    n_p1: int
    n_p2: int


@dataclass(frozen=True, eq=False)
class BasisRom:
    """Precomputed basis numerators for all 1024 values of u.

    Models the ROM alternative to computing the t-vector in logic; both
    strategies must produce identical words for every u.
    """

    rows: np.ndarray  # int64, shape (1024, 4), columns (n_m1, n_0, n_p1, n_p2)

    def row(self, u: int) -> BasisFixed:
        if not 0 <= u <= U_MAX:
            raise ValueError(f"u must lie in 0..{U_MAX}, got {u}")
        r = self.rows[u]
        return BasisFixed(int(r[0]), int(r[1]), int(r[2]), int(r[3]))


@dataclass(frozen=True)
class DatapathConfig:
    """Fixed evaluator configuration.

    The implemented datapath is the 32-segment unit: 5 index bits, 10
    fraction bits, period 0.125 over [0, 4).  Other periods belong to the
    real-valued models; requesting them here is a configuration error.
    """

    period: float = 0.125
    index_bits: int = INDEX_BITS
    t_bits: int = T_BITS
    t_strategy: str = "computed"
    rounding: RoundingMode = RoundingMode.NEAREST_EVEN
    fmt: QFormat = Q2_13

    def __post_init__(self) -> None:
        if self.t_strategy not in T_STRATEGIES:
            raise ValueError(f"t_strategy must be one of {T_STRATEGIES}")
        if self.index_bits != INDEX_BITS or self.t_bits != T_BITS:
            raise ValueError(
                f"only the {INDEX_BITS}/{T_BITS} magnitude split is implemented"
            )
        if self.fmt != Q2_13:
            raise ValueError("the fixed datapath is built around Q2.13 words")
        span = (1 << self.index_bits) * self.period
        if span != RANGE_MAX:
            raise ValueError(
                f"period {self.period} does not tile [0, {RANGE_MAX}) "
                f"with {1 << self.index_bits} segments"
            )

    @property
    def n_segments(self) -> int:
        return 1 << self.index_bits


def split_input(word: FixedWord) -> tuple[bool, int, int]:
    """Split a word into (negative, segment index k, fraction u).

    The magnitude uses a saturating absolute value: the most negative word
    maps to raw_max, i.e. the top of the last segment.
    """
    raw = word.raw
    negative = raw < 0
    m = -raw if negative else raw
    if m > word.fmt.raw_max:
        m = word.fmt.raw_max
    return negative, m >> T_BITS, m & U_MAX


def t_vector_compute(u: int) -> BasisFixed:
    """Basis numerators at scale 2**31, computed from u with exact integer ops.

    These are the Catmull-Rom weights at t = u / 1024 with the 1/2 folded
    in; they sum to exactly 2**31 for every u.
    """
    if not 0 <= u <= U_MAX:
        raise ValueError(f"u must lie in 0..{U_MAX}, got {u}")
    u2 = u * u
    u3 = u2 * u
    n_m1 = -u3 + 2 * u2 * (1 << T_BITS) - u * (1 << (2 * T_BITS))
    n_0 = 3 * u3 - 5 * u2 * (1 << T_BITS) + (1 << (3 * T_BITS + 1))
    n_p1 = -3 * u3 + 4 * u2 * (1 << T_BITS) + u * (1 << (2 * T_BITS))
    n_p2 = u3 - u2 * (1 << T_BITS)
    return BasisFixed(n_m1, n_0, n_p1, n_p2)


def build_basis_rom() -> BasisRom:
    """Tabulate ``t_vector_compute`` for every u; the ROM image is definitional."""
    rows = np.empty((U_MAX + 1, 4), dtype=np.int64)
    for u in range(U_MAX + 1):
        rows[u] = t_vector_compute(u)
    rows.setflags(write=False)
    return BasisRom(rows=rows)


def mac_dot(quad: tuple[int, int, int, int], basis: BasisFixed) -> int:
    """Exact dot product of a control quad with the basis numerators.

    Result is at scale 2**44; over all inputs of the 32-segment unit its
    magnitude stays below 2**44, comfortably inside a 48-bit accumulator.
    """
    pm1, p0, p1, p2 = quad
    return pm1 * basis.n_m1 + p0 * basis.n_0 + p1 * basis.n_p1 + p2 * basis.n_p2


def tanh_eval_fixed(
    word: FixedWord,
    cfg: DatapathConfig | None = None,
    table: ControlPointTable | None = None,
    rom: BasisRom | None = None,
) -> FixedWord:
    """Evaluate one input word through the integer datapath.

    ``table`` must be the quantized control table matching ``cfg``; pass a
    ``rom`` when ``cfg.t_strategy`` is "rom".  Negative inputs evaluate the
    magnitude and negate the result with saturating semantics.
    """
    if cfg is None:
        cfg = DatapathConfig()
    if table is None:
        raise ValueError("a quantized control table is required")
    if not table.quantized:
        raise ValueError("the fixed datapath needs a quantized table")
    if table.period != cfg.period or table.fmt != cfg.fmt:
        raise ValueError("control table does not match the datapath configuration")
    if word.fmt != cfg.fmt:
        raise ValueError("input word format does not match the datapath")

    negative, k, u = split_input(word)
    quad = table.neighbor_raw(k)
    if cfg.t_strategy == "rom":
        if rom is None:
            raise ValueError("t_strategy 'rom' requires a basis rom")
        basis = rom.row(u)
    else:
        basis = t_vector_compute(u)
    acc = mac_dot(quad, basis)
    out = round_shift(acc, BASIS_SCALE_BITS, cfg.rounding)
    out = min(max(out, cfg.fmt.raw_min), cfg.fmt.raw_max)
    if negative:
        out = cfg.fmt.raw_max if out == cfg.fmt.raw_min else -out
    return FixedWord(out, cfg.fmt)

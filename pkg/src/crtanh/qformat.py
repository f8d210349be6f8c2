"""Fixed-point word formats and saturating conversion helpers.

Everything here runs on plain Python integers so behaviour is bit-exact
and easy to diff against RTL simulation; the batch kernels mirror the
same semantics on int64 arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "RoundingMode",
    "QFormat",
    "FixedWord",
    "Q2_13",
    "encode",
    "decode",
    "encode_array",
    "decode_array",
    "negate_saturating",
    "round_to_int",
    "round_shift",
]


class RoundingMode(str, Enum):
    """Rounding behaviour for quantization and for the final datapath round."""

    NEAREST_EVEN = "nearest-even"
    NEAREST_AWAY = "nearest-away"
    TRUNCATE = "truncate"

    @property
    def code(self) -> int:
        """Small integer id used by the array kernels."""
        return _MODE_CODES[self]


_MODE_CODES = {
    RoundingMode.NEAREST_EVEN: 0,
    RoundingMode.NEAREST_AWAY: 1,
    RoundingMode.TRUNCATE: 2,
}


@dataclass(frozen=True)
class QFormat:
    """Signed two's-complement fixed-point format with ``frac_bits`` fraction bits."""

    total_bits: int = 16
    frac_bits: int = 13
    signed: bool = True

    def __post_init__(self) -> None:
        if not self.signed:
            raise ValueError("only signed formats are supported")
        if not 1 <= self.frac_bits < self.total_bits:
            raise ValueError(
                f"frac_bits must satisfy 1 <= frac_bits < total_bits, "
                f"got {self.frac_bits}/{self.total_bits}"
            )

    @property
    def scale(self) -> int:
        return 1 << self.frac_bits

    @property
    def raw_min(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def raw_max(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def ulp(self) -> float:
        return 1.0 / self.scale

    @property
    def value_min(self) -> float:
        return self.raw_min / self.scale

    @property
    def value_max(self) -> float:
        return self.raw_max / self.scale


Q2_13 = QFormat(total_bits=16, frac_bits=13)


@dataclass(frozen=True)
class FixedWord:
    """One fixed-point word: a raw integer plus the format that gives it meaning."""

    raw: int
    fmt: QFormat = Q2_13

    def __post_init__(self) -> None:
        if not self.fmt.raw_min <= self.raw <= self.fmt.raw_max:
            raise ValueError(
                f"raw value {self.raw} does not fit a {self.fmt.total_bits}-bit word"
            )

    @property
    def value(self) -> float:
        # raw / 2**frac_bits is exact in float64 for any raw that fits 53 bits
        return self.raw / self.fmt.scale

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        mask = (1 << self.fmt.total_bits) - 1
        width = (self.fmt.total_bits + 3) // 4
        return (
            f"FixedWord(0x{self.raw & mask:0{width}x}, "
            f"Q{self.fmt.total_bits - self.fmt.frac_bits - 1}.{self.fmt.frac_bits}, "
            f"value={self.value})"
        )


def round_to_int(value: float, mode: RoundingMode = RoundingMode.NEAREST_EVEN) -> int:
    """Round a finite float to an integer under the given mode.

    Uses floor/remainder arithmetic, which is exact in float64 for
    |value| < 2**52, so half-way cases are detected reliably instead of
    through the classic ``floor(x + 0.5)`` pitfall.
    """
    if mode is RoundingMode.TRUNCATE:
        return math.trunc(value)
    n = math.floor(value)
    frac = value - n  # exact: both operands share the same grid
    if frac > 0.5:
        return n + 1
    if frac < 0.5:
        return n
    if mode is RoundingMode.NEAREST_AWAY:
        return n + 1 if n >= 0 else n
    return n + (n & 1)


def round_shift(acc: int, shift: int, mode: RoundingMode = RoundingMode.NEAREST_EVEN) -> int:
    """Round the exact rational ``acc / 2**shift`` to an integer.

    Pure integer arithmetic; this is the model of the single rounding
    stage at the end of the MAC datapath.
    """
    q = acc >> shift  # floor division for two's complement
    r = acc - (q << shift)
    if mode is RoundingMode.TRUNCATE:
        return q + 1 if (q < 0 and r != 0) else q
    half = 1 << (shift - 1)
    if r > half:
        return q + 1
    if r < half:
        return q
    if mode is RoundingMode.NEAREST_AWAY:
        return q + 1 if q >= 0 else q
    return q + (q & 1)


def encode(
    value: float,
    fmt: QFormat = Q2_13,
    mode: RoundingMode = RoundingMode.NEAREST_EVEN,
) -> FixedWord:
    """Quantize a real value to a fixed-point word, saturating out-of-range inputs."""
    if not math.isfinite(value):
        raise ValueError(f"cannot encode non-finite value {value!r}")
    raw = round_to_int(value * fmt.scale, mode)
    raw = min(max(raw, fmt.raw_min), fmt.raw_max)
    return FixedWord(raw, fmt)


def decode(word: FixedWord) -> float:
    """Exact real value of a fixed-point word."""
    return word.value


def negate_saturating(word: FixedWord) -> FixedWord:
    """Two's-complement negation that clamps the most negative word.

    ``-raw_min`` does not fit the format, so it saturates to ``raw_max``;
    every other word negates exactly.
    """
    if word.raw == word.fmt.raw_min:
        return FixedWord(word.fmt.raw_max, word.fmt)
    return FixedWord(-word.raw, word.fmt)


def encode_array(
    values: np.ndarray,
    fmt: QFormat = Q2_13,
    mode: RoundingMode = RoundingMode.NEAREST_EVEN,
) -> np.ndarray:
    """Vectorized ``encode``: float64 array in, saturated int64 raw words out."""
    scaled = np.asarray(values, dtype=np.float64) * fmt.scale
    if not np.all(np.isfinite(scaled)):
        raise ValueError("cannot encode non-finite values")
    if mode is RoundingMode.TRUNCATE:
        raw = np.trunc(scaled).astype(np.int64)
    else:
        n = np.floor(scaled)
        frac = scaled - n
        ni = n.astype(np.int64)
        up = frac > 0.5
        tie = frac == 0.5
        if mode is RoundingMode.NEAREST_AWAY:
            tie_up = tie & (ni >= 0)
        else:
            tie_up = tie & ((ni & 1) == 1)
        raw = ni + up + tie_up
    return np.clip(raw, fmt.raw_min, fmt.raw_max)


def decode_array(raw: np.ndarray, fmt: QFormat = Q2_13) -> np.ndarray:
    """Vectorized ``decode``: int raw words to exact float64 values."""
    return np.asarray(raw, dtype=np.float64) / fmt.scale

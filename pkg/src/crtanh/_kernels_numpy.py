"""Pure-numpy batch kernels.

Bit-compatible fallback for the numba backend: every expression is written
in the same order with the same operations so float results match the JIT
kernels exactly and integer results match the scalar datapath model.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

_T_BITS = 10
_U_MASK = (1 << _T_BITS) - 1
_BASIS_SHIFT = 3 * _T_BITS + 1
_HALF = 1 << (_BASIS_SHIFT - 1)


def cr_eval_batch(
    x: np.ndarray, entries: np.ndarray, period: float, range_max: float
) -> np.ndarray:
    nseg = entries.shape[0] - 2
    neg = x < 0.0
    m = np.abs(x)
    over = m >= range_max
    xi = m / period
    k = np.minimum(xi.astype(np.int64), nseg - 1)
    k = np.where(over, nseg - 1, k)
    t = np.where(over, 1.0, xi - k)
    pm1 = np.where(k == 0, -entries[1], entries[np.maximum(k - 1, 0)])
    p0 = entries[k]
    p1 = entries[k + 1]
    p2 = entries[k + 2]
    t2 = t * t
    t3 = t2 * t
    w_m1 = 0.5 * (-t3 + 2.0 * t2 - t)
    w_0 = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0)
    w_p1 = 0.5 * (-3.0 * t3 + 4.0 * t2 + t)
    w_p2 = 0.5 * (t3 - t2)
    f = w_m1 * pm1 + w_0 * p0 + w_p1 * p1 + w_p2 * p2
    return np.where(neg, -f, f)


def pwl_eval_batch(
    x: np.ndarray, entries: np.ndarray, period: float, range_max: float
) -> np.ndarray:
    nseg = entries.shape[0] - 2
    neg = x < 0.0
    m = np.abs(x)
    over = m >= range_max
    xi = m / period
    k = np.minimum(xi.astype(np.int64), nseg - 1)
    k = np.where(over, nseg - 1, k)
    t = np.where(over, 1.0, xi - k)
    p0 = entries[k]
    p1 = entries[k + 1]
    f = (1.0 - t) * p0 + t * p1
    return np.where(neg, -f, f)


def _round_acc(acc: np.ndarray, rounding: int) -> np.ndarray:
    """Vectorized model of the final rounding stage (acc / 2**31)."""
    q = acc >> _BASIS_SHIFT
    r = acc - (q << _BASIS_SHIFT)
    if rounding == 2:  # truncate toward zero
        return q + ((q < 0) & (r != 0))
    up = r > _HALF
    tie = r == _HALF
    if rounding == 1:  # nearest, ties away from zero
        return q + up + (tie & (q >= 0))
    return q + up + (tie & ((q & 1) == 1))  # nearest, ties to even


def _split(raw: np.ndarray, raw_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    neg = raw < 0
    m = np.abs(raw)
    m = np.minimum(m, raw_max)  # saturating abs of the minimum word
    return neg, m >> _T_BITS, m & _U_MASK


def fixed_eval_batch(
    raw: np.ndarray, lut: np.ndarray, rounding: int
) -> tuple[np.ndarray, np.ndarray]:
    """Integer datapath over an input batch with computed basis numerators.

    Returns (output raw words, exact accumulator values at scale 2**44).
    """
    raw_max = 32767
    neg, k, u = _split(raw, raw_max)
    pm1 = np.where(k == 0, -lut[1], lut[np.maximum(k - 1, 0)])
    p0 = lut[k]
    p1 = lut[k + 1]
    p2 = lut[k + 2]
    u2 = u * u
    u3 = u2 * u
    n_m1 = -u3 + 2 * u2 * (1 << _T_BITS) - u * (1 << (2 * _T_BITS))
    n_0 = 3 * u3 - 5 * u2 * (1 << _T_BITS) + (1 << (3 * _T_BITS + 1))
    n_p1 = -3 * u3 + 4 * u2 * (1 << _T_BITS) + u * (1 << (2 * _T_BITS))
    n_p2 = u3 - u2 * (1 << _T_BITS)
    acc = pm1 * n_m1 + p0 * n_0 + p1 * n_p1 + p2 * n_p2
    out = _round_acc(acc, rounding)
    out = np.clip(out, -32768, 32767)
    out = np.where(neg, np.where(out == -32768, 32767, -out), out)
    return out, acc


def fixed_eval_rom_batch(
    raw: np.ndarray, lut: np.ndarray, rom: np.ndarray, rounding: int
) -> tuple[np.ndarray, np.ndarray]:
    """Same datapath with basis numerators fetched from a ROM image."""
    raw_max = 32767
    neg, k, u = _split(raw, raw_max)
    pm1 = np.where(k == 0, -lut[1], lut[np.maximum(k - 1, 0)])
    p0 = lut[k]
    p1 = lut[k + 1]
    p2 = lut[k + 2]
    acc = pm1 * rom[u, 0] + p0 * rom[u, 1] + p1 * rom[u, 2] + p2 * rom[u, 3]
    out = _round_acc(acc, rounding)
    out = np.clip(out, -32768, 32767)
    out = np.where(neg, np.where(out == -32768, 32767, -out), out)
    return out, acc

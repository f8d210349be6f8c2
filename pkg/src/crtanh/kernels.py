"""Backend selection for the hot sweep kernels.

The default backend is the numba JIT; set ``CRTANH_BACKEND=numpy`` to force
the pure-numpy fallback (it is also chosen automatically when numba is not
importable).  Both backends are bit-identical over the full input space;
``benchmarks/bench_backends.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from .qformat import RoundingMode

__all__ = [
    "ENV_VAR",
    "active_backend",
    "get_kernels",
    "cr_eval_batch",
    "pwl_eval_batch",
    "fixed_eval_batch",
    "fixed_eval_rom_batch",
]

ENV_VAR = "CRTANH_BACKEND"


def _load(name: str):
    if name == "numpy":
        from . import _kernels_numpy as mod
    elif name == "numba":
        from . import _kernels_numba as mod
    else:
        raise ValueError(f"unknown backend {name!r} (choose 'numba' or 'numpy')")
    return mod


def _resolve():
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        return _load("numpy")
    try:
        return _load("numba")
    except ImportError:
        if choice == "numba":
            raise
        return _load("numpy")


_BACKEND = _resolve()


def active_backend() -> str:
    """Name of the backend selected at import time."""
    return _BACKEND.BACKEND_NAME


def get_kernels(name: str | None = None):
    """The active kernel module, or a specific one by name (for benchmarks/tests)."""
    return _BACKEND if name is None else _load(name)


def _f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def cr_eval_batch(
    x, entries, period: float, range_max: float = 4.0
) -> np.ndarray:
    """Catmull-Rom interpolant over an input batch (sign fold included)."""
    return _BACKEND.cr_eval_batch(_f64(x), _f64(entries), float(period), float(range_max))


def pwl_eval_batch(
    x, entries, period: float, range_max: float = 4.0
) -> np.ndarray:
    """Piecewise-linear baseline over an input batch."""
    return _BACKEND.pwl_eval_batch(_f64(x), _f64(entries), float(period), float(range_max))


def fixed_eval_batch(
    raw, lut, rounding: RoundingMode = RoundingMode.NEAREST_EVEN
) -> tuple[np.ndarray, np.ndarray]:
    """Integer datapath over a raw input batch; returns (outputs, accumulators)."""
    return _BACKEND.fixed_eval_batch(_i64(raw), _i64(lut), rounding.code)


def fixed_eval_rom_batch(
    raw, lut, rom, rounding: RoundingMode = RoundingMode.NEAREST_EVEN
) -> tuple[np.ndarray, np.ndarray]:
    """Integer datapath with ROM-sourced basis numerators."""
    return _BACKEND.fixed_eval_rom_batch(_i64(raw), _i64(lut), _i64(rom), rounding.code)

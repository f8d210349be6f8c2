#!/usr/bin/env python3
"""Compare the numba and numpy sweep kernels on the exhaustive input space.

Times the three hot kernels over all 65,536 input codes and checks that
both backends return bit-identical results while at it.
"""

import argparse
import time

import numpy as np

from crtanh.analysis import full_code_range
from crtanh.datapath import build_basis_rom
from crtanh.kernels import get_kernels
from crtanh.spline import build_control_table


def time_call(fn, repeats: int) -> float:
    """Best-of-N wall time in milliseconds."""
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20, help="timing repetitions")
    args = parser.parse_args()

    table_q = build_control_table(0.125, quantized=True)
    table_r = build_control_table(0.125)
    rom = build_basis_rom()
    raw = full_code_range()
    x = raw / 8192.0

    backends = {}
    for name in ("numba", "numpy"):
        try:
            backends[name] = get_kernels(name)
        except ImportError:
            print(f"{name}: not importable, skipping")
    if "numba" in backends:
        # absorb JIT compilation before any timing
        k = backends["numba"]
        k.fixed_eval_batch(raw[:64], table_q.raw, 0)
        k.fixed_eval_rom_batch(raw[:64], table_q.raw, rom.rows, 0)
        k.cr_eval_batch(x[:64], table_r.values, 0.125, 4.0)
        k.pwl_eval_batch(x[:64], table_r.values, 0.125, 4.0)

    cases = {
        "fixed_eval_batch": lambda k: k.fixed_eval_batch(raw, table_q.raw, 0),
        "fixed_eval_rom_batch": lambda k: k.fixed_eval_rom_batch(
            raw, table_q.raw, rom.rows, 0
        ),
        "cr_eval_batch": lambda k: k.cr_eval_batch(x, table_r.values, 0.125, 4.0),
        "pwl_eval_batch": lambda k: k.pwl_eval_batch(x, table_r.values, 0.125, 4.0),
    }

    print(f"{'kernel':<24}" + "".join(f"{n + ' [ms]':>14}" for n in backends) + f"{'speedup':>10}")
    identical = True
    for label, call in cases.items():
        times = {n: time_call(lambda: call(k), args.repeats) for n, k in backends.items()}
        row = f"{label:<24}" + "".join(f"{times[n]:>14.3f}" for n in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['numba']:>9.1f}x"
            a, b = (call(backends["numba"]), call(backends["numpy"]))
            if isinstance(a, tuple):
                same = all(np.array_equal(p, q) for p, q in zip(a, b))
            else:
                same = np.array_equal(a.view(np.uint64), b.view(np.uint64))
            identical = identical and same
        print(row)
    if len(backends) == 2:
        print(f"bit-identical outputs: {'yes' if identical else 'NO'}")
        return 0 if identical else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

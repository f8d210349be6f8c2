"""Reference accuracy targets for the Q2.13 spline evaluator.

These are the figures the hardware unit was specified against, measured
over all 65,536 input codes on the quantized pipeline: Q2.13 table
entries, exact MAC, one final rounding to Q2.13.  A pure real-valued
evaluation of the same splines lands well below these numbers at the
finer periods because it skips both quantization steps; see README.
"""

from __future__ import annotations

__all__ = [
    "LUT_DEPTHS",
    "TARGET_RMS",
    "TARGET_MAX",
    "TARGET_GAIN_RMS",
    "TARGET_GAIN_MAX",
    "CELL_TOLERANCE",
    "GAIN_TOLERANCE",
]

# depth = range / period; the stored table adds two extension entries
LUT_DEPTHS = {0.5: 8, 0.25: 16, 0.125: 32, 0.0625: 64}

# period -> (pwl, catmull-rom), exhaustive RMS error vs float64 tanh
TARGET_RMS = {
    0.5: (0.008201, 0.001462),
    0.25: (0.002078, 0.000147),
    0.125: (0.000523, 0.000052),
    0.0625: (0.000135, 0.000049),
}

# period -> (pwl, catmull-rom), exhaustive max |error| vs float64 tanh
TARGET_MAX = {
    0.5: (0.023330, 0.005179),
    0.25: (0.006015, 0.000602),
    0.125: (0.001584, 0.000152),
    0.0625: (0.000470, 0.000122),
}

# period -> pwl/catmull-rom error ratio at matched table size
TARGET_GAIN_RMS = {0.5: 5.61, 0.25: 14.16, 0.125: 10.02, 0.0625: 2.76}
TARGET_GAIN_MAX = {0.5: 4.50, 0.25: 9.99, 0.125: 10.42, 0.0625: 3.84}

# relative tolerance for reproducing a target cell / a target gain
CELL_TOLERANCE = 0.20
GAIN_TOLERANCE = 0.25

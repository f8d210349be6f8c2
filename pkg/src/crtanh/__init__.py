"""Bit-accurate model of a Q2.13 tanh unit built on Catmull-Rom interpolation.

The package has three layers: real-valued reference models (``spline``),
the integer datapath that mirrors the hardware bit for bit (``datapath``),
and exhaustive analysis sweeps over the full 16-bit input space
(``analysis``), with memh/CSV/JSON export (``export``) and a CLI (``cli``).
"""

from .analysis import (
    METHOD_CR,
    METHOD_PWL,
    MODE_FIXED,
    MODE_QLUT,
    MODE_REAL,
    ErrorReport,
    TableReport,
    check_monotonicity,
    reproduce_tables,
    run_verification_suite,
    sweep_error,
    verify_equivalence,
)
from .datapath import (
    BasisFixed,
    BasisRom,
    DatapathConfig,
    build_basis_rom,
    mac_dot,
    split_input,
    t_vector_compute,
    tanh_eval_fixed,
)
from .export import emit_memh, emit_report, read_memh
from .kernels import active_backend
from .qformat import (
    Q2_13,
    FixedWord,
    QFormat,
    RoundingMode,
    decode,
    encode,
    negate_saturating,
)
from .spline import (
    ControlPointTable,
    build_control_table,
    cr_basis,
    cr_eval_real,
    pwl_eval_real,
    segment_locate,
    tanh_ref,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Q2_13",
    "FixedWord",
    "QFormat",
    "RoundingMode",
    "encode",
    "decode",
    "negate_saturating",
    "tanh_ref",
    "cr_basis",
    "segment_locate",
    "ControlPointTable",
    "build_control_table",
    "cr_eval_real",
    "pwl_eval_real",
    "BasisFixed",
    "BasisRom",
    "DatapathConfig",
    "split_input",
    "t_vector_compute",
    "build_basis_rom",
    "mac_dot",
    "tanh_eval_fixed",
    "METHOD_PWL",
    "METHOD_CR",
    "MODE_REAL",
    "MODE_QLUT",
    "MODE_FIXED",
    "ErrorReport",
    "TableReport",
    "sweep_error",
    "reproduce_tables",
    "verify_equivalence",
    "check_monotonicity",
    "run_verification_suite",
    "emit_memh",
    "emit_report",
    "read_memh",
    "active_backend",
]

import pytest

from crtanh import build_basis_rom, build_control_table
from crtanh.analysis import full_code_range


@pytest.fixture(scope="session")
def flagship_q():
    """Quantized flagship table: period 0.125, Q2.13, nearest-even."""
    return build_control_table(0.125, quantized=True)


@pytest.fixture(scope="session")
def flagship_real():
    return build_control_table(0.125)


@pytest.fixture(scope="session")
def basis_rom():
    return build_basis_rom()


@pytest.fixture(scope="session")
def all_raws():
    return full_code_range()

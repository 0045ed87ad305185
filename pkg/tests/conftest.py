import pytest

import sheetpde as sp
from sheetpde.yield_curve import negate


@pytest.fixture(scope="session")
def unit_grid_h025():
    return sp.make_grid(1.0, 1.0, 0.25)


@pytest.fixture(scope="session")
def unit_grid_h01():
    return sp.make_grid(1.0, 1.0, 0.1)


@pytest.fixture(scope="session")
def coeffs_a1():
    # A = a + b == 1
    return sp.CoefficientSet(a=sp.const(1.0), b=sp.const(0.0), c=sp.const(0.0))


@pytest.fixture(scope="session")
def coeffs_transport_t():
    # a = t, b = -t, c = 0: the existence criterion holds
    return sp.CoefficientSet(a=sp.coord_t(), b=negate(sp.coord_t()), c=sp.const(0.0))


@pytest.fixture(scope="session")
def qv_ensemble():
    """50 sheets at h=1/512 with the diagonal and characteristic Z fields.

    Shared by the quadratic-variation and Holder tests; building the
    ensemble once keeps the suite fast.
    """
    grid = sp.make_grid(1.0, 1.0, 1.0 / 512)
    coeffs = sp.CoefficientSet(a=sp.const(1.0), b=sp.const(0.0), c=sp.const(0.0))
    z_diag, z_char = [], []
    for k in range(50):
        sheet = sp.sample_sheet(grid, 515, path_index=k)
        z_diag.append(sp.build_Z(coeffs, sheet, 1.0))
        z_char.append(sp.build_Z_characteristic(coeffs, sheet, 1.0))
    return {"grid": grid, "coeffs": coeffs, "z_diag": z_diag, "z_char": z_char}

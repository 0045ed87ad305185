"""The first-order operator D, its adjoint, and weak-form residuals.

D f = a df/dt + b df/dx + c f, with adjoint
D* phi = -d(a phi)/dt - d(b phi)/dx + c phi,
so that <D f, phi> = <f, D* phi> for smooth f and interior test
functions. The residual operations below realize the pairings with
trapezoid quadrature on the lattice; for true (weak) solutions they
vanish under grid refinement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bumps import TestFunction, bump_eval, bump_matrices
from .calculus import SmoothFunction, trapz_2d
from .coefficients import CoefficientSet
from .grids import GridError, GridSpec, ScalarField
from .sheet import DiagonalPath

__all__ = [
    "OperatorD",
    "apply_D",
    "apply_adjoint",
    "adjoint_identity_residual",
    "weak_residual_transport",
    "weak_residual_time_equation",
    "write_residual_records",
]

FieldLike = Union[ScalarField, DiagonalPath]


@dataclass(frozen=True)
class OperatorD:
    coeffs: CoefficientSet


def _grid_and_values(field: FieldLike) -> tuple[GridSpec, np.ndarray]:
    return field.grid, field.values


def apply_D(op: OperatorD, f: SmoothFunction, t: float, x: float) -> float:
    """a f_t + b f_x + c f at a point."""
    cs = op.coeffs
    return float(cs.eval("a", t, x) * f.d_dt(t, x)
                 + cs.eval("b", t, x) * f.d_dx(t, x)
                 + cs.eval("c", t, x) * f.value(t, x))


def apply_adjoint(op: OperatorD, tf: TestFunction, t, x) -> np.ndarray:
    """D* phi = -(da/dt) phi - a phi_t - (db/dx) phi - b phi_x + c phi.

    Uses the bump's analytic derivatives; coefficient partials are
    analytic when available, central differences otherwise.
    """
    cs = op.coeffs
    phi = bump_eval(tf, t, x, "value")
    phi_t = bump_eval(tf, t, x, "dt")
    phi_x = bump_eval(tf, t, x, "dx")
    return (-cs.partial("a", "t", t, x) * phi - cs.eval("a", t, x) * phi_t
            - cs.partial("b", "x", t, x) * phi - cs.eval("b", t, x) * phi_x
            + cs.eval("c", t, x) * phi)


def adjoint_identity_residual(op: OperatorD, f: SmoothFunction, tf: TestFunction,
                              grid: GridSpec) -> float:
    """| <D f, phi> - <f, D* phi> |, both pairings by trapezoid quadrature.

    Pure quadrature error for smooth f; decays at second order in h.
    """
    cs = op.coeffs
    tt = grid.t_values[:, None]
    xx = grid.x_values[None, :]
    phi = bump_eval(tf, tt, xx, "value")
    Df = (cs.eval("a", tt, xx) * np.broadcast_to(f.d_dt(tt, xx), phi.shape)
          + cs.eval("b", tt, xx) * np.broadcast_to(f.d_dx(tt, xx), phi.shape)
          + cs.eval("c", tt, xx) * np.broadcast_to(f.value(tt, xx), phi.shape))
    lhs = trapz_2d(Df * phi, grid.h)
    fv = np.broadcast_to(f.value(tt, xx), phi.shape)
    rhs = trapz_2d(fv * apply_adjoint(op, tf, tt, xx), grid.h)
    return abs(lhs - rhs)


def _check_same_grid(ga: GridSpec, gb: GridSpec) -> None:
    if ga != gb:
        raise GridError("fields live on different grids")


def weak_residual_transport(r: FieldLike, W: FieldLike, op: OperatorD,
                            tf: TestFunction) -> float:
    """Residual of the weak transport equation dr/dt - dr/dx = D W.

    | II r (phi_t - phi_x) - II W (d(a phi)/dt + d(b phi)/dx - c phi) |.
    """
    g_r, rv = _grid_and_values(r)
    g_w, wv = _grid_and_values(W)
    _check_same_grid(g_r, g_w)
    cs = op.coeffs
    g = g_r
    tt = g.t_values[:, None]
    xx = g.x_values[None, :]
    mats = bump_matrices(tf, g)
    lhs = trapz_2d(rv * (mats["dt"] - mats["dx"]), g.h)
    weight = (cs.eval("a", tt, xx) * mats["dt"] + cs.eval("b", tt, xx) * mats["dx"]
              + (cs.partial("a", "t", tt, xx) + cs.partial("b", "x", tt, xx)
                 - cs.eval("c", tt, xx)) * mats["value"])
    rhs = trapz_2d(wv * weight, g.h)
    return abs(lhs - rhs)


def weak_residual_time_equation(U: FieldLike, W: FieldLike, op: OperatorD,
                           tf: TestFunction) -> float:
    """Residual of the weak equation dU/dt = D W:  | -<U, phi_t> - <W, D* phi> |."""
    g_u, uv = _grid_and_values(U)
    g_w, wv = _grid_and_values(W)
    _check_same_grid(g_u, g_w)
    g = g_u
    tt = g.t_values[:, None]
    xx = g.x_values[None, :]
    lhs = -trapz_2d(uv * bump_eval(tf, tt, xx, "dt"), g.h)
    rhs = trapz_2d(wv * apply_adjoint(op, tf, tt, xx), g.h)
    return abs(lhs - rhs)


def write_residual_records(path, records: list[dict]) -> None:
    """Serialize residual records ({h, seed, test_function_id, residual}) as JSON."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(records, f, indent=2, sort_keys=True)
        f.write("\n")

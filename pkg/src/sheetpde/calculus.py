"""Quadrature and finite differences on uniform lattices.

Trapezoid rules serve every deterministic integral; the left-endpoint
rule is reserved for stochastic integrands (Ito convention) and is used
by the solver module only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .grids import ScalarField

__all__ = [
    "SmoothFunction",
    "integrate_2d",
    "trapz_2d",
    "integrate_time",
    "central_diff",
    "default_fd_step",
]


@dataclass(frozen=True)
class SmoothFunction:
    """A scalar function of (t, x) carrying analytic first partials.

    All three callables must broadcast over numpy arrays.
    """

    value: Callable
    d_dt: Callable
    d_dx: Callable


def trapz_2d(values: np.ndarray, h: float) -> float:
    """Trapezoid quadrature of lattice samples over their rectangle."""
    w_t = np.ones(values.shape[0])
    w_t[0] = w_t[-1] = 0.5
    w_x = np.ones(values.shape[1])
    w_x[0] = w_x[-1] = 0.5
    return float(h * h * (w_t @ values @ w_x))


def integrate_2d(field: ScalarField) -> float:
    """Trapezoid approximation of the double integral of a field over its grid."""
    return trapz_2d(field.values, field.grid.h)


def integrate_time(f: np.ndarray, h: float,
                   rule: Literal["trapezoid", "left"] = "trapezoid") -> np.ndarray:
    """Cumulative time integral of sampled values at every grid time.

    Returns an array of the same length as ``f`` whose k-th entry
    approximates the integral from 0 to k*h. The left-endpoint rule is
    the Ito convention for stochastic integrands.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.size == 0:
        raise ValueError("empty integrand")
    out = np.zeros_like(f)
    if rule == "trapezoid":
        np.cumsum(0.5 * h * (f[1:] + f[:-1]), axis=0, out=out[1:])
    elif rule == "left":
        np.cumsum(h * f[:-1], axis=0, out=out[1:])
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return out


def default_fd_step(h: float) -> float:
    # balances truncation against rounding for second-order differences
    return max(1e-5, h * h)


def central_diff(f: Callable, t: float, x: float, axis: Literal["t", "x"],
                 h_fd: float, bounds: tuple[float, float] | None = None) -> float:
    """Second-order difference of f along one axis at a point.

    Central in the interior; one-sided (still second order) within h_fd
    of the domain edge when ``bounds = (lo, hi)`` for the chosen axis is
    supplied.
    """
    coord = t if axis == "t" else x

    def at(c: float) -> float:
        return float(f(c, x) if axis == "t" else f(t, c))

    if bounds is not None:
        lo, hi = bounds
        if coord - h_fd < lo:
            return (-3 * at(coord) + 4 * at(coord + h_fd) - at(coord + 2 * h_fd)) / (2 * h_fd)
        if coord + h_fd > hi:
            return (3 * at(coord) - 4 * at(coord - h_fd) + at(coord - 2 * h_fd)) / (2 * h_fd)
    return (at(coord + h_fd) - at(coord - h_fd)) / (2 * h_fd)

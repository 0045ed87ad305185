"""Constructive solutions of the first-order stochastic PDEs.

Three solvers are provided:

* ``solve_b_zero`` for dU/dt = D W when the b coefficient vanishes:
      U(t,x) = U0(x) + a(t,x)W(t,x) - a(0,x)W(0,x)
               + int_0^t (c - da/dt)(s,x) W(s,x) ds.

* ``solve_transport`` for dr/dt - dr/dx = D W when b = -a. The noise and
  the coefficient bracket are integrated along the transport
  characteristic t + x = const (the change of variables tau = t,
  xi = t + x reduces the equation to d rho/d tau = alpha dV/d tau +
  gamma V at fixed xi, and V(s, xi) = B(s, xi) for sheet noise):
      r(t,x) = a(t,x) W(t,x)
               + int_0^t B(s, t+x) [da/dx - da/dt + c](s, t+x-s) ds
               + r0(t+x).

* ``solve_ito_form``, the same solution written with a Wiener-Ito
  (left-endpoint) integral against the martingale s -> B(s, t+x):
      r(t,x) = int_0^t a(s, t+x-s) dB(s, t+x)
               + int_0^t B(s, t+x) c(s, t+x-s) ds + r0(t+x).

Substituting either r into the equation reproduces it exactly for any
smooth noise with W(0, .) = 0; the two discretizations converge to each
other pathwise at rate O(h) (discrete integration by parts).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .coefficients import CoefficientSet
from .grids import GridError, GridSpec, ScalarField, lattice_to_csv
from .sheet import DiagonalPath

__all__ = [
    "ExistenceCriterionError",
    "InitialCurve",
    "flat_curve",
    "nelson_siegel_curve",
    "polynomial_curve",
    "Provenance",
    "SolutionField",
    "transport_solution",
    "integral_identity_sides",
    "solve_b_zero",
    "solve_transport",
    "ito_integral",
    "solve_ito_form",
]

_B_TOL = 1e-12


class ExistenceCriterionError(ValueError):
    """Raised when coefficients violate the function-solution criterion a = -b."""


@dataclass(frozen=True)
class InitialCurve:
    """Initial curve r0 on [0, t_max + x_max], with optional derivative."""

    r0: Callable
    dr0: Optional[Callable] = None

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.r0(x), dtype=np.float64), x.shape).copy()

    def eval_derivative(self, x, h_fd: float = 1e-6) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.dr0 is not None:
            return np.broadcast_to(np.asarray(self.dr0(x), dtype=np.float64), x.shape).copy()
        return (self.eval(x + h_fd) - self.eval(np.maximum(x - h_fd, 0.0))) / (
            h_fd + np.minimum(x, h_fd))

    def validate(self, x_max: float, tol: float = 1e-5) -> None:
        xs = np.linspace(0.0, x_max, 33)
        vals = self.eval(xs)
        if not np.all(np.isfinite(vals)):
            raise ValueError("initial curve is not finite on [0, t_max + x_max]")
        if self.dr0 is not None:
            e = 1e-6
            interior = xs[(xs > e) & (xs < x_max - e)]
            fd = (self.eval(interior + e) - self.eval(interior - e)) / (2 * e)
            if np.max(np.abs(fd - self.eval_derivative(interior))) > tol:
                raise ValueError("analytic dr0 disagrees with central differences")


def flat_curve(level: float) -> InitialCurve:
    level = float(level)
    return InitialCurve(lambda x: np.full(np.shape(x), level),
                        dr0=lambda x: np.zeros(np.shape(x)))


def polynomial_curve(coeffs) -> InitialCurve:
    """r0(x) = sum_k coeffs[k] x^k with its exact derivative."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("polynomial curve needs a 1-D coefficient list")
    dc = c[1:] * np.arange(1, c.size) if c.size > 1 else np.zeros(1)
    return InitialCurve(lambda x: np.polynomial.polynomial.polyval(x, c),
                        dr0=lambda x: np.polynomial.polynomial.polyval(x, dc))


def nelson_siegel_curve(beta0: float, beta1: float, beta2: float,
                        tau: float) -> InitialCurve:
    """Smooth Nelson-Siegel-shaped curve with analytic derivative."""
    if tau <= 0:
        raise ValueError("tau must be positive")

    def _g(u):
        # (1 - exp(-u)) / u, series near 0
        u = np.asarray(u, dtype=np.float64)
        small = np.abs(u) < 1e-8
        safe = np.where(small, 1.0, u)
        out = np.where(small, 1.0 - u / 2.0 + u * u / 6.0, -np.expm1(-safe) / safe)
        return out

    def _gprime(u):
        u = np.asarray(u, dtype=np.float64)
        small = np.abs(u) < 1e-6
        safe = np.where(small, 1.0, u)
        exact = (np.exp(-safe) * (safe + 1.0) - 1.0) / (safe * safe)
        return np.where(small, -0.5 + u / 3.0, exact)

    def r0(x):
        u = np.asarray(x, dtype=np.float64) / tau
        return beta0 + beta1 * _g(u) + beta2 * (_g(u) - np.exp(-u))

    def dr0(x):
        u = np.asarray(x, dtype=np.float64) / tau
        return (beta1 * _gprime(u) + beta2 * (_gprime(u) + np.exp(-u))) / tau

    return InitialCurve(r0, dr0)


@dataclass(frozen=True)
class Provenance:
    formula: str
    seed: Optional[int] = None
    details: str = ""


@dataclass(frozen=True)
class SolutionField:
    grid: GridSpec
    values: np.ndarray
    provenance: Provenance

    def __post_init__(self) -> None:
        expected = (self.grid.n_t + 1, self.grid.n_x + 1)
        if self.values.shape != expected:
            raise GridError(f"solution shape {self.values.shape} does not match grid")

    def value_at(self, t: float, x: float) -> float:
        return float(self.values[self.grid.index_of(t, "t"), self.grid.index_of(x, "x")])

    def to_csv(self, path) -> None:
        lattice_to_csv(path, self.grid.t_values, self.grid.x_values, self.values)


def _initial_values_on_diagonals(r0: InitialCurve, grid: GridSpec) -> np.ndarray:
    """Matrix r0(t_i + x_j); validates that r0 is defined up to t_max + x_max."""
    try:
        line = r0.eval(grid.sheet_x_values)
    except Exception as exc:
        raise ValueError(
            f"initial curve must be evaluable on [0, {grid.sheet_x_max!r}]") from exc
    if not np.all(np.isfinite(line)):
        raise ValueError(f"initial curve is not finite on [0, {grid.sheet_x_max!r}]")
    i = np.arange(grid.n_t + 1)[:, None]
    j = np.arange(grid.n_x + 1)[None, :]
    return line[i + j]


def transport_solution(grid: GridSpec, r0: InitialCurve) -> SolutionField:
    """The noiseless solution r(t, x) = r0(t + x) of dr/dt - dr/dx = 0."""
    return SolutionField(grid, _initial_values_on_diagonals(r0, grid),
                         Provenance("transport"))


# ---------------------------------------------------------------------------
# the integral identity of dU/dt = D W (generic noise, no change of variables)
# ---------------------------------------------------------------------------


def integral_identity_sides(coeffs: CoefficientSet, U: ScalarField, W: ScalarField,
                            t: float, x: float) -> tuple[float, float]:
    """Both sides of the integral identity implied by dU/dt = D W.

    LHS = int_0^x [U(t,y) - U(0,y)] dy
    RHS = int_0^t [bW](s,x) - [bW](s,0) ds
          + int_0^x [aW](t,y) - [aW](0,y) dy
          + int_0^x int_0^t (c - da/dt - db/dx)(s,y) W(s,y) ds dy
    all by trapezoid on the lattice.
    """
    if U.grid != W.grid:
        raise GridError("U and W live on different grids")
    g = U.grid
    h = g.h
    i1 = g.index_of(t, "t")
    j1 = g.index_of(x, "x")
    tt = g.t_values[: i1 + 1][:, None]
    yy = g.x_values[: j1 + 1][None, :]
    Uv = U.values
    Wv = W.values

    lhs = float(np.trapezoid(Uv[i1, : j1 + 1] - Uv[0, : j1 + 1], dx=h))

    b_x_col = coeffs.eval("b", tt, x).ravel()
    b_0_col = coeffs.eval("b", tt, 0.0).ravel()
    term_t = float(np.trapezoid(b_x_col * Wv[: i1 + 1, j1] - b_0_col * Wv[: i1 + 1, 0], dx=h))

    a_top = coeffs.eval("a", float(t), yy).ravel()
    a_bot = coeffs.eval("a", 0.0, yy).ravel()
    term_x = float(np.trapezoid(a_top * Wv[i1, : j1 + 1] - a_bot * Wv[0, : j1 + 1], dx=h))

    weight = (coeffs.eval("c", tt, yy) - coeffs.partial("a", "t", tt, yy)
              - coeffs.partial("b", "x", tt, yy))
    inner = np.trapezoid(weight * Wv[: i1 + 1, : j1 + 1], dx=h, axis=0)
    term_double = float(np.trapezoid(inner, dx=h))

    return lhs, term_t + term_x + term_double


def solve_b_zero(coeffs: CoefficientSet, U0: Callable, W: ScalarField) -> SolutionField:
    """Function solution of dU/dt = D W when b vanishes identically.

    U(t,x) = U0(x) + a(t,x)W(t,x) - a(0,x)W(0,x)
             + int_0^t (c - da/dt)(s,x) W(s,x) ds.
    """
    g = W.grid
    tt = g.t_values[:, None]
    xx = g.x_values[None, :]
    b_sup = float(np.max(np.abs(coeffs.eval("b", tt, xx))))
    if b_sup > _B_TOL:
        raise ExistenceCriterionError(
            f"solve_b_zero requires b == 0 (sup |b| = {b_sup:.3e}); for b = -a use "
            "solve_transport -- a function solution exists only when a(t,x) = -b(t,x)")
    Wv = W.values
    a_grid = coeffs.eval("a", tt, xx)
    weight = coeffs.eval("c", tt, xx) - coeffs.partial("a", "t", tt, xx)
    integral = _kernels.cumtrapz(np.ascontiguousarray(weight * Wv), g.h)
    U0_line = np.broadcast_to(np.asarray(U0(g.x_values), dtype=np.float64),
                              (g.n_x + 1,))
    values = U0_line[None, :] + a_grid * Wv - (a_grid[0] * Wv[0])[None, :] + integral
    return SolutionField(g, values, Provenance("b_zero"))


# ---------------------------------------------------------------------------
# transport solvers (diagonal sheet noise, b = -a)
# ---------------------------------------------------------------------------


def _require_criterion(coeffs: CoefficientSet, grid: GridSpec) -> None:
    tt = grid.t_values[:, None]
    xx = grid.sheet_x_values[None, :]
    dev = np.abs(coeffs.eval("a", tt, xx) + coeffs.eval("b", tt, xx))
    sup = float(np.max(dev))
    if sup > _B_TOL:
        i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise ExistenceCriterionError(
            "a function solution exists if and only if a(t,x) = -b(t,x); "
            f"sup |a + b| = {sup:.3e} at (t, x) = ({grid.t_values[i]:g}, "
            f"{grid.sheet_x_values[j]:g})")


def _characteristic_args(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """(t, x) argument arrays over (time index, sheet column index).

    Entry (i, m) is the characteristic point (t_i, m*h - t_i). Entries
    with m < i are never read by the solvers (reads happen at
    m = i + j >= i); their x-argument is clamped to 0 to keep arbitrary
    coefficient callables safe.
    """
    tt = grid.t_values[:, None]
    xarg = np.maximum(grid.sheet_x_values[None, :] - tt, 0.0)
    return np.broadcast_to(tt, xarg.shape), xarg


def _gather_solution(grid: GridSpec, folded: np.ndarray) -> np.ndarray:
    return _kernels.diag_gather(np.ascontiguousarray(folded), grid.n_x + 1)


def solve_transport(coeffs: CoefficientSet, r0: InitialCurve,
                    W: DiagonalPath) -> SolutionField:
    """Closed-form solution of dr/dt - dr/dx = D W with b = -a.

    The bracket da/dx - da/dt + c and the sheet are integrated along the
    characteristic through (t, x); the time integral is trapezoid.
    r(0, .) = r0 exactly since the noise starts at W(0, .) = 0 (a
    DiagonalPath construction invariant).
    """
    g = W.grid
    _require_criterion(coeffs, g)
    r0_diag = _initial_values_on_diagonals(r0, g)

    tt = g.t_values[:, None]
    xx = g.x_values[None, :]
    a_grid = coeffs.eval("a", tt, xx)

    T_arg, X_arg = _characteristic_args(g)
    bracket = (coeffs.partial("a", "x", T_arg, X_arg)
               - coeffs.partial("a", "t", T_arg, X_arg)
               + coeffs.eval("c", T_arg, X_arg))
    folded = _kernels.cumtrapz(np.ascontiguousarray(bracket * W.sheet_values), g.h)
    values = a_grid * W.values + _gather_solution(g, folded) + r0_diag
    return SolutionField(g, values, Provenance("closed_form", seed=W.seed))


def ito_integral(integrand: Callable, path: DiagonalPath, x: float, t: float) -> float:
    """Left-point Wiener-Ito sum of integrand(s, x) against B^x(s) = B(s, s+x)."""
    g = path.grid
    j = g.index_of(x, "x")
    i1 = g.index_of(t, "t")
    col = path.values[: i1 + 1, j]
    s = g.t_values[:i1]
    vals = np.broadcast_to(np.asarray(integrand(s, x), dtype=np.float64), s.shape)
    return float(np.sum(vals * (col[1:] - col[:-1])))


def solve_ito_form(coeffs: CoefficientSet, r0: InitialCurve,
                   path: DiagonalPath) -> SolutionField:
    """Wiener-Ito representation of the closed-form transport solution.

    The stochastic term is a left-endpoint sum against the martingale
    s -> B(s, t+x) along the characteristic; the drift term is trapezoid.
    Coincides with solve_transport exactly for constant a and pathwise at
    rate O(h) in general.
    """
    g = path.grid
    _require_criterion(coeffs, g)
    r0_diag = _initial_values_on_diagonals(r0, g)

    T_arg, X_arg = _characteristic_args(g)
    a_char = coeffs.eval("a", T_arg, X_arg)
    c_char = coeffs.eval("c", T_arg, X_arg)
    S = np.ascontiguousarray(path.sheet_values)
    stoch = _kernels.ito_cumsum(np.ascontiguousarray(a_char), S)
    drift = _kernels.cumtrapz(np.ascontiguousarray(c_char * S), g.h)
    values = _gather_solution(g, stoch + drift) + r0_diag
    return SolutionField(g, values, Provenance("ito", seed=path.seed))

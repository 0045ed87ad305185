"""Operator coefficients a, b, c and their partial derivatives.

Coefficients are plain callables of (t, x) that broadcast over numpy
arrays. The named builders below attach analytic partials; a bare
callable is also accepted, in which case partials silently fall back to
central differences (and the set records which source was used).

Solvers evaluate coefficients along transport characteristics, so the
callables must be evaluable for x up to t_max + x_max.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import default_fd_step
from .grids import GridSpec

__all__ = [
    "CoeffFn",
    "CoefficientSet",
    "const",
    "coord_t",
    "coord_x",
    "coord_sum",
    "polynomial",
]


def _eval(fn: Callable, tt, xx) -> np.ndarray:
    """Evaluate a coefficient callable, broadcasting scalar results."""
    tt = np.asarray(tt, dtype=np.float64)
    xx = np.asarray(xx, dtype=np.float64)
    shape = np.broadcast_shapes(tt.shape, xx.shape)
    out = np.asarray(fn(tt, xx), dtype=np.float64)
    return np.broadcast_to(out, shape).copy() if out.shape != shape else out


@dataclass(frozen=True)
class CoeffFn:
    """A coefficient with optional analytic partials; itself callable."""

    fn: Callable
    d_dt: Optional[Callable] = None
    d_dx: Optional[Callable] = None
    name: str = ""

    def __call__(self, tt, xx):
        return self.fn(tt, xx)


def const(v: float) -> CoeffFn:
    v = float(v)
    return CoeffFn(lambda t, x: np.full(np.broadcast_shapes(np.shape(t), np.shape(x)), v),
                   d_dt=lambda t, x: np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   d_dx=lambda t, x: np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   name=f"const({v:g})")


def coord_t() -> CoeffFn:
    return CoeffFn(lambda t, x: t + 0.0 * x,
                   d_dt=lambda t, x: np.ones(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   d_dx=lambda t, x: np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   name="t")


def coord_x() -> CoeffFn:
    return CoeffFn(lambda t, x: x + 0.0 * t,
                   d_dt=lambda t, x: np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   d_dx=lambda t, x: np.ones(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   name="x")


def coord_sum() -> CoeffFn:
    return CoeffFn(lambda t, x: t + x,
                   d_dt=lambda t, x: np.ones(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   d_dx=lambda t, x: np.ones(np.broadcast_shapes(np.shape(t), np.shape(x))),
                   name="t+x")


def polynomial(coeffs: Sequence[Sequence[float]]) -> CoeffFn:
    """Bivariate polynomial sum_{m,n} coeffs[m][n] * t^m * x^n with exact partials."""
    C = np.asarray(coeffs, dtype=np.float64)
    if C.ndim != 2:
        raise ValueError("polynomial coefficients must form a 2-D matrix")

    def horner(mat: np.ndarray, t, x):
        # Horner in t of Horner-in-x rows
        acc = np.zeros(np.broadcast_shapes(np.shape(t), np.shape(x)))
        for row in mat[::-1]:
            inner = np.zeros_like(acc)
            for c in row[::-1]:
                inner = inner * x + c
            acc = acc * t + inner
        return acc

    Ct = (C[1:] * np.arange(1, C.shape[0])[:, None]) if C.shape[0] > 1 else np.zeros((1, 1))
    Cx = (C[:, 1:] * np.arange(1, C.shape[1])[None, :]) if C.shape[1] > 1 else np.zeros((1, 1))
    return CoeffFn(lambda t, x: horner(C, t, x),
                   d_dt=lambda t, x: horner(Ct, t, x),
                   d_dx=lambda t, x: horner(Cx, t, x),
                   name="poly")


_PARTIAL_FIELDS = {
    ("a", "t"): "da_dt",
    ("a", "x"): "da_dx",
    ("b", "t"): "db_dt",
    ("b", "x"): "db_dx",
}


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients of the first-order operator and their partials.

    ``da_dt`` etc. are optional analytic partials; if absent and the
    corresponding coefficient is a CoeffFn, its attached partials are
    used; otherwise central differences fill in.
    """

    a: Callable
    b: Callable
    c: Callable
    da_dt: Optional[Callable] = None
    da_dx: Optional[Callable] = None
    db_dt: Optional[Callable] = None
    db_dx: Optional[Callable] = None
    h_fd: float = field(default=1e-5)

    def _fn(self, which: str) -> Callable:
        return {"a": self.a, "b": self.b, "c": self.c}[which]

    def _analytic_partial(self, which: str, axis: str) -> Optional[Callable]:
        explicit = getattr(self, _PARTIAL_FIELDS[(which, axis)])
        if explicit is not None:
            return explicit
        fn = self._fn(which)
        if isinstance(fn, CoeffFn):
            return fn.d_dt if axis == "t" else fn.d_dx
        return None

    def partial_source(self, which: str, axis: str) -> str:
        """'analytic' or 'central_diff', for provenance in reports."""
        return "analytic" if self._analytic_partial(which, axis) else "central_diff"

    def partial(self, which: str, axis: str, tt, xx) -> np.ndarray:
        """Partial derivative of coefficient ``which`` along ``axis`` on arrays."""
        analytic = self._analytic_partial(which, axis)
        if analytic is not None:
            return _eval(analytic, tt, xx)
        fn = self._fn(which)
        e = self.h_fd
        if axis == "t":
            return (_eval(fn, np.asarray(tt) + e, xx) - _eval(fn, np.asarray(tt) - e, xx)) / (2 * e)
        return (_eval(fn, tt, np.asarray(xx) + e) - _eval(fn, tt, np.asarray(xx) - e)) / (2 * e)

    def eval(self, which: str, tt, xx) -> np.ndarray:
        return _eval(self._fn(which), tt, xx)

    def validate(self, grid: GridSpec, tol: float = 1e-5) -> None:
        """Check evaluability on the closed domain and that any analytic
        partials of the C^1 coefficients agree with central differences."""
        tt = grid.t_values[:: max(1, grid.n_t // 8)]
        xx = grid.x_values[:: max(1, grid.n_x // 8)]
        T, X = np.meshgrid(tt, xx, indexing="ij")
        for which in ("a", "b", "c"):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                vals = self.eval(which, T, X)
            if not np.all(np.isfinite(vals)):
                raise ValueError(f"coefficient {which} is not finite on the grid")
        e = default_fd_step(grid.h)
        for which in ("a", "b"):
            for axis in ("t", "x"):
                analytic = self._analytic_partial(which, axis)
                if analytic is None:
                    continue
                got = _eval(analytic, T, X)
                if axis == "t":
                    fd = (self.eval(which, T + e, X) - self.eval(which, T - e, X)) / (2 * e)
                else:
                    fd = (self.eval(which, T, X + e) - self.eval(which, T, X - e)) / (2 * e)
                err = float(np.max(np.abs(got - fd)))
                if err > tol * max(1.0, float(np.max(np.abs(got)))):
                    raise ValueError(
                        f"analytic d{which}/d{axis} disagrees with central differences "
                        f"(max deviation {err:.3e})"
                    )

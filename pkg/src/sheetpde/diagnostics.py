"""Runnable diagnostics: existence criterion, quadratic variation, Holder
exponents, separability, and Monte Carlo checks of the Gaussian-measure
partition lemmas.

Quadratic-variation statistics come in three flavours, all exposed
because they measure genuinely different things:

* ``build_Z`` + ``qv_estimate``: squared x-increments of the
  time-integrated diagonal field Z(t,x) = int_0^t A(s,x) B(s,s+x) ds.
  Because the integrand strips slide with s, increments at different
  times decorrelate and this statistic vanishes like (x_hi-x_lo)/n *
  t^2/2 as the partition refines; empirically it is proportional to the
  partition width.

* ``build_Z_characteristic`` + ``qv_estimate``: the same construction
  parametrized by the maturity point xi = t + x, where the noise at
  fixed xi is the martingale s -> B(s, xi). Increments across xi are
  independent, quadratic variation does not vanish, and the limit is
  ``qv_characteristic_theoretical``. This is the object whose
  non-vanishing quadratic variation certifies that no function solution
  exists when a + b is not identically zero.

* ``qv_slicewise``: the time integral of per-time-slice quadratic
  variations of Y(s, .) = A(s, .) B(s, s+.), whose limit is exactly
  ``qv_theoretical`` = int_0^t int A(s,z)^2 s dz ds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from . import _kernels
from .coefficients import CoefficientSet
from .grids import GridError, GridSpec, ScalarField
from .sheet import RectRegion, SheetSample, sample_sheet

__all__ = [
    "ExistenceReport",
    "existence_check",
    "LineField",
    "build_Z",
    "build_Z_characteristic",
    "qv_estimate",
    "qv_theoretical",
    "qv_characteristic_theoretical",
    "qv_slicewise",
    "QVReport",
    "qv_report",
    "HolderReport",
    "holder_estimate",
    "separability_residual",
    "weak_bracket_field",
    "PartitionScheme",
    "equal_slab_partition",
    "partition_product_check",
    "PartitionProductRow",
    "partition_sup_check",
    "PartitionSupRow",
]


# ---------------------------------------------------------------------------
# existence criterion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExistenceReport:
    exists: bool
    max_deviation: float
    location: tuple[float, float]
    tol: float

    def to_json_dict(self) -> dict:
        return {"exists": self.exists, "max_deviation": self.max_deviation,
                "location_t": self.location[0], "location_x": self.location[1],
                "tol": self.tol}


def existence_check(coeffs: CoefficientSet, grid: GridSpec,
                    tol: float = 1e-9) -> ExistenceReport:
    """A function solution exists iff a = -b; reports sup |a+b| on the lattice."""
    tt = grid.t_values[:, None]
    xx = grid.x_values[None, :]
    dev = np.abs(coeffs.eval("a", tt, xx) + coeffs.eval("b", tt, xx))
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    sup = float(dev[i, j])
    return ExistenceReport(sup <= tol, sup,
                           (float(grid.t_values[i]), float(grid.x_values[j])), tol)


# ---------------------------------------------------------------------------
# the field Z and its quadratic variation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineField:
    """A real field sampled on a uniform 1-D lattice."""

    coords: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.coords.shape != self.values.shape or self.coords.ndim != 1:
            raise ValueError("coords and values must be matching 1-D arrays")
        if self.coords.size < 2:
            raise ValueError("line field needs at least 2 points")

    @property
    def step(self) -> float:
        return float(self.coords[1] - self.coords[0])

    def index_of(self, coord: float) -> int:
        h = self.step
        idx = int(round((coord - self.coords[0]) / h))
        if idx < 0 or idx >= self.coords.size or \
                abs(self.coords[0] + idx * h - coord) > 1e-9 * max(1.0, h):
            raise GridError(f"coordinate {coord!r} is not on the line lattice")
        return idx


def _diag_noise_matrix(sheet: SheetSample) -> np.ndarray:
    g = sheet.grid
    return _kernels.diag_gather(sheet.values, g.n_x + 1)


def build_Z(coeffs: CoefficientSet, sheet: SheetSample, t: float) -> LineField:
    """Z(t, x_j) = trapezoid int_0^t (a+b)(s, x_j) B(s, s+x_j) ds over x in [0, x_max]."""
    g = sheet.grid
    i1 = g.index_of(t, "t")
    tt = g.t_values[: i1 + 1][:, None]
    xx = g.x_values[None, :]
    A = coeffs.eval("a", tt, xx) + coeffs.eval("b", tt, xx)
    W = _diag_noise_matrix(sheet)[: i1 + 1]
    z = np.trapezoid(A * W, dx=g.h, axis=0) if i1 > 0 else np.zeros(g.n_x + 1)
    return LineField(g.x_values.copy(), z)


def build_Z_characteristic(coeffs: CoefficientSet, sheet: SheetSample,
                           t: float) -> LineField:
    """Z(t, xi_m) = trapezoid int_0^t (a+b)(s, xi_m - s) B(s, xi_m) ds.

    Parametrized by the maturity point xi = t + x >= t; at fixed xi the
    noise B(., xi) is a Brownian martingale, so increments across xi are
    independent and the quadratic variation survives refinement.
    """
    g = sheet.grid
    i1 = g.index_of(t, "t")
    xi = g.sheet_x_values[i1:]
    tt = g.t_values[: i1 + 1][:, None]
    xarg = np.maximum(xi[None, :] - tt, 0.0)
    A = (coeffs.eval("a", np.broadcast_to(tt, xarg.shape), xarg)
         + coeffs.eval("b", np.broadcast_to(tt, xarg.shape), xarg))
    S = sheet.values[: i1 + 1, i1:]
    z = np.trapezoid(A * S, dx=g.h, axis=0) if i1 > 0 else np.zeros(xi.size)
    return LineField(xi.copy(), z)


def qv_estimate(Z: LineField, x_lo: float, x_hi: float, n: int) -> float:
    """Sum of n squared increments of Z over [x_lo, x_hi] at equal spacing."""
    i0 = Z.index_of(x_lo)
    i1 = Z.index_of(x_hi)
    span = i1 - i0
    if n < 1 or span % n:
        raise ValueError(f"n={n} does not divide the lattice span {span}")
    return _kernels.strided_sq_increment_sum(
        np.ascontiguousarray(Z.values), i0, i1, span // n)


def _simpson_weights(n_points: int) -> np.ndarray:
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError("Simpson rule needs an odd number of points")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def qv_theoretical(coeffs: CoefficientSet, t: float, x_lo: float, x_hi: float,
                   n_quad: int = 1024) -> float:
    """High-resolution quadrature of int_0^t int_{x_lo}^{x_hi} (a+b)^2 s dz ds."""
    ss = np.linspace(0.0, t, n_quad + 1)[:, None]
    zz = np.linspace(x_lo, x_hi, n_quad + 1)[None, :]
    A = coeffs.eval("a", ss, zz) + coeffs.eval("b", ss, zz)
    integrand = A * A * ss
    w = _simpson_weights(n_quad + 1)
    return float((t / n_quad) * ((x_hi - x_lo) / n_quad) * (w @ integrand @ w))


def qv_characteristic_theoretical(coeffs: CoefficientSet, t: float, xi_lo: float,
                                  xi_hi: float, n_quad: int = 256) -> float:
    """Limit of the characteristic quadratic variation over xi in [xi_lo, xi_hi].

    QV -> int_{xi_lo}^{xi_hi} int_0^t int_0^t A(u, xi-u) A(v, xi-v)
          min(u, v) du dv dxi,
    computed as 2 int g(v) [int_0^v u g(u) du] dv with g = A along the
    characteristic. Requires xi_lo >= t so the x-argument stays >= 0.
    """
    if xi_lo < t - 1e-12:
        raise ValueError("characteristic range must start at xi >= t")
    uu = np.linspace(0.0, t, n_quad + 1)[:, None]
    xis = np.linspace(xi_lo, xi_hi, n_quad + 1)[None, :]
    xarg = np.maximum(xis - uu, 0.0)
    G = (coeffs.eval("a", np.broadcast_to(uu, xarg.shape), xarg)
         + coeffs.eval("b", np.broadcast_to(uu, xarg.shape), xarg))
    du = t / n_quad
    inner = _kernels.cumtrapz_np(uu * G, du)      # int_0^v u g(u) du
    K = 2.0 * np.trapezoid(G * inner, dx=du, axis=0)
    return float(np.trapezoid(K, dx=(xi_hi - xi_lo) / n_quad))


def qv_slicewise(coeffs: CoefficientSet, sheet: SheetSample, t: float,
                 x_lo: float, x_hi: float, n: int) -> float:
    """Time integral of per-slice quadratic variations of Y(s,.) = A(s,.)W(s,.).

    Converges to qv_theoretical: each slice sum tends to
    s * int A(s,z)^2 dz and the trapezoid in s supplies the outer
    integral.
    """
    g = sheet.grid
    i1 = g.index_of(t, "t")
    j0 = g.index_of(x_lo, "x")
    j1 = g.index_of(x_hi, "x")
    span = j1 - j0
    if n < 1 or span % n:
        raise ValueError(f"n={n} does not divide the lattice span {span}")
    st = span // n
    tt = g.t_values[: i1 + 1][:, None]
    xx = g.x_values[None, :]
    A = coeffs.eval("a", tt, xx) + coeffs.eval("b", tt, xx)
    Y = A * _diag_noise_matrix(sheet)[: i1 + 1]
    D = Y[:, j0 + st: j1 + 1: st] - Y[:, j0: j1 - st + 1: st]
    per_slice = np.sum(D * D, axis=1)
    return float(np.trapezoid(per_slice, dx=g.h))


@dataclass(frozen=True)
class QVReport:
    t: float
    x_lo: float
    x_hi: float
    n_partitions: int
    empirical_qv: float
    theoretical_qv: float
    relative_error: float
    seed_root: int
    n_seeds: int
    estimator: str = "diagonal"

    def __post_init__(self) -> None:
        if self.n_partitions < 2:
            raise ValueError("need at least 2 partitions")
        if self.empirical_qv < 0 or self.theoretical_qv < 0:
            raise ValueError("quadratic variations are non-negative")

    def to_json_dict(self) -> dict:
        return {"t": self.t, "x_lo": self.x_lo, "x_hi": self.x_hi,
                "n_partitions": self.n_partitions, "empirical_qv": self.empirical_qv,
                "theoretical_qv": self.theoretical_qv,
                "relative_error": self.relative_error,
                "seed_root": self.seed_root, "n_seeds": self.n_seeds,
                "estimator": self.estimator}


def qv_report(coeffs: CoefficientSet, grid: GridSpec, t: float, x_lo: float,
              x_hi: float, n: int, seed: int, n_seeds: int,
              estimator: Literal["diagonal", "characteristic", "slicewise"] = "diagonal",
              ) -> QVReport:
    """Median quadratic variation over an ensemble of seeds, vs its target.

    The reference value is ``qv_theoretical`` for the diagonal and
    slicewise estimators and ``qv_characteristic_theoretical`` (over
    [t + x_lo, t + x_hi]) for the characteristic one.
    """
    vals = []
    for k in range(n_seeds):
        sheet = sample_sheet(grid, seed, path_index=k)
        if estimator == "diagonal":
            vals.append(qv_estimate(build_Z(coeffs, sheet, t), x_lo, x_hi, n))
        elif estimator == "characteristic":
            vals.append(qv_estimate(build_Z_characteristic(coeffs, sheet, t),
                                    t + x_lo, t + x_hi, n))
        elif estimator == "slicewise":
            vals.append(qv_slicewise(coeffs, sheet, t, x_lo, x_hi, n))
        else:
            raise ValueError(f"unknown estimator {estimator!r}")
    if estimator == "characteristic":
        target = qv_characteristic_theoretical(coeffs, t, t + x_lo, t + x_hi)
    else:
        target = qv_theoretical(coeffs, t, x_lo, x_hi)
    med = float(np.median(vals))
    rel = abs(med - target) / target if target else abs(med)
    return QVReport(t, x_lo, x_hi, n, med, target, rel, seed, n_seeds, estimator)


# ---------------------------------------------------------------------------
# Holder exponent estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderReport:
    estimated_exponent: float
    levels: tuple[int, ...]
    regression_residual: float
    degenerate: bool = False

    def __post_init__(self) -> None:
        if len(self.levels) < 3:
            raise ValueError("Holder estimation needs at least 3 levels")

    def to_json_dict(self) -> dict:
        return {"estimated_exponent": self.estimated_exponent,
                "levels": list(self.levels),
                "regression_residual": self.regression_residual,
                "degenerate": self.degenerate}


def holder_estimate(Z: LineField, x_lo: float, x_hi: float,
                    levels: Sequence[int]) -> HolderReport:
    """Regress log max-increment against log spacing; the slope estimates
    the Holder exponent. All-zero increments at any level flag the field
    as degenerate (exponent +inf)."""
    levels = tuple(int(n) for n in levels)
    i0 = Z.index_of(x_lo)
    i1 = Z.index_of(x_hi)
    span = i1 - i0
    deltas, maxima = [], []
    for n in levels:
        if n < 1 or span % n:
            raise ValueError(f"level n={n} does not divide the lattice span {span}")
        m = _kernels.strided_max_abs_increment(
            np.ascontiguousarray(Z.values), i0, i1, span // n)
        if m == 0.0:
            return HolderReport(math.inf, levels, math.nan, degenerate=True)
        deltas.append((x_hi - x_lo) / n)
        maxima.append(m)
    logd = np.log(deltas)
    logm = np.log(maxima)
    slope, intercept = np.polyfit(logd, logm, 1)
    resid = float(np.sqrt(np.mean((logm - (slope * logd + intercept)) ** 2)))
    return HolderReport(float(slope), levels, resid)


# ---------------------------------------------------------------------------
# separability (Lemma-1 conclusion)
# ---------------------------------------------------------------------------


def separability_residual(g) -> float:
    """sup |g(t,x) - g(t,0) - g(0,x) + g(0,0)| over the lattice.

    Zero exactly for additively separable fields g(t,x) = f(t) + k(x);
    the constant is pinned by evaluation at the origin.
    """
    v = g.values if isinstance(g, ScalarField) else np.asarray(g, dtype=np.float64)
    return float(np.max(np.abs(v - v[:, :1] - v[:1, :] + v[0, 0])))


def weak_bracket_field(coeffs: CoefficientSet, U: ScalarField,
                           W: ScalarField) -> ScalarField:
    """The accumulation field that weak solutions of dU/dt = D W make separable:

    g(t,x) = int_0^x U(t,y) dy - int_0^x (aW)(t,y) dy - int_0^t (bW)(s,x) ds
             + int_0^x int_0^t (da/dt + db/dx - c)(s,y) W(s,y) ds dy.
    """
    if U.grid != W.grid:
        raise GridError("U and W live on different grids")
    g = U.grid
    h = g.h
    tt = g.t_values[:, None]
    xx = g.x_values[None, :]

    def cum_x(M: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(
            _kernels.cumtrapz(np.ascontiguousarray(M.T), h).T)

    aW = coeffs.eval("a", tt, xx) * W.values
    bW = coeffs.eval("b", tt, xx) * W.values
    weight = (coeffs.partial("a", "t", tt, xx) + coeffs.partial("b", "x", tt, xx)
              - coeffs.eval("c", tt, xx))
    vals = (cum_x(U.values) - cum_x(aW)
            - _kernels.cumtrapz(np.ascontiguousarray(bW), h)
            + cum_x(_kernels.cumtrapz(np.ascontiguousarray(weight * W.values), h)))
    return ScalarField(g, vals)


# ---------------------------------------------------------------------------
# partition lemmas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionScheme:
    """n grid-aligned sub-rectangles partitioning a base rectangle."""

    base: RectRegion
    n: int
    cells: tuple[RectRegion, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.cells) != self.n or self.n < 1:
            raise ValueError("cell count must equal n >= 1")
        total = sum(c.area for c in self.cells)
        if abs(total - self.base.area) > 1e-9 * max(1.0, self.base.area):
            raise ValueError("cells do not cover the base rectangle")

    @property
    def sup_cell_area(self) -> float:
        return max(c.area for c in self.cells)


def equal_slab_partition(base: RectRegion, n: int, grid: GridSpec) -> PartitionScheme:
    """Partition into n equal grid-aligned x-slabs; sup cell area = area/n."""
    j0 = grid.index_of(base.x_lo, "sheet_x")
    j1 = grid.index_of(base.x_hi, "sheet_x")
    span = j1 - j0
    if n < 1 or span % n:
        raise GridError(f"n={n} does not divide the slab span {span}")
    if span == 0:
        cells = (RectRegion(base.t_lo, base.t_hi, base.x_lo, base.x_hi),) * n
        return PartitionScheme(base, n, cells)
    st = span // n
    edges = grid.sheet_x_values[j0: j1 + 1: st]
    cells = tuple(RectRegion(base.t_lo, base.t_hi, float(lo), float(hi))
                  for lo, hi in zip(edges[:-1], edges[1:]))
    return PartitionScheme(base, n, cells)


def _rect_measures_batch(sheet_values: np.ndarray, grid: GridSpec,
                         cells: Sequence[RectRegion]) -> np.ndarray:
    i0 = np.array([grid.index_of(c.t_lo, "t") for c in cells])
    i1 = np.array([grid.index_of(c.t_hi, "t") for c in cells])
    j0 = np.array([grid.index_of(c.x_lo, "sheet_x") for c in cells])
    j1 = np.array([grid.index_of(c.x_hi, "sheet_x") for c in cells])
    B = sheet_values
    return B[i1, j1] - B[i0, j1] - B[i1, j0] + B[i0, j0]


def _intersection(F: RectRegion, G: RectRegion) -> RectRegion | None:
    t_lo, t_hi = max(F.t_lo, G.t_lo), min(F.t_hi, G.t_hi)
    x_lo, x_hi = max(F.x_lo, G.x_lo), min(F.x_hi, G.x_hi)
    if t_lo >= t_hi or x_lo >= x_hi:
        return None
    return RectRegion(t_lo, t_hi, x_lo, x_hi)


def _product_integral(R: Callable, S: Callable, rect: RectRegion,
                      n_quad: int = 512) -> float:
    tt = np.linspace(rect.t_lo, rect.t_hi, n_quad + 1)[:, None]
    xx = np.linspace(rect.x_lo, rect.x_hi, n_quad + 1)[None, :]
    vals = (np.broadcast_to(np.asarray(R(tt, xx), dtype=np.float64), (n_quad + 1,) * 2)
            * np.broadcast_to(np.asarray(S(tt, xx), dtype=np.float64), (n_quad + 1,) * 2))
    w = _simpson_weights(n_quad + 1)
    return float(((rect.t_hi - rect.t_lo) / n_quad)
                 * ((rect.x_hi - rect.x_lo) / n_quad) * (w @ vals @ w))


@dataclass(frozen=True)
class PartitionProductRow:
    n: int
    mean_sum: float
    limit: float
    l2_distance: float
    std_error: float
    samples: tuple = field(default=(), repr=False)   # per-seed sums

    def to_json_dict(self) -> dict:
        return {"n": self.n, "mean_sum": self.mean_sum, "limit": self.limit,
                "l2_distance": self.l2_distance, "std_error": self.std_error}


def partition_product_check(sheet: SheetSample, R: Callable, S: Callable,
                  F: RectRegion, G: RectRegion, n_values: Sequence[int],
                  mode: Literal["diagonal", "disjoint"],
                  n_seeds: int = 1000) -> list[PartitionProductRow]:
    """L2 convergence of sum_k R_k S_k X(F_k) X(G_k) over slab partitions.

    In diagonal mode (F and G sharing their x-extent) the limit is
    int_{F cap G} R S d(area); in disjoint mode (x-extents disjoint) it
    is 0. R_k, S_k are midpoint values on the matching cells. The sheet
    argument supplies the grid and the root seed; each of the ``n_seeds``
    replicas is drawn from its own derived stream and reused across the
    partition sizes, so decay across n is measured on fixed seed batches.
    """
    grid = sheet.grid
    inter = _intersection(F, G)
    if mode == "diagonal":
        if inter is None or abs(F.x_lo - G.x_lo) > 1e-12 or abs(F.x_hi - G.x_hi) > 1e-12:
            raise ValueError("diagonal mode needs F and G with identical x-extent "
                             "and overlapping t-extent")
        limit = _product_integral(R, S, inter)
    elif mode == "disjoint":
        if inter is not None:
            raise ValueError("disjoint mode needs F and G with disjoint extents")
        limit = 0.0
    else:
        raise ValueError(f"unknown mode {mode!r}")

    per_n = {}
    for n in n_values:
        pf = equal_slab_partition(F, n, grid)
        pg = equal_slab_partition(G, n, grid)
        if mode == "diagonal":
            mids = [( (c.t_lo + c.t_hi) / 2, (c.x_lo + c.x_hi) / 2 )
                    for c in (_intersection(fk, gk) for fk, gk in zip(pf.cells, pg.cells))]
        else:
            mids = None
        rk_sk = []
        if mode == "diagonal":
            tm = np.array([m[0] for m in mids]); xm = np.array([m[1] for m in mids])
            rk_sk = np.asarray(R(tm, xm), dtype=np.float64) * np.asarray(
                S(tm, xm), dtype=np.float64)
        else:
            tf = np.array([(c.t_lo + c.t_hi) / 2 for c in pf.cells])
            xf = np.array([(c.x_lo + c.x_hi) / 2 for c in pf.cells])
            tg = np.array([(c.t_lo + c.t_hi) / 2 for c in pg.cells])
            xg = np.array([(c.x_lo + c.x_hi) / 2 for c in pg.cells])
            rk_sk = (np.asarray(R(tf, xf), dtype=np.float64)
                     * np.asarray(S(tg, xg), dtype=np.float64))
        per_n[n] = (pf, pg, np.broadcast_to(rk_sk, (n,)))

    sums = {n: np.empty(n_seeds) for n in n_values}
    for k in range(n_seeds):
        sample = sample_sheet(grid, sheet.seed, path_index=k)
        for n in n_values:
            pf, pg, rk_sk = per_n[n]
            mf = _rect_measures_batch(sample.values, grid, pf.cells)
            mg = _rect_measures_batch(sample.values, grid, pg.cells)
            sums[n][k] = float(np.sum(rk_sk * mf * mg))

    rows = []
    for n in n_values:
        s = sums[n]
        rows.append(PartitionProductRow(n, float(np.mean(s)), limit,
                               float(np.sqrt(np.mean((s - limit) ** 2))),
                               float(np.std(s, ddof=1) / np.sqrt(n_seeds)),
                               samples=tuple(float(v) for v in s)))
    return rows


@dataclass(frozen=True)
class PartitionSupRow:
    n: int
    median_sup: float
    hypothesis_value: float   # n^kappa * sup cell area
    samples: tuple = field(default=(), repr=False)   # per-seed sups

    def to_json_dict(self) -> dict:
        return {"n": self.n, "median_sup": self.median_sup,
                "hypothesis_value": self.hypothesis_value}


def partition_sup_check(sheet: SheetSample, base: RectRegion,
                        n_values: Sequence[int], kappa: float = 0.5,
                        n_seeds: int = 20) -> list[PartitionSupRow]:
    """Median over seeds of sup_k |X(F_k^n)| for equal slab partitions.

    Equal slabs give sup cell area = area/n, so n^kappa * sup -> 0 for
    any kappa < 1 and the sup statistic must decay with n.
    """
    grid = sheet.grid
    schemes = {n: equal_slab_partition(base, n, grid) for n in n_values}
    sups = {n: np.empty(n_seeds) for n in n_values}
    for k in range(n_seeds):
        sample = sample_sheet(grid, sheet.seed, path_index=k)
        for n in n_values:
            m = _rect_measures_batch(sample.values, grid, schemes[n].cells)
            sups[n][k] = float(np.max(np.abs(m))) if m.size else 0.0
    return [PartitionSupRow(n, float(np.median(sups[n])),
                            float(n ** kappa * schemes[n].sup_cell_area),
                            samples=tuple(float(v) for v in sups[n]))
            for n in n_values]

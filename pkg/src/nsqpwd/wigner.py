"""Quadratic-phase Wigner distribution, its cross form, the classical 2D-WD,
marginals and the STFT association.

For a point x the lag variable ξ runs over a lattice of step 2·Δx chosen so
that x ± ξ/2 are grid nodes. x itself may be a node or the midpoint between
two nodes (on either axis); midpoints pick the odd-multiple lag lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from ._sums import bilinear_phase_sum
from .errors import AnalyticExtensionUnavailable, GridMismatch, OffGridCenter
from .kernel import Point2, chirp_eval, sub_coeffs
from .params import ParamTuple, derive_coeffs, quad_matrix, validate
from .qpft import ComplexField, Grid2D, require_same_grid


@dataclass(frozen=True)
class SupportClipped:
    """Lag sum restricted to samples inside the tabulated grid."""


@dataclass(frozen=True)
class PaperRange:
    """Lag sum over the fixed square [-T/2, T/2]² with `samples` midpoint nodes per axis."""

    T: float
    samples: int = 512

    def __post_init__(self) -> None:
        if not self.T > 0:
            raise ValueError("PaperRange needs T > 0")
        if self.samples < 1:
            raise ValueError("PaperRange needs at least one lag sample")

    def lag_axis(self) -> NDArray[np.float64]:
        h = self.T / self.samples
        return (np.arange(self.samples) - 0.5 * (self.samples - 1)) * h


EvalMode = Union[SupportClipped, PaperRange]


@dataclass(frozen=True, eq=False)
class WignerSlice:
    """W(x, ω) for fixed x over the nodes of wgrid."""

    x: Point2
    wgrid: Grid2D
    values: NDArray[np.complex128]

    @property
    def magnitude(self) -> NDArray[np.float64]:
        return np.abs(self.values)


def wd_prefactor(omega: ParamTuple) -> float:
    return abs(omega.det_b) / (2.0 * math.pi) ** 2


def lag_pairs(t: int, n: int) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
    """Index pairs (i+, i-) with i+ + i- = t inside [0, n), and d = i+ - i-."""
    dmax = min(t, 2 * (n - 1) - t)
    d = np.arange(-dmax, dmax + 1, 2, dtype=np.int64)
    return (t + d) // 2, (t - d) // 2, d


class WignerEvaluator:
    """Evaluates the cross distribution of (f, g) under Ω in a fixed mode.

    With g omitted this is the auto distribution of f. Chirped samples are
    precomputed once so repeated evaluations at many x stay cheap.
    """

    def __init__(
        self,
        f: ComplexField,
        omega: ParamTuple,
        mode: Optional[EvalMode] = None,
        g: Optional[ComplexField] = None,
    ) -> None:
        validate(omega)
        self.f = f
        self.g = f if g is None else g
        self.omega = omega
        self.mode = SupportClipped() if mode is None else mode
        co = derive_coeffs(omega)
        self.k, self.m = co.k, co.m
        self.kmm = sub_coeffs(co.k, co.m)
        self.B = np.array(omega.B)
        self.c = wd_prefactor(omega)
        require_same_grid(self.f, self.g)
        if isinstance(self.mode, PaperRange):
            if self.f.analytic is None or self.g.analytic is None:
                raise AnalyticExtensionUnavailable("PaperRange mode needs an analytic signal evaluator")
            self._lag = self.mode.lag_axis()
            self._lag_cell = (self.mode.T / self.mode.samples) ** 2
        else:
            x1, x2 = f.grid.mesh()
            self._fm = self.f.values * chirp_eval(self.m, (x1, x2))
            self._gk = self.g.values * chirp_eval(self.k, (x1, x2))

    def terms(self, x: Point2) -> tuple[NDArray[np.complex128], NDArray[np.float64], NDArray[np.float64], float]:
        """Lag-sample products f_m(x+ξ/2)·conj(g_k(x-ξ/2)), lag axes and lag cell area."""
        if isinstance(self.mode, PaperRange):
            lag = self._lag
            a1 = x[0] + 0.5 * lag
            a2 = x[1] + 0.5 * lag
            b1 = x[0] - 0.5 * lag
            b2 = x[1] - 0.5 * lag
            p1, p2 = np.meshgrid(a1, a2, indexing="ij")
            q1, q2 = np.meshgrid(b1, b2, indexing="ij")
            fm = np.asarray(self.f.analytic(p1, p2)) * chirp_eval(self.m, (p1, p2))
            gk = np.asarray(self.g.analytic(q1, q2)) * chirp_eval(self.k, (q1, q2))
            return fm * np.conj(gk), lag, lag, self._lag_cell
        grid = self.f.grid
        t1, t2 = grid.half_index(x)
        ip1, im1, d1 = lag_pairs(t1, grid.n1)
        ip2, im2, d2 = lag_pairs(t2, grid.n2)
        F = self._fm[np.ix_(ip1, ip2)] * np.conj(self._gk[np.ix_(im1, im2)])
        return F, d1 * grid.step1, d2 * grid.step2, 4.0 * grid.cell

    def values(self, x: Point2, w1: NDArray[np.float64], w2: NDArray[np.float64]) -> NDArray[np.complex128]:
        """Distribution on the tensor grid w1 x w2 (1D axes)."""
        F, s1, s2, cell = self.terms(x)
        S = bilinear_phase_sum(F, s1, s2, self.B, w1, w2)
        W1, W2 = np.meshgrid(np.atleast_1d(w1), np.atleast_1d(w2), indexing="ij")
        return self.c * chirp_eval(self.kmm, (W1, W2)) * S * cell

    def point(self, x: Point2, w: Point2) -> complex:
        return complex(self.values(x, np.array([w[0]]), np.array([w[1]]))[0, 0])

    def points(self, x: Point2, ws: Sequence[Point2]) -> NDArray[np.complex128]:
        """Distribution at x for each frequency in ws (lag terms built once)."""
        F, s1, s2, cell = self.terms(x)
        out = np.empty(len(ws), dtype=np.complex128)
        for n, w in enumerate(ws):
            S = bilinear_phase_sum(F, s1, s2, self.B, np.array([w[0]]), np.array([w[1]]))[0, 0]
            out[n] = self.c * chirp_eval(self.kmm, (float(w[0]), float(w[1]))) * S * cell
        return out

    def slice(self, x: Point2, wgrid: Grid2D) -> WignerSlice:
        return WignerSlice(tuple(x), wgrid, self.values(x, wgrid.axis1(), wgrid.axis2()))


def wd_point(f: ComplexField, omega: ParamTuple, x: Point2, w: Point2, mode: Optional[EvalMode] = None) -> complex:
    return WignerEvaluator(f, omega, mode).point(x, w)


def wd_slice(f: ComplexField, omega: ParamTuple, x: Point2, wgrid: Grid2D, mode: Optional[EvalMode] = None) -> WignerSlice:
    return WignerEvaluator(f, omega, mode).slice(x, wgrid)


def cross_wd(
    f: ComplexField, g: ComplexField, omega: ParamTuple, x: Point2, w: Point2, mode: Optional[EvalMode] = None
) -> complex:
    return WignerEvaluator(f, omega, mode, g=g).point(x, w)


def cross_wd_slice(
    f: ComplexField, g: ComplexField, omega: ParamTuple, x: Point2, wgrid: Grid2D, mode: Optional[EvalMode] = None
) -> WignerSlice:
    return WignerEvaluator(f, omega, mode, g=g).slice(x, wgrid)


def classical_cross_wd(f: ComplexField, g: ComplexField, x: Point2, w: Point2) -> complex:
    """Σ f(x+ξ/2)·conj(g(x-ξ/2))·exp(-i(ω1 τ + ω2 η))·Δξ² on the node lattice."""
    require_same_grid(f, g)
    grid = f.grid
    t1, t2 = grid.half_index(x)
    ip1, im1, d1 = lag_pairs(t1, grid.n1)
    ip2, im2, d2 = lag_pairs(t2, grid.n2)
    F = f.values[np.ix_(ip1, ip2)] * np.conj(g.values[np.ix_(im1, im2)])
    e1 = np.exp(-1j * w[0] * (d1 * grid.step1))
    e2 = np.exp(-1j * w[1] * (d2 * grid.step2))
    return complex(e1 @ F @ e2 * (4.0 * grid.cell))


def classical_wd(f: ComplexField, x: Point2, w: Point2) -> complex:
    return classical_cross_wd(f, f, x, w)


def marginal_freq(
    f: ComplexField, omega: ParamTuple, x: Point2, wgrid: Grid2D, mode: Optional[EvalMode] = None
) -> float:
    """C_{k-m}(x)·Σ_ω C_{m-k}(ω)·W(x, ω)·Δω², an estimate of |f(x)|²."""
    ev = WignerEvaluator(f, omega, mode)
    W = ev.slice(x, wgrid).values
    w1, w2 = wgrid.mesh()
    s = np.sum(np.conj(chirp_eval(ev.kmm, (w1, w2))) * W) * wgrid.cell
    return float((chirp_eval(ev.kmm, x) * s).real)


def marginal_time(
    f: ComplexField, omega: ParamTuple, w: Point2, xgrid: Grid2D, mode: Optional[EvalMode] = None
) -> complex:
    """Σ_x W(x, ω)·Δx² over the nodes of xgrid.

    With xgrid = f.grid.half_refined() every lag pair is visited exactly once,
    which makes the sum an exact discrete counterpart of the continuum identity.
    """
    return complex(marginal_time_points(f, omega, [w], xgrid, mode)[0])


def marginal_time_points(
    f: ComplexField, omega: ParamTuple, ws: Sequence[Point2], xgrid: Grid2D, mode: Optional[EvalMode] = None
) -> NDArray[np.complex128]:
    """marginal_time for several frequencies in one pass over xgrid."""
    ev = WignerEvaluator(f, omega, mode)
    total = np.zeros(len(ws), dtype=np.complex128)
    for a in xgrid.axis1():
        for b in xgrid.axis2():
            total += ev.points((a, b), ws)
    return total * xgrid.cell


def _whole_steps(grid: Grid2D, x: Point2) -> tuple[int, int]:
    out = []
    for v, h in ((x[0], grid.step1), (x[1], grid.step2)):
        t = float(v) / h
        r = round(t)
        if abs(t - r) > 1e-6:
            raise OffGridCenter(f"shift {tuple(x)!r} is not a whole number of grid steps")
        out.append(int(r))
    return out[0], out[1]


def stft(f: ComplexField, win: ComplexField, x: Point2, w: Point2) -> complex:
    """Σ_s f(s)·win(s - x)·exp(-i ωᵀs)·Δs²; window samples off the grid count as zero."""
    require_same_grid(f, win)
    grid = f.grid
    k1, k2 = _whole_steps(grid, x)
    i = np.arange(max(0, k1), min(grid.n1, grid.n1 + k1))
    j = np.arange(max(0, k2), min(grid.n2, grid.n2 + k2))
    if i.size == 0 or j.size == 0:
        return 0j
    F = f.values[np.ix_(i, j)] * win.values[np.ix_(i - k1, j - k2)]
    e1 = np.exp(-1j * w[0] * grid.axis1()[i])
    e2 = np.exp(-1j * w[1] * grid.axis2()[j])
    return complex(e1 @ F @ e2 * grid.cell)


def assoc_window(f: ComplexField, omega: ParamTuple, x: Point2, w: Point2) -> ComplexField:
    """Window g(y) = conj(f_k(-y))·C_m(y)·exp(2i yᵀ S_m x) tying W(x/2, ·) to stft(f, g, x, ·).

    S_m is the symmetric matrix of the quadratic part of C_m. The analysis
    frequency enters only through the STFT kernel, so ``w`` does not change
    the window.
    """
    validate(omega)
    grid = f.grid
    if not grid.is_symmetric():
        raise GridMismatch("the association window needs a grid symmetric about the origin")
    co = derive_coeffs(omega)
    y1, y2 = grid.mesh()
    frev = f.values[::-1, ::-1]
    fk_neg = frev * chirp_eval(co.k, (-y1, -y2))
    S = quad_matrix(co.m)
    cross = 2.0 * (y1 * (S[0, 0] * x[0] + S[0, 1] * x[1]) + y2 * (S[1, 0] * x[0] + S[1, 1] * x[1]))
    vals = np.conj(fk_neg) * chirp_eval(co.m, (y1, y2)) * np.exp(1j * cross)
    return ComplexField(grid, vals)

"""Brute-force reference evaluators and the structural property checks.

The reference evaluators use the un-factorized kernel and scalar loops, so
they share no summation code with the wigner and qpft modules.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .kernel import Point2, chirp_eval, sub_coeffs
from .params import ParamTuple, derive_coeffs, make_classical, shift_geometry, validate
from .qpft import ComplexField, Grid2D, forward, inner, require_same_grid
from .wigner import (
    EvalMode,
    PaperRange,
    WignerEvaluator,
    assoc_window,
    marginal_freq,
    marginal_time_points,
    stft,
    wd_prefactor,
)

FLOOR = 1e-300


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: complex
    rhs: complex
    rel_err: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lhs"] = _num(self.lhs)
        d["rhs"] = _num(self.rhs)
        d["tol"] = d.pop("tolerance")
        d["pass"] = d.pop("passed")
        return d


def _num(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def make_report(name: str, lhs, rhs, tol: float) -> CheckReport:
    """rel_err = max|lhs - rhs| / max(max|rhs|, floor); summary values at the worst entry."""
    lhs = np.atleast_1d(np.asarray(lhs, dtype=np.complex128))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=np.complex128))
    diff = np.abs(lhs - rhs)
    worst = int(np.argmax(diff)) if diff.size else 0
    scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    rel = float(diff[worst]) / max(scale, FLOOR) if diff.size else 0.0
    return CheckReport(name, complex(lhs[worst]), complex(rhs[worst]), rel, tol, rel <= tol)


def reports_to_json(reports: Sequence[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_to_table(reports: Sequence[CheckReport]) -> str:
    lines = [f"{'check':<28} {'rel_err':>12} {'tol':>10}  result"]
    for r in reports:
        lines.append(f"{r.name:<28} {r.rel_err:>12.3e} {r.tolerance:>10.1e}  {'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines)


# reference evaluators


def kernel_direct(omega: ParamTuple, x: Point2, w: Point2) -> complex:
    """Un-factorized kernel: prefactor times exp(i(ωᵀAω + ωᵀBx + xᵀCx + 1ᵀDω + 1ᵀEx))."""
    A, B, C, D, E = (np.asarray(getattr(omega, n)) for n in "ABCDE")
    xv = np.array([float(x[0]), float(x[1])])
    wv = np.array([float(w[0]), float(w[1])])
    one = np.ones(2)
    phase = wv @ A @ wv + wv @ B @ xv + xv @ C @ xv + one @ D @ wv + one @ E @ xv
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    return 1j * cmath.sqrt(complex(det)) / (2.0 * math.pi) * cmath.exp(1j * phase)


def oracle_forward(f: ComplexField, omega: ParamTuple, w: Point2) -> complex:
    """Σ_x f(x)·K(x, ω)·Δx² by scalar loops over the un-factorized kernel."""
    validate(omega)
    g = f.grid
    total = 0j
    for i in range(g.n1):
        for j in range(g.n2):
            v = f.values[i, j]
            if v != 0:
                total += v * kernel_direct(omega, g.node(i, j), w)
    return total * g.cell


def _lookup(grid: Grid2D, p: Point2) -> Optional[tuple[int, int]]:
    t1 = (p[0] - grid.start1) / grid.step1
    t2 = (p[1] - grid.start2) / grid.step2
    i, j = round(t1), round(t2)
    if abs(t1 - i) > 1e-6 or abs(t2 - j) > 1e-6 or not (0 <= i < grid.n1 and 0 <= j < grid.n2):
        return None
    return i, j


def oracle_cross_wd(
    f: ComplexField, g: ComplexField, omega: ParamTuple, x: Point2, w: Point2, mode: Optional[EvalMode] = None
) -> complex:
    """Double-kernel lag sum: Σ f(p)·conj(g(q))·K(p, ω)·conj(K(ω, q))·Δξ² with p + q = 2x."""
    validate(omega)
    require_same_grid(f, g)
    total = 0j
    if isinstance(mode, PaperRange):
        if f.analytic is None or g.analytic is None:
            from .errors import AnalyticExtensionUnavailable

            raise AnalyticExtensionUnavailable("PaperRange mode needs an analytic signal evaluator")
        h = mode.T / mode.samples
        lag = [(j - 0.5 * (mode.samples - 1)) * h for j in range(mode.samples)]
        for tau in lag:
            for eta in lag:
                p = (x[0] + 0.5 * tau, x[1] + 0.5 * eta)
                q = (x[0] - 0.5 * tau, x[1] - 0.5 * eta)
                fv = complex(f.analytic(p[0], p[1]))
                gv = complex(g.analytic(q[0], q[1]))
                total += fv * gv.conjugate() * kernel_direct(omega, p, w) * kernel_direct(omega, w, q).conjugate()
        return total * h * h
    grid = f.grid
    grid.half_index(x)
    for i in range(grid.n1):
        for j in range(grid.n2):
            p = grid.node(i, j)
            q = (2.0 * x[0] - p[0], 2.0 * x[1] - p[1])
            idx = _lookup(grid, q)
            if idx is None:
                continue
            q = grid.node(*idx)
            term = f.values[i, j] * np.conj(g.values[idx])
            if term != 0:
                total += term * kernel_direct(omega, p, w) * kernel_direct(omega, w, q).conjugate()
    return total * 4.0 * grid.cell


def oracle_wd(f: ComplexField, omega: ParamTuple, x: Point2, w: Point2, mode: Optional[EvalMode] = None) -> complex:
    return oracle_cross_wd(f, f, omega, x, w, mode)


# property checks


def _points_grid(points: Iterable[Point2]) -> list[Point2]:
    return [(float(p[0]), float(p[1])) for p in points]


def check_oracle(f: ComplexField, omega: ParamTuple, points, wpoints, tol: float = 1e-10) -> CheckReport:
    ev = WignerEvaluator(f, omega)
    lhs, rhs = [], []
    for x in _points_grid(points):
        for w in _points_grid(wpoints):
            lhs.append(ev.point(x, w))
            rhs.append(oracle_wd(f, omega, x, w))
    return make_report("oracle_equivalence", lhs, rhs, tol)


def moyal_sum(f: ComplexField, g: ComplexField, omega: ParamTuple, xgrid: Grid2D, wgrid: Grid2D, mode=None) -> complex:
    evf = WignerEvaluator(f, omega, mode)
    evg = evf if g is f else WignerEvaluator(g, omega, mode)
    w1, w2 = wgrid.axis1(), wgrid.axis2()
    total = 0j
    for a in xgrid.axis1():
        for b in xgrid.axis2():
            Wf = evf.values((a, b), w1, w2)
            Wg = Wf if evg is evf else evg.values((a, b), w1, w2)
            total += np.sum(Wf * np.conj(Wg))
    return total * xgrid.cell * wgrid.cell


def check_moyal(
    f: ComplexField, g: ComplexField, omega: ParamTuple, xgrid: Grid2D, wgrid: Grid2D, tol: float = 2e-2, mode=None
) -> CheckReport:
    lhs = moyal_sum(f, g, omega, xgrid, wgrid, mode)
    rhs = wd_prefactor(omega) * abs(inner(f, g)) ** 2
    return make_report("moyal", lhs, rhs, tol)


def check_energy(f: ComplexField, omega: ParamTuple, xgrid: Grid2D, wgrid: Grid2D, tol: float = 2e-2, mode=None) -> CheckReport:
    lhs = moyal_sum(f, f, omega, xgrid, wgrid, mode).real
    rhs = wd_prefactor(omega) * f.norm() ** 4
    return make_report("energy", lhs, rhs, tol)


def time_marginal_rhs(f: ComplexField, omega: ParamTuple, w: Point2) -> complex:
    """forward(f, Ω)(ω)·conj(forward(f, Ω')(ω)) with Ω' = {C, B, A, E, D}."""
    wg = Grid2D(1, 1, float(w[0]), float(w[1]), 1.0, 1.0)
    a = forward(f, omega, wg).values[0, 0]
    b = forward(f, omega.conjugate_pair(), wg).values[0, 0]
    return complex(a * np.conj(b))


def check_marginals(
    f: ComplexField,
    omega: ParamTuple,
    wpoints,
    xpoints,
    wgrid: Grid2D,
    mode=None,
    tol: float = 2e-2,
    xgrid: Optional[Grid2D] = None,
) -> tuple[CheckReport, CheckReport]:
    """Time marginal at each ω of wpoints, frequency marginal at each x of xpoints.

    The time marginal sums over ``xgrid`` (default: the half-refined field grid).
    """
    xg = f.grid.half_refined() if xgrid is None else xgrid
    ws = _points_grid(wpoints)
    lt = marginal_time_points(f, omega, ws, xg, mode)
    rt = [time_marginal_rhs(f, omega, w) for w in ws]
    lf, rf = [], []
    for x in _points_grid(xpoints):
        lf.append(marginal_freq(f, omega, x, wgrid, mode))
        if isinstance(mode, PaperRange) and f.analytic is not None:
            fx = complex(f.analytic(x[0], x[1]))
        else:
            fx = f.values[f.grid.index(x)]
        rf.append(abs(fx) ** 2)
    return make_report("marginal_time", lt, rt, tol), make_report("marginal_freq", lf, rf, tol)


def _shift_values(v: np.ndarray, k1: int, k2: int) -> np.ndarray:
    """out[i, j] = v[i - k1, j - k2], zero where the source index leaves the grid."""
    out = np.zeros_like(v)
    n1, n2 = v.shape
    src1 = slice(max(0, -k1), min(n1, n1 - k1))
    dst1 = slice(max(0, k1), min(n1, n1 + k1))
    src2 = slice(max(0, -k2), min(n2, n2 - k2))
    dst2 = slice(max(0, k2), min(n2, n2 + k2))
    out[dst1, dst2] = v[src1, src2]
    return out


def shift_factor(omega: ParamTuple, x0: Point2, x: Point2, w: Point2) -> complex:
    """∇₁(x, ω) = C_{m-k}(ρ)·C_{k-m}(x0)·exp(-i ωᵀQρ)·exp(-i(xᵀQ x0 + 2λᵀx0)), ρ = P x0."""
    co = derive_coeffs(omega)
    sg = shift_geometry(co, omega.B)
    x0v = np.asarray(x0, dtype=float)
    rho = sg.P @ x0v
    Q = sg.Q
    xv = np.asarray(x, dtype=float)
    wv = np.asarray(w, dtype=float)
    kmm = sub_coeffs(co.k, co.m)
    mmk = sub_coeffs(co.m, co.k)
    return (
        chirp_eval(mmk, tuple(rho))
        * chirp_eval(kmm, tuple(x0v))
        * cmath.exp(-1j * float(wv @ Q @ rho))
        * cmath.exp(-1j * float(xv @ Q @ x0v + 2.0 * sg.lambdaVec @ x0v))
    )


def check_shift_covariance(f: ComplexField, omega: ParamTuple, x0: Point2, points, wpoints, tol: float = 1e-9) -> CheckReport:
    """W of f(· - x0) at (x, ω) against ∇₁·W_f(x - x0, ω + ρ).

    The shifted field is tabulated on the same grid; samples shifted off the
    grid are dropped from f as well, which keeps both sides identical finite
    sums. Points whose shifted counterpart leaves the grid are skipped.
    """
    grid = f.grid
    k1 = round(x0[0] / grid.step1)
    k2 = round(x0[1] / grid.step2)
    if abs(k1 * grid.step1 - x0[0]) > 1e-9 * grid.step1 or abs(k2 * grid.step2 - x0[1]) > 1e-9 * grid.step2:
        from .errors import OffGridCenter

        raise OffGridCenter(f"shift {tuple(x0)!r} is not a whole number of grid steps")
    fs = ComplexField(grid, _shift_values(f.values, k1, k2))
    feff = ComplexField(grid, _shift_values(fs.values, -k1, -k2))
    sg = shift_geometry(derive_coeffs(omega), omega.B)
    rho = sg.P @ np.asarray(x0, dtype=float)
    evs = WignerEvaluator(fs, omega)
    evf = WignerEvaluator(feff, omega)
    lhs, rhs = [], []
    for x in _points_grid(points):
        xs = (x[0] - x0[0], x[1] - x0[1])
        try:
            grid.half_index(x)
            grid.half_index(xs)
        except Exception:
            continue
        for w in _points_grid(wpoints):
            lhs.append(evs.point(x, w))
            rhs.append(shift_factor(omega, x0, x, w) * evf.point(xs, (w[0] + rho[0], w[1] + rho[1])))
    return make_report("time_shift", lhs, rhs, tol)


def check_mod_covariance(f: ComplexField, omega: ParamTuple, w0: Point2, points, wpoints, tol: float = 1e-9) -> CheckReport:
    """W of f·exp(i w0ᵀx) against C_{m-k}(t)·exp(-i ωᵀQt)·W_f(x, ω + t), B t = w0."""
    grid = f.grid
    x1, x2 = grid.mesh()
    fmod = ComplexField(grid, f.values * np.exp(1j * (w0[0] * x1 + w0[1] * x2)))
    co = derive_coeffs(omega)
    sg = shift_geometry(co, omega.B)
    t = sg.Binv @ np.asarray(w0, dtype=float)
    mmk = sub_coeffs(co.m, co.k)
    evm = WignerEvaluator(fmod, omega)
    evf = WignerEvaluator(f, omega)
    lhs, rhs = [], []
    for x in _points_grid(points):
        for w in _points_grid(wpoints):
            wv = np.asarray(w)
            fac = chirp_eval(mmk, tuple(t)) * cmath.exp(-1j * float(wv @ sg.Q @ t))
            lhs.append(evm.point(x, w))
            rhs.append(fac * evf.point(x, (w[0] + t[0], w[1] + t[1])))
    return make_report("modulation", lhs, rhs, tol)


def dilate(f: ComplexField, lam: float) -> ComplexField:
    """sqrt(lam)·f(lam·x), tabulated on the grid scaled by 1/lam (same samples)."""
    fn = None
    if f.analytic is not None:
        base = f.analytic
        fn = lambda x1, x2: math.sqrt(lam) * np.asarray(base(lam * np.asarray(x1), lam * np.asarray(x2)))  # noqa: E731
    return ComplexField(f.grid.scaled(1.0 / lam), math.sqrt(lam) * f.values, fn)


def check_dilation(
    f: ComplexField, omega: ParamTuple, lam: float, points, wpoints, tol: float = 1e-9, literal: bool = False
) -> CheckReport:
    """W of sqrt(lam) f(lam ·) at (x, ω) against (1/lam)·W_f(lam x, ω/lam).

    Points are given on the dilated grid. By default the right-hand side uses
    the rescaled tuple {A/lam², B, C/lam², D/lam, E/lam} together with the
    matching ω-chirp ratio, which is the form that holds for any Ω; with
    ``literal=True`` the original Ω is used on both sides, which is valid only
    when all chirp coefficients vanish.
    """
    fd = dilate(f, lam)
    om_r = omega if literal else omega.dilated(lam)
    co = derive_coeffs(omega)
    co_r = derive_coeffs(om_r)
    evd = WignerEvaluator(fd, omega)
    evf = WignerEvaluator(f, om_r)
    lhs, rhs = [], []
    for x in _points_grid(points):
        for w in _points_grid(wpoints):
            wr = (w[0] / lam, w[1] / lam)
            ratio = 1.0 if literal else chirp_eval(sub_coeffs(co.k, co.m), w) * np.conj(chirp_eval(sub_coeffs(co_r.k, co_r.m), wr))
            lhs.append(evd.point(x, w))
            rhs.append(ratio * evf.point((lam * x[0], lam * x[1]), wr) / lam)
    return make_report("dilation" + ("_literal" if literal else ""), lhs, rhs, tol)


def discrete_convolution(f: ComplexField, g: ComplexField) -> ComplexField:
    """(f*g)(y) = Σ_z f(z)·g(y - z)·Δx² on the shared grid.

    The grid must have a node at the origin lattice (start a whole number of
    steps) so that differences of nodes are nodes. Samples of f*g falling
    outside the grid are dropped.
    """
    require_same_grid(f, g)
    grid = f.grid
    o1 = round(grid.start1 / grid.step1)
    o2 = round(grid.start2 / grid.step2)
    if abs(o1 * grid.step1 - grid.start1) > 1e-9 * grid.step1 or abs(o2 * grid.step2 - grid.start2) > 1e-9 * grid.step2:
        from .errors import GridMismatch

        raise GridMismatch("convolution needs grid nodes on integer multiples of the step")
    n1, n2 = grid.shape
    full = np.zeros((2 * n1 - 1, 2 * n2 - 1), dtype=np.complex128)
    for i in range(n1):
        for j in range(n2):
            if f.values[i, j] != 0:
                full[i : i + n1, j : j + n2] += f.values[i, j] * g.values
    # full[a, b] holds the node with integer coordinate (a + 2*o1, b + 2*o2); keep the part on the grid
    out = full[-o1 : -o1 + n1, -o2 : -o2 + n2]
    return ComplexField(grid, out * grid.cell)


def check_convolution(f: ComplexField, g: ComplexField, omega: ParamTuple, x: Point2, wpoints, tol: float = 5e-2) -> CheckReport:
    """W of f*g at (x, ω) against (2π)²C_{m-k}(ω)/|det B|·Σ_u W_f(u, ω)·W_g(x - u, ω)·Δu².

    u runs over nodes and midpoints of the grid (cell Δx²/4); on that lattice
    the identity is an exact finite-sum rearrangement whenever the chirps of
    Ω have no quadratic part.
    """
    fg = discrete_convolution(f, g)
    grid = f.grid
    co = derive_coeffs(omega)
    mmk = sub_coeffs(co.m, co.k)
    evc = WignerEvaluator(fg, omega)
    evf = WignerEvaluator(f, omega)
    evg = WignerEvaluator(g, omega)
    ug = grid.half_refined()
    w = _points_grid(wpoints)
    w1 = np.array([p[0] for p in w])
    w2 = np.array([p[1] for p in w])
    acc = np.zeros(len(w), dtype=np.complex128)
    for a in ug.axis1():
        for b in ug.axis2():
            v = (x[0] - a, x[1] - b)
            try:
                grid.half_index(v)
            except Exception:
                continue
            wf = np.array([evf.values((a, b), np.array([p]), np.array([q]))[0, 0] for p, q in zip(w1, w2)])
            wg = np.array([evg.values(v, np.array([p]), np.array([q]))[0, 0] for p, q in zip(w1, w2)])
            acc += wf * wg
    rhs = (2.0 * math.pi) ** 2 / abs(omega.det_b) * np.array([chirp_eval(mmk, p) for p in w]) * acc * ug.cell
    lhs = np.array([evc.point(x, p) for p in w])
    return make_report("convolution", lhs, rhs, tol)


def reflect(f: ComplexField) -> ComplexField:
    """f(-x) on a grid symmetric about the origin."""
    if not f.grid.is_symmetric():
        from .errors import GridMismatch

        raise GridMismatch("reflection needs a grid symmetric about the origin")
    return ComplexField(f.grid, f.values[::-1, ::-1])


def check_conjugation(f: ComplexField, omega: ParamTuple, points, wpoints, tol: float = 1e-9, literal: bool = False) -> CheckReport:
    """(a) conj(W^Ω) against W^{Ω'}, Ω' = {C, B, A, E, D};
    (b) W^Ω of f(-·) at (x, ω) against W^{Ω_r} of f at (-x, ω).

    Ω_r = {A, -B, C, -D, -E} with the ω-chirp ratio C_{k-m}(ω)/C_{k_r-m_r}(ω);
    with ``literal=True`` it is {A, -B, C, D, E} without ratio, which agrees
    only when the linear chirp coefficients vanish.
    """
    ev = WignerEvaluator(f, omega)
    ev_p = WignerEvaluator(f, omega.conjugate_pair())
    om_r = ParamTuple(omega.A, -omega.B, omega.C, omega.D, omega.E) if literal else omega.reflected()
    ev_rev = WignerEvaluator(reflect(f), omega)
    ev_r = WignerEvaluator(f, om_r)
    co = derive_coeffs(omega)
    co_r = derive_coeffs(om_r)
    lhs, rhs = [], []
    for x in _points_grid(points):
        for w in _points_grid(wpoints):
            lhs.append(np.conj(ev.point(x, w)))
            rhs.append(ev_p.point(x, w))
            ratio = 1.0 if literal else chirp_eval(sub_coeffs(co.k, co.m), w) * np.conj(chirp_eval(sub_coeffs(co_r.k, co_r.m), w))
            lhs.append(ev_rev.point(x, w))
            rhs.append(ratio * ev_r.point((-x[0], -x[1]), w))
    return make_report("conjugation" + ("_literal" if literal else ""), lhs, rhs, tol)


def check_stft_assoc(f: ComplexField, omega: ParamTuple, pairs, tol: float = 1e-6) -> CheckReport:
    """W(x/2, ν)·C_{m-k}(ν) against 4|det B|/(2π)²·C_m(x)·exp(i ωᵀx/2)·stft(f, g, x, ω).

    ν = -B⁻¹ω/2 and g = assoc_window(f, Ω, x, ω).
    """
    co = derive_coeffs(omega)
    sg = shift_geometry(co, omega.B)
    mmk = sub_coeffs(co.m, co.k)
    ev = WignerEvaluator(f, omega)
    c = wd_prefactor(omega)
    lhs, rhs = [], []
    for x, w in pairs:
        x = (float(x[0]), float(x[1]))
        w = (float(w[0]), float(w[1]))
        nu = -0.5 * (sg.Binv @ np.asarray(w))
        nu = (float(nu[0]), float(nu[1]))
        lhs.append(ev.point((0.5 * x[0], 0.5 * x[1]), nu) * chirp_eval(mmk, nu))
        win = assoc_window(f, omega, x, w)
        phase = cmath.exp(0.5j * (w[0] * x[0] + w[1] * x[1]))
        rhs.append(4.0 * c * chirp_eval(co.m, x) * phase * stft(f, win, x, w))
    return make_report("stft_association", lhs, rhs, tol)


def stft_pairs(f: ComplexField, omega: ParamTuple, wgrid: Grid2D, rng: np.random.Generator, count: int = 5):
    """Random (x, ω) test pairs with x a whole number of steps and ν = -B⁻¹ω/2
    within two cells of the ridge of |W(x/2, ·)| on wgrid, where the
    distribution is not dominated by cancellation."""
    grid = f.grid
    ev = WignerEvaluator(f, omega)
    B = np.asarray(omega.B)
    pairs = []
    for _ in range(count):
        k1 = int(rng.integers(-(grid.n1 // 4), grid.n1 // 4 + 1))
        k2 = int(rng.integers(-(grid.n2 // 4), grid.n2 // 4 + 1))
        x = (k1 * grid.step1, k2 * grid.step2)
        slc = ev.slice((0.5 * x[0], 0.5 * x[1]), wgrid)
        i, j = np.unravel_index(int(np.argmax(np.abs(slc.values))), wgrid.shape)
        i = min(max(int(i) + int(rng.integers(-2, 3)), 0), wgrid.n1 - 1)
        j = min(max(int(j) + int(rng.integers(-2, 3)), 0), wgrid.n2 - 1)
        w = -2.0 * (B @ np.array(wgrid.node(i, j)))
        pairs.append((x, (float(w[0]), float(w[1]))))
    return pairs


def check_classical(f: ComplexField, points, wpoints, sign: int = 1, tol: float = 1e-12) -> CheckReport:
    """4π²·W with B = sign·I against the classical WD at -sign·ω."""
    from .wigner import classical_wd

    z = np.zeros((2, 2))
    omega = make_classical() if sign > 0 else ParamTuple(z, -np.eye(2), z, z, z)
    ev = WignerEvaluator(f, omega)
    lhs, rhs = [], []
    for x in _points_grid(points):
        for w in _points_grid(wpoints):
            lhs.append(4.0 * math.pi**2 * ev.point(x, w))
            rhs.append(classical_wd(f, x, (-sign * w[0], -sign * w[1])))
    return make_report("classical_reduction", lhs, rhs, tol)

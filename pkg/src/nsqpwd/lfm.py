"""2D-LFM test signals, calibrated noise, closed-form predictions and peak picking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ChirpRateMismatch, CoeffMismatch, GridTooSmall, ZeroSignal
from .kernel import Point2
from .params import ParamTuple, check_b, derive_coeffs, validate
from .qpft import ComplexField, Grid2D
from .wigner import WignerSlice, wd_prefactor


@dataclass(frozen=True)
class LFMComponent:
    """kappa·exp(i(alpha x1 + beta x1² + mu x2 + lam x2²))."""

    kappa: complex = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    mu: float = 0.0
    lam: float = 0.0

    def __call__(self, x1: ArrayLike, x2: ArrayLike) -> NDArray[np.complex128]:
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        ph = self.alpha * x1 + self.beta * x1 * x1 + self.mu * x2 + self.lam * x2 * x2
        return complex(self.kappa) * np.exp(1j * ph)

    def to_dict(self) -> dict[str, float]:
        k = complex(self.kappa)
        return {
            "kappa_re": k.real,
            "kappa_im": k.imag,
            "alpha": self.alpha,
            "beta": self.beta,
            "mu": self.mu,
            "lambda": self.lam,
        }


@dataclass(frozen=True)
class SignalSpec:
    components: tuple[LFMComponent, ...]
    T: float

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not 1 <= len(comps) <= 3:
            raise ValueError(f"expected 1 to 3 components, got {len(comps)}")
        if not self.T > 0:
            raise ValueError("support length T must be positive")
        object.__setattr__(self, "components", comps)

    def __call__(self, x1: ArrayLike, x2: ArrayLike) -> NDArray[np.complex128]:
        out = self.components[0](x1, x2)
        for c in self.components[1:]:
            out = out + c(x1, x2)
        return out


def mono_spec() -> SignalSpec:
    """Single chirp used with Ω₀ in the mono-component experiment."""
    return SignalSpec((LFMComponent(1.0, 0.3, 0.2, 0.1, 0.5),), 40.0)


def bi_spec() -> SignalSpec:
    return SignalSpec(
        (LFMComponent(4.0, 0.2, 0.05, 0.15, 0.04), LFMComponent(1.0, 0.4, 0.05, 0.2, 0.04)),
        40.0,
    )


def tri_spec() -> SignalSpec:
    return SignalSpec(
        (
            LFMComponent(5.0, 2.0, 0.05, 0.15, 0.04),
            LFMComponent(1.0, 4.0, 0.05, 6.0, 0.04),
            LFMComponent(11.0, 6.0, 0.05, 0.25, 0.04),
        ),
        40.0,
    )


def synthesize(spec: SignalSpec, grid: Grid2D) -> ComplexField:
    """Tabulate the signal on grid; the field keeps `spec` as analytic evaluator."""
    half = 0.5 * spec.T
    lo, hi = grid.lower(), grid.upper()
    tol = 1e-9 * max(1.0, half)
    if lo[0] > -half + tol or lo[1] > -half + tol or hi[0] < half - tol or hi[1] < half - tol:
        raise GridTooSmall(f"grid cells span {lo}..{hi}, which does not cover [-{half}, {half}]²")
    return ComplexField.from_function(grid, spec)


def add_awgn(f: ComplexField, snr_db: float, seed: int) -> ComplexField:
    """Add circular complex white Gaussian noise at the given per-sample SNR."""
    if math.isinf(snr_db) and snr_db > 0:
        return f
    power = float(np.mean(np.abs(f.values) ** 2))
    if power == 0.0:
        raise ZeroSignal("cannot calibrate noise against a zero signal")
    sigma2 = power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(f.grid.shape + (2,)) @ np.array([1.0, 1j])
    return ComplexField(f.grid, f.values + math.sqrt(0.5 * sigma2) * noise)


def measured_snr_db(clean: ComplexField, noisy: ComplexField) -> float:
    p_sig = np.mean(np.abs(clean.values) ** 2)
    p_noise = np.mean(np.abs(noisy.values - clean.values) ** 2)
    return float(10.0 * np.log10(p_sig / p_noise))


def sinc(z: ArrayLike):
    """sin(z)/z with a series branch near the removable singularity."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    out = np.where(small, 1.0 - z * z / 6.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def _require_equal_coeffs(omega: ParamTuple):
    validate(omega)
    co = derive_coeffs(omega)
    if not co.equal:
        raise CoeffMismatch(f"closed forms need k = m, got k={co.k}, m={co.m}")
    return co.m


def _peak_rhs(m: Sequence[float], alpha: float, beta: float, mu: float, lam: float, x: Point2) -> tuple[float, float]:
    r1 = m[3] + m[1] * x[1] + alpha + 2.0 * x[0] * (m[0] + beta)
    r2 = m[4] + m[1] * x[0] + mu + 2.0 * x[1] * (m[2] + lam)
    return r1, r2


def _sinc_args(omega: ParamTuple, m, alpha, beta, mu, lam, x: Point2, w) -> tuple:
    b = omega.B
    r1, r2 = _peak_rhs(m, alpha, beta, mu, lam, x)
    w1, w2 = np.asarray(w[0], dtype=float), np.asarray(w[1], dtype=float)
    a1 = r1 + b[0, 0] * w1 + b[0, 1] * w2
    a2 = r2 + b[1, 0] * w1 + b[1, 1] * w2
    return a1, a2


def predict_mono(omega: ParamTuple, comp: LFMComponent, T: float, x: Point2, w):
    """Closed-form distribution of one chirp over the square support of side T."""
    m = _require_equal_coeffs(omega)
    a1, a2 = _sinc_args(omega, m, comp.alpha, comp.beta, comp.mu, comp.lam, x, w)
    amp = abs(complex(comp.kappa)) ** 2 * T * T * wd_prefactor(omega)
    out = amp * sinc(0.5 * T * a1) * sinc(0.5 * T * a2)
    return complex(out) if np.ndim(out) == 0 else out.astype(np.complex128)


def predicted_peak(omega: ParamTuple, comp: LFMComponent, x: Point2) -> Point2:
    """Frequency where both sinc arguments vanish: B ω = -rhs."""
    m = _require_equal_coeffs(omega)
    check_b(omega.B)
    rhs = np.array(_peak_rhs(m, comp.alpha, comp.beta, comp.mu, comp.lam, x))
    w = -np.linalg.solve(np.asarray(omega.B), rhs)
    return (float(w[0]), float(w[1]))


def cross_peak(omega: ParamTuple, cn: LFMComponent, cm: LFMComponent, x: Point2) -> Point2:
    """Location of the cross term between two components (mean frequencies)."""
    mean = LFMComponent(1.0, 0.5 * (cn.alpha + cm.alpha), cn.beta, 0.5 * (cn.mu + cm.mu), cn.lam)
    return predicted_peak(omega, mean, x)


def predict_pair(omega: ParamTuple, cn: LFMComponent, cm: LFMComponent, T: float, x: Point2, w):
    """Closed form of the (n, m) summand: κ_n conj(κ_m) with mean-frequency sincs."""
    m = _require_equal_coeffs(omega)
    if cn.beta != cm.beta or cn.lam != cm.lam:
        raise ChirpRateMismatch("cross closed forms need shared chirp rates beta and lambda")
    alpha = 0.5 * (cn.alpha + cm.alpha)
    mu = 0.5 * (cn.mu + cm.mu)
    a1, a2 = _sinc_args(omega, m, alpha, cn.beta, mu, cn.lam, x, w)
    amp = complex(cn.kappa) * np.conj(complex(cm.kappa)) * T * T * wd_prefactor(omega)
    phase = np.exp(1j * ((cn.alpha - cm.alpha) * x[0] + (cn.mu - cm.mu) * x[1]))
    out = amp * phase * sinc(0.5 * T * a1) * sinc(0.5 * T * a2)
    return complex(out) if np.ndim(out) == 0 else np.asarray(out, dtype=np.complex128)


def predict_terms(omega: ParamTuple, spec: SignalSpec, x: Point2, w) -> dict[tuple[int, int], object]:
    """All ordered summands (n, m) of the multi-component closed form."""
    comps = spec.components
    return {(i, j): predict_pair(omega, comps[i], comps[j], spec.T, x, w) for i, j in product(range(len(comps)), repeat=2)}


def predict_multi(omega: ParamTuple, spec: SignalSpec, x: Point2, w):
    terms = predict_terms(omega, spec, x, w)
    total = None
    for key in sorted(terms):
        total = terms[key] if total is None else total + terms[key]
    return total


def local_maxima(mag: NDArray[np.float64]) -> NDArray[np.bool_]:
    """8-neighbour non-strict local maxima of a 2D array."""
    pad = np.pad(mag, 1, mode="constant", constant_values=-np.inf)
    n1, n2 = mag.shape
    mask = np.ones(mag.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                mask &= mag >= pad[1 + di : 1 + di + n1, 1 + dj : 1 + dj + n2]
    return mask


def detect_peaks(slc: WignerSlice, count: int) -> list[tuple[Point2, float]]:
    """The `count` largest local maxima of |W|, descending; ties in row-major order."""
    if count < 1:
        raise ValueError("count must be at least 1")
    mag = np.abs(np.asarray(slc.values))
    idx = np.flatnonzero(local_maxima(mag))
    order = sorted(idx, key=lambda r: (-mag.flat[r], r))[:count]
    out = []
    for r in order:
        i, j = divmod(int(r), mag.shape[1])
        out.append((slc.wgrid.node(i, j), float(mag[i, j])))
    return out


def nearest_cell(grid: Grid2D, w: Point2) -> tuple[int, int]:
    i = int(round((w[0] - grid.start1) / grid.step1))
    j = int(round((w[1] - grid.start2) / grid.step2))
    return min(max(i, 0), grid.n1 - 1), min(max(j, 0), grid.n2 - 1)


def match_peak(slc: WignerSlice, w: Point2, cells: int = 1):
    """Strongest local maximum of |W| within `cells` grid cells of w, or None.

    Returns ((ω1, ω2), magnitude, (di, dj)) with (di, dj) the offset in cells.
    """
    mag = np.abs(np.asarray(slc.values))
    grid = slc.wgrid
    t1 = (w[0] - grid.start1) / grid.step1
    t2 = (w[1] - grid.start2) / grid.step2
    mask = local_maxima(mag)
    best = None
    for i in range(max(0, math.floor(t1 - cells)), min(grid.n1, math.ceil(t1 + cells) + 1)):
        for j in range(max(0, math.floor(t2 - cells)), min(grid.n2, math.ceil(t2 + cells) + 1)):
            if abs(i - t1) <= cells and abs(j - t2) <= cells and mask[i, j]:
                if best is None or mag[i, j] > best[1]:
                    best = (grid.node(i, j), float(mag[i, j]), (i - t1, j - t2))
    return best

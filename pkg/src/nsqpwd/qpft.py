"""Sampled fields and the discrete forward/inverse transform (midpoint rule)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._sums import bilinear_phase_sum
from .errors import EmptyGrid, GridMismatch, OffGridCenter
from .kernel import chirp_eval, kernel_prefactor
from .params import ParamTuple, derive_coeffs, validate

Analytic = Callable[[ArrayLike, ArrayLike], NDArray[np.complex128]]

_NODE_TOL = 1e-6


@dataclass(frozen=True)
class Grid2D:
    """Uniform rectangular grid; node (i, j) sits at (start1 + i*step1, start2 + j*step2)."""

    n1: int
    n2: int
    start1: float
    start2: float
    step1: float
    step2: float

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise EmptyGrid(f"grid needs at least one node per axis, got {self.n1}x{self.n2}")
        if not (self.step1 > 0 and self.step2 > 0):
            raise ValueError("grid steps must be positive")

    @classmethod
    def from_intervals(cls, lo1: float, hi1: float, n1: int, lo2: float, hi2: float, n2: int) -> "Grid2D":
        """Cell-centred nodes of n1 x n2 equal cells tiling [lo1, hi1] x [lo2, hi2]."""
        if n1 < 1 or n2 < 1:
            raise EmptyGrid("grid needs at least one node per axis")
        h1 = (hi1 - lo1) / n1
        h2 = (hi2 - lo2) / n2
        return cls(n1, n2, lo1 + 0.5 * h1, lo2 + 0.5 * h2, h1, h2)

    @classmethod
    def centered(cls, n: int, half_width: float) -> "Grid2D":
        return cls.from_intervals(-half_width, half_width, n, -half_width, half_width, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    @property
    def cell(self) -> float:
        return self.step1 * self.step2

    def axis1(self) -> NDArray[np.float64]:
        return self.start1 + np.arange(self.n1) * self.step1

    def axis2(self) -> NDArray[np.float64]:
        return self.start2 + np.arange(self.n2) * self.step2

    def mesh(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return np.meshgrid(self.axis1(), self.axis2(), indexing="ij")

    def node(self, i: int, j: int) -> tuple[float, float]:
        return (self.start1 + i * self.step1, self.start2 + j * self.step2)

    def lower(self) -> tuple[float, float]:
        return (self.start1 - 0.5 * self.step1, self.start2 - 0.5 * self.step2)

    def upper(self) -> tuple[float, float]:
        return (
            self.start1 + (self.n1 - 0.5) * self.step1,
            self.start2 + (self.n2 - 0.5) * self.step2,
        )

    def is_symmetric(self) -> bool:
        c1 = self.start1 + 0.5 * (self.n1 - 1) * self.step1
        c2 = self.start2 + 0.5 * (self.n2 - 1) * self.step2
        return abs(c1) <= 1e-9 * self.step1 and abs(c2) <= 1e-9 * self.step2

    def half_refined(self) -> "Grid2D":
        """Nodes plus midpoints between neighbouring nodes."""
        return Grid2D(2 * self.n1 - 1, 2 * self.n2 - 1, self.start1, self.start2, 0.5 * self.step1, 0.5 * self.step2)

    def scaled(self, factor: float) -> "Grid2D":
        return Grid2D(self.n1, self.n2, self.start1 * factor, self.start2 * factor, self.step1 * factor, self.step2 * factor)

    def matches(self, other: "Grid2D") -> bool:
        if (self.n1, self.n2) != (other.n1, other.n2):
            return False
        tol1 = 1e-12 * self.step1
        tol2 = 1e-12 * self.step2
        return (
            abs(self.step1 - other.step1) <= tol1
            and abs(self.step2 - other.step2) <= tol2
            and abs(self.start1 - other.start1) <= max(tol1, 1e-12 * abs(self.start1))
            and abs(self.start2 - other.start2) <= max(tol2, 1e-12 * abs(self.start2))
        )

    def half_index(self, p: tuple[float, float]) -> tuple[int, int]:
        """Doubled node index (2i for nodes, odd for midpoints) of point p.

        Raises OffGridCenter unless p lies on a node or a midpoint between nodes.
        """
        out = []
        for v, s, h, n in ((p[0], self.start1, self.step1, self.n1), (p[1], self.start2, self.step2, self.n2)):
            t = 2.0 * (float(v) - s) / h
            r = round(t)
            if abs(t - r) > _NODE_TOL or r < 0 or r > 2 * (n - 1):
                raise OffGridCenter(f"point {tuple(p)!r} is not a grid node or midpoint")
            out.append(int(r))
        return out[0], out[1]

    def index(self, p: tuple[float, float]) -> tuple[int, int]:
        """Node index of p; raises OffGridCenter if p is not a node."""
        t1, t2 = self.half_index(p)
        if t1 % 2 or t2 % 2:
            raise OffGridCenter(f"point {tuple(p)!r} is not a grid node")
        return t1 // 2, t2 // 2


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on a Grid2D, shape (n1, n2), row-major.

    ``analytic`` optionally evaluates the underlying continuous signal at
    arbitrary points; it is required by the PaperRange evaluation mode.
    """

    grid: Grid2D
    values: NDArray[np.complex128]
    analytic: Optional[Analytic] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim == 1 and v.size == self.grid.size:
            v = v.reshape(self.grid.shape)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field has non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def flat(self) -> NDArray[np.complex128]:
        return self.values.reshape(-1)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "ComplexField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @classmethod
    def from_function(cls, grid: Grid2D, fn: Analytic, keep_analytic: bool = True) -> "ComplexField":
        x1, x2 = grid.mesh()
        return cls(grid, np.asarray(fn(x1, x2), dtype=np.complex128), fn if keep_analytic else None)

    def tabulated(self) -> "ComplexField":
        """Same samples without the analytic extension."""
        return ComplexField(self.grid, self.values)

    def scaled(self, a: complex) -> "ComplexField":
        fn = None
        if self.analytic is not None:
            base = self.analytic
            fn = lambda x1, x2: a * base(x1, x2)  # noqa: E731
        return ComplexField(self.grid, a * self.values, fn)

    def __add__(self, other: "ComplexField") -> "ComplexField":
        require_same_grid(self, other)
        fn = None
        if self.analytic is not None and other.analytic is not None:
            fa, fb = self.analytic, other.analytic
            fn = lambda x1, x2: fa(x1, x2) + fb(x1, x2)  # noqa: E731
        return ComplexField(self.grid, self.values + other.values, fn)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell))


def require_same_grid(f: ComplexField, g: ComplexField) -> None:
    if not f.grid.matches(g.grid):
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


def inner(f: ComplexField, g: ComplexField) -> complex:
    """Midpoint-rule ⟨f, g⟩ = Σ f·conj(g)·Δx²."""
    require_same_grid(f, g)
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.cell)


def forward(f: ComplexField, omega: ParamTuple, wgrid: Grid2D) -> ComplexField:
    """Σ_x f(x)·K(x, ω)·Δx² for every ω node of wgrid."""
    validate(omega)
    co = derive_coeffs(omega)
    g = f.grid
    x1, x2 = g.mesh()
    G = f.values * chirp_eval(co.m, (x1, x2))
    s = bilinear_phase_sum(G, g.axis1(), g.axis2(), np.asarray(omega.B), wgrid.axis1(), wgrid.axis2())
    w1, w2 = wgrid.mesh()
    out = kernel_prefactor(omega.B) * chirp_eval(co.k, (w1, w2)) * s * g.cell
    return ComplexField(wgrid, out)


def inverse(F: ComplexField, omega: ParamTuple, xgrid: Grid2D) -> ComplexField:
    """conj(Λ)·Σ_ω F(ω)·conj(phase of K(x, ω))·Δω², Λ the forward prefactor."""
    validate(omega)
    co = derive_coeffs(omega)
    wg = F.grid
    w1, w2 = wg.mesh()
    G = F.values * np.conj(chirp_eval(co.k, (w1, w2)))
    s = bilinear_phase_sum(G, wg.axis1(), wg.axis2(), -np.asarray(omega.B).T, xgrid.axis1(), xgrid.axis2())
    x1, x2 = xgrid.mesh()
    lam = kernel_prefactor(omega.B)
    out = np.conj(lam) * np.conj(chirp_eval(co.m, (x1, x2))) * s * wg.cell
    return ComplexField(xgrid, out)


def l2_norm(f: ComplexField) -> float:
    return f.norm()


def gaussian(grid: Grid2D, width: float = 1.0, center: tuple[float, float] = (0.0, 0.0)) -> ComplexField:
    """Unit-L²-norm Gaussian exp(-|x-c|²/(2 width²)) / (sqrt(pi) width)."""
    norm = 1.0 / (math.sqrt(math.pi) * width)

    def fn(x1, x2):
        r2 = (np.asarray(x1) - center[0]) ** 2 + (np.asarray(x2) - center[1]) ** 2
        return (norm * np.exp(-r2 / (2.0 * width**2))).astype(np.complex128)

    return ComplexField.from_function(grid, fn)

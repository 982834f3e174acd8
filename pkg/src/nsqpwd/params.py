"""Parameter tuple Ω = {A, B, C, D, E}, derived phase coefficients and named special cases.

All matrices are real 2x2 arrays stored row-major. Only B is constrained
(symmetric, non-singular); A, C, D, E may carry skew parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import AsymmetricB, DegenerateAngle, SingularB

EPS_ANG = 1e-9

_NAMES = ("A", "B", "C", "D", "E")


def _mat(a: ArrayLike, name: str) -> NDArray[np.float64]:
    m = np.array(a, dtype=np.float64)
    if m.shape != (2, 2):
        raise ValueError(f"matrix {name} must be 2x2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"matrix {name} has non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class ParamTuple:
    """The five real 2x2 matrices of the transform family."""

    A: NDArray[np.float64]
    B: NDArray[np.float64]
    C: NDArray[np.float64]
    D: NDArray[np.float64]
    E: NDArray[np.float64]

    def __post_init__(self) -> None:
        for name in _NAMES:
            object.__setattr__(self, name, _mat(getattr(self, name), name))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParamTuple):
            return NotImplemented
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in _NAMES)

    def __hash__(self) -> int:
        return hash(tuple(getattr(self, n).tobytes() for n in _NAMES))

    @property
    def det_b(self) -> float:
        b = self.B
        return float(b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0])

    def conjugate_pair(self) -> "ParamTuple":
        """Ω' = {C, B, A, E, D}: swaps the roles of k and m."""
        return ParamTuple(self.C, self.B, self.A, self.E, self.D)

    def reflected(self) -> "ParamTuple":
        """{A, -B, C, -D, -E}: the tuple that absorbs a spatial reflection x -> -x."""
        return ParamTuple(self.A, -self.B, self.C, -self.D, -self.E)

    def dilated(self, lam: float) -> "ParamTuple":
        """Tuple whose chirps evaluated at lam*p reproduce the original chirps at p."""
        return ParamTuple(self.A / lam**2, self.B, self.C / lam**2, self.D / lam, self.E / lam)

    def linear_part(self) -> "ParamTuple":
        """Drops the quadratic chirp matrices A and C."""
        z = np.zeros((2, 2))
        return ParamTuple(z, self.B, z, self.D, self.E)

    def to_dict(self) -> dict[str, list[list[float]]]:
        return {n: getattr(self, n).tolist() for n in _NAMES}

    @classmethod
    def from_dict(cls, d: Mapping[str, ArrayLike]) -> "ParamTuple":
        missing = [n for n in _NAMES if n not in d]
        if missing:
            raise KeyError(f"missing matrices: {', '.join(missing)}")
        return cls(*(d[n] for n in _NAMES))


@dataclass(frozen=True)
class PhaseCoeffs:
    """Chirp coefficient 5-vectors: k from (A, D), m from (C, E)."""

    k: tuple[float, float, float, float, float]
    m: tuple[float, float, float, float, float]

    @property
    def equal(self) -> bool:
        return self.k == self.m


@dataclass(frozen=True, eq=False)
class ShiftGeometry:
    """Matrices entering the time- and frequency-shift covariance factors.

    ``Btilde`` holds the normalized entries b_ij / det B; ``Binv`` is the
    actual inverse of B assembled from them.
    """

    Btilde: NDArray[np.float64]
    P: NDArray[np.float64]
    Q: NDArray[np.float64]
    lambdaVec: NDArray[np.float64]

    @property
    def Binv(self) -> NDArray[np.float64]:
        bt = self.Btilde
        return np.array([[bt[1, 1], -bt[0, 1]], [-bt[0, 1], bt[0, 0]]])


def eps_det(B: ArrayLike) -> float:
    nrm = float(np.max(np.sum(np.abs(np.asarray(B, dtype=float)), axis=1)))
    return 1e-12 * max(1.0, nrm**2)


def eps_sym(B: ArrayLike) -> float:
    return 1e-12 * float(np.max(np.sum(np.abs(np.asarray(B, dtype=float)), axis=1)))


def check_b(B: ArrayLike) -> None:
    b = np.asarray(B, dtype=float)
    if abs(b[0, 1] - b[1, 0]) > eps_sym(b):
        raise AsymmetricB(f"B must be symmetric, got b12={b[0, 1]!r}, b21={b[1, 0]!r}")
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    if abs(det) <= eps_det(b):
        raise SingularB(f"B is singular (det B = {det!r})")


def validate(omega: ParamTuple) -> None:
    """Raise SingularB or AsymmetricB if Ω is not admissible."""
    check_b(omega.B)


def _coeffs(Q: NDArray[np.float64], L: NDArray[np.float64]) -> tuple[float, ...]:
    return (
        float(Q[0, 0]),
        float(Q[0, 1] + Q[1, 0]),
        float(Q[1, 1]),
        float(L[0, 0] + L[1, 0]),
        float(L[0, 1] + L[1, 1]),
    )


def derive_coeffs(omega: ParamTuple) -> PhaseCoeffs:
    return PhaseCoeffs(k=_coeffs(omega.A, omega.D), m=_coeffs(omega.C, omega.E))


def make_classical() -> ParamTuple:
    z = np.zeros((2, 2))
    return ParamTuple(z, np.eye(2), z, z, z)


def _csc_cot(theta: float) -> tuple[float, float]:
    s = np.sin(theta)
    if abs(s) <= EPS_ANG:
        raise DegenerateAngle(f"sin({theta!r}) vanishes")
    return 1.0 / s, np.cos(theta) / s


def make_gyrator(theta: float) -> ParamTuple:
    csc, cot = _csc_cot(theta)
    AC = np.array([[0.0, 0.5 * cot], [0.5 * cot, 0.0]])
    B = np.array([[0.0, -csc], [-csc, 0.0]])
    z = np.zeros((2, 2))
    return ParamTuple(AC, B, AC, z, z)


def make_fractional(theta1: float, theta2: float) -> ParamTuple:
    csc1, cot1 = _csc_cot(theta1)
    csc2, cot2 = _csc_cot(theta2)
    AC = np.diag([0.5 * cot1, 0.5 * cot2])
    B = np.diag([-csc1, -csc2])
    z = np.zeros((2, 2))
    return ParamTuple(AC, B, AC, z, z)


def make_diagonal(a: ArrayLike, b: ArrayLike, c: ArrayLike, d: ArrayLike, e: ArrayLike) -> ParamTuple:
    """Separable tuple with diagonal matrices built from 2-vectors."""
    return ParamTuple(np.diag(a), np.diag(b), np.diag(c), np.diag(d), np.diag(e))


def omega0() -> ParamTuple:
    """Parameter set of the mono- and bi-component experiments."""
    return ParamTuple(
        A=[[1.0, -5.0], [5.0, 1.0]],
        B=[[2.0, 1.0], [1.0, 4.0]],
        C=[[1.0, -13.0 / 7.0], [13.0 / 7.0, 1.0]],
        D=[[2.0, 1.0], [2.0, 5.0]],
        E=[[1.0, 2.0], [3.0, 4.0]],
    )


def omega1() -> ParamTuple:
    """Parameter set of the tri-component experiment."""
    return ParamTuple(
        A=[[1.0, -1.0 / 7.0], [1.0 / 7.0, 1.0]],
        B=[[2.0, 1.0], [1.0, 4.0]],
        C=[[1.0, -19.0 / 5.0], [19.0 / 5.0, 1.0]],
        D=[[4.0, 5.0], [0.0, 7.0]],
        E=[[2.0, 7.0], [2.0, 5.0]],
    )


def quad_matrix(c: tuple[float, ...]) -> NDArray[np.float64]:
    """Symmetric S with pᵀSp equal to the quadratic part of the chirp phase."""
    return np.array([[c[0], 0.5 * c[1]], [0.5 * c[1], c[2]]])


def shift_geometry(coeffs: PhaseCoeffs, B: ArrayLike) -> ShiftGeometry:
    b = np.asarray(B, dtype=float)
    check_b(b)
    k, m = coeffs.k, coeffs.m
    delta = b[0, 0] * b[1, 1] - b[0, 1] ** 2
    bt11, bt12, bt22 = b[0, 0] / delta, b[0, 1] / delta, b[1, 1] / delta
    Btilde = np.array([[bt11, bt12], [bt12, bt22]])
    Binv = np.array([[bt22, -bt12], [-bt12, bt11]])
    S = np.array([[m[0] + k[0], 0.5 * (m[1] + k[1])], [0.5 * (m[1] + k[1]), m[2] + k[2]]])
    P = Binv @ S
    Q = np.array([[2.0 * (k[0] - m[0]), k[1] - m[1]], [k[1] - m[1], 2.0 * (k[2] - m[2])]])
    lam = np.array([k[3] - m[3], k[4] - m[4]])
    for a in (Btilde, P, Q, lam):
        a.setflags(write=False)
    return ShiftGeometry(Btilde=Btilde, P=P, Q=Q, lambdaVec=lam)

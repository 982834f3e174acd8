"""Chirp factors and the transform kernel.

Points are pairs ``(p1, p2)``; each coordinate may be a scalar or an array,
in which case evaluation broadcasts.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from .params import ParamTuple, check_b, derive_coeffs

Point2 = tuple[float, float]


def chirp_phase(c: Sequence[float], p: Sequence[ArrayLike]):
    p1, p2 = p
    return c[0] * p1 * p1 + c[1] * p1 * p2 + c[2] * p2 * p2 + c[3] * p1 + c[4] * p2


def chirp_eval(c: Sequence[float], p: Sequence[ArrayLike]):
    """exp(i(c1 p1² + c2 p1 p2 + c3 p2² + c4 p1 + c5 p2))."""
    ph = chirp_phase(c, p)
    if np.ndim(ph) == 0:
        return cmath.exp(1j * float(ph))
    return np.exp(1j * np.asarray(ph))


def sub_coeffs(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    return tuple(x - y for x, y in zip(a, b))


def kernel_prefactor(B: ArrayLike) -> complex:
    """i·sqrt(det B)/(2π) with the principal branch of the square root."""
    b = np.asarray(B, dtype=float)
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    return 1j * cmath.sqrt(complex(det)) / (2.0 * math.pi)


def kernel_eval(omega: ParamTuple, x: Sequence[ArrayLike], w: Sequence[ArrayLike]):
    """Chirp-factorized kernel K(x, w)."""
    check_b(omega.B)
    co = derive_coeffs(omega)
    b = omega.B
    x1, x2 = x
    w1, w2 = w
    cross = x1 * (w1 * b[0, 0] + w2 * b[0, 1]) + x2 * (w1 * b[0, 1] + w2 * b[1, 1])
    lam = kernel_prefactor(b)
    if np.ndim(cross) == 0:
        return lam * chirp_eval(co.k, w) * chirp_eval(co.m, x) * cmath.exp(1j * float(cross))
    return lam * chirp_eval(co.k, w) * chirp_eval(co.m, x) * np.exp(1j * cross)

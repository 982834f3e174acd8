"""Oscillatory sums over tensor-product sample sets.

All evaluators in the library reduce to

    out[a, b] = sum_{i, j} F[i, j] * exp(i * (w1[a] * v1[i, j] + w2[b] * v2[i, j]))

with (v1, v2) = B @ (s1[i], s2[j]). Because v is linear in the separable
sample coordinates, each exponential splits into four 1D tables, so only
matrix products remain. Row chunks are summed in a fixed order, which keeps
results deterministic.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

_CHUNK_ELEMS = 1 << 22


def bilinear_phase_sum(
    F: NDArray[np.complex128],
    s1: NDArray[np.float64],
    s2: NDArray[np.float64],
    B: NDArray[np.float64],
    w1: NDArray[np.float64],
    w2: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """out[a, b] = Σ_ij F[i,j]·exp(i (w1[a], w2[b]) · B (s1[i], s2[j]))."""
    F = np.asarray(F, dtype=np.complex128)
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    w1 = np.atleast_1d(np.asarray(w1, dtype=np.float64))
    w2 = np.atleast_1d(np.asarray(w2, dtype=np.float64))
    na, nb = w1.size, w2.size
    d1, d2 = F.shape
    out = np.zeros((na, nb), dtype=np.complex128)
    if d1 == 0 or d2 == 0:
        return out
    b11, b12 = float(B[0, 0]), float(B[0, 1])
    b21, b22 = float(B[1, 0]), float(B[1, 1])
    if na == 1 and nb == 1:
        e1 = np.exp(1j * (w1[0] * (b11 * s1) + w2[0] * (b21 * s1)))
        e2 = np.exp(1j * (w1[0] * (b12 * s2) + w2[0] * (b22 * s2)))
        out[0, 0] = e1 @ F @ e2
        return out
    t11 = np.exp(1j * np.multiply.outer(w1, b11 * s1))
    t12 = np.exp(1j * np.multiply.outer(w1, b12 * s2))
    t21 = np.exp(1j * np.multiply.outer(w2, b21 * s1))
    t22 = np.exp(1j * np.multiply.outer(w2, b22 * s2))
    rows = max(1, _CHUNK_ELEMS // max(1, d2 * max(na, nb)))
    for r0 in range(0, d1, rows):
        r1 = min(d1, r0 + rows)
        e1 = t11[:, r0:r1, None] * t12[:, None, :]
        e1 *= F[None, r0:r1, :]
        e2 = t21[:, r0:r1, None] * t22[:, None, :]
        n = (r1 - r0) * d2
        out += e1.reshape(na, n) @ e2.reshape(nb, n).T
    return out

"""Vectorised exact spectral counts for many small graphs at once.

Characteristic polynomials of signless Laplacians are computed with
Faddeev-LeVerrier over stacked int64 matrices.  To count eigenvalues above
an integer threshold t, the polynomial is Taylor-shifted to p(x + t): the
number of trailing zero coefficients is the multiplicity of t, and because
a characteristic polynomial of a symmetric matrix has only real roots,
Descartes' sign rule on the remaining coefficients is exact.

Everything stays in int64; for n <= 8 every intermediate value is far
below 2**62, and a float shadow guards the shift step anyway.
"""

from __future__ import annotations

import numpy as np

from .graph_core import pair_order

BATCH_MAX_N = 8


def adjacency_from_masks(masks: np.ndarray, n: int) -> np.ndarray:
    """(B,) edge masks in graph6 pair order -> (B, n, n) int64 adjacency."""
    if n > BATCH_MAX_N:
        raise ValueError(f"batch engine supports n <= {BATCH_MAX_N}")
    masks = np.asarray(masks, dtype=np.int64)
    adj = np.zeros((len(masks), n, n), dtype=np.int64)
    for k, (u, v) in enumerate(pair_order(n)):
        bit = (masks >> k) & 1
        adj[:, u, v] = bit
        adj[:, v, u] = bit
    return adj


def q_matrices(adj: np.ndarray) -> np.ndarray:
    q = adj.copy()
    deg = adj.sum(axis=2)
    idx = np.arange(adj.shape[1])
    q[:, idx, idx] = deg
    return q


def char_polys(mats: np.ndarray) -> np.ndarray:
    """(B, n, n) int64 -> (B, n+1) coefficients c_0..c_n of det(xI - M)."""
    b, n, _ = mats.shape
    if n > BATCH_MAX_N:
        raise ValueError(f"batch engine supports n <= {BATCH_MAX_N}")
    coeffs = np.zeros((b, n + 1), dtype=np.int64)
    coeffs[:, n] = 1
    eye = np.eye(n, dtype=np.int64)
    mk = np.broadcast_to(eye, (b, n, n)).copy()
    for k in range(1, n + 1):
        if k > 1:
            mk = mats @ mk + coeffs[:, n - k + 1, None, None] * eye
        am = mats @ mk
        tr = np.trace(am, axis1=1, axis2=2)
        if np.any(tr % k):
            raise ArithmeticError("Faddeev-LeVerrier trace not divisible; overflow?")
        coeffs[:, n - k] = -tr // k
    return coeffs


def taylor_shift(coeffs: np.ndarray, t) -> np.ndarray:
    """Coefficients of p(x + t) for each row; t is a scalar or (B,) array."""
    c = coeffs.copy()
    t = np.broadcast_to(np.asarray(t, dtype=np.int64), (c.shape[0],))
    shadow = c.astype(np.float64)
    tf = t.astype(np.float64)
    d = c.shape[1] - 1
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            c[:, j] += t * c[:, j + 1]
            shadow[:, j] += tf * shadow[:, j + 1]
    if np.any(np.abs(shadow) > 2.0 ** 60):
        raise OverflowError("Taylor shift left the int64-safe range")
    return c


def counts_at(coeffs: np.ndarray, t) -> tuple[np.ndarray, np.ndarray]:
    """Per row: (roots strictly above t, multiplicity of t), with multiplicity."""
    c = taylor_shift(coeffs, t)
    b, width = c.shape
    mult = np.zeros(b, dtype=np.int64)
    leading = np.ones(b, dtype=bool)
    for j in range(width):
        leading &= c[:, j] == 0
        mult += leading
    last = np.zeros(b, dtype=np.int64)
    changes = np.zeros(b, dtype=np.int64)
    for j in range(width):
        s = np.sign(c[:, j])
        flip = (s != 0) & (last != 0) & (s != last)
        changes += flip
        last = np.where(s != 0, s, last)
    return changes, mult


class SpectralBatch:
    """Exact Q-spectrum counts for a block of same-order graphs."""

    def __init__(self, n: int, masks):
        self.n = n
        self.masks = np.asarray(masks, dtype=np.int64)
        adj = adjacency_from_masks(self.masks, n)
        self.degrees = adj.sum(axis=2)
        self.coeffs = char_polys(q_matrices(adj))

    def counts(self, t) -> tuple[np.ndarray, np.ndarray]:
        return counts_at(self.coeffs, t)

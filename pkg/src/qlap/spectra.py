"""Floating-point spectra, the Q quadratic form, and Weyl inequality checks.

Floats only ever serve as estimates here.  Whenever the eigenvalues entering
a Weyl inequality can be pinned down as integers they are confirmed exactly
(Sturm count plus rank), and equality is only ever declared in that exact
case, together with a common eigenvector verified in integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import exact_linalg as xl
from .graph_core import Graph

MAX_SWEEPS = 100
CONV_TOL = 1e-12
NUMERIC_TOL = 1e-9


class EigenConvergenceError(RuntimeError):
    def __init__(self, msg: str, residual: float):
        super().__init__(f"{msg} (off-diagonal norm {residual:.3e})")
        self.residual = residual


class NumericEqualityUndecidable(ValueError):
    """Float gap below tolerance with non-integer eigenvalues involved."""

    def __init__(self, verdict: WeylVerdict):
        super().__init__(
            f"numeric equality undecidable for {verdict.side}: "
            f"lhs={verdict.lhs!r} rhs={verdict.rhs!r}")
        self.verdict = verdict


@dataclass(frozen=True)
class SpectrumReport:
    values: np.ndarray
    vectors: np.ndarray
    residual: float
    sweeps: int


def sym_eigen(m) -> SpectrumReport:
    """Cyclic Jacobi rotations; eigenpairs sorted by decreasing eigenvalue.

    The rotations run on plain Python lists: at the orders used here (n <= 16)
    that beats per-rotation numpy calls several times over.
    """
    m0 = np.array(m, dtype=np.float64)
    n = m0.shape[0] if m0.ndim == 2 else -1
    if m0.shape != (n, n) or not np.allclose(m0, m0.T):
        raise ValueError("sym_eigen needs a square symmetric matrix")
    a = m0.tolist()
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    norm = float(np.linalg.norm(m0))
    sweeps = 0
    while True:
        off = math.sqrt(2.0 * sum(a[i][j] ** 2 for i in range(n) for j in range(i)))
        if off <= CONV_TOL * norm or norm == 0.0:
            break
        if sweeps == MAX_SWEEPS:
            raise EigenConvergenceError("Jacobi did not converge in 100 sweeps", off)
        sweeps += 1
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                if apq == 0.0:
                    continue
                row_q = a[q]
                theta = (row_q[q] - row_p[p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                for k in range(n):
                    x, y = row_p[k], row_q[k]
                    row_p[k] = c * x - s * y
                    row_q[k] = s * x + c * y
                for rows in (a, v):
                    for row in rows:
                        x, y = row[p], row[q]
                        row[p] = c * x - s * y
                        row[q] = s * x + c * y
                row_p[q] = row_q[p] = 0.0
    vals = np.array([a[i][i] for i in range(n)])
    vecs = np.array(v).reshape(n, n)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    resid = float(np.max(np.linalg.norm(m0 @ vecs - vecs * vals, axis=0))) if n else 0.0
    return SpectrumReport(vals, vecs, resid, sweeps)


@lru_cache(maxsize=4096)
def _eigen_cached(m: xl.IntMatrix) -> SpectrumReport:
    return sym_eigen(m)


def q_spectrum(g: Graph) -> SpectrumReport:
    return _eigen_cached(xl.q_matrix(g))


def quadratic_form_q(g: Graph, x: Sequence) -> float | Fraction | int:
    """Sum over edges of (x_u + x_v)^2, cross-checked against x^T Q x."""
    if len(x) != g.n:
        raise ValueError(f"vector length {len(x)} does not match n={g.n}")
    total = sum((x[u] + x[v]) ** 2 for u, v in g.edges())
    q = xl.q_matrix(g)
    direct = sum(x[i] * q[i][j] * x[j] for i in range(g.n) for j in range(g.n))
    if all(isinstance(c, (int, Fraction)) for c in x):
        assert total == direct
    else:
        assert abs(total - direct) <= 1e-10 * max(1.0, abs(direct))
    return total


# ---------------------------------------------------------------- Weyl

@dataclass
class WeylVerdict:
    side: str                    # "Wein1" (<=) or "Wein2" (>=)
    i: int
    j: int
    k: int                       # index into the spectrum of A+B
    lhs: Fraction | float
    rhs: Fraction | float
    holds: bool
    equality: bool | None
    exact: bool
    certificate: tuple[int, ...] | None = None
    notes: list[str] = field(default_factory=list)


def _indexed_eigenvalue(m: xl.IntMatrix, idx: int) -> tuple[int | float, bool]:
    """The idx-th largest eigenvalue, as an exact int when it is one."""
    est = float(_eigen_cached(m).values[idx - 1])
    lam = round(est)
    if abs(est - lam) < 1e-6:
        above = xl.count_roots_above(xl.char_poly(m), lam)
        if above < idx <= above + xl.int_eigen_multiplicity(m, lam):
            return lam, True
    return est, False


def _common_eigenvector(a, b, la: int, lb: int, c) -> tuple[int, ...] | None:
    stacked = list(xl.shift(a, la)) + list(xl.shift(b, lb))
    basis = xl.kernel_basis(stacked)
    if not basis:
        return None
    v = basis[0]
    cv = xl.mat_vec(c, v)
    assert all(x == (la + lb) * y for x, y in zip(cv, v))
    return v


def weyl_check(a, b, i: int, j: int) -> tuple[WeylVerdict, ...]:
    """Evaluate the Weyl inequalities selected by (i, j) for A, B and A+B.

    i + j >= n+1 gives lambda_i(A) + lambda_j(B) <= lambda_{i+j-n}(A+B);
    i + j <= n+1 gives lambda_i(A) + lambda_j(B) >= lambda_{i+j-1}(A+B);
    both are returned when i + j = n+1.  Raises NumericEqualityUndecidable
    (carrying the partial verdict) when a float gap is too small to call and
    the eigenvalues are not integers.
    """
    a, b = xl.as_matrix(a), xl.as_matrix(b)
    n = len(a)
    if len(b) != n:
        raise ValueError("A and B must have the same order")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices must lie in 1..{n}, got i={i}, j={j}")
    c = xl.mat_add(a, b)
    la, ea = _indexed_eigenvalue(a, i)
    lb, eb = _indexed_eigenvalue(b, j)
    out = []
    sides = []
    if i + j >= n + 1:
        sides.append(("Wein1", i + j - n))
    if i + j <= n + 1:
        sides.append(("Wein2", i + j - 1))
    for side, k in sides:
        lc, ec = _indexed_eigenvalue(c, k)
        sign = 1 if side == "Wein1" else -1
        if ea and eb and ec:
            lhs, rhs = Fraction(la + lb), Fraction(lc)
            holds = sign * (rhs - lhs) >= 0
            eq = lhs == rhs
            verdict = WeylVerdict(side, i, j, k, lhs, rhs, holds, eq, True)
            if eq:
                verdict.certificate = _common_eigenvector(a, b, la, lb, c)
                if verdict.certificate is None:
                    verdict.notes.append("equality without a common eigenvector")
        else:
            lhs, rhs = float(la) + float(lb), float(lc)
            gap = sign * (rhs - lhs)
            verdict = WeylVerdict(side, i, j, k, lhs, rhs, gap >= -NUMERIC_TOL, False, False,
                                  notes=["numeric"])
            if abs(gap) < NUMERIC_TOL:
                verdict.equality = None
                raise NumericEqualityUndecidable(verdict)
        out.append(verdict)
    return tuple(out)

"""Exact integer and rational linear algebra for small dense matrices.

Matrices are tuples of row tuples of Python ints so they can be hashed and
memoised.  Rank and determinants use Bareiss fraction-free elimination,
characteristic polynomials use Faddeev-LeVerrier, and root counting uses
Sturm sequences on the square-free factors of the polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .graph_core import Graph

IntMatrix = tuple[tuple[int, ...], ...]
RationalVector = tuple[Fraction, ...]

MAX_CHARPOLY_N = 16


class DimensionError(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if any(len(r) != len(m) for r in m):
        raise DimensionError("matrix must be square")
    return m


def identity(n: int, scale: int = 1) -> IntMatrix:
    return tuple(tuple(scale if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def shift(m: IntMatrix, lam: int) -> IntMatrix:
    """m - lam*I"""
    return tuple(tuple(x - lam if i == j else x for j, x in enumerate(r)) for i, r in enumerate(m))


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(r, v)) for r in m)


def trace(m: IntMatrix) -> int:
    return sum(m[i][i] for i in range(len(m)))


def q_matrix(g: Graph) -> IntMatrix:
    degs = g.degrees()
    return tuple(
        tuple(degs[u] if u == v else (r >> v) & 1 for v in range(g.n))
        for u, r in enumerate(g.rows))


def a_matrix(g: Graph) -> IntMatrix:
    return tuple(tuple((r >> v) & 1 for v in range(g.n)) for r in g.rows)


# ---------------------------------------------------------------- elimination

def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """In-place Bareiss elimination; returns (rank, sign-corrected last pivot)."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, nr):
            ri = rows[i]
            f = ri[c]
            for j in range(c + 1, nc):
                ri[j] = (p * ri[j] - f * rows[r][j]) // prev
            ri[c] = 0
        prev = p
        r += 1
        if r == nr:
            break
    return r, sign * prev


@lru_cache(maxsize=65536)
def rank(m: IntMatrix) -> int:
    if not m:
        return 0
    return _bareiss([list(r) for r in m])[0]


def determinant(m: IntMatrix) -> int:
    n = len(m)
    if n == 0:
        return 1
    r, last = _bareiss([list(row) for row in m])
    return last if r == n else 0


def _normalize_int(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel_basis(m: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Null-space basis of a (possibly non-square) integer matrix.

    Vectors are integral with content 1 and a positive first nonzero entry;
    each one is checked against ``m`` exactly before it is returned.
    """
    rows = [[Fraction(x) for x in r] for r in m]
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        iv = _normalize_int(v)
        assert all(x == 0 for x in mat_vec(m, iv)), "kernel vector failed exact check"
        basis.append(iv)
    return basis


def int_eigen_multiplicity(m: IntMatrix, lam: int) -> int:
    """Geometric multiplicity n - rank(m - lam*I); algebraic for symmetric m."""
    return len(m) - rank(shift(m, lam))


# ---------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with coefficients c_0..c_d (lowest degree first)."""
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c or (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs != (0,) else -1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    @classmethod
    def linear_root(cls, r: int) -> IntPolynomial:
        return cls((-r, 1))

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def factored(self) -> str:
        """Pull out integer roots as (x - r)^k and print the leftover factor."""
        rest = [Fraction(c) for c in self.coeffs]
        parts = []
        found = []
        bound = root_bound(self)
        for r in range(-bound, bound + 1):
            k = 0
            while len(rest) > 1 and _peval(rest, r) == 0:
                rest, _ = _pdivmod(rest, [Fraction(-r), Fraction(1)])
                k += 1
            if k:
                found.append((r, k))
        for r, k in sorted(found, key=lambda rk: -rk[0]):
            base = "x" if r == 0 else f"(x {'-' if r > 0 else '+'} {abs(r)})"
            parts.append(base + (f"^{k}" if k > 1 else ""))
        if len(rest) > 1 or rest[0] != 1 or not parts:
            parts.append(f"({format_poly(tuple(int(c) for c in rest))})")
        return " ".join(parts)


def format_poly(coeffs: Sequence[int]) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + ("x" if k == 1 else f"x^{k}")
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("- " if c < 0 else "+ ") + body)
    return " ".join(terms) if terms else "0"


@lru_cache(maxsize=65536)
def char_poly(m: IntMatrix) -> IntPolynomial:
    """det(xI - m) by Faddeev-LeVerrier in exact integers."""
    n = len(m)
    if n > MAX_CHARPOLY_N:
        raise DimensionError(f"char_poly supports n <= {MAX_CHARPOLY_N}, got {n}")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        c_prev = coeffs[n - k + 1]
        prod = [[sum(a * b for a, b in zip(row, col)) for col in zip(*mk)] for row in m] \
            if k > 1 else [[0] * n for _ in range(n)]
        for i in range(n):
            prod[i][i] += c_prev
        mk = prod
        # c_{n-k} = -tr(A M_k) / k
        tr = sum(sum(m[i][j] * mk[j][i] for j in range(n)) for i in range(n))
        q, rem = divmod(-tr, k)
        assert rem == 0
        coeffs[n - k] = q
    return IntPolynomial(tuple(coeffs))


# Fraction polynomial helpers, lowest degree first.

def _ptrim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pdivmod(a, b):
    a = [Fraction(x) for x in a]
    b = _ptrim(b)
    if len(a) < len(b):
        return [Fraction(0)], _ptrim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] / lead
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return _ptrim(q), _ptrim(a[:len(b) - 1] or [Fraction(0)])


def _pderiv(p):
    return _ptrim([k * p[k] for k in range(1, len(p))] or [Fraction(0)])


def _is_zero(p):
    return len(p) == 1 and p[0] == 0


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while not _is_zero(b):
        a, b = b, _pdivmod(a, b)[1]
    return [x / a[-1] for x in a]


def _squarefree_factors(p) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: p = lc * prod f_k^k with f_k square-free and coprime."""
    p = [Fraction(x) for x in _ptrim(p)]
    out = []
    if len(p) <= 1:
        return out
    dp = _pderiv(p)
    a = _pgcd(p, dp)
    b = _pdivmod(p, a)[0]
    c = _pdivmod(dp, a)[0]
    d = [x - y for x, y in _zip_pad(c, _pderiv(b))]
    k = 1
    while len(b) > 1:
        a = _pgcd(b, _ptrim(d))
        if len(a) > 1:
            out.append((a, k))
        b = _pdivmod(b, a)[0]
        c = _pdivmod(_ptrim(d), a)[0]
        d = [x - y for x, y in _zip_pad(c, _pderiv(b))]
        k += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _sturm_chain(f):
    chain = [f, _pderiv(f)]
    while len(chain[-1]) > 1:
        r = _pdivmod(chain[-2], chain[-1])[1]
        if _is_zero(r):
            break
        chain.append([-x for x in r])
    return chain


def _variations(signs) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@lru_cache(maxsize=65536)
def _sturm_data(p: IntPolynomial):
    return [(_sturm_chain(f), k) for f, k in _squarefree_factors(p.coeffs)]


def count_roots_above(p: IntPolynomial, t) -> int:
    """Real roots strictly greater than t, counted with multiplicity.

    Exact for any real-rooted integer polynomial; t may be an int or Fraction.
    """
    t = Fraction(t)
    total = 0
    for chain, k in _sturm_data(p):
        at_t = _variations(_sign(_peval(f, t)) for f in chain)
        at_inf = _variations(_sign(f[-1]) for f in chain)
        total += k * (at_t - at_inf)
    return total


def root_multiplicity(p: IntPolynomial, t) -> int:
    """Multiplicity of t as a root of p, by repeated exact division."""
    t = Fraction(t)
    rest = [Fraction(c) for c in p.coeffs]
    k = 0
    while len(rest) > 1 and _peval(rest, t) == 0:
        rest = _pdivmod(rest, [-t, Fraction(1)])[0]
        k += 1
    return k


def root_bound(p: IntPolynomial) -> int:
    """B with every real root in [-B, B], assuming p monic and real-rooted.

    Uses sum of squared roots = c_{d-1}^2 - 2 c_{d-2}; falls back to the
    Cauchy bound when that identity is unavailable.
    """
    c = p.coeffs
    if p.degree >= 2 and p.is_monic:
        s2 = c[-2] ** 2 - 2 * c[-3]
        if s2 >= 0:
            return math.isqrt(s2) + 1
    lead = abs(c[-1]) or 1
    return 1 + max((abs(x) for x in c[:-1]), default=0) // lead + 1

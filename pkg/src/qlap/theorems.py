"""Structural and spectral sides of the q_k(G) = n-2 and q_2(G) >= delta(G) results.

Every spectral decision is exact: counts of Q-eigenvalues above a threshold
come from Sturm sequences, multiplicities from ranks.  Callers that already
hold exact counts (the batch engine) can pass them in instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import exact_linalg as xl
from .graph_core import (
    Graph, K1t, bipartite_profile, complement, construct_family, degree_stats,
    is_complete_multipartite,
)


class TheoremInputError(ValueError):
    pass


class NoCertificateError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralIndexCount:
    a: int   # eigenvalues strictly above n-2
    m: int   # multiplicity of n-2

    @property
    def m2(self) -> int:
        """Number of indices i >= 2 with q_i = n-2."""
        return max(0, self.a + self.m - max(self.a, 1))


class EqualityClass(enum.Enum):
    STAR = "Star"
    COMPLETE_REGULAR_MULTIPARTITE = "CompleteRegularMultipartite"
    K133 = "K133"
    ONES_AND_TWOS = "OnesAndTwos"
    NOT_EQUALITY = "NotEquality"
    PAPER_EXCEPTION = "PaperException"


LISTED_CLASSES = frozenset({
    EqualityClass.STAR, EqualityClass.COMPLETE_REGULAR_MULTIPARTITE,
    EqualityClass.K133, EqualityClass.ONES_AND_TWOS,
})


@dataclass
class TheoremVerdict:
    theorem: str
    structural: bool
    spectral: bool
    agree: bool
    certificates: list[tuple[int, ...]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    exception: bool = False
    equality_class: EqualityClass | None = None
    detail: dict = field(default_factory=dict)


def _need_order(g: Graph) -> None:
    if g.n < 2:
        raise TheoremInputError("graph must have at least 2 vertices")


def spectral_index_count(g: Graph) -> SpectralIndexCount:
    _need_order(g)
    q = xl.q_matrix(g)
    return SpectralIndexCount(
        xl.count_roots_above(xl.char_poly(q), g.n - 2),
        xl.int_eigen_multiplicity(q, g.n - 2))


def structural_m2(g: Graph) -> int:
    _need_order(g)
    prof = bipartite_profile(complement(g))
    return max(prof.bb, prof.b - 1, 0)


# ---------------------------------------------------------------- certificates

def certificate_vectors(g: Graph) -> list[tuple[int, ...]]:
    """Integer vectors y with Q(G) y = (n-2) y built from the complement's bipartite parts.

    Each vector is a_i on U_i, -a_i on W_i and 0 off the bipartite components,
    where a ranges over a basis of {a : sum p_i a_i = 0}.  When every
    bipartite component is balanced that basis is the standard one and the
    vectors are plain +-1 indicators.
    """
    _need_order(g)
    comps = bipartite_profile(complement(g)).bipartite_components
    p = [c.p for c in comps]
    want = max(sum(x == 0 for x in p), len(p) - 1, 0)
    if want == 0:
        raise NoCertificateError("complement has no qualifying bipartite components")
    pivot = next((i for i, x in enumerate(p) if x != 0), None)
    weights = []
    for i in range(len(p)):
        if i == pivot:
            continue
        a = [0] * len(p)
        if pivot is None:
            a[i] = 1
        else:
            a[i] = p[pivot]
            a[pivot] = -p[i]
        weights.append(a)
    vectors = []
    for a in weights:
        y = [0] * g.n
        for comp, ai in zip(comps, a):
            u, w = comp.classes
            for v in u:
                y[v] = ai
            for v in w:
                y[v] = -ai
        vectors.append(_primitive(y))
    assert len(vectors) == want
    q = xl.q_matrix(g)
    for y in vectors:
        assert xl.mat_vec(q, y) == tuple((g.n - 2) * x for x in y)
    return vectors


def _primitive(y: list[int]) -> tuple[int, ...]:
    d = math.gcd(*y)
    y = [x // d for x in y]
    if next(x for x in y if x) < 0:
        y = [-x for x in y]
    return tuple(y)


def verify_certificates(g: Graph, vectors) -> list[str]:
    """Problems found with a certificate family; empty when all is well."""
    problems = []
    q = xl.q_matrix(g)
    for y in vectors:
        if not any(y):
            problems.append("zero certificate vector")
        elif xl.mat_vec(q, y) != tuple((g.n - 2) * x for x in y):
            problems.append(f"Q y != (n-2) y for y={y}")
    if vectors and len(xl.kernel_basis(vectors)) != g.n - len(vectors):
        problems.append("certificate vectors are linearly dependent")
    return problems


# ---------------------------------------------------------------- Theorems 1 and 2

def check_th1(g: Graph, sic: SpectralIndexCount | None = None,
              with_certificates: bool = True) -> TheoremVerdict:
    _need_order(g)
    prof = bipartite_profile(complement(g))
    sic = sic or spectral_index_count(g)
    structural = prof.bb >= 1 or prof.b >= 2
    spectral = sic.m2 >= 1
    v = TheoremVerdict("th1", structural, spectral, structural == spectral,
                       detail={"b": prof.b, "bb": prof.bb, "a": sic.a, "m": sic.m})
    if structural and with_certificates:
        v.certificates = certificate_vectors(g)
        want = max(prof.bb, prof.b - 1)
        problems = verify_certificates(g, v.certificates)
        if len(v.certificates) != want:
            problems.append(f"expected {want} certificates, got {len(v.certificates)}")
        if problems:
            v.notes.extend(problems)
            v.agree = False
    return v


def check_th2(g: Graph, k: int, sic: SpectralIndexCount | None = None) -> TheoremVerdict:
    _need_order(g)
    if not 1 <= k < g.n:
        raise TheoremInputError(f"k must satisfy 1 <= k < n={g.n}, got {k}")
    prof = bipartite_profile(complement(g))
    sic = sic or spectral_index_count(g)
    structural = prof.bb >= k or prof.b >= k + 1
    spectral = sic.a <= k and sic.a + sic.m >= k + 1
    return TheoremVerdict(f"th2({k})", structural, spectral, structural == spectral,
                          detail={"b": prof.b, "bb": prof.bb, "a": sic.a, "m": sic.m})


def check_m2_identity(g: Graph, sic: SpectralIndexCount | None = None) -> TheoremVerdict:
    """All k at once: spectral m2 must equal max(bb, b-1, 0) of the complement."""
    sic = sic or spectral_index_count(g)
    s = structural_m2(g)
    return TheoremVerdict("th2", s >= 1, sic.m2 >= 1, s == sic.m2,
                          detail={"structural_m2": s, "spectral_m2": sic.m2,
                                  "a": sic.a, "m": sic.m})


# ---------------------------------------------------------------- Theorem 3

def classify_equality_graph(g: Graph) -> EqualityClass:
    if degree_stats(g).delta == 0:
        return EqualityClass.PAPER_EXCEPTION
    part = is_complete_multipartite(g)
    if part is None:
        return EqualityClass.NOT_EQUALITY
    parts = part.parts
    if len(parts) == 2 and parts[0] == 1 and parts[1] >= 2:
        return EqualityClass.STAR
    if len(parts) >= 2 and len(set(parts)) == 1:
        return EqualityClass.COMPLETE_REGULAR_MULTIPARTITE
    if parts == (1, 3, 3):
        return EqualityClass.K133
    if set(parts) <= {1, 2} and 2 in parts:
        return EqualityClass.ONES_AND_TWOS
    return EqualityClass.NOT_EQUALITY


def check_th3(g: Graph, above: int | None = None, mult: int | None = None) -> TheoremVerdict:
    """Decide q_2 against delta exactly and classify equality graphs.

    ``above``/``mult`` are the exact number of Q-eigenvalues above delta and
    the multiplicity of delta, when the caller already has them.
    """
    _need_order(g)
    if g.edge_count() == g.n * (g.n - 1) // 2:
        raise TheoremInputError("complete graphs are outside the scope of q_2 >= delta")
    delta = degree_stats(g).delta
    if above is None or mult is None:
        q = xl.q_matrix(g)
        above = xl.count_roots_above(xl.char_poly(q), delta)
        mult = xl.int_eigen_multiplicity(q, delta)
    if above >= 2:
        relation = "strict"
    elif above + mult >= 2:
        relation = "equality"
    else:
        relation = "below"
    cls = classify_equality_graph(g)
    listed = cls in LISTED_CLASSES
    spectral = relation == "equality"
    v = TheoremVerdict("th3", listed, spectral, relation != "below" and listed == spectral,
                       equality_class=cls if spectral else EqualityClass.NOT_EQUALITY,
                       detail={"delta": delta, "above": above, "mult": mult,
                               "relation": relation, "class": cls.value})
    if relation == "below":
        v.notes.append("q_2 < delta")
    elif spectral and cls is EqualityClass.PAPER_EXCEPTION:
        v.exception = True
        v.agree = True
        v.notes.append("delta = 0 equality graph not in the listed families")
    return v


# ---------------------------------------------------------------- K_{1,t,...,t}

def _k1t_check(t: int, r: int) -> None:
    if t < 2 or r < 2:
        raise TheoremInputError(f"K1t needs t >= 2 and r >= 2, got t={t}, r={r}")


def k1t_charpoly(t: int, r: int) -> xl.IntPolynomial:
    """Closed-form Q characteristic polynomial of K_{1,t,...,t} (r parts of size t)."""
    _k1t_check(t, r)
    lin1 = xl.IntPolynomial.linear_root(t * r - t + 1) ** (r * (t - 1))
    lin2 = xl.IntPolynomial.linear_root(t * r - 2 * t + 1) ** (r - 1)
    quad = xl.IntPolynomial((2 * t * t * r * (r - 1), -(3 * t * r - 2 * t + 1), 1))
    return lin1 * lin2 * quad


@dataclass(frozen=True)
class K1tRoots:
    q1: float
    q2: float
    q2_is_delta: bool


def k1t_q1_q2(t: int, r: int) -> K1tRoots:
    _k1t_check(t, r)
    disc = t * t * (r - 2) ** 2 + 2 * t * (3 * r - 2) + 1
    s = 3 * t * r - 2 * t + 1
    q1 = (s + math.sqrt(disc)) / 2
    # t <= 2 + 1/(r-1)  <=>  (t-2)(r-1) <= 1
    small = (t - 2) * (r - 1) <= 1
    q2 = float(t * r - t + 1) if small else (s - math.sqrt(disc)) / 2
    return K1tRoots(q1, q2, small)


def k1t_graph(t: int, r: int) -> Graph:
    _k1t_check(t, r)
    return construct_family(K1t(t, r))


# ---------------------------------------------------------------- Das bounds

def q2_at_least(g: Graph, x) -> bool:
    """Exact test q_2(G) >= x for rational x."""
    p = xl.char_poly(xl.q_matrix(g))
    x = Fraction(x)
    return xl.count_roots_above(p, x) + xl.root_multiplicity(p, x) >= 2


def das_lower_bounds(g: Graph) -> tuple[bool, bool]:
    _need_order(g)
    ds = degree_stats(g)
    return q2_at_least(g, ds.dbar - 1), q2_at_least(g, ds.Delta2 - 1)

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlap import exact_linalg as xl
from qlap.batch import SpectralBatch
from qlap.graph_core import (
    Complete, CompleteMultipartite, Cycle, DisjointUnion, Empty, Graph, Path, Star, complement,
    construct_family,
)
from qlap.spectra import (
    EigenConvergenceError, NumericEqualityUndecidable, q_spectrum, quadratic_form_q, sym_eigen,
    weyl_check,
)

from conftest import all_labeled, random_graph

fam = construct_family
P4 = fam(Path(4))


def close(values, expect, tol=1e-9):
    return np.allclose(values, expect, atol=tol, rtol=0)


# ---------------------------------------------------------------- eigensolver

def test_sym_eigen_examples():
    assert close(sym_eigen(xl.q_matrix(fam(Complete(4)))).values, [6, 2, 2, 2])
    assert close(sym_eigen(((0,) * 3,) * 3).values, [0, 0, 0])
    r2 = math.sqrt(2)
    assert close(sym_eigen(xl.q_matrix(P4)).values, [2 + r2, 2, 2 - r2, 0])


def test_q_spectrum_examples():
    two_k3 = fam(DisjointUnion((Complete(3), Complete(3))))
    assert close(q_spectrum(two_k3).values, [4, 4, 1, 1, 1, 1])
    assert close(q_spectrum(fam(Star(4))).values, [4, 1, 1, 0])
    assert close(q_spectrum(fam(CompleteMultipartite((2, 2, 2)))).values, [8, 4, 4, 4, 2, 2])


def test_sym_eigen_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        sym_eigen([[0, 1], [0, 0]])


def test_convergence_error_carries_residual():
    err = EigenConvergenceError("did not converge", 0.5)
    assert err.residual == 0.5 and "5.000e-01" in str(err)


def test_jacobi_matches_lapack(rng):
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 10), rng.random())
        q = np.array(xl.q_matrix(g), dtype=float)
        rep = q_spectrum(g)
        assert close(rep.values, np.sort(np.linalg.eigvalsh(q))[::-1])
        assert list(rep.values) == sorted(rep.values, reverse=True)
        assert rep.residual <= 1e-8 * (1 + np.linalg.norm(q))
        assert np.allclose(rep.vectors.T @ rep.vectors, np.eye(g.n), atol=1e-8)


@settings(max_examples=50)
@given(st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.floats(-10, 10), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_jacobi_on_real_symmetric(rows):
    m = np.array(rows)
    m = (m + m.T) / 2
    rep = sym_eigen(m)
    norm = np.linalg.norm(m)
    assert np.allclose(rep.values, np.sort(np.linalg.eigvalsh(m))[::-1], atol=1e-9 * (1 + norm))
    assert rep.residual <= 1e-8 * (1 + norm)


def test_float_counts_agree_with_sturm_counts():
    for n in range(1, 6):
        for g in all_labeled(n):
            vals = q_spectrum(g).values
            p = xl.char_poly(xl.q_matrix(g))
            for t in range(0, 2 * n - 1):
                assert int(np.sum(vals > t + 1e-9)) == xl.count_roots_above(p, t)


def test_float_counts_agree_with_exact_counts_n6():
    # exact counts from the batch engine, which is itself checked against Sturm counts
    n = 6
    masks = np.arange(1 << 15)
    sb = SpectralBatch(n, masks)
    floats = np.array([q_spectrum(Graph.from_mask(n, int(m))).values for m in masks])
    for t in range(0, 2 * n - 1):
        above, _ = sb.counts(t)
        assert np.array_equal(np.sum(floats > t + 1e-9, axis=1), above)


def test_second_eigenvalue_at_most_n_minus_2(rng):
    for _ in range(500):
        g = random_graph(rng, rng.randint(2, 9), rng.random())
        assert q_spectrum(g).values[1] <= g.n - 2 + 1e-9


# ---------------------------------------------------------------- quadratic form

def test_quadratic_form_examples():
    assert quadratic_form_q(P4, (1, 1, -1, -1)) == 8
    assert quadratic_form_q(P4, (0, 0, 0, 0)) == 0
    assert quadratic_form_q(complement(P4), (1, 1, -1, -1)) == 0
    with pytest.raises(ValueError):
        quadratic_form_q(P4, (1, 2))


def test_quadratic_form_rationals():
    assert quadratic_form_q(fam(Complete(2)), (Fraction(1, 2), Fraction(1, 3))) == Fraction(25, 36)


@settings(max_examples=100)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.integers(0, (1 << (n * (n - 1) // 2)) - 1).map(lambda m: Graph.from_mask(n, m)),
    st.lists(st.floats(-100, 100), min_size=n, max_size=n))))
def test_quadratic_form_is_nonnegative(case):
    g, x = case
    assert quadratic_form_q(g, x) >= 0


# ---------------------------------------------------------------- Weyl

def pair(g):
    return xl.q_matrix(g), xl.q_matrix(complement(g))


def test_weyl_path_complement():
    (v,) = weyl_check(*pair(P4), 2, 4)
    assert v.side == "Wein1" and v.k == 2
    assert v.exact and v.holds and v.equality
    assert (v.lhs, v.rhs) == (2, 2)
    assert v.certificate == (1, 1, -1, -1)


def test_weyl_identity_matrices():
    eye = xl.identity(3)
    (v,) = weyl_check(eye, eye, 2, 3)
    assert v.side == "Wein1" and v.equality and v.certificate is not None
    assert xl.mat_vec(xl.identity(3, 2), v.certificate) == tuple(2 * c for c in v.certificate)


def test_weyl_triangle():
    a, b = pair(fam(Complete(3)))
    (v,) = weyl_check(a, b, 2, 3)
    assert v.equality and (v.lhs, v.rhs) == (1, 1)
    assert xl.mat_vec(a, v.certificate) == v.certificate


def test_weyl_both_sides_when_indices_balance():
    sides = weyl_check(*pair(fam(Cycle(4))), 1, 1)
    assert [v.side for v in sides] == ["Wein2"]
    sides = weyl_check(*pair(fam(Cycle(4))), 2, 3)
    assert [v.side for v in sides] == ["Wein1", "Wein2"]


def test_weyl_c4_first_indices():
    (v,) = weyl_check(*pair(fam(Cycle(4))), 1, 1)
    assert v.side == "Wein2" and v.equality and (v.lhs, v.rhs) == (6, 6)
    assert v.certificate == (1, 1, 1, 1)


def test_weyl_index_errors():
    a, b = pair(P4)
    with pytest.raises(IndexError):
        weyl_check(a, b, 0, 4)
    with pytest.raises(IndexError):
        weyl_check(a, b, 2, 5)
    with pytest.raises(ValueError):
        weyl_check(a, xl.identity(3), 1, 1)


def test_weyl_numeric_undecidable_on_pentagon():
    # C5 is self-complementary and its Q-eigenvalues 2 + 2cos(2 pi k / 5) are irrational
    a, b = pair(fam(Cycle(5)))
    with pytest.raises(NumericEqualityUndecidable) as info:
        weyl_check(a, b, 2, 5)
    assert info.value.verdict.equality is None
    assert info.value.verdict.holds


def test_weyl_numeric_strict_is_not_equality():
    a, b = pair(P4)
    v = weyl_check(a, b, 1, 4)[0]  # 2+sqrt2 + 0 <= q_1(K4) = 6
    assert not v.exact and v.holds and v.equality is False


def eigen_scalar(m, y):
    my = xl.mat_vec(m, y)
    k = next(i for i, x in enumerate(y) if x)
    lam = Fraction(my[k], y[k])
    assert all(Fraction(u) == lam * x for u, x in zip(my, y))
    return lam


def assert_common_eigenvector(a, b, v):
    y = v.certificate
    assert y is not None and any(y)
    assert eigen_scalar(a, y) + eigen_scalar(b, y) == v.lhs
    assert eigen_scalar(xl.mat_add(a, b), y) == v.rhs


def _weyl_all_wein1(g):
    a, b = pair(g)
    n = g.n
    for i in range(1, n + 1):
        for j in range(n + 1 - i, n + 1):
            try:
                verdicts = weyl_check(a, b, i, j)
            except NumericEqualityUndecidable as exc:
                verdicts = (exc.verdict,)
            for v in verdicts:
                assert v.holds, (str(g), i, j)
                if v.equality:
                    assert_common_eigenvector(a, b, v)


@pytest.mark.parametrize("n", range(2, 6))
def test_weyl_never_violated_exhaustive(n):
    for g in all_labeled(n):
        _weyl_all_wein1(g)


def test_weyl_never_violated_sampled():
    rng = random.Random(7)
    for _ in range(40):
        _weyl_all_wein1(random_graph(rng, rng.randint(6, 7)))


def test_weyl_general_integer_matrices(rng):
    for _ in range(100):
        n = rng.randint(1, 5)
        diag_a = [rng.randint(-3, 3) for _ in range(n)]
        diag_b = [rng.randint(-3, 3) for _ in range(n)]
        a = tuple(tuple(diag_a[i] if i == j else 0 for j in range(n)) for i in range(n))
        b = tuple(tuple(diag_b[i] if i == j else 0 for j in range(n)) for i in range(n))
        i, j = rng.randint(1, n), rng.randint(1, n)
        for v in weyl_check(a, b, i, j):
            assert v.exact and v.holds
            if v.equality:
                assert_common_eigenvector(a, b, v)

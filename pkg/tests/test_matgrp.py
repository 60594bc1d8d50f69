import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncgraph.errors import PreconditionError
from ncgraph.finfield import Poly, gf
from ncgraph.matgrp import (
    Matrix,
    Subspace,
    UnitarySpace,
    acts_as_scalar,
    char_poly,
    char_poly_cofactor,
    companion_matrix,
    cycle_companion,
    diagonal_triple,
    enumerate_sl,
    enumerate_su,
    hypercompanion_matrix,
    in_special_unitary,
    iter_matrices,
    poly_at_matrix,
    read_matrix,
    singer_normalizer_generators,
    sl_order,
    su_order,
    verify_cycle_companion,
    verify_diagonal_triple,
    verify_irreducible_central_power,
    verify_line_stabilizers,
    verify_scalar_obstruction_exhaustive,
    verify_singer,
    verify_unitary_witnesses,
    write_matrix,
)


def matrices(q, n):
    return st.lists(st.integers(0, q - 1), min_size=n * n, max_size=n * n).map(
        lambda v: Matrix(gf(q), np.array(v).reshape(n, n)))


def _brute_det(A):
    s, n = A.spec, A.n
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = s.mul(term, int(A.a[i, perm[i]]))
        total = s.add(total, s.neg(term) if inv % 2 else term)
    return total


@settings(max_examples=60, deadline=None)
@given(matrices(4, 3), matrices(4, 3))
def test_det_multiplicative_and_matches_leibniz(A, B):
    assert A.det() == _brute_det(A)
    assert (A * B).det() == A.spec.mul(A.det(), B.det())


@settings(max_examples=60, deadline=None)
@given(matrices(5, 3))
def test_inverse_and_char_poly_routes(A):
    assert char_poly(A) == char_poly_cofactor(A)
    assert poly_at_matrix(char_poly(A), A) == Matrix.scalar(A.spec, 3, 0)
    if A.det():
        assert (A * A.inverse()).is_identity()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_companion_char_poly(tail):
    f = Poly(gf(7), tail + [1])
    C = companion_matrix(f)
    assert C.n == f.degree
    assert char_poly(C) == f


def test_companion_of_linear_is_root():
    s = gf(7)
    assert companion_matrix(Poly(s, [s.neg(3), 1])).tolist() == [[3]]


def test_companion_rejects_non_monic():
    with pytest.raises(PreconditionError):
        companion_matrix(Poly(gf(5), [1, 2]))


def test_hypercompanion_char_poly_is_power():
    s = gf(3)
    f = Poly(s, [1, 0, 1])  # x^2 + 1 irreducible over GF(3)
    H = hypercompanion_matrix(f, 3)
    assert H.n == 6 and char_poly(H) == f ** 3
    with pytest.raises(PreconditionError):
        hypercompanion_matrix(Poly(s, [2, 0, 1]), 2)


def test_unitary_sigma_is_involution_fixing_subfield():
    space = UnitarySpace(3, 3)
    s = space.spec
    assert all(space.sigma(space.sigma(a)) == a for a in range(s.q))
    assert sum(space.sigma(a) == a for a in range(s.q)) == 3


@pytest.mark.parametrize("n,q,order", [(2, 3, 24), (2, 4, 60), (3, 2, 168), (3, 3, 5616)])
def test_sl_enumeration_size(n, q, order):
    # |SL(n,q)| from the standard product formula
    _, mats = enumerate_sl(n, q)
    assert mats.shape[0] == order == sl_order(n, q)


@pytest.mark.parametrize("n,q,order", [(2, 2, 6), (2, 3, 24), (3, 2, 216)])
def test_su_enumeration_matches_membership(n, q, order):
    space = UnitarySpace(n, q)
    s, mats = enumerate_su(n, q)
    assert mats.shape[0] == order == su_order(n, q)
    assert all(in_special_unitary(A, space) for A in iter_matrices(s, mats[:50]))


def test_su_membership_by_brute_force_count():
    # every 2x2 matrix over GF(4) tested against the form directly
    space = UnitarySpace(2, 2)
    s = space.spec
    count = 0
    for v in itertools.product(range(4), repeat=4):
        A = Matrix(s, np.array(v).reshape(2, 2))
        preserves = all(space.form(A.apply(u), A.apply(w)) == space.form(u, w)
                        for u in np.eye(2, dtype=np.int64) for w in np.eye(2, dtype=np.int64))
        if preserves and A.det() == 1:
            count += 1
            assert in_special_unitary(A, space)
    assert count == 6


def test_subspace_canonical_form():
    s = gf(5)
    U = Subspace(s, [[1, 2, 0], [0, 1, 1]])
    V = Subspace(s, [[1, 3, 1], [2, 4, 0]])
    assert U == V and U.dim == 2
    assert U.contains([1, 3, 1])


def test_acts_as_scalar():
    s = gf(5)
    A = Matrix.diag(s, [2, 2, 3])
    assert acts_as_scalar(A, Subspace(s, [[1, 0, 0], [0, 1, 0]])) == 2
    assert acts_as_scalar(A, Subspace(s, [[1, 0, 1]])) is None


def test_matrix_text_round_trip():
    s = gf(9)
    A = Matrix(s, [[1, 4, 0], [7, 2, 8], [0, 0, 5]])
    assert read_matrix(write_matrix(A, unitary_q=3)) == A
    B = Matrix(gf(7), [[1, 2], [3, 4]])
    assert read_matrix(write_matrix(B)) == B
    with pytest.raises(PreconditionError):
        read_matrix("2 3 10\n(0,1) (1,0)\n(1,1) (0,0)\n")


def test_cycle_companion_inverse_is_transpose():
    R = cycle_companion(gf(4), 5)
    assert R.inverse() == R.T
    assert (R ** 5).is_identity()


@pytest.mark.parametrize("q", [3, 4, 5])
def test_diagonal_triple_in_su3(q):
    assert verify_diagonal_triple(q).passed


def test_diagonal_triple_degenerates_for_q2():
    # lambda has order 3 in GF(4), so all three matrices are scalar
    assert all(b.is_scalar() for b in diagonal_triple(2))
    assert not verify_diagonal_triple(2).passed


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (5, 2)])
def test_cycle_companion_pair(n, q):
    assert verify_cycle_companion(n, q).passed


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_irreducible_central_power(q):
    rep = verify_irreducible_central_power(q)
    assert rep.passed, rep.details


@pytest.mark.parametrize("n,q", [(2, 4), (2, 5), (3, 2)])
def test_line_stabilizers(n, q):
    assert verify_line_stabilizers(n, q).passed


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_unitary_witnesses(n, q):
    rep = verify_unitary_witnesses(n, q)
    assert rep.passed, rep.details


def test_scalar_obstruction_exhaustive():
    rep = verify_scalar_obstruction_exhaustive(3, 2)
    assert rep.passed and rep.details["witnesses"] == 0


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2)])
def test_singer_normalizer_brute_force(n, q):
    rep = verify_singer(n, q)
    assert rep.passed and rep.details["normalizer_order"] == n * (q**n - 1)


def test_unitary_singer():
    data = singer_normalizer_generators(3, 3, unitary=True)
    space = UnitarySpace(3, 3)
    assert in_special_unitary(data.generator, space) and in_special_unitary(data.normalizer, space)
    assert data.generator.conj(data.normalizer) == data.generator ** 9

"""Exact integer linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_affine.errors import SingularMatrix, SingularModP, WrongDimension
from spectral_affine.linalg import (
    Expansion,
    as_matrix,
    char_poly,
    coset_transversal,
    det,
    det_and_adjugate,
    euler_phi,
    gl_inverse_mod,
    identity,
    in_lattice,
    is_expanding,
    is_prime,
    mat_mul,
    mat_vec,
    order_mod,
    smith_normal_form,
    transpose,
    unimodular_inverse,
)

small_matrices = st.integers(1, 3).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-9, 9), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


def test_as_matrix_validates_shape():
    assert as_matrix([[1, 2], [3, 4]]) == ((1, 2), (3, 4))
    with pytest.raises(WrongDimension):
        as_matrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(WrongDimension):
        as_matrix([])


def test_det_known_values():
    assert det(((3, 0), (0, 3))) == 9
    assert det(((3, 1), (1, 4))) == 11
    assert det(((0, 10), (9, 0))) == -90
    assert det(((2, 0, 0), (0, 3, 0), (0, 0, 5))) == 30
    assert det(((1, 2), (2, 4))) == 0
    assert det(((7,),)) == 7


def test_det_agrees_with_permutation_expansion():
    M = ((2, -1, 3), (0, 4, 1), (-2, 5, 2))
    # cofactor expansion along the first row, by hand
    assert det(M) == 2 * (8 - 5) - (-1) * (0 + 2) + 3 * (0 + 8)


@settings(max_examples=60)
@given(small_matrices)
def test_adjugate_identity(rows):
    M = as_matrix(rows)
    d, adj = det_and_adjugate(M)
    n = len(M)
    prod = mat_mul(M, adj)
    assert prod == tuple(
        tuple(d if i == j else 0 for j in range(n)) for i in range(n)
    )


@settings(max_examples=40)
@given(small_matrices)
def test_char_poly_matches_resolvent_determinant(rows):
    M = as_matrix(rows)
    coeffs = char_poly(M)
    n = len(M)
    assert len(coeffs) == n + 1 and coeffs[0] == 1
    for t in (-2, -1, 0, 1, 2, 3):
        shifted = tuple(
            tuple(t * (i == j) - M[i][j] for j in range(n)) for i in range(n)
        )
        value = sum(c * t ** (n - k) for k, c in enumerate(coeffs))
        assert value == det(shifted)


def test_is_expanding():
    assert is_expanding(((3, 0), (0, 3))) is Expansion.EXPANDING
    assert is_expanding(((0, 10), (9, 0))) is Expansion.EXPANDING
    assert is_expanding(((2, 3), (1, 2))) is Expansion.NOT_EXPANDING
    assert is_expanding(((1, 0), (0, 5))) is Expansion.MARGINAL
    assert is_expanding(((0, 1), (1, 0))) is Expansion.MARGINAL
    with pytest.raises(ValueError):
        is_expanding(((2, 0), (0, 2)), tol=0)


def test_gl_inverse_mod_fixtures():
    B = ((1, 0), (0, 2))
    A = gl_inverse_mod(B, 3)
    assert A == ((1, 0), (0, 2))
    assert gl_inverse_mod(((1, 0), (1, 1)), 3) == ((1, 0), (2, 1))
    with pytest.raises(SingularModP):
        gl_inverse_mod(((3, 0), (0, 1)), 3)


@settings(max_examples=60)
@given(small_matrices, st.sampled_from([2, 3, 5]))
def test_gl_inverse_mod_is_inverse(rows, p):
    B = as_matrix(rows)
    if det(B) % p == 0:
        with pytest.raises(SingularModP):
            gl_inverse_mod(B, p)
        return
    A = gl_inverse_mod(B, p)
    n = len(B)
    prod = mat_mul(A, B)
    assert tuple(
        tuple(x % p for x in row) for row in prod
    ) == identity(n)
    assert all(0 <= x < p for row in A for x in row)


def test_order_mod_known():
    assert order_mod(((1, 0), (0, 1)), 3) == 1
    assert order_mod(((2, 0), (0, 2)), 3) == 2
    assert order_mod(((0, 1), (1, 1)), 3) == 8
    assert order_mod(((3, 1), (1, 4)), 3) == 8
    with pytest.raises(SingularModP):
        order_mod(((3, 0), (0, 1)), 3)


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.sampled_from([2, 3, 5]))
def test_order_divides_no_smaller_and_bound(rows, p):
    M = as_matrix(rows)
    if det(M) % p == 0:
        return
    n = len(M)
    k = order_mod(M, p)
    assert 1 <= k <= p**n - 1
    P = identity(n)
    for j in range(1, k):
        P = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) % p for col in zip(*M))
            for row in P
        )
        assert P != identity(n)


def test_is_prime_and_euler_phi():
    primes = [x for x in range(2, 60) if is_prime(x)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert not is_prime(1) and not is_prime(0) and not is_prime(-3)
    for m in range(1, 60):
        brute = sum(1 for a in range(1, m + 1) if _gcd(a, m) == 1)
        assert euler_phi(m) == brute


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def test_smith_normal_form_fixtures():
    S, L, R = smith_normal_form(((2, 4), (6, 8)))
    assert S == ((2, 0), (0, 4))
    S, L, R = smith_normal_form(((1, 0), (0, 2)))
    # already in normal form: factors stay the identity
    assert (S, L, R) == (((1, 0), (0, 2)), ((1, 0), (0, 1)), ((1, 0), (0, 1)))
    S, _, _ = smith_normal_form(((3, 1), (1, 4)))
    assert S == ((1, 0), (0, 11))


@settings(max_examples=80)
@given(small_matrices)
def test_smith_normal_form_properties(rows):
    M = as_matrix(rows)
    S, L, R = smith_normal_form(M)
    assert mat_mul(mat_mul(L, M), R) == S
    assert abs(det(L)) == 1 and abs(det(R)) == 1
    diag = [S[i][i] for i in range(len(M))]
    for i in range(len(M)):
        for j in range(len(M)):
            if i != j:
                assert S[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and b >= 0
        if a != 0:
            assert b % a == 0 or b == 0
        else:
            assert b == 0


def test_coset_transversal_fixtures():
    t = coset_transversal(((1, 0), (0, 2)))
    assert t.reps == ((0, 0), (0, 1))
    t = coset_transversal(((3, 0), (0, 3)))
    assert len(t.reps) == 9
    assert t.reps[0] == (0, 0)
    with pytest.raises(SingularMatrix):
        coset_transversal(((1, 2), (2, 4)))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_coset_transversal_is_complete(rows):
    M = as_matrix(rows)
    if det(M) == 0 or abs(det(M)) > 40:
        return
    t = coset_transversal(M)
    assert len(t.reps) == abs(det(M))
    assert t.reps[0] == (0,) * len(M)
    seen = set()
    for a in t.reps:
        for b in t.reps:
            if a < b:
                diff = tuple(x - y for x, y in zip(a, b))
                assert not in_lattice(M, diff)
        seen.add(a)
    assert len(seen) == len(t.reps)


def test_in_lattice():
    M = ((3, 1), (1, 4))
    for k in ((0, 0), (1, 0), (-2, 3)):
        v = mat_vec(M, k)
        assert in_lattice(M, v)
    assert not in_lattice(M, (1, 0))
    assert not in_lattice(M, (0, 1))


def test_unimodular_inverse():
    B = ((1, 0), (1, 1))
    Binv = unimodular_inverse(B)
    assert mat_mul(B, Binv) == identity(2)
    with pytest.raises(SingularMatrix):
        unimodular_inverse(((2, 0), (0, 1)))


def test_transpose_and_mat_vec_fraction_support():
    M = ((1, 2), (3, 4))
    assert transpose(M) == ((1, 3), (2, 4))
    out = mat_vec(M, (Fraction(1, 2), Fraction(1, 3)))
    assert out == (Fraction(7, 6), Fraction(17, 6))

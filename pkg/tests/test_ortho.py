"""Orthogonality counting, transport inclusions, certificates."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_affine.errors import (
    HypothesisViolation,
    IncompleteZeroSet,
    NonIntegerDigits,
)
from spectral_affine.ortho import (
    has_infinite_orthogonal,
    nonspectral_certificate,
    nstar_bounds,
    suggest_certificate,
    transport_inclusion_check,
    zero_membership,
)

THREE = ((0, 0), (1, 0), (0, 1))
FOUR = ((0, 0), (1, 0), (0, 1), (-1, -1))
STRETCH = ((0, 0), (1, 0), (0, 2))
M3 = ((3, 0), (0, 3))
SKEW = ((3, 1), (1, 4))


def test_zero_membership_levels():
    assert zero_membership(M3, THREE, (1, 2)) == 1
    assert zero_membership(M3, THREE, (3, 6)) == 2
    assert zero_membership(M3, THREE, (9, 18)) == 3
    assert zero_membership(M3, THREE, (2, 1)) == 1
    assert zero_membership(M3, THREE, (1, 1)) is None
    assert zero_membership(M3, THREE, (0, 0)) is None
    # a mask zero itself sits below every level for this map
    assert zero_membership(M3, THREE, (Fraction(1, 3), Fraction(2, 3))) is None


def test_zero_membership_none_is_certified():
    # levels shrink geometrically, so None is a proof, not a timeout;
    # spot-check against a wide direct sweep
    for xi in ((1, 0), (0, 1), (1, 1), (2, 2), (5, 8)):
        assert zero_membership(M3, THREE, xi) is None


def test_zero_membership_validations():
    with pytest.raises(IncompleteZeroSet):
        zero_membership(M3, ((0, 0), (1, 1)), (1, 1))
    with pytest.raises(HypothesisViolation):
        zero_membership(((1, 0), (0, 2)), THREE, (1, 1))


def test_has_infinite_orthogonal():
    assert has_infinite_orthogonal(M3, THREE) == (True, 1)
    assert has_infinite_orthogonal(SKEW, THREE) == (False, None)
    assert has_infinite_orthogonal(((0, 10), (9, 0)), FOUR) == (True, 1)
    # non-spectral systems can still carry infinite orthogonal families
    assert has_infinite_orthogonal(((4, 1), (2, 5)), THREE) == (True, 2)


@settings(max_examples=30, deadline=None)
@given(
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
    st.integers(1, 3),
)
def test_membership_is_shift_covariant(v, j):
    # multiplying by M^T raises the entry level by exactly one
    base = zero_membership(M3, THREE, v)
    Mt = ((3, 0), (0, 3))
    w = tuple(sum(Mt[i][k] * v[k] for k in range(2)) for i in range(2))
    lifted = zero_membership(M3, THREE, w)
    if base is not None:
        assert lifted == base + 1


def test_nstar_clique_small():
    out = nstar_bounds(((2, 0), (0, 2)), THREE, 3, J=1, R=0)
    assert (out.lower, out.upper) == (3, 3)
    assert out.method == "clique" and out.search_complete
    assert out.witness.verified and len(out.witness.frequencies) == 3
    assert out.witness.frequencies[0] == (0, 0)


def test_nstar_nine_exponentials():
    out = nstar_bounds(SKEW, THREE, 3, J=8, R=0)
    assert (out.lower, out.upper) == (9, 9)
    assert out.method == "clique"
    assert len(out.witness.frequencies) == 9


def test_nstar_inapplicable_when_det_shares_p():
    out = nstar_bounds(M3, THREE, 3, J=2, R=0)
    assert out.upper is None and out.method == "inapplicable"
    assert out.lower == 5
    assert out.witness.frequencies == (
        (0, 0),
        (1, 2),
        (2, 1),
        (3, 6),
        (6, 3),
    )


def test_nstar_family_cap_without_grid_zeros():
    # zeros of the stretched digits leave the (1/3)-grid, but the
    # three-digit frame still caps the count at p^n
    out = nstar_bounds(SKEW, STRETCH, 3, J=2, R=1)
    assert out.method == "trivial_pn" and out.upper == 9
    assert out.lower >= 3


def test_nstar_budget_truncation():
    out = nstar_bounds(SKEW, THREE, 3, J=8, R=0, node_budget=3)
    assert not out.search_complete
    assert out.lower <= 9


def test_nstar_validations():
    with pytest.raises(ValueError):
        nstar_bounds(M3, THREE, 4)
    with pytest.raises(ValueError):
        nstar_bounds(M3, THREE, 3, J=0)
    with pytest.raises(ValueError):
        nstar_bounds(M3, THREE, 3, R=-1)


def test_transport_identity_witness():
    rep = transport_inclusion_check(SKEW, THREE, None, ((1, 0), (0, 1)), 3, J=4)
    assert rep.ok
    assert rep.c1 == 11**16 and rep.c2 == 11**16
    assert rep.conjugate_matrix == SKEW and rep.conjugate_digits == THREE
    assert len(rep.forward_hits) == 2 * 4 and len(rep.backward_hits) == 2 * 4
    assert all(hit[2] >= 1 for hit in rep.forward_hits + rep.backward_hits)
    assert rep.c1 % 3 == 1 and rep.c2 % 3 == 1


def test_transport_mode_b_fixture():
    B = ((1, 0), (0, 2))
    rep = transport_inclusion_check(SKEW, STRETCH, None, B, 3, J=4, mode="b")
    assert rep.ok
    assert rep.conjugate_matrix == ((3, 2), (2, 16))
    assert rep.conjugate_digits == THREE
    assert rep.c1 == 4 * 44**16 and rep.c2 == 11**16
    assert rep.c1 % 3 == 1 and rep.c2 % 3 == 1


def test_transport_mode_a_fixture():
    B = ((1, 0), (1, 1))
    rep = transport_inclusion_check(SKEW, THREE, None, B, 3, J=4, mode="a")
    assert rep.ok
    assert rep.conjugate_matrix == ((4, 1), (13, 6))
    assert rep.conjugate_digits == ((0, 0), (1, 2), (0, 1))
    assert rep.c1 == 11**16 and rep.c2 == 11**16


def test_transport_validations():
    with pytest.raises(HypothesisViolation):
        transport_inclusion_check(M3, THREE, None, ((1, 0), (0, 1)), 3)
    with pytest.raises(HypothesisViolation):
        transport_inclusion_check(SKEW, STRETCH, None, ((1, 0), (0, 1)), 3)
    with pytest.raises(HypothesisViolation):
        transport_inclusion_check(
            SKEW, THREE, ((1, 0), (1, 1)), ((1, 0), (1, 1)), 3
        )
    with pytest.raises(NonIntegerDigits):
        transport_inclusion_check(SKEW, THREE, None, ((1, 0), (0, 2)), 3, mode="b")
    with pytest.raises(ValueError):
        transport_inclusion_check(SKEW, THREE, None, ((1, 0), (0, 1)), 6)
    with pytest.raises(ValueError):
        transport_inclusion_check(SKEW, THREE, None, ((1, 0), (0, 1)), 3, J=0)
    with pytest.raises(ValueError):
        transport_inclusion_check(SKEW, THREE, None, ((1, 0), (0, 1)), 3, mode="x")


def test_certificate_plain_scale():
    M = ((4, 1), (2, 5))
    cert = nonspectral_certificate(M, THREE, 1, 2)
    assert cert.difference_closure and cert.window_empty and cert.tail_integral
    assert cert.valid and cert.verdict == "NonSpectral"
    assert suggest_certificate(M, THREE) == (1, 2)


def test_certificate_plain_scale_perturbations():
    M = ((4, 1), (2, 5))
    c3 = nonspectral_certificate(M, THREE, 3, 2)
    assert not c3.difference_closure and not c3.window_empty
    assert c3.tail_integral and not c3.valid
    cf = nonspectral_certificate(M, THREE, Fraction(1, 3), 2)
    assert not cf.difference_closure and cf.window_empty and cf.tail_integral
    assert not cf.valid and cf.verdict == "inconclusive"


def test_certificate_stretched_digits():
    M = ((4, 2), (1, 5))
    cert = nonspectral_certificate(M, STRETCH, 64, 2)
    assert cert.valid
    assert suggest_certificate(M, STRETCH) == (64, 2)
    off = nonspectral_certificate(M, STRETCH, 65, 2)
    assert not off.difference_closure and off.window_empty
    assert not off.tail_integral and not off.valid


def test_certificate_validations():
    with pytest.raises(ValueError):
        nonspectral_certificate(M3, THREE, 0, 2)
    with pytest.raises(ValueError):
        nonspectral_certificate(M3, THREE, 1, 1)
    with pytest.raises(IncompleteZeroSet):
        nonspectral_certificate(M3, ((0, 0), (1, 1)), 1, 2)


def test_suggest_certificate_none_cases():
    # spectral systems enter at level one; this one never enters at all
    assert suggest_certificate(M3, THREE) is None
    assert suggest_certificate(SKEW, THREE) is None

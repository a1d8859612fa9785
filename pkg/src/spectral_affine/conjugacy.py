"""Residue classification mod 3 and GL_n(p) conjugacy of digit systems.

Planar expanding integer matrices are classified by their residue mod 3
into three families that govern how many mutually orthogonal exponentials
the associated three-digit measures admit: the family whose two rows agree
mod 3 (label "M1", the spectral case), the twelve order-eight residues of
determinant 2 mod 3 (label "M2", where nine orthogonal exponentials are
attained), and everything else. The conjugacy machinery moves a digit
system (M, D) to (A M B, D~) through a witness pair A B = I mod p, which
preserves admissibility and orthogonal-exponential counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadDigitForm,
    DegenerateDigits,
    HypothesisViolation,
    NonIntegerDigits,
    SingularModP,
    WrongDimension,
)
from .linalg import (
    Expansion,
    Matrix,
    as_matrix,
    det_and_adjugate,
    gl_inverse_mod,
    identity,
    is_expanding,
    is_prime,
    mat_mod,
    mat_mul,
    mat_vec,
)
from .zeros import DigitSet, as_digit_set


def _expand_sign_table(half: Sequence[Matrix]) -> frozenset[Matrix]:
    out = set()
    for M in half:
        out.add(mat_mod(M, 3))
        out.add(mat_mod(tuple(tuple(-x for x in row) for row in M), 3))
    return frozenset(out)


# Rows-equal residues; closed under negation, so five generators give nine.
_M1_TABLE = _expand_sign_table(
    [
        ((0, 0), (0, 0)),
        ((1, 0), (1, 0)),
        ((0, 1), (0, 1)),
        ((1, 1), (1, 1)),
        ((1, 2), (1, 2)),
    ]
)

# The twelve order-eight residues of determinant 2 mod 3.
_M2_TABLE = _expand_sign_table(
    [
        ((0, 1), (1, 1)),
        ((0, 1), (1, 2)),
        ((1, 1), (1, 0)),
        ((1, 2), (1, 1)),
        ((1, 2), (2, 0)),
        ((1, 1), (2, 1)),
    ]
)


@dataclass(frozen=True)
class SierpinskiClass:
    """Residue classification of a planar matrix mod 3."""

    label: str  # "M1", "M2", or "Other"
    residue: Matrix


def sierpinski_class(M: Matrix) -> SierpinskiClass:
    M = as_matrix(M)
    if len(M) != 2:
        raise WrongDimension("residue classification is defined for 2x2 matrices")
    R = mat_mod(M, 3)
    if R in _M1_TABLE:
        label = "M1"
    elif R in _M2_TABLE:
        label = "M2"
    else:
        label = "Other"
    return SierpinskiClass(label=label, residue=R)


def spectral_residue_criterion(M: Matrix) -> bool:
    """Whether M^T (1, -1) lies in 3Z^2, i.e. the rows of M agree mod 3."""
    M = as_matrix(M)
    if len(M) != 2:
        raise WrongDimension("criterion is defined for 2x2 matrices")
    v = mat_vec(tuple(zip(*M)), (1, -1))
    return all(x % 3 == 0 for x in v)


@dataclass(frozen=True)
class SpectralityVerdict:
    verdict: str  # "Spectral" or "NonSpectral"
    A: Matrix
    B: Matrix


def spectrality_criterion(M: Matrix, D: DigitSet) -> SpectralityVerdict:
    """Decide spectrality for a planar three-digit system.

    The digit set must consist of three points whose difference frame
    B = [d1-d0 | d2-d0] is invertible mod 3; a translate of {0, alpha, beta}
    is accepted since translating digits changes neither the mask zeros nor
    spectrality. With A the canonical mod-3 inverse of B, the measure is
    spectral iff the rows of A M B agree mod 3.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    if len(M) != 2 or len(D[0]) != 2:
        raise WrongDimension("criterion is defined in the plane")
    if len(D) != 3:
        raise BadDigitForm("criterion needs exactly three digits")
    if is_expanding(M) is not Expansion.EXPANDING:
        raise HypothesisViolation("criterion requires an expanding matrix")
    d0, d1, d2 = D
    B = (
        (d1[0] - d0[0], d2[0] - d0[0]),
        (d1[1] - d0[1], d2[1] - d0[1]),
    )
    try:
        A = gl_inverse_mod(B, 3)
    except SingularModP:
        raise DegenerateDigits("digit difference frame is singular mod 3") from None
    Mt = mat_mul(mat_mul(A, M), B)
    verdict = "Spectral" if spectral_residue_criterion(Mt) else "NonSpectral"
    return SpectralityVerdict(verdict=verdict, A=A, B=B)


@dataclass(frozen=True)
class ConjugateWitness:
    p: int
    A: Matrix
    B: Matrix
    mode: str  # "b": digits satisfy D = B D~; "a": digits satisfy D~ = A D


def make_conjugate(
    M: Matrix,
    D: DigitSet,
    B: Matrix,
    p: int,
    mode: str = "b",
) -> tuple[Matrix, DigitSet, ConjugateWitness]:
    """Conjugated system (A M B, D~) with A the canonical inverse of B mod p.

    Mode "b" divides the digits by B (requiring B^{-1} D to be integral);
    mode "a" multiplies them by A. Either way the new digits inherit
    distinctness from invertibility.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    B = as_matrix(B)
    if len(B) != len(M) or len(D[0]) != len(M):
        raise WrongDimension("matrix and digit dimensions must agree")
    if not is_prime(p):
        raise ValueError("modulus must be prime")
    if mode not in ("b", "a"):
        raise ValueError("mode must be 'b' or 'a'")
    A = gl_inverse_mod(B, p)
    Mt = mat_mul(mat_mul(A, M), B)
    if mode == "b":
        dB, adjB = det_and_adjugate(B)
        new = []
        for d in D:
            w = mat_vec(adjB, d)
            if any(x % dB != 0 for x in w):
                raise NonIntegerDigits(
                    "digit set is not divisible by B; conjugacy mode 'b' fails"
                )
            new.append(tuple(x // dB for x in w))
        Dt = tuple(new)
    else:
        Dt = tuple(tuple(mat_vec(A, d)) for d in D)
    if len(set(Dt)) != len(Dt):
        raise AssertionError("conjugated digits must stay distinct")
    return Mt, as_digit_set(Dt), ConjugateWitness(p=p, A=A, B=B, mode=mode)


def check_witness(A: Matrix, B: Matrix, p: int) -> bool:
    """Whether (A, B) is a valid conjugacy witness pair mod p."""
    if len(A) != len(B):
        raise WrongDimension("witness matrices must share a dimension")
    return mat_mod(mat_mul(A, B), p) == identity(len(A))

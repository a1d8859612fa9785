"""Digit sets, exact mask evaluation, and rational zero sets.

The mask of a digit set D is the normalized exponential sum
m_D(x) = (1/|D|) * sum_d exp(2 pi i <d, x>). Whether it vanishes at a
rational point is decided exactly: the point is reduced to exponents in
Z/q, and the induced integer polynomial is tested for divisibility by the
q-th cyclotomic polynomial. Zero sets are produced in closed form for the
two digit families where a complete finite description is available, and
by grid scanning otherwise, with an explicit completeness flag either way.
"""

from __future__ import annotations

import cmath
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DegenerateDigits, IncompleteZeroSet, WrongDimension
from .linalg import Matrix, det_and_adjugate, mat_vec

DigitSet = tuple[tuple[int, ...], ...]
RationalPoint = tuple[Fraction, ...]


def as_digit_set(rows: Sequence[Sequence[int]]) -> DigitSet:
    """Validate and freeze a set of distinct integer digit vectors."""
    for row in rows:
        for x in row:
            if x != int(x):
                raise ValueError("digit entries must be integers")
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out:
        raise ValueError("digit set must be nonempty")
    n = len(out[0])
    if n == 0:
        raise WrongDimension("digit vectors must have positive dimension")
    for row in out:
        if len(row) != n:
            raise WrongDimension("digit vectors must share one dimension")
    if len(set(out)) != len(out):
        raise ValueError("digit set entries must be distinct")
    return out


def as_rational_point(coords: Sequence) -> RationalPoint:
    return tuple(Fraction(c) for c in coords)


def reduce_mod1(x: Sequence) -> RationalPoint:
    return tuple(Fraction(c) % 1 for c in x)


def mask_eval(D: DigitSet, x: Sequence) -> complex:
    """Numeric mask value at x; x may hold floats, ints, or Fractions."""
    xs = [float(c) for c in x]
    if len(xs) != len(D[0]):
        raise WrongDimension("point dimension does not match digits")
    total = 0j
    for d in D:
        phase = sum(di * xi for di, xi in zip(d, xs))
        total += cmath.exp(2j * cmath.pi * phase)
    return total / len(D)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den must be monic; exact integer division
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    q = [0] * max(1, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q[i - dd] = c
        for j, dj in enumerate(den):
            num[i - dd + j] -= c * dj
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@functools.lru_cache(maxsize=None)
def cyclotomic(q: int) -> tuple[int, ...]:
    """Coefficients of the q-th cyclotomic polynomial, ascending degree."""
    if q < 1:
        raise ValueError("cyclotomic index must be positive")
    if q == 1:
        return (-1, 1)
    num = [0] * (q + 1)
    num[0] = -1
    num[q] = 1
    for d in range(1, q):
        if q % d == 0:
            quot, rem = _poly_divmod(num, list(cyclotomic(d)))
            if rem != [0]:
                raise AssertionError("cyclotomic division must be exact")
            num = quot
    return tuple(num)


def is_zero_exact(D: DigitSet, x: Sequence) -> bool:
    """Exact vanishing test for the mask of D at a rational point.

    The value is (1/|D|) * P(zeta_q) for the integer polynomial P collecting
    digit exponents mod q, so it vanishes iff the q-th cyclotomic polynomial
    divides P.
    """
    pt = reduce_mod1(as_rational_point(x))
    if len(pt) != len(D[0]):
        raise WrongDimension("point dimension does not match digits")
    q = 1
    for c in pt:
        q = lcm(q, c.denominator)
    coeffs = [0] * q
    for d in D:
        e = sum(di * int(ci * q) for di, ci in zip(d, pt)) % q
        coeffs[e] += 1
    phi = list(cyclotomic(q))
    if len(coeffs) < len(phi):
        coeffs += [0] * (len(phi) - len(coeffs))
    _, rem = _poly_divmod(coeffs, phi)
    return rem == [0]


@dataclass(frozen=True)
class ZeroSet:
    """Mask zeros inside [0,1)^n, with a completeness guarantee flag.

    q is the least common denominator of the listed points. When complete
    is true the points are provably all of the zeros in the unit cube.
    """

    points: tuple[RationalPoint, ...]
    q: int
    complete: bool

    def __post_init__(self):
        for pt in self.points:
            for c in pt:
                if not (0 <= c < 1):
                    raise AssertionError("zero set points must lie in [0,1)")
            neg = tuple((-c) % 1 for c in pt)
            if neg not in set(self.points):
                raise AssertionError("zero set must be symmetric under negation")

    @property
    def point_set(self) -> frozenset[RationalPoint]:
        return frozenset(self.points)


_THIRD_PAIR = (
    (Fraction(1, 3), Fraction(2, 3)),
    (Fraction(2, 3), Fraction(1, 3)),
)
_HALF_TRIPLE = (
    (Fraction(0), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(0)),
    (Fraction(1, 2), Fraction(1, 2)),
)


def _lattice_preimage(B: Matrix, base: Iterable[RationalPoint]) -> tuple[RationalPoint, ...]:
    """All x in [0,1)^2 with B^T x congruent mod Z^2 to a base point."""
    d, adj = det_and_adjugate(B)
    if d == 0:
        raise DegenerateDigits("digit difference matrix is singular")
    Bt = tuple(zip(*B))
    adjT = tuple(zip(*adj))
    # corners of B^T [0,1)^2 bound the k-search box
    corners = [mat_vec(Bt, c) for c in ((0, 0), (1, 0), (0, 1), (1, 1))]
    lo = [min(c[i] for c in corners) - 1 for i in range(2)]
    hi = [max(c[i] for c in corners) + 1 for i in range(2)]
    found = []
    base = tuple(base)
    for pt in base:
        for k1 in range(lo[0], hi[0] + 1):
            for k2 in range(lo[1], hi[1] + 1):
                y = (pt[0] + k1, pt[1] + k2)
                x = tuple(Fraction(v, d) for v in mat_vec(adjT, y))
                if all(0 <= c < 1 for c in x):
                    found.append(x)
    if len(found) != len(base) * abs(d):
        raise AssertionError("preimage count must equal |base| * |det|")
    return tuple(sorted(set(found)))


def _four_digit_frame(D: DigitSet) -> Matrix | None:
    """Difference frame [alpha | beta] when D is a translate of a set
    {0, alpha, beta, -alpha-beta}; None when it is not of that shape."""
    if len(D) != 4 or len(D[0]) != 2:
        return None
    s = [sum(d[i] for d in D) for i in range(2)]
    if any(v % 4 != 0 for v in s):
        return None
    c = tuple(v // 4 for v in s)
    if c not in D:
        return None
    rest = [tuple(di - ci for di, ci in zip(d, c)) for d in D if d != c]
    a, b, g = rest
    if (a[0] + b[0] + g[0], a[1] + b[1] + g[1]) != (0, 0):
        return None
    return ((a[0], b[0]), (a[1], b[1]))


def zero_set(D: DigitSet, q_hints: Sequence[int] = ()) -> ZeroSet:
    """Mask zeros of a digit set in the unit cube.

    Three-digit planar sets and planar translates of antipodal four-digit
    sets {0, alpha, beta, -alpha-beta} get exact complete zero sets via the
    classification of three- and four-term vanishing sums of roots of unity.
    Every other shape falls back to exhaustive exact scanning of the grids
    (1/q)Z^n for the hinted values of q, flagged incomplete.
    """
    D = as_digit_set(D)
    n = len(D[0])
    if len(D) == 1:
        # a unimodular exponential never vanishes
        return ZeroSet(points=(), q=1, complete=True)
    if len(D) == 3 and n == 2:
        d0, d1, d2 = D
        B = (
            (d1[0] - d0[0], d2[0] - d0[0]),
            (d1[1] - d0[1], d2[1] - d0[1]),
        )
        pts = _lattice_preimage(B, _THIRD_PAIR)
        q = 1
        for pt in pts:
            for c in pt:
                q = lcm(q, c.denominator)
        return ZeroSet(points=pts, q=q, complete=True)
    if len(D) == 4 and n == 2:
        B = _four_digit_frame(D)
        if B is not None:
            pts = _lattice_preimage(B, _HALF_TRIPLE)
            q = 1
            for pt in pts:
                for c in pt:
                    q = lcm(q, c.denominator)
            return ZeroSet(points=pts, q=q, complete=True)
    # hint mode: exact scan of each (1/q)Z^n grid
    found = set()
    for qh in q_hints:
        if qh < 1:
            raise ValueError("grid denominators must be positive")
        for coords in itertools.product(range(qh), repeat=n):
            x = tuple(Fraction(c, qh) for c in coords)
            if is_zero_exact(D, x):
                found.add(x)
    q = 1
    for pt in found:
        for c in pt:
            q = lcm(q, c.denominator)
    return ZeroSet(points=tuple(sorted(found)), q=q, complete=False)


def zero_set_in_punctured_grid(Z: ZeroSet, p: int) -> bool:
    """Whether every zero lies in the punctured grid (1/p)Z^n minus Z^n.

    Requires a complete zero set; an incomplete scan could not certify the
    inclusion.
    """
    if not Z.complete:
        raise IncompleteZeroSet("punctured grid inclusion needs a complete zero set")
    for pt in Z.points:
        if all(c == 0 for c in pt):
            return False
        for c in pt:
            if p % c.denominator != 0:
                return False
    return True


def zero_classes_mod_p(Z: ZeroSet, p: int) -> frozenset[tuple[int, ...]]:
    """Residue classes p*z mod p of a zero set inside the punctured grid."""
    if not zero_set_in_punctured_grid(Z, p):
        raise IncompleteZeroSet("zero set does not lie in the punctured grid")
    return frozenset(tuple(int(c * p) % p for c in pt) for pt in Z.points)

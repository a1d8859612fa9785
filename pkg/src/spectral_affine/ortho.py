"""Orthogonal exponential counting, transport inclusions, certificates.

Two frequencies are orthogonal for the self-affine measure of (M, D) iff
their difference lies in the measure's Fourier-transform zero set, which
is the union over j >= 1 of M^{T j} applied to the mask zeros plus Z^n.
Membership is decided exactly: iterate xi <- M^{-T} xi, compare against
the finite mask zero set after reduction mod 1, and stop once a certified
contraction bound shows no future iterate can reach it.

On top of that decision procedure sit the maximal-orthogonal-family
bounds (exact max clique below, Cayley-graph counting above), the scaled
zero-set transport inclusions between conjugate digit systems, and the
three-part non-spectrality certificate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from .errors import (
    HypothesisViolation,
    IncompleteZeroSet,
    NonIntegerDigits,
    SingularMatrix,
    WrongDimension,
)
from .linalg import (
    Matrix,
    as_matrix,
    det_and_adjugate,
    identity,
    is_prime,
    mat_mod,
    mat_mul,
    mat_pow,
    mat_vec,
    order_mod,
    transpose,
)
from .zeros import (
    DigitSet,
    RationalPoint,
    ZeroSet,
    as_digit_set,
    as_rational_point,
    reduce_mod1,
    zero_classes_mod_p,
    zero_set,
    zero_set_in_punctured_grid,
)


class _Measure:
    """Exact cached data for one digit system (M, D)."""

    def __init__(self, M: Matrix, D: DigitSet):
        self.M = M
        self.D = D
        self.n = len(M)
        d, adj = det_and_adjugate(M)
        if d == 0:
            raise SingularMatrix("expanding map must be invertible")
        self.det = d
        adjT = tuple(zip(*adj))
        self.minvT = tuple(
            tuple(Fraction(x, d) for x in row) for row in adjT
        )
        self.zs: ZeroSet = zero_set(D)
        if not self.zs.complete:
            raise IncompleteZeroSet(
                "orthogonality decisions need a provably complete zero set"
            )
        self.zpoints = self.zs.point_set
        if self.zs.points:
            self.delta = min(
                max(min(c, 1 - c) for c in pt) for pt in self.zs.points
            )
        else:
            self.delta = None
        # growth: sup_k ||(M^{-T})^k||_inf <= C, certified by finding the
        # first power with norm below one and taking the max before it
        C = Fraction(1)
        P = self.minvT
        for _ in range(200):
            Nk = max(sum(abs(x) for x in row) for row in P)
            if Nk < 1:
                break
            if Nk > C:
                C = Nk
            P = tuple(
                tuple(
                    sum(a * b for a, b in zip(row, col))
                    for col in zip(*self.minvT)
                )
                for row in P
            )
        else:
            raise HypothesisViolation(
                "inverse-transpose powers do not contract; matrix not expanding"
            )
        self.growth = C
        self._pair: dict[RationalPoint, bool] = {}

    def membership(self, xi: Sequence) -> Optional[int]:
        """Least j >= 1 with M^{-T j} xi in the mask zeros mod Z^n, or None."""
        x = as_rational_point(xi)
        if len(x) != self.n:
            raise WrongDimension("frequency dimension does not match the map")
        if self.delta is None:
            return None
        bound = self.delta / self.growth
        for j in range(1, 100_000):
            x = mat_vec(self.minvT, x)
            if reduce_mod1(x) in self.zpoints:
                return j
            if max(abs(c) for c in x) < bound:
                return None
        raise AssertionError("membership iteration did not terminate")

    def difference_orthogonal(self, a: RationalPoint, b: RationalPoint) -> bool:
        w = tuple(x - y for x, y in zip(a, b))
        if all(c == 0 for c in w):
            return False
        for c in w:
            if c != 0:
                if c < 0:
                    w = tuple(-x for x in w)
                break
        hit = self._pair.get(w)
        if hit is None:
            hit = self.membership(w) is not None
            self._pair[w] = hit
        return hit


@functools.lru_cache(maxsize=64)
def _measure(M: Matrix, D: DigitSet) -> _Measure:
    return _Measure(M, D)


def zero_membership(M: Matrix, D: DigitSet, xi: Sequence) -> Optional[int]:
    """Least level j at which xi enters the Fourier zero set, or None.

    Returns the smallest j >= 1 such that M^{-T j} xi reduced mod 1 is a
    mask zero of D. Termination is certified by an exact contraction bound,
    so None is a proof of non-membership rather than a timeout.
    """
    return _measure(as_matrix(M), as_digit_set(D)).membership(xi)


def has_infinite_orthogonal(
    M: Matrix, D: DigitSet
) -> tuple[bool, Optional[int]]:
    """Whether some power M^{T j} maps a mask zero into Z^n.

    When it does, scaling that zero through successive powers yields
    arbitrarily large orthogonal families, so the count n* is infinite.
    The witness is the least such j. Decided by exact orbit iteration on
    the finite grid containing the mask zeros.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    zs = zero_set(D)
    if not zs.complete:
        raise IncompleteZeroSet("orbit test needs a complete zero set")
    Mt = transpose(M)
    best: Optional[int] = None
    for z in zs.points:
        x = z
        seen = set()
        j = 0
        while x not in seen:
            seen.add(x)
            x = reduce_mod1(mat_vec(Mt, x))
            j += 1
            if all(c == 0 for c in x):
                if best is None or j < best:
                    best = j
                break
            if best is not None and j >= best:
                break
    return (best is not None, best)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _max_clique(
    adj: Sequence[int], node_budget: Optional[int]
) -> tuple[list[int], int, bool]:
    """Exact maximum clique by branch and bound with greedy coloring.

    adj[i] is a bitmask of neighbors. Returns (vertices, nodes, complete);
    when the node budget runs out the best clique found so far is returned
    with complete False, which still certifies a lower bound.
    """
    best: list[int] = []
    nodes = 0
    truncated = False

    def expand(P: int, clique: list[int]) -> None:
        nonlocal best, nodes, truncated
        if truncated:
            return
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            truncated = True
            return
        if P == 0:
            if len(clique) > len(best):
                best = clique.copy()
            return
        color: dict[int, int] = {}
        classes: list[int] = []
        for v in _bits(P):
            for ci in range(len(classes)):
                if not (classes[ci] & adj[v]):
                    classes[ci] |= 1 << v
                    color[v] = ci + 1
                    break
            else:
                classes.append(1 << v)
                color[v] = len(classes)
        ordered = sorted(_bits(P), key=lambda v: color[v])
        while ordered:
            v = ordered.pop()
            if len(clique) + color[v] <= len(best):
                return
            clique.append(v)
            rest = 0
            for u in ordered:
                rest |= 1 << u
            expand(rest & adj[v], clique)
            clique.pop()
            if truncated:
                return

    expand((1 << len(adj)) - 1, [])
    return best, nodes, not truncated


def _family_upper_applies(D: DigitSet, p: int) -> bool:
    """Digit families whose orthogonality count is capped by p^n even when
    their own mask zeros leave the (1/p)-grid: planar three-digit sets with
    difference frame invertible mod 3, and planar antipodal four-digit sets
    with odd difference frame, each under the matching modulus."""
    from .zeros import _four_digit_frame

    n = len(D[0])
    if n != 2:
        return False
    if len(D) == 3 and p == 3:
        d0, d1, d2 = D
        det = (d1[0] - d0[0]) * (d2[1] - d0[1]) - (d1[1] - d0[1]) * (
            d2[0] - d0[0]
        )
        return det % 3 != 0
    if len(D) == 4 and p == 2:
        B = _four_digit_frame(D)
        if B is None:
            return False
        det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
        return det % 2 != 0
    return False


def _clique_upper(M: Matrix, zs: ZeroSet, p: int) -> int:
    """Max clique of the Cayley graph of realizable difference classes.

    Valid when det M is coprime to p and the mask zeros lie in the
    punctured (1/p)-grid: every pairwise difference of an orthogonal
    family then falls, mod p, in the union of the matrix-power images of
    the zero classes, and distinct members occupy distinct classes.
    """
    n = len(M)
    zbar = zero_classes_mod_p(zs, p)
    Mbar = mat_mod(transpose(M), p)
    tau = order_mod(transpose(M), p)
    U: set[tuple[int, ...]] = set()
    cur = set(zbar)
    for _ in range(tau):
        cur = {tuple(x % p for x in mat_vec(Mbar, v)) for v in cur}
        U |= cur
    vertices = list(product(range(p), repeat=n))
    index = {v: i for i, v in enumerate(vertices)}
    adj = [0] * len(vertices)
    for i, a in enumerate(vertices):
        for j in range(i + 1, len(vertices)):
            b = vertices[j]
            diff = tuple((x - y) % p for x, y in zip(a, b))
            if diff in U:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best, _, complete = _max_clique(adj, None)
    if not complete:
        raise AssertionError("unbudgeted clique search must complete")
    return len(best)


@dataclass(frozen=True)
class OrthogonalFamily:
    frequencies: tuple[RationalPoint, ...]
    verified: bool


@dataclass(frozen=True)
class NStarBounds:
    """Two-sided bounds on the maximal orthogonal exponential count.

    lower always comes with a re-verified witness family. upper carries a
    method tag: "clique" for the Cayley-graph count, "trivial_pn" for the
    p^n cap from the digit-family hypotheses, "inapplicable" when no
    finite upper bound is certified (upper is then None).
    """

    lower: int
    witness: OrthogonalFamily
    upper: Optional[int]
    method: str
    search_nodes: int
    search_complete: bool


def nstar_bounds(
    M: Matrix,
    D: DigitSet,
    p: int,
    J: Optional[int] = None,
    R: int = 4,
    node_budget: int = 500_000,
) -> NStarBounds:
    """Bound the maximal number of mutually orthogonal exponentials.

    The lower bound searches candidate frequencies M^{T j} z + v for mask
    zeros z, 1 <= j <= J, integer offsets with max-norm at most R, keeps
    those lying in the Fourier zero set, and extracts an exact maximum
    clique of the pairwise-orthogonality graph (seeded with frequency 0).
    The upper bound uses the Cayley-graph count when det M is coprime to p
    and the zeros sit in the punctured (1/p)-grid, the p^n family cap when
    only the digit-shape hypotheses hold, and None otherwise.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    if not is_prime(p):
        raise ValueError("modulus must be prime")
    if R < 0 or (J is not None and J < 1):
        raise ValueError("search window must be positive")
    eng = _measure(M, D)
    n = eng.n
    if J is None:
        J = 2 * (p**n - 1)

    if eng.det % p != 0 and zero_set_in_punctured_grid(eng.zs, p):
        upper: Optional[int] = _clique_upper(M, eng.zs, p)
        method = "clique"
    elif eng.det % p != 0 and _family_upper_applies(D, p):
        upper = p**n
        method = "trivial_pn"
    else:
        upper = None
        method = "inapplicable"

    Mt = transpose(M)
    zero = (Fraction(0),) * n
    box = sorted(product(range(-R, R + 1), repeat=n))
    candidates: list[RationalPoint] = []
    seen: set[RationalPoint] = set()
    shells = [list(pt) for pt in eng.zs.points]
    for _ in range(1, J + 1):
        for idx in range(len(shells)):
            shells[idx] = list(mat_vec(Mt, shells[idx]))
        for vec in shells:
            for v in box:
                cand = tuple(c + o for c, o in zip(vec, v))
                if cand in seen or cand == zero:
                    continue
                seen.add(cand)
                if eng.membership(cand) is not None:
                    candidates.append(cand)

    vertices: list[RationalPoint] = [zero] + candidates
    adj = [0] * len(vertices)
    for i, a in enumerate(vertices):
        for j in range(i + 1, len(vertices)):
            if eng.difference_orthogonal(a, vertices[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best, nodes, complete = _max_clique(adj, node_budget)
    family = tuple(vertices[i] for i in sorted(best))
    for a, b in combinations(family, 2):
        w = tuple(x - y for x, y in zip(a, b))
        if eng.membership(w) is None:
            raise AssertionError("witness family failed re-verification")
    witness = OrthogonalFamily(frequencies=family, verified=True)
    return NStarBounds(
        lower=len(family),
        witness=witness,
        upper=upper,
        method=method,
        search_nodes=nodes,
        search_complete=complete,
    )


@dataclass(frozen=True)
class TransportReport:
    """Scaled zero-set transport between conjugate digit systems.

    c1 scales B^T images of the original Fourier zeros into the conjugated
    system's zeros; c2 scales A^T images back. Each hit records the level
    at which the transported frequency lands.
    """

    c1: int
    c2: int
    forward_hits: tuple[tuple[int, RationalPoint, int], ...]
    backward_hits: tuple[tuple[int, RationalPoint, int], ...]
    ok: bool
    conjugate_matrix: Matrix
    conjugate_digits: DigitSet


def transport_inclusion_check(
    M: Matrix,
    D: DigitSet,
    A: Optional[Matrix],
    B: Matrix,
    p: int,
    J: int = 4,
    mode: str = "b",
) -> TransportReport:
    """Verify the scaled transport inclusions on a window of levels.

    Requires det M coprime to p and the conjugated digits' mask zeros
    inside the punctured (1/p)-grid. With e = (p-1)(p^n - 1), the scalings
    are c1 = det(AB) |det(AMB)|^e and c2 = |det M|^e; both are congruent
    to 1 mod p, which is what lets them re-enter the grid classes.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    B = as_matrix(B)
    if not is_prime(p):
        raise ValueError("modulus must be prime")
    if J < 1:
        raise ValueError("level window must be positive")
    from .linalg import gl_inverse_mod

    if A is None:
        A = gl_inverse_mod(B, p)
    else:
        A = as_matrix(A)
        if mat_mod(mat_mul(A, B), p) != identity(len(A)):
            raise HypothesisViolation("A*B must be the identity mod p")
    n = len(M)
    dM, _ = det_and_adjugate(M)
    if dM % p == 0:
        raise HypothesisViolation("transport needs det M coprime to p")
    Mt_mat = mat_mul(mat_mul(A, M), B)
    if mode == "b":
        dB, adjB = det_and_adjugate(B)
        Dt = []
        for d in D:
            w = mat_vec(adjB, d)
            if any(x % dB != 0 for x in w):
                raise NonIntegerDigits("digit set is not divisible by B")
            Dt.append(tuple(x // dB for x in w))
        Dt = as_digit_set(Dt)
    elif mode == "a":
        Dt = as_digit_set(tuple(tuple(mat_vec(A, d)) for d in D))
    else:
        raise ValueError("mode must be 'b' or 'a'")

    src = _measure(M, D)
    dst = _measure(Mt_mat, Dt)
    if not zero_set_in_punctured_grid(dst.zs, p):
        raise HypothesisViolation(
            "conjugated mask zeros must lie in the punctured (1/p)-grid"
        )

    e = (p - 1) * (p**n - 1)
    dA, _ = det_and_adjugate(A)
    dB_, _ = det_and_adjugate(B)
    dMt, _ = det_and_adjugate(Mt_mat)
    c1 = dA * dB_ * abs(dMt) ** e
    c2 = abs(dM) ** e

    Bt = transpose(B)
    At = transpose(A)
    MtT = transpose(M)
    MtT_t = transpose(Mt_mat)

    ok = True
    forward = []
    shells = [list(z) for z in src.zs.points]
    for j in range(1, J + 1):
        for idx in range(len(shells)):
            shells[idx] = list(mat_vec(MtT, shells[idx]))
        for z, vec in zip(src.zs.points, shells):
            xi = tuple(c1 * c for c in mat_vec(Bt, vec))
            hit = dst.membership(xi)
            if hit is None:
                ok = False
                hit = -1
            forward.append((j, z, hit))

    backward = []
    shells = [list(z) for z in dst.zs.points]
    for j in range(1, J + 1):
        for idx in range(len(shells)):
            shells[idx] = list(mat_vec(MtT_t, shells[idx]))
        for z, vec in zip(dst.zs.points, shells):
            xi = tuple(c2 * c for c in mat_vec(At, vec))
            hit = src.membership(xi)
            if hit is None:
                ok = False
                hit = -1
            backward.append((j, z, hit))

    return TransportReport(
        c1=c1,
        c2=c2,
        forward_hits=tuple(forward),
        backward_hits=tuple(backward),
        ok=ok,
        conjugate_matrix=Mt_mat,
        conjugate_digits=Dt,
    )


@dataclass(frozen=True)
class NonSpectralCertificate:
    """Checkable witness that a digit system admits no exponential basis.

    difference_closure: scaled differences of mask zeros either fall back
    into the zero set or clear to integers, with at least one genuinely
    non-integer scaled difference present. window_empty: no level below
    j0 lets the scaled zero set touch Z^n. tail_integral: from level j0 on
    the scaling pushes everything into Z^n. Together these pin every
    candidate spectrum inside a structure too sparse to be complete.
    """

    L: Fraction
    j0: int
    difference_closure: bool
    window_empty: bool
    tail_integral: bool
    valid: bool
    verdict: str


def nonspectral_certificate(
    M: Matrix, D: DigitSet, L, j0: int
) -> NonSpectralCertificate:
    M = as_matrix(M)
    D = as_digit_set(D)
    L = Fraction(L)
    if L <= 0:
        raise ValueError("scale L must be positive")
    if j0 < 2:
        raise ValueError("tail level j0 must be at least 2")
    zs = zero_set(D)
    if not zs.complete:
        raise IncompleteZeroSet("certificate needs a complete zero set")
    n = len(M)
    pts = zs.points
    zset = zs.point_set

    # (a) closure of scaled differences
    if L.denominator != 1:
        # the closure argument needs the scale to preserve the integer
        # lattice, so a fractional scale fails this part outright
        difference_closure = False
    else:
        closure_ok = True
        witness_nonint = False
        for z in pts:
            for zp in pts:
                w = tuple(a - b for a, b in zip(z, zp))
                scaled_int = all((L * c).denominator == 1 for c in w)
                if not scaled_int:
                    witness_nonint = True
                    if reduce_mod1(w) not in zset:
                        closure_ok = False
        difference_closure = closure_ok and witness_nonint

    # (b) empty window below j0: at each level j < j0 the scaled image of
    # the zero set plus the integer lattice must miss Z^n entirely
    u = L.numerator
    v = L.denominator
    Mt = transpose(M)
    window_empty = True
    P = identity(n)
    for _ in range(1, j0):
        P = mat_mul(Mt, P)
        Pv = mat_mod(P, v) if v > 1 else None
        for z in pts:
            scaled = [u * c for c in mat_vec(P, z)]
            if any(c.denominator != 1 for c in scaled):
                continue  # no integer translate can clear the denominator
            if v == 1:
                window_empty = False
                break
            target = tuple((-int(c)) % v for c in scaled)
            for k in product(range(v), repeat=n):
                img = tuple((u * x) % v for x in mat_vec(Pv, k))
                if img == target:
                    window_empty = False
                    break
            if not window_empty:
                break
        if not window_empty:
            break

    # (c) integral tail at j0: the scaled matrix power clears the whole
    # lattice into Z^n, and the zero set with it, for every later level
    T = mat_pow(Mt, j0)
    tail_integral = all((L * x).denominator == 1 for row in T for x in row)
    if tail_integral:
        for z in pts:
            img = mat_vec(T, z)
            if any((L * c).denominator != 1 for c in img):
                tail_integral = False
                break

    valid = difference_closure and window_empty and tail_integral
    return NonSpectralCertificate(
        L=L,
        j0=j0,
        difference_closure=difference_closure,
        window_empty=window_empty,
        tail_integral=tail_integral,
        valid=valid,
        verdict="NonSpectral" if valid else "inconclusive",
    )


def suggest_certificate(
    M: Matrix, D: DigitSet, max_j: int = 64
) -> Optional[tuple[int, int]]:
    """Suggest a certificate scale and tail level for a three-digit system.

    Follows the residue criterion sequence: conjugate to A M B and find the
    first level j0 >= 2 at which (A M B)^{T j} (1, -1) enters 3Z^2 for all
    subsequent levels. The suggested scale is |det(AB)|^(j0 + 1). Returns
    None when the sequence never enters (no certificate of this shape) or
    enters at level one (the spectral case).
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    from .conjugacy import spectrality_criterion

    res = spectrality_criterion(M, D)
    Mt = mat_mul(mat_mul(res.A, M), res.B)
    MtT = transpose(Mt)
    w = (1, -1)
    j0 = None
    for j in range(1, max_j + 1):
        w = mat_vec(MtT, w)
        if all(x % 3 == 0 for x in w):
            j0 = j
            break
    if j0 is None or j0 < 2:
        return None
    dA, _ = det_and_adjugate(res.A)
    dB, _ = det_and_adjugate(res.B)
    L = abs(dA * dB) ** (j0 + 1)
    return (L, j0)

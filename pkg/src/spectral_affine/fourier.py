"""Numerical Fourier transform, attractor sampling, and the Q scan.

The Fourier transform of the self-affine measure is the infinite product
of mask values along inverse-transpose iterates of the frequency; it is
evaluated here as a truncated product in floating point. The attractor is
sampled either by enumerating truncated digit expansions or by a seeded
chaos game; both come with an explicit contraction-based accuracy bound.
These feed the completeness scan: a candidate spectrum is complete iff
the quadratic frame sum Q of squared transform moduli is identically one,
which the scan probes on a grid around the origin.

Everything in this module is corroborative floating-point numerics; the
exact verdicts live in the zeros, hadamard, and ortho modules.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (
    HypothesisViolation,
    IncompleteZeroSet,
    SingularMatrix,
    WrongDimension,
)
from .linalg import (
    Expansion,
    Matrix,
    as_matrix,
    det_and_adjugate,
    is_expanding,
    mat_mul,
    mat_vec,
    transpose,
)
from .zeros import (
    DigitSet,
    RationalPoint,
    as_digit_set,
    as_rational_point,
    mask_eval,
    zero_set,
)
from .ortho import zero_membership


def _require_expanding(M: Matrix) -> None:
    if is_expanding(M) is not Expansion.EXPANDING:
        raise HypothesisViolation("map must be expanding")


def _inverse_fractions(M: Matrix):
    d, adj = det_and_adjugate(M)
    if d == 0:
        raise SingularMatrix("map must be invertible")
    return tuple(tuple(Fraction(x, d) for x in row) for row in adj)


def _rational_points(rows: Sequence[Sequence]) -> tuple[RationalPoint, ...]:
    out = tuple(as_rational_point(row) for row in rows)
    if not out:
        raise ValueError("point list must be nonempty")
    n = len(out[0])
    for row in out:
        if len(row) != n:
            raise WrongDimension("points must share one dimension")
    if len(set(out)) != len(out):
        raise ValueError("points must be distinct")
    return out


def _pairwise_sum(vals: Sequence[float]) -> float:
    """Sum in a fixed balanced order, independent of any thread schedule."""
    k = len(vals)
    if k == 0:
        return 0.0
    if k == 1:
        return float(vals[0])
    mid = k // 2
    return _pairwise_sum(vals[:mid]) + _pairwise_sum(vals[mid:])


def _sup_norm(P) -> Fraction:
    return max(sum(abs(x) for x in row) for row in P)


def _tail_bound(Minv, digits: Sequence[RationalPoint], k: int) -> Fraction:
    """Bound on the distance from k-term truncated sums to the attractor.

    With K the first inverse power whose sup norm theta drops below one,
    the norm tail X past level k satisfies X <= S0 + theta * X for the
    exact K-term partial sum S0 starting at k + 1, so X <= S0/(1 - theta)
    and the point error is that times the largest digit coordinate.
    """
    dmax = max(max(abs(c) for c in d) for d in digits)
    if dmax == 0:
        return Fraction(0)
    K = None
    Q = Minv
    for i in range(1, 400):
        theta = _sup_norm(Q)
        if theta < 1:
            K = i
            break
        Q = mat_mul(Q, Minv)
    if K is None:
        raise HypothesisViolation(
            "inverse powers do not contract; matrix not expanding"
        )
    P = Minv
    for _ in range(k):
        P = mat_mul(P, Minv)
    S0 = Fraction(0)
    for _ in range(K):
        S0 += _sup_norm(P)
        P = mat_mul(P, Minv)
    return dmax * S0 / (1 - theta)


@dataclass(frozen=True)
class AttractorSample:
    """Point cloud near the attractor of the inverse-map digit system.

    Every sampled point lies within eps of the attractor; for the full
    digit-expansion mode the cloud also covers the attractor to within
    eps, so eps bounds the Hausdorff distance. The chaos-game cloud only
    covers it in the long-run statistical sense.
    """

    points: tuple[tuple[float, ...], ...]
    eps: float
    mode: str
    detail: int


def attractor_sample(
    M: Matrix,
    digits: Sequence[Sequence],
    mode: str = "digit_expansion",
    k: int = 8,
    N: int = 2000,
    seed: Optional[int] = None,
    burn_in: int = 50,
) -> AttractorSample:
    """Sample the attractor of x -> M^{-1}(x + d) over the given digits.

    digit_expansion enumerates all k-term truncated expansions exactly and
    rounds once at the end. chaos_game iterates randomly chosen digit maps
    from the origin; the seed is mandatory so runs are reproducible. Digit
    coordinates may be rational.
    """
    M = as_matrix(M)
    _require_expanding(M)
    pts = _rational_points(digits)
    if len(pts[0]) != len(M):
        raise WrongDimension("digit dimension does not match the map")
    Minv = _inverse_fractions(M)

    if mode == "digit_expansion":
        if k < 1:
            raise ValueError("expansion length must be positive")
        sums: set[RationalPoint] = {(Fraction(0),) * len(M)}
        power = Minv
        for j in range(1, k + 1):
            terms = [tuple(mat_vec(power, d)) for d in pts]
            sums = {
                tuple(s + t for s, t in zip(base, term))
                for base in sums
                for term in terms
            }
            power = mat_mul(power, Minv)
        cloud = tuple(
            tuple(float(c) for c in p) for p in sorted(sums)
        )
        eps = _tail_bound(Minv, pts, k)
        return AttractorSample(
            points=cloud, eps=float(eps), mode=mode, detail=k
        )

    if mode == "chaos_game":
        if seed is None:
            raise ValueError("chaos_game requires a seed")
        if N < 1:
            raise ValueError("sample count must be positive")
        rng = random.Random(seed)
        Mf = tuple(tuple(float(f) for f in row) for row in Minv)
        df = [tuple(float(c) for c in d) for d in pts]
        x = (0.0,) * len(M)
        out = []
        for t in range(burn_in + N):
            d = df[rng.randrange(len(df))]
            x = tuple(mat_vec(Mf, tuple(a + b for a, b in zip(x, d))))
            if t >= burn_in:
                out.append(x)
        eps = _tail_bound(Minv, pts, burn_in)
        return AttractorSample(
            points=tuple(out), eps=float(eps), mode=mode, detail=N
        )

    raise ValueError("mode must be 'digit_expansion' or 'chaos_game'")


class _MuHat:
    """Truncated-product evaluator with precomputed float inverse."""

    def __init__(self, M: Matrix, D: DigitSet, depth: int):
        if depth < 1:
            raise ValueError("product depth must be positive")
        _require_expanding(M)
        d, adj = det_and_adjugate(M)
        adjT = tuple(zip(*adj))
        self.minvT = tuple(
            tuple(x / d for x in row) for row in adjT
        )
        self.D = D
        self.depth = depth

    def value(self, xi: Sequence[float]) -> complex:
        y = tuple(float(c) for c in xi)
        prod = complex(1.0)
        for _ in range(self.depth):
            y = tuple(mat_vec(self.minvT, y))
            prod *= mask_eval(self.D, y)
            if abs(prod) < 1e-300:
                return 0j
        return prod


def mu_hat_numeric(M: Matrix, D: DigitSet, xi: Sequence, depth: int = 40) -> complex:
    """Truncated product of mask values along inverse-transpose iterates.

    Since the map is expanding, the iterates decay geometrically and the
    mask values approach one at the same rate, so the truncation error
    decays geometrically in depth; depth doubling is the practical
    convergence check.
    """
    return _MuHat(as_matrix(M), as_digit_set(D), depth).value(xi)


@dataclass(frozen=True)
class SpectrumCandidate:
    """Level-wise sum construction of candidate spectrum frequencies.

    frequencies holds every sum of transpose-power images of the base
    points, one per level. orthogonal reports the exact pairwise check
    against the measure's Fourier zero set; failing_pair is a witness
    when it fails.
    """

    base: tuple[RationalPoint, ...]
    levels: int
    frequencies: tuple[RationalPoint, ...]
    orthogonal: bool
    failing_pair: Optional[tuple[RationalPoint, RationalPoint]]


def spectrum_candidate(
    M: Matrix, D: DigitSet, base: Sequence[Sequence], levels: int
) -> SpectrumCandidate:
    """Build the level-sum frequency family and verify orthogonality.

    The family at n levels is all sums over i = 1..n of the i-th
    transpose power applied to a base point. Distinctness of the sums is
    asserted, each difference is tested exactly for membership in the
    Fourier zero set, and the first failing pair, if any, is reported.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    pts = _rational_points(base)
    n = len(M)
    if len(pts[0]) != n:
        raise WrongDimension("base dimension does not match the map")
    zero = (Fraction(0),) * n
    if zero not in pts:
        raise ValueError("base must contain the zero vector")
    if levels < 1:
        raise ValueError("level count must be positive")

    Mt = transpose(M)
    freqs: set[RationalPoint] = {zero}
    power = Mt
    for _ in range(levels):
        terms = [tuple(mat_vec(power, c)) for c in pts]
        freqs = {
            tuple(f + t for f, t in zip(base_f, term))
            for base_f in freqs
            for term in terms
        }
        power = mat_mul(power, Mt)
    assert len(freqs) == len(pts) ** levels, "level sums must be distinct"
    ordered = tuple(sorted(freqs))

    memo: dict[RationalPoint, bool] = {}
    orthogonal = True
    failing: Optional[tuple[RationalPoint, RationalPoint]] = None
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            w = tuple(x - y for x, y in zip(a, b))
            for c in w:
                if c != 0:
                    if c < 0:
                        w = tuple(-x for x in w)
                    break
            hit = memo.get(w)
            if hit is None:
                hit = zero_membership(M, D, w) is not None
                memo[w] = hit
            if not hit:
                orthogonal = False
                failing = (a, b)
                break
        if not orthogonal:
            break
    return SpectrumCandidate(
        base=pts,
        levels=levels,
        frequencies=ordered,
        orthogonal=orthogonal,
        failing_pair=failing,
    )


@dataclass(frozen=True)
class EtaSuggestion:
    """Scan radius derived from attractor-to-mask-zero separation.

    distance is the smallest sampled Euclidean distance between the
    attractor of the base digits and the integer-periodized mask zeros;
    sampling_error bounds how far samples sit from the true attractor;
    eta is half the safely deflated distance.
    """

    eta: float
    distance: float
    sampling_error: float


def suggest_eta(
    M: Matrix, D: DigitSet, base: Sequence[Sequence], k: int = 8
) -> EtaSuggestion:
    M = as_matrix(M)
    D = as_digit_set(D)
    zs = zero_set(D)
    if not zs.complete:
        raise IncompleteZeroSet("radius suggestion needs a complete zero set")
    if not zs.points:
        raise HypothesisViolation("mask has no zeros; any radius works")
    sample = attractor_sample(M, base, "digit_expansion", k=k)
    pts = np.array(sample.points, dtype=float)
    lo = np.floor(pts.min(axis=0)).astype(int) - 1
    hi = np.ceil(pts.max(axis=0)).astype(int) + 1
    n = pts.shape[1]
    shifts = np.array(
        list(
            np.ndindex(*[int(h - l + 1) for l, h in zip(lo, hi)])
        )
    ) + lo
    zarr = np.array([[float(c) for c in z] for z in zs.points])
    lattice = (zarr[:, None, :] + shifts[None, :, :]).reshape(-1, n)
    diff = pts[:, None, :] - lattice[None, :, :]
    dist = float(np.sqrt((diff**2).sum(axis=2)).min())
    eta = (dist - sample.eps) / 2
    if eta <= 0:
        raise HypothesisViolation(
            "sampled attractor is not separated from the mask zeros"
        )
    return EtaSuggestion(
        eta=eta, distance=dist, sampling_error=sample.eps
    )


@dataclass(frozen=True)
class QScanResult:
    """Grid of quadratic frame sums for a candidate frequency family.

    values is row-major over the Cartesian grid of axis coordinates. For
    an exactly orthogonal family every value is at most one up to float
    slack; a minimum staying near one as levels and depth grow supports
    completeness of the family.
    """

    center: tuple[float, ...]
    eta: float
    resolution: int
    depth: int
    axis: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]
    min_q: float
    max_q: float


def completeness_scan(
    M: Matrix,
    D: DigitSet,
    candidate: SpectrumCandidate,
    eta: float,
    resolution: int = 11,
    depth: int = 40,
    threads: int = 1,
) -> QScanResult:
    """Evaluate the frame sum Q over the origin-centered eta grid.

    Q at a grid point is the sum over candidate frequencies of the
    squared transform modulus at point + frequency. Accumulation uses a
    fixed balanced summation order and grid points are assembled in index
    order, so results are bit-identical for any thread count.
    """
    M = as_matrix(M)
    D = as_digit_set(D)
    if eta <= 0:
        raise ValueError("scan radius must be positive")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if threads < 1:
        raise ValueError("thread count must be positive")
    n = len(M)
    engine = _MuHat(M, D, depth)
    freqs = [tuple(float(c) for c in f) for f in candidate.frequencies]
    axis = tuple(
        -eta + 2 * eta * i / (resolution - 1) for i in range(resolution)
    )
    grid = list(itertools.product(axis, repeat=n))

    def q_at(pt: tuple[float, ...]) -> float:
        vals = [
            abs(engine.value(tuple(p + l for p, l in zip(pt, f)))) ** 2
            for f in freqs
        ]
        return _pairwise_sum(vals)

    if threads == 1:
        flat = [q_at(pt) for pt in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            flat = list(ex.map(q_at, grid))

    rows = tuple(
        tuple(flat[i * resolution : (i + 1) * resolution])
        for i in range(len(flat) // resolution)
    )
    min_q = min(flat)
    max_q = max(flat)
    if candidate.orthogonal:
        assert max_q <= 1 + 1e-9, "frame sum exceeded the orthogonality bound"
    return QScanResult(
        center=(0.0,) * n,
        eta=float(eta),
        resolution=resolution,
        depth=depth,
        axis=axis,
        values=rows,
        min_q=min_q,
        max_q=max_q,
    )

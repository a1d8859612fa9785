"""Hadamard triple verification, spectrum-set search, and transport.

A triple (M, D, S) is verified by testing, for every pair of distinct
frequencies s, s' in S, that the mask of D vanishes exactly at
M^{-T}(s - s'). The search for S enumerates subsets of a canonical coset
transversal of Z^n / M^T Z^n, which is complete because a valid S can
always be translated to contain 0 and reduced coset-wise without changing
any of the vanishing conditions.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import HypothesisViolation, NonIntegerResult, SingularMatrix, WrongDimension
from .linalg import (
    Matrix,
    coset_transversal,
    det_and_adjugate,
    identity,
    mat_mod,
    mat_mul,
    mat_vec,
    transpose,
)
from .zeros import (
    DigitSet,
    as_digit_set,
    is_zero_exact,
    reduce_mod1,
    zero_set,
)

FrequencySet = tuple[tuple[int, ...], ...]


def _inv_transpose_times(M: Matrix, v: Sequence) -> tuple[Fraction, ...]:
    d, adj = det_and_adjugate(M)
    if d == 0:
        raise SingularMatrix("matrix must be invertible over Q")
    adjT = tuple(zip(*adj))
    return tuple(Fraction(x, d) for x in mat_vec(adjT, v))


def unitarity_defect(M: Matrix, D: DigitSet, S: FrequencySet) -> float:
    """Max-norm distance of the normalized exponential matrix from unitarity."""
    D = as_digit_set(D)
    cols = []
    for s in S:
        x = _inv_transpose_times(M, s)
        xf = [float(c) for c in x]
        cols.append(
            [
                np.exp(2j * np.pi * sum(di * xi for di, xi in zip(d, xf)))
                for d in D
            ]
        )
    H = np.array(cols, dtype=complex).T / math.sqrt(len(S))
    G = H.conj().T @ H
    return float(np.max(np.abs(G - np.eye(len(S)))))


def verify_triple(M: Matrix, D: DigitSet, S: Sequence[Sequence[int]]) -> bool:
    """Exact Hadamard-triple check, cross-validated numerically.

    Returns True iff every pairwise frequency difference lands in the mask
    zero set after applying M^{-T}. When the exact answer is affirmative,
    the Gram matrix of the associated exponential system is additionally
    required to be unitary to within 1e-9, as a guard against bookkeeping
    errors between the two routes.
    """
    D = as_digit_set(D)
    S = tuple(tuple(int(x) for x in s) for s in S)
    if len(S) != len(D):
        raise WrongDimension("frequency set size must match digit set size")
    if len(set(S)) != len(S):
        raise WrongDimension("frequency set entries must be distinct")
    for s in S:
        if len(s) != len(D[0]):
            raise WrongDimension("frequency dimension does not match digits")
    ok = True
    for s, t in combinations(S, 2):
        diff = tuple(a - b for a, b in zip(s, t))
        if not is_zero_exact(D, _inv_transpose_times(M, diff)):
            ok = False
            break
    if ok:
        defect = unitarity_defect(M, D, S)
        if not defect < 1e-9:
            raise AssertionError(
                f"exact check passed but numeric unitarity defect is {defect}"
            )
    return ok


@dataclass(frozen=True)
class HadamardSearch:
    """Outcome of a spectrum-set search over a coset transversal.

    status is one of "found", "none", "undetermined"; search_space is the
    nominal number of candidate subsets before pruning; examined counts the
    subsets actually tested before stopping.
    """

    status: str
    S: Optional[FrequencySet]
    search_space: int
    examined: int


def find_spectrum_set(
    M: Matrix,
    D: DigitSet,
    budget: int = 10_000_000,
    threads: int = 1,
) -> HadamardSearch:
    """Deterministic search for a frequency set making (M, D, S) Hadamard.

    Candidates are (|D|-1)-subsets of the nonzero canonical transversal
    representatives, always together with 0, enumerated in lexicographic
    order of transversal position. Representatives that fail the vanishing
    condition against 0 are pruned first; this loses no solutions because
    every member of a valid S containing 0 must satisfy it. Exceeding the
    budget yields status "undetermined" rather than a guess.
    """
    D = as_digit_set(D)
    d, _ = det_and_adjugate(M)
    if d == 0:
        raise SingularMatrix("expanding map must be invertible")
    k = len(D) - 1
    nreps = abs(d)
    search_space = math.comb(max(0, nreps - 1), k)
    if k == 0:
        return HadamardSearch("found", ((0,) * len(D[0]),), search_space, 0)
    if nreps - 1 < k:
        return HadamardSearch("none", None, search_space, 0)

    reps = coset_transversal(transpose(M)).reps
    zs = zero_set(D)
    zpoints = zs.point_set if zs.complete else None

    def vanishes(vec: Sequence[int]) -> bool:
        x = _inv_transpose_times(M, vec)
        if zpoints is not None:
            return reduce_mod1(x) in zpoints
        return is_zero_exact(D, x)

    nonzero = [r for r in reps if any(r)]
    filtered = [r for r in nonzero if vanishes(r)]

    pair_cache: dict[tuple[int, ...], bool] = {}

    def pair_ok(a: Sequence[int], b: Sequence[int]) -> bool:
        diff = tuple(x - y for x, y in zip(a, b))
        if diff[0] < 0 or (diff[0] == 0 and diff[1:] < (0,) * (len(diff) - 1)):
            diff = tuple(-x for x in diff)
        hit = pair_cache.get(diff)
        if hit is None:
            hit = vanishes(diff)
            pair_cache[diff] = hit
        return hit

    m = len(filtered)
    # stream i enumerates subsets whose first element is filtered[i];
    # prefix budgets reproduce the sequential cutoff exactly
    stream_sizes = [math.comb(m - 1 - i, k - 1) for i in range(m)]
    caps = []
    used_before = 0
    for size in stream_sizes:
        caps.append(max(0, budget - used_before))
        used_before += size

    def run_stream(i: int) -> tuple[Optional[FrequencySet], int, bool]:
        cap = caps[i]
        count = 0
        head = filtered[i]
        for tail in combinations(filtered[i + 1 :], k - 1):
            if count >= cap:
                return None, count, True
            count += 1
            subset = (head, *tail)
            if all(pair_ok(a, b) for a, b in combinations(subset, 2)):
                return subset, count, False
        return None, count, False

    def reduce(results_in_order) -> HadamardSearch:
        examined = 0
        for subset, count, truncated in results_in_order:
            examined += count
            if subset is not None:
                zero = (0,) * len(D[0])
                S = (zero, *subset)
                if not verify_triple(M, D, S):
                    raise AssertionError("search result failed re-verification")
                return HadamardSearch("found", S, search_space, examined)
            if truncated:
                return HadamardSearch("undetermined", None, search_space, examined)
        return HadamardSearch("none", None, search_space, examined)

    if threads > 1 and m > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_stream, i) for i in range(m)]

            def ordered():
                for i, fut in enumerate(futures):
                    yield fut.result()

            try:
                return reduce(ordered())
            finally:
                for fut in futures:
                    fut.cancel()

    def sequential():
        for i in range(m):
            yield run_stream(i)

    return reduce(sequential())


def transport_spectrum_set(
    S: Sequence[Sequence[int]],
    A: Matrix,
    B: Matrix,
    p: int,
    direction: str = "forward",
) -> FrequencySet:
    """Move a spectrum set across a mod-p conjugacy witness (A, B).

    Forward maps S for the original pair to det(AB) * B^T s for the
    conjugated pair; backward maps through |det B|^phi(p) * B^{-T}, which
    is always an integer matrix. Both scalings are congruent to 1 mod p,
    so points on the (1/p)-grid are moved to the matching classes.
    """
    from .linalg import euler_phi

    if mat_mod(mat_mul(A, B), p) != identity(len(A)):
        raise HypothesisViolation("A*B must be the identity mod p")
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    Bt = transpose(B)
    dB, adjB = det_and_adjugate(B)
    if direction == "forward":
        dA, _ = det_and_adjugate(A)
        scale = dA * dB
        out = tuple(tuple(scale * x for x in mat_vec(Bt, s)) for s in S)
    else:
        adjBT = tuple(zip(*adjB))
        scale = Fraction(abs(dB) ** euler_phi(p), dB)
        out = []
        for s in S:
            w = tuple(scale * x for x in mat_vec(adjBT, s))
            if any(c.denominator != 1 for c in w):
                raise NonIntegerResult("backward transport left the integer lattice")
            out.append(tuple(int(c) for c in w))
        out = tuple(out)
    return out

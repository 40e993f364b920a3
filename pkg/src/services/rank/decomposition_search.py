"""
Upper bounds on tensor rank by exact decompositions

Structured tensors are decomposed exactly by slicing one mode (rank factorization of the
flattening, then of every basis slice). Anything smaller is proposed by floating-point
alternating least squares (tensorly parafac), rationalized, completed by an exact linear
solve and kept only if it re-sums to the target bit for bit. When plain rounding leaves
the solution set, part of the proposal is pinned and the rest is solved exactly.
"""

import logging
from fractions import Fraction
from itertools import combinations, islice
from typing import List, Optional, Sequence, Tuple

import numpy as np
import tensorly as tl
from joblib import Parallel, delayed
from tensorly.decomposition import parafac

from config.forge_config import (
    ALS_MAX_ITER,
    ALS_RESTARTS,
    ALS_TOL,
    DENOMINATOR_CAP,
)
from models.tensor import Decomposition, MatrixQ, RankOneTerm, Tensor3
from services.algebra.linalg import (
    SparseVector,
    SpanBasis,
    independent_indices,
    nullspace,
    rank_factorization,
)
from services.algebra.tensor_ops import (
    MODES,
    flatten,
    flattening_ranks,
    matmul_tensor,
    strassen_decomposition,
)

logger = logging.getLogger(__name__)


def slice_decomposition(tensor: Tensor3, mode: str) -> Decomposition:
    """
    Exact decomposition with Σ_l rank(slice_l) terms

    The mode flattening is rank-factorized into Σ_l e-coefficients ⊗ slice_l and every
    slice_l is rank-factorized again as a matrix over the two remaining modes.
    """
    a, b, c = tensor.dims
    shape = {"A": (b, c), "B": (a, c), "C": (a, b)}[mode]
    terms = []
    for coefficients, row in rank_factorization(flatten(tensor, mode)):
        sparse_row = {n: v for n, v in enumerate(row) if v}
        for left, right in rank_factorization(MatrixQ.from_vector(shape, sparse_row)):
            if mode == "A":
                terms.append(RankOneTerm(coefficients, left, right))
            elif mode == "B":
                terms.append(RankOneTerm(left, coefficients, right))
            else:
                terms.append(RankOneTerm(left, right, coefficients))
    return Decomposition(tensor.dims, tuple(terms))


def best_slice_decomposition(tensor: Tensor3) -> Decomposition:
    """Shortest slice decomposition over the three modes (first mode wins ties)"""
    best = None
    for mode in MODES:
        candidate = slice_decomposition(tensor, mode)
        if best is None or len(candidate) < len(best):
            best = candidate
    return best


def known_decomposition(tensor: Tensor3) -> Optional[Decomposition]:
    """Library of known short schemes"""
    if tensor.dims == (4, 4, 4) and tensor == matmul_tensor(2, 2, 2):
        return strassen_decomposition()
    return None


# ----------------------------------------------------------------------------
# Floating-point proposals
# ----------------------------------------------------------------------------


def cp_als(
    dense: np.ndarray, rank: int, seed: int, max_iter: int = ALS_MAX_ITER, tol: float = ALS_TOL
) -> Tuple[List[np.ndarray], float]:
    """
    CP decomposition by alternating least squares (tensorly parafac)

    Args:
        dense: target as a float array
        rank: number of components
        seed: seed of the random initialization
        max_iter: iteration cap
        tol: convergence tolerance on the reconstruction error

    Returns:
        ([A, B, C] factor matrices, relative residual)
    """
    target = tl.tensor(dense)
    weights, factors = parafac(
        target,
        rank,
        n_iter_max=max_iter,
        init="random",
        tol=tol,
        random_state=seed,
    )
    approx = tl.cp_to_tensor((weights, factors))
    norm = float(tl.norm(target)) or 1.0
    residual = float(tl.norm(approx - target)) / norm
    factors = [np.asarray(tl.to_numpy(f), dtype=float) for f in factors]
    factors[0] = factors[0] * np.asarray(tl.to_numpy(weights), dtype=float)
    return factors, residual


def _rationalize(vector: np.ndarray, cap: int) -> List[Fraction]:
    """Scale so the largest entry is one, then round every entry to a nearby rational"""
    peak = vector[np.argmax(np.abs(vector))]
    if peak == 0:
        return [Fraction(0)] * len(vector)
    return [Fraction(float(v / peak)).limit_denominator(cap) for v in vector]


def exact_completion(
    tensor: Tensor3, xs: Sequence[List[Fraction]], ys: Sequence[List[Fraction]]
) -> Optional[Decomposition]:
    """
    Solve exactly for the C factors given rational A and B factors

    Every C-slice T(e_k*) must lie in the span of the x_l ⊗ y_l; its coordinates give z_l[k].
    """
    a, b, c = tensor.dims
    basis = SpanBasis(track=True)
    basis.extend([MatrixQ.outer(x, y).vectorize() for x, y in zip(xs, ys)], range(len(xs)))
    slices = flatten(tensor, "C").row_map()
    order = sorted(slices)
    zs = [[Fraction(0)] * c for _ in xs]
    for k, coefficients in zip(order, basis.express_all([slices[k] for k in order])):
        if coefficients is None:
            return None
        for l, value in coefficients.items():
            zs[l][k] = value
    terms = tuple(
        RankOneTerm(x, y, z)
        for x, y, z in zip(xs, ys, zs)
        if any(x) and any(y) and any(z)
    )
    decomposition = Decomposition(tensor.dims, terms)
    return decomposition if decomposition.certifies(tensor) else None


def _solve_partner(
    span: Sequence[SparseVector], x: List[Fraction], guess: np.ndarray, b: int, cap: int
) -> Optional[List[Fraction]]:
    """
    A rational y with x ⊗ y inside the span, chosen close to the float guess

    The admissible y form the linear space read off the relations between the span
    generators and the matrices x ⊗ e_j; any rational combination of its basis stays
    admissible, so only the combination weights are rounded.
    """
    units = [
        MatrixQ.outer(x, [Fraction(int(i == j)) for i in range(b)]).vectorize() for j in range(b)
    ]
    relations = nullspace(list(span) + units)
    partners = [rel[len(span):] for rel in relations if any(rel[len(span):])]
    if not partners:
        return None
    directions = np.array([[float(v) for v in p] for p in partners]).T
    weights = np.linalg.lstsq(directions, guess, rcond=None)[0]
    if not np.any(np.abs(weights) > 1e-12):
        weights = np.zeros(len(partners))
        weights[0] = 1.0
    ws = [Fraction(float(w)).limit_denominator(cap) for w in weights]
    y = [sum((w * p[j] for w, p in zip(ws, partners)), Fraction(0)) for j in range(b)]
    return y if any(y) else None


def _complete_around(
    tensor: Tensor3,
    xs: List[List[Fraction]],
    rounded_ys: List[List[Fraction]],
    pinned: Sequence[int],
    guesses: np.ndarray,
    cap: int,
) -> Optional[Decomposition]:
    b = tensor.dims[1]
    span = list(flatten(tensor, "C").row_map().values())
    span += [MatrixQ.outer(xs[l], rounded_ys[l]).vectorize() for l in pinned]
    span = [span[n] for n in independent_indices(span)]
    ys = []
    for l, x in enumerate(xs):
        if l in pinned:
            ys.append(rounded_ys[l])
        elif not any(x):
            ys.append([Fraction(0)] * b)
        else:
            y = _solve_partner(span, x, guesses[:, l], b, cap)
            if y is None:
                return None
            ys.append(y)
    return exact_completion(tensor, xs, ys)


def pinned_completion(
    tensor: Tensor3, factors: List[np.ndarray], cap: int = DENOMINATOR_CAP
) -> Optional[Decomposition]:
    """
    Exact completion when the float proposal sits on a continuum of decompositions

    r - s terms (s the C-flattening rank) are rounded outright and pin the span
    V = <C-slices, pinned x ⊗ y>. Every other term keeps its rounded x while y is
    solved exactly from x ⊗ y ∈ V. Up to r choices of pinned terms are tried.
    """
    rank = factors[0].shape[1]
    slices = list(flatten(tensor, "C").row_map().values())
    size = max(rank - len(independent_indices(slices)), 0)
    xs = [_rationalize(factors[0][:, l], cap) for l in range(rank)]
    rounded_ys = [_rationalize(factors[1][:, l], cap) for l in range(rank)]
    for pinned in islice(combinations(range(rank), size), rank):
        found = _complete_around(tensor, xs, rounded_ys, pinned, factors[1], cap)
        if found is not None:
            return found
    return None


def _attempt(tensor: Tensor3, rank: int, seed: int, max_iter: int, cap: int) -> Optional[Decomposition]:
    factors, residual = cp_als(tensor.to_numpy(), rank, seed, max_iter)
    if not all(np.all(np.isfinite(f)) for f in factors):
        return None
    if residual <= 1e-6:
        xs = [_rationalize(factors[0][:, l], cap) for l in range(rank)]
        ys = [_rationalize(factors[1][:, l], cap) for l in range(rank)]
        found = exact_completion(tensor, xs, ys)
        if found is not None:
            return found
    return pinned_completion(tensor, factors, cap)


def als_search(
    tensor: Tensor3,
    target_r: int,
    restarts: int = ALS_RESTARTS,
    seed: int = 0,
    workers: int = 1,
    max_iter: int = ALS_MAX_ITER,
) -> Optional[Decomposition]:
    """Seeded ALS restarts in parallel; the first success in restart order wins"""
    if target_r < 1:
        return None
    results = Parallel(n_jobs=workers)(
        delayed(_attempt)(tensor, target_r, seed + n, max_iter, DENOMINATOR_CAP)
        for n in range(restarts)
    )
    for decomposition in results:
        if decomposition is not None:
            return decomposition
    return None


def decomposition_search(
    tensor: Tensor3,
    target_r: int,
    restarts: int = ALS_RESTARTS,
    seed: int = 0,
    workers: int = 1,
) -> Optional[Decomposition]:
    """
    An exact Decomposition with at most target_r terms, or None

    None proves nothing about the rank.
    """
    if target_r < 0:
        return None
    if tensor.is_zero():
        return Decomposition(tensor.dims, ())
    for candidate in (known_decomposition(tensor), best_slice_decomposition(tensor)):
        if candidate is not None and len(candidate) <= target_r:
            return candidate
    if target_r < max(flattening_ranks(tensor)):
        return None
    logger.debug(f"ALS search for {target_r} terms on {tensor.dims}")
    return als_search(tensor, target_r, restarts, seed, workers)

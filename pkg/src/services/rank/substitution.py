"""
Substitution-method lower bounds

Every mode is handled through the canonical mode C after a mode permutation. For
W ⊆ T(C*) and any modification T' = T + Σ w_l ⊗ c_l:

    T'(A*) ⊆ T(A*) + P ⊗ C,  P = span of the rows of the w_l
    T'(B*) ⊆ T(B*) + Q ⊗ C,  Q = span of the columns of the w_l
    T'(C*) + W = T(C*) + W

so the quotient ranks below are invariant under modification and
R(T) >= dim W + max(q_A, q_B, r_C − dim W).
"""

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from models.errors import SubspaceContainmentError, ValidationError
from models.subspace import MatrixSubspace
from models.tensor import MatrixQ, Tensor3
from services.algebra.linalg import SpanBasis, matrix_rank, rank_of_vectors
from services.algebra.tensor_ops import flatten, flattening_ranks, mode_axis, permute_modes

logger = logging.getLogger(__name__)

# mode -> permutation that moves it to the C position (ambient of W kept in order)
_TO_C = {"A": (1, 2, 0), "B": (0, 2, 1), "C": (0, 1, 2)}


def to_canonical(tensor: Tensor3, mode: str) -> Tensor3:
    """Permute modes so that `mode` becomes mode C"""
    mode_axis(mode)
    return permute_modes(tensor, _TO_C[mode.upper()])


def _check_containment(tensor: Tensor3, subspace: MatrixSubspace, mode: str) -> None:
    a, b, _ = tensor.dims
    if subspace.ambient_dims != (a, b):
        raise ValidationError(
            f"W must live in {(a, b)} matrices for mode {mode}, got {subspace.ambient_dims}"
        )
    image = SpanBasis()
    image.extend(list(flatten(tensor, "C").row_map().values()))
    for vec in subspace.vectors():
        if not image.contains(vec):
            raise SubspaceContainmentError(f"W ⊄ T({mode.upper()}*)")


def _factor_space(subspace: MatrixSubspace, side: str) -> List[Dict[int, Fraction]]:
    """Rows (side "row") or columns (side "col") of every basis matrix"""
    vectors = []
    for matrix in subspace.basis:
        source = matrix if side == "row" else matrix.transpose()
        vectors.extend(source.row_map().values())
    return vectors


def _quotient_rank(flattening: MatrixQ, factor: List[Dict[int, Fraction]], c: int) -> int:
    """rank of the flattening rows modulo factor ⊗ C (row vectors indexed f*c + k)"""
    if not factor:
        return rank_of_vectors(flattening.row_map().values())
    tensored = [
        {f * c + k: v for f, v in vec.items()} for vec in factor for k in range(c)
    ]
    base = rank_of_vectors(tensored)
    total = rank_of_vectors(tensored + list(flattening.row_map().values()))
    return total - base


def quotient_flattening_rank(
    tensor: Tensor3, subspace: MatrixSubspace, mode: str, other_mode: str
) -> int:
    """
    Rank of the other_mode flattening modulo the contraction space of W

    Args:
        tensor: T
        subspace: W ⊆ T(mode*)
        mode: mode the subspace belongs to
        other_mode: one of the two remaining modes

    Returns:
        The invariant quotient rank
    """
    mode = mode.upper()
    other_mode = other_mode.upper()
    if other_mode == mode:
        raise ValidationError("other_mode must differ from mode")
    canonical = to_canonical(tensor, mode)
    _check_containment(canonical, subspace, mode)
    # position of other_mode after the permutation
    position = _TO_C[mode].index(mode_axis(other_mode))
    c = canonical.dims[2]
    if position == 0:
        return _quotient_rank(flatten(canonical, "A"), _factor_space(subspace, "row"), c)
    return _quotient_rank(flatten(canonical, "B"), _factor_space(subspace, "col"), c)


def substitution_lower_bound(tensor: Tensor3, subspace: MatrixSubspace, mode: str) -> int:
    """
    R(T) >= dim W + max(q_A, q_B, r_C − dim W) with W ⊆ T(mode*)

    Raises:
        SubspaceContainmentError: W is not inside the flattening image
    """
    mode = mode.upper()
    canonical = to_canonical(tensor, mode)
    _check_containment(canonical, subspace, mode)
    c = canonical.dims[2]
    q_a = _quotient_rank(flatten(canonical, "A"), _factor_space(subspace, "row"), c)
    q_b = _quotient_rank(flatten(canonical, "B"), _factor_space(subspace, "col"), c)
    r_c = flattening_ranks(canonical)[2]
    bound = subspace.dim + max(q_a, q_b, r_c - subspace.dim)
    logger.debug(
        f"substitution bound mode {mode}: dim W={subspace.dim}, q_A={q_a}, q_B={q_b}, "
        f"r_C={r_c} -> {bound}"
    )
    return bound


def rank_one_slices(tensor: Tensor3, mode: str) -> List[MatrixQ]:
    """Rank-one slices T(e_n*) of a mode, as matrices in the canonical (A, B) layout"""
    canonical = to_canonical(tensor, mode)
    a, b, _ = canonical.dims
    found = []
    for _, row in sorted(flatten(canonical, "C").row_map().items()):
        matrix = MatrixQ.from_vector((a, b), row)
        if matrix_rank(matrix) == 1:
            found.append(matrix)
    return found


def best_substitution_bound(tensor: Tensor3) -> Tuple[int, str]:
    """
    Best bound over W spanned by the rank-one slices of each flattening image

    Returns:
        (bound, description of the winning W); (0, "") for the zero tensor
    """
    best, witness = 0, ""
    for mode in ("A", "B", "C"):
        slices = rank_one_slices(tensor, mode)
        if not slices:
            continue
        a, b = slices[0].dims
        candidates = [MatrixSubspace.spanned_by((a, b), slices)]
        candidates += [MatrixSubspace((a, b), (s,)) for s in slices[:1]]
        for subspace in candidates:
            bound = substitution_lower_bound(tensor, subspace, mode)
            if bound > best:
                best = bound
                witness = f"substitution mode {mode}, dim W = {subspace.dim}"
    return best, witness

"""
Tensor-building combinators: corresponding tensors, clones, modifications, augmentation
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence

from models.errors import ValidationError
from models.subspace import MatrixSubspace, ModificationPlan
from models.tensor import MatrixQ, Tensor3
from services.algebra.linalg import spans_equal
from services.algebra.tensor_ops import flatten, kronecker, mode_axis

logger = logging.getLogger(__name__)

# C is applied first, then B, then A
MODIFICATION_ORDER = ("C", "B", "A")


def mode_ambient(dims: Sequence[int], mode: str) -> tuple:
    """Ambient matrix shape of the flattening image for a mode"""
    a, b, c = dims
    return [(b, c), (a, c), (a, b)][mode_axis(mode)]


def corresponding_tensor(subspace: MatrixSubspace) -> Tensor3:
    """T_U = sum_j e_j ⊗ u_j with dims (dim U, rows, cols)"""
    if subspace.dim == 0:
        raise ValidationError("corresponding tensor of an empty basis")
    rows, cols = subspace.ambient_dims
    return Tensor3(
        (subspace.dim, rows, cols),
        {
            (n, i, j): v
            for n, matrix in enumerate(subspace.basis)
            for (i, j), v in matrix.entries.items()
        },
    )


def clone_tensor(tensor: Tensor3, v: int) -> Tensor3:
    """Σ-clone for |Σ| = v: the Kronecker product with the all-ones v x v x v tensor"""
    if v < 1:
        raise ValidationError(f"clone size must be >= 1, got {v}")
    if v == 1:
        return tensor
    return kronecker(tensor, Tensor3.ones((v, v, v)))


def clone_matrix(matrix: MatrixQ, v: int) -> MatrixQ:
    """Matrix clone: Kronecker product with the all-ones v x v matrix"""
    if v < 1:
        raise ValidationError(f"clone size must be >= 1, got {v}")
    return matrix.kron(MatrixQ.ones(v, v))


def clone_subspace(subspace: MatrixSubspace, v: int) -> MatrixSubspace:
    """
    Σ-clone of a matrix subspace: the A-flattening image of the cloned corresponding tensor

    Args:
        subspace: U inside rows x cols matrices
        v: clone size

    Returns:
        U^Σ inside (rows*v) x (cols*v) matrices, of dimension dim U
    """
    rows, cols = subspace.ambient_dims
    ambient = (rows * v, cols * v)
    if subspace.dim == 0:
        return MatrixSubspace.empty(ambient)
    cloned = clone_tensor(corresponding_tensor(subspace), v)
    image = flatten(cloned, "A")
    slices = [
        MatrixQ.from_vector(ambient, row) for _, row in sorted(image.row_map().items())
    ]
    return MatrixSubspace.spanned_by(ambient, slices)


def _plan_entries(dims: Sequence[int], plan: ModificationPlan) -> List[tuple]:
    a, b, c = dims
    expected = mode_ambient(dims, plan.mode)
    if plan.subspace.ambient_dims != expected:
        raise ValidationError(
            f"mode {plan.mode} subspace must live in {expected} matrices, "
            f"got {plan.subspace.ambient_dims}"
        )
    mode_dim = dims[mode_axis(plan.mode)]
    if plan.coefficients.cols != mode_dim:
        raise ValidationError(
            f"mode {plan.mode} coefficients need {mode_dim} columns, "
            f"got {plan.coefficients.cols}"
        )
    items = []
    for (l, n), coefficient in plan.coefficients.entries.items():
        for (p, q), w in plan.subspace.basis[l].entries.items():
            if plan.mode == "A":
                idx = (n, p, q)
            elif plan.mode == "B":
                idx = (p, n, q)
            else:
                idx = (p, q, n)
            items.append((idx, coefficient * w))
    return items


def modify(tensor: Tensor3, plans: Sequence[ModificationPlan]) -> Tensor3:
    """
    Modification T + sum_l w_l ⊗ c_l, one plan per mode at most, applied C, B, A
    """
    by_mode: Dict[str, ModificationPlan] = {}
    for plan in plans:
        if plan.mode in by_mode:
            raise ValidationError(f"more than one modification plan for mode {plan.mode}")
        by_mode[plan.mode] = plan
    result = tensor
    for mode in MODIFICATION_ORDER:
        plan = by_mode.get(mode)
        if plan is None:
            continue
        result = Tensor3.from_entries(
            result.dims,
            list(result.entries.items()) + _plan_entries(result.dims, plan),
        )
        logger.debug(f"applied mode {mode} modification (dim W = {plan.subspace.dim})")
    return result


def augment(
    tensor: Tensor3,
    ua: MatrixSubspace,
    ub: MatrixSubspace,
    uc: MatrixSubspace,
) -> Tensor3:
    """
    Augmented tensor T + T_{U_A} + T_{U_B} + T_{U_C}

    Args:
        tensor: T with dims (a, b, c)
        ua: U_A inside b x c matrices; its basis index takes the appended A coordinates
        ub: U_B inside a x c matrices; appended B coordinates
        uc: U_C inside a x b matrices; appended C coordinates

    Returns:
        Tensor with dims (a + dim U_A, b + dim U_B, c + dim U_C)
    """
    a, b, c = tensor.dims
    for name, subspace, expected in (("U_A", ua, (b, c)), ("U_B", ub, (a, c)), ("U_C", uc, (a, b))):
        if subspace.ambient_dims != expected:
            raise ValidationError(
                f"{name} must live in {expected} matrices, got {subspace.ambient_dims}"
            )
    entries: Dict[tuple, Fraction] = dict(tensor.entries)
    for n, matrix in enumerate(ua.basis):
        for (j, k), v in matrix.entries.items():
            entries[(a + n, j, k)] = v
    for n, matrix in enumerate(ub.basis):
        for (i, k), v in matrix.entries.items():
            entries[(i, b + n, k)] = v
    for n, matrix in enumerate(uc.basis):
        for (i, j), v in matrix.entries.items():
            entries[(i, j, c + n)] = v
    return Tensor3((a + ua.dim, b + ub.dim, c + uc.dim), entries)


def quotient_image_agrees(
    tensor: Tensor3, modified: Tensor3, subspace: MatrixSubspace, mode: str
) -> bool:
    """T(mode*) + W == T'(mode*) + W, checked exactly on spans"""
    if tensor.dims != modified.dims:
        raise ValidationError(f"dims mismatch {tensor.dims} vs {modified.dims}")
    extra = subspace.vectors()
    first = list(flatten(tensor, mode).row_map().values()) + extra
    second = list(flatten(modified, mode).row_map().values()) + extra
    return spans_equal(first, second)

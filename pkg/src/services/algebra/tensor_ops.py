"""
Sparse order-3 tensor operations: flattenings, support, sums, products
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from models.errors import SupportError, ValidationError
from models.tensor import Decomposition, MatrixQ, RankOneTerm, Tensor3
from services.algebra.linalg import independent_indices, matrix_rank

logger = logging.getLogger(__name__)

MODES = ("A", "B", "C")
_AXIS = {"A": 0, "B": 1, "C": 2}


def mode_axis(mode: str) -> int:
    try:
        return _AXIS[mode.upper()]
    except (KeyError, AttributeError):
        raise ValidationError(f"mode must be one of A, B, C; got {mode!r}")


def flatten(tensor: Tensor3, mode: str) -> MatrixQ:
    """
    Flattening of a tensor along one mode

    Args:
        tensor: source tensor with dims (a, b, c)
        mode: "A" -> a x (b*c), column j*c+k; "B" -> b x (a*c), column i*c+k;
            "C" -> c x (a*b), column i*b+j

    Returns:
        The flattening matrix, row n being the slice T(e_n*)
    """
    a, b, c = tensor.dims
    axis = mode_axis(mode)
    if axis == 0:
        return MatrixQ((a, b * c), {(i, j * c + k): v for (i, j, k), v in tensor.entries.items()})
    if axis == 1:
        return MatrixQ((b, a * c), {(j, i * c + k): v for (i, j, k), v in tensor.entries.items()})
    return MatrixQ((c, a * b), {(k, i * b + j): v for (i, j, k), v in tensor.entries.items()})


def slices(tensor: Tensor3, mode: str) -> Dict[int, MatrixQ]:
    """Nonzero slices T(e_n*) as matrices over the two remaining modes"""
    a, b, c = tensor.dims
    axis = mode_axis(mode)
    shape = [(b, c), (a, c), (a, b)][axis]
    buckets: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
    for idx, v in tensor.entries.items():
        rest = tuple(idx[n] for n in range(3) if n != axis)
        buckets.setdefault(idx[axis], {})[rest] = v
    return {n: MatrixQ(shape, entries) for n, entries in buckets.items()}


def flattening_ranks(tensor: Tensor3) -> Tuple[int, int, int]:
    """The three flattening ranks (rA, rB, rC)"""
    return tuple(matrix_rank(flatten(tensor, mode)) for mode in MODES)


def concise_modes(tensor: Tensor3) -> Tuple[bool, bool, bool]:
    """Per-mode conciseness: flattening rank equals the mode dimension"""
    ranks = flattening_ranks(tensor)
    return tuple(r == d for r, d in zip(ranks, tensor.dims))


def is_concise(tensor: Tensor3) -> bool:
    return all(concise_modes(tensor))


def support_indices(tensor: Tensor3) -> Tuple[List[int], List[int], List[int]]:
    """Lexicographically first coordinate sets whose slices form bases of each flattening image"""
    picks = []
    for mode in MODES:
        matrix = flatten(tensor, mode)
        rows = matrix.row_map()
        vectors = [rows.get(n, {}) for n in range(matrix.rows)]
        picks.append(independent_indices(vectors))
    return picks[0], picks[1], picks[2]


def support(tensor: Tensor3) -> Tensor3:
    """
    Concise restriction of a tensor to coordinate subspaces

    Coordinates are chosen so that each coordinate projection is injective on the
    span of the corresponding fibers, which makes the result isomorphic to T.
    """
    if tensor.is_zero():
        raise SupportError("no support: the zero tensor has no concise restriction")
    rows_a, rows_b, rows_c = support_indices(tensor)
    return restrict(tensor, rows_a, rows_b, rows_c)


def direct_sum(first: Tensor3, second: Tensor3) -> Tensor3:
    """Block direct sum: first in the leading block, second in the trailing one"""
    a1, b1, c1 = first.dims
    dims = tuple(d1 + d2 for d1, d2 in zip(first.dims, second.dims))
    entries = dict(first.entries)
    for (i, j, k), v in second.entries.items():
        entries[(i + a1, j + b1, k + c1)] = v
    return Tensor3(dims, entries)


def kronecker(first: Tensor3, second: Tensor3) -> Tensor3:
    """Kronecker product with entry ((i1*a2+i2), (j1*b2+j2), (k1*c2+k2))"""
    a2, b2, c2 = second.dims
    dims = tuple(d1 * d2 for d1, d2 in zip(first.dims, second.dims))
    return Tensor3(
        dims,
        {
            (i1 * a2 + i2, j1 * b2 + j2, k1 * c2 + k2): v1 * v2
            for (i1, j1, k1), v1 in first.entries.items()
            for (i2, j2, k2), v2 in second.entries.items()
        },
    )


def restrict(
    tensor: Tensor3, rows_a: Sequence[int], rows_b: Sequence[int], rows_c: Sequence[int]
) -> Tensor3:
    """Subtensor on the selected coordinate slices (kept in the given order)"""
    positions = []
    for n, rows in enumerate((rows_a, rows_b, rows_c)):
        rows = list(rows)
        if not rows:
            raise ValidationError(f"empty index list for mode {MODES[n]}")
        if len(set(rows)) != len(rows):
            raise ValidationError(f"duplicate indices for mode {MODES[n]}: {rows}")
        if any(not 0 <= r < tensor.dims[n] for r in rows):
            raise ValidationError(
                f"index out of range for mode {MODES[n]} (dim {tensor.dims[n]}): {rows}"
            )
        positions.append({r: p for p, r in enumerate(rows)})
    pa, pb, pc = positions
    return Tensor3(
        (len(pa), len(pb), len(pc)),
        {
            (pa[i], pb[j], pc[k]): v
            for (i, j, k), v in tensor.entries.items()
            if i in pa and j in pb and k in pc
        },
    )


def permute_modes(tensor: Tensor3, order: Sequence[int]) -> Tensor3:
    """Reorder modes: new mode n is old mode order[n]"""
    order = tuple(order)
    if sorted(order) != [0, 1, 2]:
        raise ValidationError(f"order must be a permutation of (0, 1, 2), got {order}")
    dims = tuple(tensor.dims[o] for o in order)
    return Tensor3(
        dims, {tuple(idx[o] for o in order): v for idx, v in tensor.entries.items()}
    )


def relabel(tensor: Tensor3, perms: Sequence[Sequence[int]]) -> Tensor3:
    """Relabel basis indices of every mode by the given permutations"""
    pa, pb, pc = perms
    return Tensor3(
        tensor.dims,
        {(pa[i], pb[j], pc[k]): v for (i, j, k), v in tensor.entries.items()},
    )


def trivial_rank_bounds(tensor: Tensor3) -> Tuple[int, int]:
    """max flattening rank <= R(T) <= min pairwise product of flattening ranks"""
    ra, rb, rc = flattening_ranks(tensor)
    return max(ra, rb, rc), min(ra * rb, ra * rc, rb * rc)


def matmul_tensor(i: int, j: int, k: int) -> Tensor3:
    """Structure tensor of (i x j) times (j x k) matrix multiplication"""
    if min(i, j, k) < 1:
        raise ValidationError(f"matmul_tensor needs positive sizes, got {(i, j, k)}")
    return Tensor3(
        (i * j, j * k, i * k),
        {
            (p * j + q, q * k + s, p * k + s): Fraction(1)
            for p in range(i)
            for q in range(j)
            for s in range(k)
        },
    )


# Strassen's seven products for the 2x2x2 structure tensor, as (x, y, z) rows
_STRASSEN = [
    ([1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]),
    ([0, 0, 1, 1], [1, 0, 0, 0], [0, 0, 1, -1]),
    ([1, 0, 0, 0], [0, 1, 0, -1], [0, 1, 0, 1]),
    ([0, 0, 0, 1], [-1, 0, 1, 0], [1, 0, 1, 0]),
    ([1, 1, 0, 0], [0, 0, 0, 1], [-1, 1, 0, 0]),
    ([-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]),
    ([0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0]),
]


def strassen_decomposition() -> Decomposition:
    """Seven-term rational decomposition of matmul_tensor(2, 2, 2)"""
    return Decomposition((4, 4, 4), tuple(RankOneTerm(x, y, z) for x, y, z in _STRASSEN))

"""
Two-by-two-by-two block bookkeeping of a tensor over split spaces

A tensor on (A1 ⊕ A2) ⊗ (B1 ⊕ B2) ⊗ (C1 ⊕ C2) is cut into eight blocks T_ijk.
The two diagonal blocks are modified by the flattening images of the six
off-diagonal ones, which is how the direct-sum counterexample is assembled.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from models.errors import ValidationError
from models.subspace import MatrixSubspace, ModificationPlan
from models.tensor import MatrixQ, Tensor3
from services.algebra.linalg import SpanBasis
from services.algebra.tensor_ops import direct_sum, flatten, restrict
from services.constructions.builders import modify

logger = logging.getLogger(__name__)

BlockKey = Tuple[int, int, int]
Split = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]

# (block, flattened mode, diagonal block it modifies)
MODIFYING_BLOCKS = (
    ((2, 1, 1), "A", (1, 1, 1)),
    ((1, 2, 1), "B", (1, 1, 1)),
    ((1, 1, 2), "C", (1, 1, 1)),
    ((1, 2, 2), "A", (2, 2, 2)),
    ((2, 1, 2), "B", (2, 2, 2)),
    ((2, 2, 1), "C", (2, 2, 2)),
)


@dataclass(frozen=True)
class BlockSplit:
    """The eight blocks of a tensor with their split sizes"""

    split: Split
    blocks: Dict[BlockKey, Tensor3]

    def block(self, i: int, j: int, k: int) -> Tensor3:
        return self.blocks[(i, j, k)]

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(p + q for p, q in self.split)


def _ranges(split: Split) -> List[Tuple[range, range]]:
    return [(range(0, p), range(p, p + q)) for p, q in split]


def split_blocks(tensor: Tensor3, split: Split) -> BlockSplit:
    """Cut T into T_ijk = T restricted to A_i* ⊗ B_j* ⊗ C_k*"""
    split = tuple(tuple(part) for part in split)
    if len(split) != 3 or any(len(part) != 2 or min(part) < 1 for part in split):
        raise ValidationError(f"split needs three positive pairs, got {split}")
    if tuple(p + q for p, q in split) != tensor.dims:
        raise ValidationError(f"split {split} does not sum to dims {tensor.dims}")
    ranges = _ranges(split)
    blocks = {
        (i, j, k): restrict(tensor, ranges[0][i - 1], ranges[1][j - 1], ranges[2][k - 1])
        for i in (1, 2)
        for j in (1, 2)
        for k in (1, 2)
    }
    return BlockSplit(split, blocks)


def _image_slices(block: Tensor3, mode: str) -> List[MatrixQ]:
    a, b, c = block.dims
    shape = {"A": (b, c), "B": (a, c), "C": (a, b)}[mode]
    rows = flatten(block, mode).row_map()
    return [MatrixQ.from_vector(shape, rows[n]) for n in sorted(rows)]


def modification_spaces(split: BlockSplit) -> Dict[str, MatrixSubspace]:
    """
    The six spaces T211(A2*), T121(B2*), T112(C2*) and T122(A1*), T212(B1*), T221(C1*)

    Keys read like "T211(A*)"; the first three modify T111, the last three T222.
    """
    spaces = {}
    for key, mode, _ in MODIFYING_BLOCKS:
        block = split.block(*key)
        a, b, c = block.dims
        shape = {"A": (b, c), "B": (a, c), "C": (a, b)}[mode]
        name = "T{}{}{}({}*)".format(*key, mode)
        spaces[name] = MatrixSubspace.spanned_by(shape, _image_slices(block, mode))
    return spaces


def _embed(matrix: MatrixQ, offsets: Tuple[int, int], dims: Tuple[int, int]) -> MatrixQ:
    return MatrixQ(dims, {(i + offsets[0], j + offsets[1]): v for (i, j), v in matrix.entries.items()})


def reassemble(split: BlockSplit) -> Tensor3:
    """
    Rebuild T as a modification of T111 ⊕ T222 by the six off-diagonal images

    Every off-diagonal block is written as sum_n e_n ⊗ slice_n with slices expressed in
    a basis of its image, which yields one ModificationPlan per mode over the full dims.
    """
    base = direct_sum(split.block(1, 1, 1), split.block(2, 2, 2))
    dims = base.dims
    starts = [(0, p) for p, _ in split.split]
    plans = []
    for mode, axis in (("A", 0), ("B", 1), ("C", 2)):
        others = [n for n in range(3) if n != axis]
        ambient = (dims[others[0]], dims[others[1]])
        generators: List[MatrixQ] = []
        coefficients: Dict[Tuple[int, int], Fraction] = {}
        for key, block_mode, _ in MODIFYING_BLOCKS:
            if block_mode != mode:
                continue
            block = split.block(*key)
            offsets = (starts[others[0]][key[others[0]] - 1], starts[others[1]][key[others[1]] - 1])
            mode_offset = starts[axis][key[axis] - 1]
            rows = flatten(block, mode).row_map()
            shape = (block.dims[others[0]], block.dims[others[1]])
            basis = SpanBasis(track=True)
            first = len(generators)
            order = sorted(rows)
            position: Dict[int, int] = {}
            for l, n in enumerate(basis.extend([rows[n] for n in order], order)):
                generators.append(_embed(MatrixQ.from_vector(shape, rows[n]), offsets, ambient))
                position[n] = first + l
            for n, found in zip(order, basis.express_all([rows[n] for n in order])):
                for tag, value in found.items():
                    coefficients[(position[tag], mode_offset + n)] = value
        if generators:
            subspace = MatrixSubspace(ambient, tuple(generators))
            matrix = MatrixQ((len(generators), dims[axis]), coefficients)
            plans.append(ModificationPlan(mode, subspace, matrix))
    result = modify(base, plans)
    logger.debug(f"reassembled {dims} tensor from {len(plans)} modification plans")
    return result


def assembly_dimensions(
    split: Sequence[Sequence[int]], sigma: int, m_dims: Dict[str, Sequence[int]]
) -> Dict[str, Any]:
    """
    Dimension bookkeeping of the two augmented tensors and their direct sum

    Args:
        split: ((a1, a2), (b1, b2), (c1, c2))
        sigma: common clone size
        m_dims: {"A": (m_A1, m_A2), "B": (...), "C": (...)}, dimensions of the
            rank-one-spanned spaces used for augmentation

    Returns:
        Dims of both augmented tensors and of their sum, the totals m_A, m_B, m_C and
        the quantities a certificate of strict subadditivity must supply
    """
    if sigma < 1:
        raise ValidationError(f"sigma must be >= 1, got {sigma}")
    split = [tuple(part) for part in split]
    first = tuple(part[0] * sigma + m_dims[mode][0] for part, mode in zip(split, "ABC"))
    second = tuple(part[1] * sigma + m_dims[mode][1] for part, mode in zip(split, "ABC"))
    totals = {f"m_{mode}": int(m_dims[mode][0]) + int(m_dims[mode][1]) for mode in "ABC"}
    shift = sum(totals.values())
    return {
        "T1_dims": list(first),
        "T2_dims": list(second),
        "sum_dims": [p + q for p, q in zip(first, second)],
        **totals,
        "shift": shift,
        "certificate": [
            f"R(T1 ⊕ T2) - {shift} <= R(T)",
            f"R(T) < R(T1) + R(T2) - {shift}",
            "together: R(T1 ⊕ T2) < R(T1) + R(T2)",
        ],
    }

"""
Tests for corresponding tensors, clones, modifications, augmentation and block assembly
"""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.errors import ValidationError
from models.subspace import MatrixSubspace, ModificationPlan
from models.tensor import MatrixQ, Tensor3
from services.algebra.tensor_ops import flatten, flattening_ranks
from services.constructions.block_assembly import (
    assembly_dimensions,
    modification_spaces,
    reassemble,
    split_blocks,
)
from services.constructions.builders import (
    augment,
    clone_matrix,
    clone_subspace,
    clone_tensor,
    corresponding_tensor,
    modify,
    quotient_image_agrees,
)


@st.composite
def tensors_with_split(draw):
    split = tuple(
        (draw(st.integers(1, 2)), draw(st.integers(1, 2))) for _ in range(3)
    )
    dims = tuple(p + q for p, q in split)
    size = dims[0] * dims[1] * dims[2]
    values = draw(st.lists(st.integers(-2, 2), min_size=size, max_size=size))
    coords = product(*(range(d) for d in dims))
    return Tensor3.from_entries(dims, zip(coords, values)), split


def _unit_subspace(dims, *positions):
    return MatrixSubspace(dims, tuple(MatrixQ.unit(dims, i, j) for i, j in positions))


def test_corresponding_tensor_glues_basis_along_new_mode():
    subspace = _unit_subspace((2, 3), (0, 1), (1, 2))
    tensor = corresponding_tensor(subspace)
    assert tensor.dims == (2, 2, 3)
    assert tensor.entries == {(0, 0, 1): 1, (1, 1, 2): 1}
    assert flattening_ranks(tensor)[0] == subspace.dim


def test_corresponding_tensor_of_empty_basis_fails():
    with pytest.raises(ValidationError):
        corresponding_tensor(MatrixSubspace.empty((2, 2)))


def test_clone_of_size_one_is_identity():
    tensor = Tensor3.diagonal(2)
    assert clone_tensor(tensor, 1) == tensor
    with pytest.raises(ValidationError):
        clone_tensor(tensor, 0)


def test_clone_dimensions_and_entries():
    cloned = clone_tensor(Tensor3.diagonal(2), 2)
    assert cloned.dims == (4, 4, 4)
    assert cloned.nnz == 16
    assert cloned.get(1, 0, 1) == 1
    assert cloned.get(2, 3, 2) == 1
    assert cloned.get(0, 2, 0) == 0


@given(st.lists(st.integers(-2, 2), min_size=8, max_size=8), st.integers(2, 3))
@settings(max_examples=25, deadline=None)
def test_clone_preserves_flattening_ranks(values, v):
    tensor = Tensor3.from_entries((2, 2, 2), zip(product(range(2), repeat=3), values))
    assert flattening_ranks(clone_tensor(tensor, v)) == flattening_ranks(tensor)


def test_clone_matrix_and_subspace():
    matrix = MatrixQ.from_rows([[1, 2]])
    assert clone_matrix(matrix, 2) == MatrixQ.from_rows([[1, 1, 2, 2], [1, 1, 2, 2]])
    subspace = _unit_subspace((2, 2), (0, 0), (1, 1))
    cloned = clone_subspace(subspace, 3)
    assert cloned.ambient_dims == (6, 6)
    assert cloned.dim == 2


def test_modify_adds_rank_one_terms_in_mode_c():
    tensor = Tensor3.diagonal(2)
    subspace = _unit_subspace((2, 2), (0, 1))
    plan = ModificationPlan("C", subspace, MatrixQ.from_rows([[1, 3]]))
    modified = modify(tensor, [plan])
    assert modified.get(0, 1, 0) == 1
    assert modified.get(0, 1, 1) == 3
    assert modified.get(0, 0, 0) == 1


def test_modify_rejects_two_plans_for_one_mode():
    subspace = _unit_subspace((2, 2), (0, 1))
    plan = ModificationPlan("C", subspace, MatrixQ.from_rows([[1, 0]]))
    with pytest.raises(ValidationError):
        modify(Tensor3.diagonal(2), [plan, plan])


def test_modification_plan_shape_is_checked():
    subspace = _unit_subspace((2, 2), (0, 1))
    plan = ModificationPlan("A", subspace, MatrixQ.from_rows([[1, 0, 1]]))
    with pytest.raises(ValidationError):
        modify(Tensor3.diagonal(2), [plan])


@given(
    st.lists(st.integers(-2, 2), min_size=12, max_size=12),
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
)
@settings(max_examples=30, deadline=None)
def test_modification_keeps_quotient_image(values, coefficients):
    tensor = Tensor3.from_entries(
        (2, 3, 2), zip(product(range(2), range(3), range(2)), values)
    )
    subspace = _unit_subspace((2, 3), (0, 0), (1, 2))
    plan = ModificationPlan(
        "C", subspace, MatrixQ.from_rows([coefficients[:2], coefficients[2:]])
    )
    modified = modify(tensor, [plan])
    assert quotient_image_agrees(tensor, modified, subspace, "C")


def test_quotient_image_detects_foreign_change():
    tensor = Tensor3.diagonal(2)
    other = Tensor3((2, 2, 2), {(0, 0, 0): 1, (1, 0, 1): 1})
    subspace = _unit_subspace((2, 2), (0, 0))
    assert not quotient_image_agrees(tensor, other, subspace, "C")


def test_augment_places_bases_in_new_coordinates():
    tensor = Tensor3.zeros((2, 2, 2))
    ua = _unit_subspace((2, 2), (0, 0))
    ub = _unit_subspace((2, 2), (1, 1))
    uc = _unit_subspace((2, 2), (0, 1))
    augmented = augment(tensor, ua, ub, uc)
    assert augmented.dims == (3, 3, 3)
    assert augmented.entries == {(2, 0, 0): 1, (1, 2, 1): 1, (0, 1, 2): 1}


def test_augment_with_empty_subspaces_keeps_tensor():
    tensor = Tensor3.diagonal(2)
    empty = MatrixSubspace.empty((2, 2))
    assert augment(tensor, empty, empty, empty) == tensor


def test_augment_checks_ambient_shapes():
    tensor = Tensor3.zeros((2, 3, 4))
    wrong = _unit_subspace((2, 2), (0, 0))
    right_b = MatrixSubspace.empty((2, 4))
    right_c = MatrixSubspace.empty((2, 3))
    with pytest.raises(ValidationError):
        augment(tensor, wrong, right_b, right_c)


# ----------------------------------------------------------------------------
# Block assembly
# ----------------------------------------------------------------------------


def test_split_blocks_validates_split():
    with pytest.raises(ValidationError):
        split_blocks(Tensor3.diagonal(3), ((1, 1), (1, 2), (1, 2)))
    with pytest.raises(ValidationError):
        split_blocks(Tensor3.diagonal(2), ((2, 0), (1, 1), (1, 1)))


@given(tensors_with_split())
@settings(max_examples=40, deadline=None)
def test_reassemble_recovers_tensor(case):
    tensor, split = case
    blocks = split_blocks(tensor, split)
    assert blocks.dims == tensor.dims
    assert reassemble(blocks) == tensor


def test_modification_spaces_are_flattening_images():
    tensor = Tensor3(
        (2, 2, 2),
        {(0, 0, 0): 1, (1, 1, 1): 1, (1, 0, 0): 2, (0, 1, 1): Fraction(1, 2)},
    )
    spaces = modification_spaces(split_blocks(tensor, ((1, 1), (1, 1), (1, 1))))
    assert set(spaces) == {
        "T211(A*)", "T121(B*)", "T112(C*)", "T122(A*)", "T212(B*)", "T221(C*)",
    }
    assert spaces["T211(A*)"].dim == 1
    assert spaces["T122(A*)"].dim == 1
    assert spaces["T121(B*)"].dim == 0


def test_assembly_dimensions_bookkeeping():
    report = assembly_dimensions(
        ((1, 1), (1, 1), (1, 1)), 2, {"A": (1, 2), "B": (0, 1), "C": (1, 1)}
    )
    assert report["T1_dims"] == [3, 2, 3]
    assert report["T2_dims"] == [4, 3, 3]
    assert report["sum_dims"] == [7, 5, 6]
    assert (report["m_A"], report["m_B"], report["m_C"]) == (3, 1, 2)
    assert report["shift"] == 6


def test_mode_a_image_of_corresponding_tensor_is_the_subspace():
    subspace = _unit_subspace((2, 2), (0, 1), (1, 0))
    rows = flatten(corresponding_tensor(subspace), "A").row_map()
    assert sorted(rows) == [0, 1]

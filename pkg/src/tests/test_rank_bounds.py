"""
Tests for certified rank bounds: substitution, decompositions, certificates
"""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from config.forge_config import DENOMINATOR_CAP
from models.certificate import RankCertificate
from models.errors import SubspaceContainmentError, ValidationError
from models.subspace import MatrixSubspace, ModificationPlan
from models.tensor import MatrixQ, Tensor3
from services.algebra.tensor_ops import flattening_ranks, matmul_tensor
from services.constructions.builders import augment, clone_tensor, modify
from services.rank.certificates import (
    certified_lower_bound,
    certified_rank,
    generic_rank,
    generic_rank_flags,
    transfer_clone_decomposition,
)
from services.rank.decomposition_search import (
    _rationalize,
    best_slice_decomposition,
    cp_als,
    decomposition_search,
    exact_completion,
    known_decomposition,
    pinned_completion,
    slice_decomposition,
)
from services.rank.substitution import (
    best_substitution_bound,
    quotient_flattening_rank,
    substitution_lower_bound,
)


def _units(dims, *positions):
    return MatrixSubspace(dims, tuple(MatrixQ.unit(dims, i, j) for i, j in positions))


@pytest.mark.parametrize("n", range(1, 7))
def test_certified_rank_of_diagonal_is_exact(n):
    certificate = certified_rank(Tensor3.diagonal(n), restarts=1)
    assert certificate.exact
    assert certificate.upper == n
    assert certificate.upper_witness.certifies(Tensor3.diagonal(n))


def test_zero_tensor_certificate():
    certificate = certified_rank(Tensor3.zeros((2, 3, 1)))
    assert (certificate.lower, certificate.upper) == (0, 0)
    assert certificate.exact


def test_augmented_zero_tensor_rank_is_sum_of_dimensions():
    augmented = augment(
        Tensor3.zeros((2, 2, 2)),
        _units((2, 2), (0, 0)),
        _units((2, 2), (1, 1)),
        _units((2, 2), (0, 1)),
    )
    certificate = certified_rank(augmented, restarts=1)
    assert certificate.exact
    assert certificate.upper == 3


def test_matmul_certificate_uses_strassen(matmul_2x2):
    certificate = certified_rank(matmul_2x2, restarts=1)
    assert certificate.upper <= 7
    assert 4 <= certificate.lower <= certificate.upper
    assert certificate.upper_witness.certifies(matmul_2x2)
    assert len(known_decomposition(matmul_2x2)) == 7


def test_unsound_certificate_is_rejected():
    with pytest.raises(ValidationError):
        RankCertificate(lower=3, lower_witness="x", upper=2)


def test_slice_decomposition_is_exact(w_state):
    for mode in ("A", "B", "C"):
        decomposition = slice_decomposition(w_state, mode)
        assert decomposition.certifies(w_state)
    assert len(best_slice_decomposition(w_state)) == 3


def test_w_state_bounds(w_state):
    lower, witness = certified_lower_bound(w_state)
    assert lower == 2
    assert witness
    assert decomposition_search(w_state, 1) is None
    assert len(decomposition_search(w_state, 3)) == 3


def _irrational_pencil():
    """C-slices [[0,1],[1,1]] and I; the eigenvalues are irrational so the rank over ℚ is 3"""
    entries = {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1, (1, 1, 0): 1, (1, 1, 1): 1}
    return Tensor3((2, 2, 2), entries)


def test_cp_als_is_seeded():
    dense = Tensor3.diagonal(2).to_numpy()
    factors, residual = cp_als(dense, 2, seed=3)
    again, _ = cp_als(dense, 2, seed=3)
    assert [f.shape for f in factors] == [(2, 2)] * 3
    assert residual < 1e-3
    assert all(np.array_equal(f, g) for f, g in zip(factors, again))


def test_irrational_pencil_reaches_rank_three():
    tensor = _irrational_pencil()
    certificate = certified_rank(tensor)
    assert certificate.lower == 2
    assert certificate.upper == 3
    assert certificate.upper_witness.certifies(tensor)


def test_pinned_completion_from_real_decomposition():
    tensor = _irrational_pencil()
    eigenvalues, vectors = np.linalg.eigh(np.array([[0.0, 1.0], [1.0, 1.0]]))
    factors = [
        np.hstack([vectors, [[1.0], [2.0]]]),
        np.hstack([vectors, [[1.0], [-1.0]]]),
        np.vstack([np.append(eigenvalues, 0.0), [1.0, 1.0, 0.0]]),
    ]
    assert np.allclose(np.einsum("ir,jr,kr->ijk", *factors), tensor.to_numpy())

    rounded = [_rationalize(vectors[:, l], DENOMINATOR_CAP) for l in range(2)]
    assert exact_completion(tensor, rounded, rounded) is None

    found = pinned_completion(tensor, factors)
    assert found is not None
    assert len(found) <= 3
    assert found.certifies(tensor)


@given(st.lists(st.integers(-1, 1), min_size=8, max_size=8))
@example([0, 1, 1, 0, 1, 0, 1, 1])
@settings(max_examples=25, deadline=None)
def test_two_by_two_by_two_rank_at_most_three(values):
    tensor = Tensor3.from_entries((2, 2, 2), zip(product(range(2), repeat=3), values))
    certificate = certified_rank(tensor)
    assert certificate.upper <= 3
    assert certificate.upper_witness.certifies(tensor)


@pytest.mark.slow
def test_every_sign_tensor_2x2x2_has_rank_at_most_three():
    for values in product((-1, 0, 1), repeat=8):
        tensor = Tensor3.from_entries((2, 2, 2), zip(product(range(2), repeat=3), values))
        assert certified_rank(tensor).upper <= 3, values


def test_substitution_exact_for_rank_one_spanned_image():
    tensor = Tensor3.diagonal(3)
    subspace = _units((3, 3), (0, 0), (1, 1), (2, 2))
    assert substitution_lower_bound(tensor, subspace, "C") == 3


def test_substitution_requires_containment():
    with pytest.raises(SubspaceContainmentError, match="C"):
        substitution_lower_bound(Tensor3.diagonal(2), _units((2, 2), (0, 1)), "C")


def test_substitution_other_modes():
    tensor = Tensor3.diagonal(2)
    assert substitution_lower_bound(tensor, _units((2, 2), (0, 0)), "A") == 2
    bound, description = best_substitution_bound(tensor)
    assert bound == 2
    assert "substitution mode" in description


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(lambda c: c[0] != -1))
@settings(max_examples=30, deadline=None)
def test_quotient_ranks_invariant_under_modification(coefficients):
    tensor = Tensor3.diagonal(3)
    subspace = _units((3, 3), (0, 0))
    plan = ModificationPlan("C", subspace, MatrixQ.from_rows([coefficients]))
    modified = modify(tensor, [plan])
    for other in ("A", "B"):
        assert quotient_flattening_rank(modified, subspace, "C", other) == quotient_flattening_rank(
            tensor, subspace, "C", other
        )


def test_quotient_rank_needs_distinct_modes():
    with pytest.raises(ValidationError):
        quotient_flattening_rank(Tensor3.diagonal(2), _units((2, 2), (0, 0)), "C", "C")


@given(
    st.lists(st.integers(-2, 2), min_size=27, max_size=27),
    st.sampled_from([2, 3]),
)
@settings(max_examples=20, deadline=None)
def test_bounds_invariant_under_cloning(values, v):
    tensor = Tensor3.from_entries((3, 3, 3), zip(product(range(3), repeat=3), values))
    cloned = clone_tensor(tensor, v)
    assert flattening_ranks(cloned) == flattening_ranks(tensor)
    assert certified_lower_bound(cloned)[0] == certified_lower_bound(tensor)[0]
    assert len(best_slice_decomposition(cloned)) == len(best_slice_decomposition(tensor))


def test_transfer_clone_decomposition(strassen, matmul_2x2):
    transferred = transfer_clone_decomposition(strassen, 2)
    assert transferred.target_dims == (8, 8, 8)
    assert transferred.certifies(clone_tensor(matmul_2x2, 2))
    with pytest.raises(ValidationError):
        transfer_clone_decomposition(strassen, 0)


def test_generic_rank_values():
    assert generic_rank(4) == 7
    assert generic_rank(5) == 10
    assert generic_rank(3) == 4
    assert generic_rank_flags(3) == ["formula outside stated range"]
    assert generic_rank_flags(4) == []
    with pytest.raises(ValidationError):
        generic_rank(0)


def test_matmul_tensor_shape():
    tensor = matmul_tensor(2, 3, 4)
    assert tensor.dims == (6, 12, 8)
    assert tensor.nnz == 24
    assert tensor.get(0, 0, 0) == Fraction(1)

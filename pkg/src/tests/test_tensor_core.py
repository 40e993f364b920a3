"""
Tests for exact tensors, linear algebra and the canonical JSON codec
"""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.errors import ParseError, SupportError, ValidationError
from models.tensor import MatrixQ, Tensor3
from services.algebra.linalg import (
    SpanBasis,
    independent_indices,
    matrix_rank,
    rank_of_vectors,
    rank_factorization,
    spans_equal,
)
from services.algebra.rational import ceil_fraction, parse_rational
from services.algebra.serialization import (
    deserialize_matrix,
    deserialize_subspace,
    deserialize_tensor,
    serialize_matrix,
    serialize_subspace,
    serialize_tensor,
)
from services.algebra.tensor_ops import (
    concise_modes,
    direct_sum,
    flatten,
    flattening_ranks,
    kronecker,
    permute_modes,
    relabel,
    restrict,
    support,
    trivial_rank_bounds,
)
from models.subspace import MatrixSubspace


@st.composite
def small_tensors(draw, max_dim=3, low=-2, high=2):
    dims = tuple(draw(st.integers(1, max_dim)) for _ in range(3))
    size = dims[0] * dims[1] * dims[2]
    values = draw(st.lists(st.integers(low, high), min_size=size, max_size=size))
    coords = product(range(dims[0]), range(dims[1]), range(dims[2]))
    return Tensor3.from_entries(dims, zip(coords, values))


# ----------------------------------------------------------------------------
# Rationals and linear algebra
# ----------------------------------------------------------------------------


def test_parse_rational_canonical_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7/1") == Fraction(-7)
    assert parse_rational("0/1") == 0


@pytest.mark.parametrize(
    "text",
    [
        "2/4", "1/0", "1/-2", "x", "1.5", " 3/4 ", "3/4\n",
        "007/2", "7/02", "5", "-0", "-0/1", "0/2", "+1/2", 5, None,
    ],
)
def test_parse_rational_rejects_non_canonical(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_ceil_fraction_handles_negatives():
    assert ceil_fraction(Fraction(7, 2)) == 4
    assert ceil_fraction(Fraction(-7, 2)) == -3
    assert ceil_fraction(Fraction(6, 3)) == 2


def test_matrix_rank_small_cases():
    assert matrix_rank(MatrixQ.from_rows([[1, 2], [2, 4]])) == 1
    assert matrix_rank(MatrixQ.from_rows([[1, 2], [3, 4]])) == 2
    assert matrix_rank(MatrixQ.from_rows([[0, 0], [0, 0]])) == 0
    assert matrix_rank(MatrixQ.from_rows([[2, 4, 6], [1, 2, 3], [0, 1, 1]])) == 2
    assert matrix_rank(MatrixQ.from_rows([[Fraction(1, 3), Fraction(1, 2)], [2, 3]])) == 1


def test_rank_of_sparse_vectors_on_far_coordinates():
    vectors = [{10**6: Fraction(1)}, {10**6: Fraction(2), 7: Fraction(1)}, {7: Fraction(-3)}]
    assert rank_of_vectors(vectors) == 2
    assert rank_of_vectors([{}, {3: Fraction(0)}]) == 0
    assert independent_indices([{}, vectors[0], vectors[1], vectors[2]]) == [1, 2]


def test_span_basis_expresses_combinations():
    basis = SpanBasis(track=True)
    assert basis.add({0: Fraction(1), 1: Fraction(1)}, tag="u")
    assert basis.add({1: Fraction(1)}, tag="v")
    assert not basis.add({0: Fraction(2), 1: Fraction(5)}, tag="w")
    assert basis.express({0: Fraction(2), 1: Fraction(5)}) == {"u": 2, "v": 3}
    assert basis.express({2: Fraction(1)}) is None


def test_span_basis_extend_keeps_greedy_generators():
    basis = SpanBasis(track=True)
    units = [{0: Fraction(1)}, {0: Fraction(3)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    assert basis.extend(units, "abcd") == ["a", "c"]
    assert basis.independent_tags == ["a", "c"]
    assert basis.extend([{2: Fraction(1, 2)}], ["e"]) == ["e"]
    assert basis.rank == 3
    assert basis.contains({2: Fraction(5)})
    assert not basis.contains({3: Fraction(1)})
    assert basis.express_all([{0: Fraction(1, 2), 2: Fraction(1)}, {4: Fraction(1)}, {}]) == [
        {"a": Fraction(1, 2), "e": 2},
        None,
        {},
    ]
    with pytest.raises(ValueError):
        SpanBasis().express({0: Fraction(1)})


def test_spans_equal_ignores_generator_choice():
    first = [{0: Fraction(1)}, {1: Fraction(1)}]
    second = [{0: Fraction(1), 1: Fraction(1)}, {0: Fraction(1), 1: Fraction(-1)}]
    assert spans_equal(first, second)
    assert not spans_equal(first, [{0: Fraction(1)}])


@given(
    st.lists(
        st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4
    )
)
@settings(max_examples=50, deadline=None)
def test_rank_factorization_resums(rows):
    matrix = MatrixQ.from_rows(rows)
    factors = rank_factorization(matrix)
    assert len(factors) == matrix_rank(matrix)
    rebuilt = MatrixQ.zeros(*matrix.dims)
    for column, row in factors:
        rebuilt = rebuilt + MatrixQ.outer(column, row)
    assert rebuilt == matrix


# ----------------------------------------------------------------------------
# Tensors
# ----------------------------------------------------------------------------


def test_tensor_rejects_stored_zero_and_bad_index():
    with pytest.raises(ValidationError):
        Tensor3((2, 2, 2), {(0, 0, 0): 0})
    with pytest.raises(ValidationError):
        Tensor3((2, 2, 2), {(2, 0, 0): 1})


def test_flatten_layout():
    tensor = Tensor3((2, 3, 4), {(1, 2, 3): Fraction(5)})
    assert flatten(tensor, "A").entries == {(1, 2 * 4 + 3): 5}
    assert flatten(tensor, "B").entries == {(2, 1 * 4 + 3): 5}
    assert flatten(tensor, "C").entries == {(3, 1 * 3 + 2): 5}
    with pytest.raises(ValidationError):
        flatten(tensor, "D")


def test_flattening_ranks_of_standard_tensors(matmul_2x2, w_state):
    assert flattening_ranks(Tensor3.diagonal(4)) == (4, 4, 4)
    assert flattening_ranks(matmul_2x2) == (4, 4, 4)
    assert flattening_ranks(w_state) == (2, 2, 2)
    assert flattening_ranks(Tensor3.ones((2, 3, 4))) == (1, 1, 1)


def test_trivial_bounds_on_diagonal():
    assert trivial_rank_bounds(Tensor3.diagonal(3)) == (3, 9)


@given(small_tensors(), st.permutations([0, 1, 2]))
@settings(max_examples=40, deadline=None)
def test_flattening_ranks_follow_mode_permutation(tensor, order):
    ranks = flattening_ranks(tensor)
    permuted = permute_modes(tensor, order)
    assert flattening_ranks(permuted) == tuple(ranks[o] for o in order)


@given(small_tensors(), st.randoms(use_true_random=False))
@settings(max_examples=30, deadline=None)
def test_relabel_preserves_ranks(tensor, random):
    perms = []
    for d in tensor.dims:
        perm = list(range(d))
        random.shuffle(perm)
        perms.append(perm)
    assert flattening_ranks(relabel(tensor, perms)) == flattening_ranks(tensor)


@given(small_tensors(max_dim=2), small_tensors(max_dim=2))
@settings(max_examples=30, deadline=None)
def test_direct_sum_adds_flattening_ranks(first, second):
    total = direct_sum(first, second)
    assert total.dims == tuple(p + q for p, q in zip(first.dims, second.dims))
    expected = tuple(p + q for p, q in zip(flattening_ranks(first), flattening_ranks(second)))
    assert flattening_ranks(total) == expected


@given(small_tensors(max_dim=2), small_tensors(max_dim=2))
@settings(max_examples=20, deadline=None)
def test_kronecker_multiplies_flattening_ranks(first, second):
    product_tensor = kronecker(first, second)
    expected = tuple(p * q for p, q in zip(flattening_ranks(first), flattening_ranks(second)))
    assert flattening_ranks(product_tensor) == expected


def test_support_drops_redundant_coordinates():
    # two identical A-slices and an unused C coordinate
    tensor = Tensor3(
        (3, 2, 3),
        {(0, 0, 0): 1, (1, 0, 0): 1, (2, 1, 1): 1},
    )
    reduced = support(tensor)
    assert reduced.dims == (2, 2, 2)
    assert all(concise_modes(reduced))
    assert flattening_ranks(reduced) == flattening_ranks(tensor)


def test_support_of_zero_tensor_fails():
    with pytest.raises(SupportError, match="no support"):
        support(Tensor3.zeros((2, 2, 2)))


def test_restrict_validates_indices():
    tensor = Tensor3.diagonal(3)
    assert restrict(tensor, [2], [2], [2]).entries == {(0, 0, 0): 1}
    with pytest.raises(ValidationError):
        restrict(tensor, [0, 0], [1], [1])
    with pytest.raises(ValidationError):
        restrict(tensor, [3], [1], [1])


def test_strassen_resums_exactly(matmul_2x2, strassen):
    assert len(strassen) == 7
    assert strassen.resum() == matmul_2x2
    assert strassen.certifies(matmul_2x2)


# ----------------------------------------------------------------------------
# Canonical JSON
# ----------------------------------------------------------------------------


def test_serialize_tensor_canonical_bytes():
    tensor = Tensor3((1, 1, 2), {(0, 0, 1): Fraction(1, 2), (0, 0, 0): Fraction(-3)})
    expected = b'{"dims":[1,1,2],"entries":[[0,0,0,"-3/1"],[0,0,1,"1/2"]]}'
    assert serialize_tensor(tensor) == expected


@given(small_tensors(low=-5, high=5))
@settings(max_examples=50, deadline=None)
def test_tensor_json_round_trip(tensor):
    data = serialize_tensor(tensor)
    assert deserialize_tensor(data) == tensor
    assert serialize_tensor(deserialize_tensor(data)) == data


def test_matrix_and_subspace_round_trip():
    matrix = MatrixQ.from_rows([[1, 0], [Fraction(2, 3), -1]])
    assert deserialize_matrix(serialize_matrix(matrix)) == matrix
    subspace = MatrixSubspace((2, 2), (MatrixQ.identity(2), MatrixQ.unit((2, 2), 0, 1)))
    assert deserialize_subspace(serialize_subspace(subspace)) == subspace


@pytest.mark.parametrize(
    "data, message",
    [
        (b'{"dims":[2,2,2],"entries":[[0,0,0,"2/4"]]}', "non-reduced"),
        (b'{"dims":[2,2,2],"entries":[[0,0,0,"0/1"]]}', "zero entry present"),
        (b'{"dims":[2,2,2],"entries":[[0,0,0," 03/1"]]}', "bad rational"),
        (b'{"dims":[2,2,2],"entries":[[0,0,0,1]]}', "rational expected"),
        (b'{"dims":[2,2,2],"entries":[[2,0,0,"1/1"]]}', "index out of range"),
        (b'{"dims":[2,2,2],"entries":[[1,0,0,"1/1"],[0,0,0,"1/1"]]}', "malformed document"),
        (b'{"dims":[2,2],"entries":[]}', "malformed document"),
        (b"{", "malformed document"),
    ],
)
def test_deserialize_tensor_errors(data, message):
    with pytest.raises(ParseError, match=message):
        deserialize_tensor(data)


def test_subspace_with_dependent_basis_is_rejected():
    data = (
        b'{"ambient":[1,2],"basis":['
        b'{"dims":[1,2],"entries":[[0,0,"1/1"]]},'
        b'{"dims":[1,2],"entries":[[0,0,"2/1"]]}]}'
    )
    with pytest.raises(ParseError, match="malformed document"):
        deserialize_subspace(data)

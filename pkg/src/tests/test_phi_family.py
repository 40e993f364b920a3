"""
Tests for the Φ-tensor family and its structural verification
"""

from fractions import Fraction

import pytest

from models.errors import BudgetExceededError, ValidationError
from models.phi import PhiFunction, PhiParams
from services.algebra.linalg import matrix_rank
from services.phi.family_verifier import FamilyVerifier, verify_family_structure
from services.phi.phi_family import (
    clone_identity,
    derive_parameters,
    diagonal_coverage,
    digits,
    enumerate_family,
    expected_clone_coefficients,
    find_clear_class,
    membership_in_M,
    multi_index,
    phi_tensor,
    span_basis,
    span_dimension,
    unit_count,
    unit_set,
)


@pytest.fixture
def small_params():
    return PhiParams.with_default_pi(2, 1, 2)


@pytest.fixture
def medium_params():
    return PhiParams.with_default_pi(3, 2, 4)


def test_default_pi_is_binary_order(medium_params):
    assert medium_params.pi == ((1, 1), (1, 2), (2, 1))
    assert medium_params.side == 16
    assert medium_params.size == 48


def test_params_validation():
    with pytest.raises(ValidationError):
        PhiParams.with_default_pi(3, 1, 2)
    with pytest.raises(ValidationError):
        PhiParams(2, 1, 2, ((1,), (1,)))
    with pytest.raises(ValidationError):
        PhiParams(1, 1, 2, ((3,),))


def test_theta_zero_is_flagged():
    params = PhiParams.with_default_pi(1, 0, 3)
    assert "theta=0" in params.flags
    assert params.family_size == 1
    assert len(enumerate_family(params, 10)) == 1


def test_derive_parameters():
    assert derive_parameters(1, 1, 1, 3) == (3, 2, 54)
    assert derive_parameters(2, 1, 1, 1) == (5, 0, 50)
    with pytest.raises(ValidationError):
        derive_parameters(0, 1, 1, 1)


def test_digits_and_multi_index():
    assert digits(0, 4) == (1, 1)
    assert digits(5, 4) == (2, 2)
    assert digits(15, 4) == (4, 4)
    with pytest.raises(ValidationError):
        digits(16, 4)
    assert multi_index((1, 1), 4) == 0
    assert multi_index((2, 3), 4) == 6


def test_family_counts(medium_params, small_params):
    assert medium_params.family_size == 256
    assert unit_count(medium_params) == 288
    assert span_dimension(medium_params) == 544
    assert small_params.family_size == 4
    assert unit_count(small_params) == 4
    assert span_dimension(small_params) == 8


def test_enumeration_respects_budget(medium_params):
    with pytest.raises(BudgetExceededError):
        enumerate_family(medium_params, 255)


def test_every_phi_matrix_has_rank_one(small_params):
    for phi in enumerate_family(small_params, 100):
        assert matrix_rank(phi_tensor(small_params, phi).to_matrix()) == 1


def test_phi_tensor_checks_function_shape(small_params):
    with pytest.raises(ValidationError):
        phi_tensor(small_params, PhiFunction((0, 0), 2))


@pytest.mark.parametrize("r, theta, sigma", [(2, 1, 2), (3, 2, 2), (4, 2, 2)])
def test_unit_set_closed_form_matches_brute_force(r, theta, sigma):
    params = PhiParams.with_default_pi(r, theta, sigma)
    closed = unit_set(params, "closed_form")
    assert closed == unit_set(params, "brute_force")
    assert len(closed) == unit_count(params)


def test_diagonal_blocks_covered_exactly_once(small_params):
    coverage = diagonal_coverage(small_params, 100)
    side = small_params.side
    expected = {
        (i * side + p, i * side + q)
        for i in range(small_params.r)
        for p in range(side)
        for q in range(side)
    }
    assert set(coverage) == expected
    assert set(coverage.values()) == {1}


def test_clone_identity_coefficients(small_params):
    found = membership_in_M(small_params, clone_identity(small_params))
    assert found == expected_clone_coefficients(small_params)
    unit_values = {v for key, v in found.items() if key[0] == "U"}
    assert unit_values == {Fraction(-2)}


def test_span_basis_is_independent(small_params):
    assert span_basis(small_params, 100).rank == span_dimension(small_params)


@pytest.mark.parametrize("r, theta, sigma", [(2, 1, 2), (3, 2, 4)])
def test_family_verifier_passes(r, theta, sigma):
    params = PhiParams.with_default_pi(r, theta, sigma)
    report = FamilyVerifier(params, budget=10**6, seed=7).verify(samples=100)
    assert report.passed, report.witnesses
    names = {a.name for a in report.assertions}
    assert names == {
        "diagonal_coverage",
        "rank_one",
        "unit_set_closed_form",
        "off_diagonal_block_diagonal",
        "span_dimension",
        "clone_membership",
    }
    assert report.summary["span_dimension"] == span_dimension(params)


def test_verifier_result_independent_of_workers(small_params):
    serial = verify_family_structure(small_params, 100, samples=10, workers=1)
    parallel = verify_family_structure(small_params, 100, samples=10, workers=2)
    assert serial.to_dict() == parallel.to_dict()


def test_find_clear_class():
    partition = [{1, 2}, {3}, {4, 5}, {6}]
    assert find_clear_class(partition, [{1}]) == 1
    assert find_clear_class(partition, [{3}, {4}]) == 0
    with pytest.raises(ValidationError):
        find_clear_class(partition, [{1, 3}, {6}])
    with pytest.raises(ValidationError):
        find_clear_class([{1}, {1}], [set()])

"""
Tests for the μ minimax objective and its grid search
"""

from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.errors import ValidationError
from services.optimization.mu_grid import (
    check_positive_gap,
    gap_witness,
    minimize_mu,
    mu_values,
    mu_values_exact,
    sorted_grid_size,
    weak_mu2_exact,
)

eighths = st.integers(0, 8).map(lambda n: Fraction(n, 8))


def test_exact_values_at_the_centre():
    mu1, mu2, best = mu_values_exact(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert mu1 == Fraction(5, 8)
    assert mu2 == Fraction(1, 2)
    assert best == Fraction(5, 8)
    assert gap_witness(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)) == "mu1"


def test_max_terms_needed_at_zero_half_one():
    mu1, mu2, _ = mu_values_exact(0, Fraction(1, 2), 1)
    assert mu1 == Fraction(1, 2)
    assert weak_mu2_exact(Fraction(0), Fraction(1, 2), Fraction(1)) == Fraction(1, 2)
    assert mu2 == Fraction(2, 3)
    for point in permutations((0, Fraction(1, 2), 1)):
        assert gap_witness(*point) == "mu2"


def test_coordinates_outside_unit_cube_rejected():
    with pytest.raises(ValidationError):
        mu_values(1.5, 0, 0)
    with pytest.raises(ValidationError):
        mu_values_exact(Fraction(-1, 2), 0, 0)


@given(eighths, eighths, eighths)
@settings(max_examples=100, deadline=None)
def test_float_objective_matches_exact(a, b, g):
    floats = mu_values(float(a), float(b), float(g))
    exact = mu_values_exact(a, b, g)
    assert floats == pytest.approx(tuple(float(v) for v in exact), abs=1e-12)


@given(eighths, eighths, eighths)
@settings(max_examples=100, deadline=None)
def test_objective_is_symmetric(a, b, g):
    values = {mu_values_exact(*p)[2] for p in permutations((a, b, g))}
    assert len(values) == 1


def test_every_eighth_point_has_a_witness():
    grid = [Fraction(n, 8) for n in range(9)]
    assert all(gap_witness(*p) is not None for p in product(grid, repeat=3))


def test_sorted_grid_size():
    assert sorted_grid_size(1) == 4
    assert sorted_grid_size(2) == 10


@pytest.mark.parametrize("step", [0.3, 0, 0.6, -0.1])
def test_bad_steps_rejected(step):
    with pytest.raises(ValidationError):
        minimize_mu(step)


def test_coarse_grid_minimum():
    result = minimize_mu(0.5)
    assert result.mu == pytest.approx(0.625)
    assert result.argmin.coordinates == (0.5, 0.5, 0.5)
    assert result.grid_points == sorted_grid_size(2)
    assert len(result.levels) == 1


def test_grid_search_independent_of_workers():
    serial = minimize_mu(0.1, workers=1)
    parallel = minimize_mu(0.1, workers=2)
    assert serial.mu == parallel.mu
    assert serial.argmin == parallel.argmin


def test_refinement_never_worsens():
    coarse = minimize_mu(0.1)
    refined = minimize_mu(0.1, refine_levels=2)
    assert len(refined.levels) == 3
    objectives = [point.objective for point in refined.levels]
    assert objectives == sorted(objectives, reverse=True)
    assert refined.mu <= coarse.mu
    assert refined.mu > 0.5
    with pytest.raises(ValidationError):
        minimize_mu(0.1, refine_levels=-1)


@pytest.mark.parametrize("step", [0.5, 0.25, 0.05])
def test_positive_gap_on_grids(step):
    assert check_positive_gap(step)


@pytest.mark.slow
def test_fine_grid_minimum():
    result = minimize_mu(0.001)
    assert result.mu == pytest.approx(0.52733, abs=1e-4)
    assert result.mu > 0.5

"""
Φ-tensor family: parameters, digit encoding, the matrices M^Φ, the unit set and their span

Coordinates of the ambient matrices are flat: row p = i·σ^θ + index(φ) where index(φ)
reads the multi-index φ ∈ {1..σ}^θ lexicographically (γ = 1 most significant). Columns
use the same layout with (j, ψ).
"""

import logging
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Set, Tuple

from models.errors import BudgetExceededError, ValidationError
from models.phi import FactoredMatrix, PhiFunction, PhiParams
from models.tensor import MatrixQ
from services.algebra.linalg import SpanBasis

logger = logging.getLogger(__name__)

Position = Tuple[int, int]
UnitKey = Tuple[Tuple[int, Tuple[int, ...]], Tuple[int, Tuple[int, ...]]]


def derive_parameters(a: int, b: int, c: int, r: int) -> Tuple[int, int, int]:
    """
    ρ = 2abc + 1, θ = ⌈log₂ r⌉, σ = 2ρ²r

    Args:
        a, b, c: dimensions of the tensor being cloned
        r: rank of the matrix w

    Returns:
        (rho, theta, sigma)
    """
    if min(a, b, c, r) < 1:
        raise ValidationError(f"need a, b, c, r >= 1, got {(a, b, c, r)}")
    rho = 2 * a * b * c + 1
    theta = (r - 1).bit_length()
    sigma = 2 * rho * rho * r
    if theta == 0:
        logger.warning("⚠️ theta = 0: the family degenerates to a single all-ones matrix")
    return rho, theta, sigma


def digits(s: int, sigma: int) -> Tuple[int, int]:
    """The 1-based base-σ digits (u1, u2) with s = (u1 − 1)σ + (u2 − 1)"""
    if sigma < 1 or not 0 <= s < sigma * sigma:
        raise ValidationError(f"s = {s} outside [0, sigma^2) for sigma = {sigma}")
    return s // sigma + 1, s % sigma + 1


def multi_index(values: Sequence[int], sigma: int) -> int:
    """Flat offset of a 1-based multi-index, first coordinate most significant"""
    offset = 0
    for v in values:
        offset = offset * sigma + (v - 1)
    return offset


def _check_dims(params: PhiParams, a_dim: Optional[int], b_dim: Optional[int]) -> Tuple[int, int]:
    a_dim = params.r if a_dim is None else a_dim
    b_dim = params.r if b_dim is None else b_dim
    if params.r > min(a_dim, b_dim):
        raise ValidationError(f"r = {params.r} exceeds min(a_dim, b_dim) = {min(a_dim, b_dim)}")
    return a_dim, b_dim


def phi_tensor(
    params: PhiParams,
    phi: PhiFunction,
    a_dim: Optional[int] = None,
    b_dim: Optional[int] = None,
) -> FactoredMatrix:
    """
    M^Φ = (Σ_i a_i ⊗ ⊗_γ e_{u(Φ(γ), π_i(γ))}) ⊗ (Σ_j b_j ⊗ ⊗_δ e_{u(Φ(δ), 3 − π_j(δ))})

    a_dim and b_dim default to r.
    """
    a_dim, b_dim = _check_dims(params, a_dim, b_dim)
    if phi.theta != params.theta or phi.sigma != params.sigma:
        raise ValidationError(
            f"Phi has theta={phi.theta}, sigma={phi.sigma}; params need "
            f"theta={params.theta}, sigma={params.sigma}"
        )
    side = params.side
    pairs = [digits(value, params.sigma) for value in phi.values]
    left = {}
    right = {}
    for i, pi in enumerate(params.pi):
        row = [pairs[g][pi[g] - 1] for g in range(params.theta)]
        col = [pairs[g][2 - pi[g]] for g in range(params.theta)]
        left[i * side + multi_index(row, params.sigma)] = Fraction(1)
        right[i * side + multi_index(col, params.sigma)] = Fraction(1)
    return FactoredMatrix(left, right, a_dim * side, b_dim * side)


def family_size(params: PhiParams) -> int:
    return params.family_size


def iter_family(params: PhiParams) -> Iterator[PhiFunction]:
    for values in product(range(params.sigma * params.sigma), repeat=params.theta):
        yield PhiFunction(values, params.sigma)


def enumerate_family(params: PhiParams, budget: int) -> List[PhiFunction]:
    """All (σ²)^θ functions Φ in lexicographic order"""
    size = params.family_size
    if size > budget:
        raise BudgetExceededError(f"family size {size:,} exceeds budget {budget:,}")
    return list(iter_family(params))


def _multi_indices(params: PhiParams) -> List[Tuple[int, ...]]:
    return list(product(range(1, params.sigma + 1), repeat=params.theta))


def unit_key_to_position(params: PhiParams, key: UnitKey) -> Position:
    (i, phi), (j, psi) = key
    side = params.side
    return (
        i * side + multi_index(phi, params.sigma),
        j * side + multi_index(psi, params.sigma),
    )


def unit_set_closed_form(params: PhiParams) -> Set[UnitKey]:
    """i ≠ j and φ_γ = ψ_γ wherever π_i(γ) ≠ π_j(γ)"""
    indices = _multi_indices(params)
    units = set()
    for i in range(params.r):
        for j in range(params.r):
            if i == j:
                continue
            differing = params.differing(i, j)
            for phi in indices:
                for psi in indices:
                    if all(phi[g] == psi[g] for g in differing):
                        units.add(((i, phi), (j, psi)))
    return units


def decode_position(params: PhiParams, position: int) -> Tuple[int, Tuple[int, ...]]:
    block, offset = divmod(position, params.side)
    values = []
    for _ in range(params.theta):
        offset, digit = divmod(offset, params.sigma)
        values.append(digit + 1)
    return block, tuple(reversed(values))


def unit_set_brute_force(params: PhiParams, budget: int) -> Set[UnitKey]:
    """Off-diagonal-block positions hit by some M^Φ"""
    units = set()
    for phi in enumerate_family(params, budget):
        matrix = phi_tensor(params, phi)
        for p, q in matrix.entries():
            i, row = decode_position(params, p)
            j, col = decode_position(params, q)
            if i != j:
                units.add(((i, row), (j, col)))
    return units


def unit_set(params: PhiParams, method: str = "closed_form", budget: int = 10**6) -> Set[UnitKey]:
    if method == "closed_form":
        return unit_set_closed_form(params)
    if method == "brute_force":
        return unit_set_brute_force(params, budget)
    raise ValidationError(f"unknown unit_set method {method!r}")


def unit_count(params: PhiParams) -> int:
    """|U| = Σ_{i≠j} σ^{2θ − d(i,j)}"""
    return sum(
        params.sigma ** (2 * params.theta - len(params.differing(i, j)))
        for i in range(params.r)
        for j in range(params.r)
        if i != j
    )


def span_dimension(params: PhiParams) -> int:
    """dim ℳ = σ^{2θ} + |U|"""
    return params.family_size + unit_count(params)


def clone_identity(
    params: PhiParams, a_dim: Optional[int] = None, b_dim: Optional[int] = None
) -> MatrixQ:
    """w^Σ for w = Σ_{i<r} a_i ⊗ b_i and clone size σ^θ"""
    a_dim, b_dim = _check_dims(params, a_dim, b_dim)
    side = params.side
    return MatrixQ(
        (a_dim * side, b_dim * side),
        {
            (i * side + p, i * side + q): Fraction(1)
            for i in range(params.r)
            for p in range(side)
            for q in range(side)
        },
    )


def diagonal_coverage(params: PhiParams, budget: int) -> Counter:
    """How many M^Φ hit each diagonal-block entry"""
    coverage = Counter()
    for phi in enumerate_family(params, budget):
        for p, q in phi_tensor(params, phi).entries():
            if p // params.side == q // params.side:
                coverage[(p, q)] += 1
    return coverage


def expected_clone_coefficients(params: PhiParams) -> Dict[Hashable, Fraction]:
    """
    Coefficients of w^Σ over 𝓕 ∪ 𝒰: 1 on every M^Φ, −σ^d on each unit

    Keys are ("F", Φ values) and ("U", unit key); d = #{γ : π_i(γ) ≠ π_j(γ)}.
    """
    coefficients: Dict[Hashable, Fraction] = {}
    for values in product(range(params.sigma * params.sigma), repeat=params.theta):
        coefficients[("F", values)] = Fraction(1)
    for key in sorted(unit_set_closed_form(params)):
        (i, _), (j, _) = key
        coefficients[("U", key)] = Fraction(-(params.sigma ** len(params.differing(i, j))))
    return coefficients


def span_basis(params: PhiParams, budget: int) -> SpanBasis:
    """
    Tracking basis of ℳ = ⟨𝓕 ∪ 𝒰⟩

    Units go in first, so every unit is kept and family members join only when they
    enlarge the span. The whole basis is settled by one rref.
    """
    basis = SpanBasis(track=True)
    cols = params.size
    vectors, tags = [], []
    for key in sorted(unit_set_closed_form(params)):
        p, q = unit_key_to_position(params, key)
        vectors.append({p * cols + q: Fraction(1)})
        tags.append(("U", key))
    for phi in enumerate_family(params, budget):
        vectors.append(phi_tensor(params, phi).vectorize())
        tags.append(("F", phi.values))
    basis.extend(vectors, tags)
    return basis


def membership_in_M(
    params: PhiParams,
    target: MatrixQ,
    budget: int = 10**6,
    basis: Optional[SpanBasis] = None,
) -> Optional[Dict[Hashable, Fraction]]:
    """
    Express a target matrix in 𝓕 ∪ 𝒰

    Returns:
        Coefficients keyed like expected_clone_coefficients, or None when the
        target lies outside ℳ
    """
    if target.dims != (params.size, params.size):
        raise ValidationError(
            f"target must be {params.size}x{params.size}, got {target.dims}"
        )
    basis = basis or span_basis(params, budget)
    return basis.express(target.vectorize())


def find_clear_class(
    partition: Sequence[Set[Hashable]], excluded: Sequence[Set[Hashable]]
) -> int:
    """
    Index δ of the first class disjoint from every excluded set

    Args:
        partition: ω pairwise disjoint classes
        excluded: r sets with r·|Z_α| < ω each

    Returns:
        The class index
    """
    omega = len(partition)
    r = len(excluded)
    seen: Set[Hashable] = set()
    for n, cls in enumerate(partition):
        if seen & set(cls):
            raise ValidationError(f"class {n} meets an earlier class")
        seen |= set(cls)
    for alpha, z in enumerate(excluded):
        if r * len(z) >= omega:
            raise ValidationError(
                f"|Z_{alpha + 1}| = {len(z)} is not below omega/r = {Fraction(omega, r)}"
            )
    blocked = set().union(*excluded) if excluded else set()
    for delta, cls in enumerate(partition):
        if not blocked & set(cls):
            return delta
    raise AssertionError("pigeonhole violated: every class meets an excluded set")

"""
Tangent-space apparatus at desk scale

A point p = (x^α, y^α, z^α, ξ^α, η^α, τ^α) and three fixed maps Ψ_A, Ψ_B, Ψ_C define the
spaces 𝒫, 𝒬, 𝒬′ ⊂ ℚ^{m³}. Generators are kept as sums of rank-one triples so they can be
flattened directly or projected onto ℛ in coordinates adapted to im Ψ_I ⊕ 𝒞_I.

Every dimension is an exact rank; the inequalities that hold unconditionally are asserted,
the asymptotic ones are reported only.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.forge_config import SAMPLE_HIGH, SAMPLE_LOW
from models.errors import ValidationError
from models.geometry import CoordinateBlock, DimensionCheck, SamplePoint, SubspaceProfile
from models.report import Assertion, VerificationReport
from models.tensor import MatrixQ, Tensor3
from services.algebra.linalg import SpanBasis, independent_indices, matrix_rank, rank_of_vectors, spans_equal
from services.secant.terracini import SparseVector, outer_vector, tangent_generators, unit_vector

logger = logging.getLogger(__name__)

Vector = List[Fraction]
Triple = Tuple[Sequence, Sequence, Sequence]
Generator = List[Triple]


# ----------------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------------


def _nonzero_vector(rng: np.random.Generator, m: int) -> List[int]:
    while True:
        vec = [int(v) for v in rng.integers(SAMPLE_LOW, SAMPLE_HIGH + 1, size=m)]
        if any(vec):
            return vec


def random_point(m: int, r: int, seed: int = 0) -> SamplePoint:
    """Point with nonzero small-integer vectors drawn from a seeded generator"""
    rng = np.random.default_rng(seed)
    families = [[_nonzero_vector(rng, m) for _ in range(r)] for _ in range(6)]
    return SamplePoint(m, r, *families)


def random_map(m: int, rank: int, rng: np.random.Generator, attempts: int = 50) -> MatrixQ:
    """Random integer m x m matrix of exactly the given rank (product of m x rank and rank x m)"""
    if not 0 <= rank <= m:
        raise ValidationError(f"rank must lie in [0, {m}], got {rank}")
    if rank == 0:
        return MatrixQ.zeros(m, m)
    for _ in range(attempts):
        left = rng.integers(SAMPLE_LOW, SAMPLE_HIGH + 1, size=(m, rank))
        right = rng.integers(SAMPLE_LOW, SAMPLE_HIGH + 1, size=(rank, m))
        matrix = MatrixQ.from_rows([[int(v) for v in row] for row in left @ right])
        if matrix_rank(matrix) == rank:
            return matrix
    raise ValidationError(f"no rank-{rank} draw in {attempts} attempts")


def random_profile(m: int, ranks: Sequence[int], seed: int = 0) -> SubspaceProfile:
    rng = np.random.default_rng(seed)
    psi_a, psi_b, psi_c = (random_map(m, rank, rng) for rank in ranks)
    return SubspaceProfile(psi_a, psi_b, psi_c)


def _check_compatible(point: SamplePoint, profile: SubspaceProfile) -> None:
    if point.m != profile.m:
        raise ValidationError(f"point has m={point.m}, profile has m={profile.m}")


# ----------------------------------------------------------------------------
# Tensors built from a point
# ----------------------------------------------------------------------------


def _sum_of_triples(m: int, triples: Sequence[Triple], dims: Tuple[int, int, int] = None) -> Tensor3:
    dims = dims or (m, m, m)
    items = []
    for x, y, z in triples:
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, zk in enumerate(z):
                    if zk:
                        items.append(((i, j, k), xi * yj * zk))
    return Tensor3.from_entries(dims, items)


def modified_tensor(point: SamplePoint, profile: SubspaceProfile, side: int = 1) -> Tensor3:
    """
    T¹ or T² for the maps Φ_A, Φ_B, Φ_C held by the profile

    side 1: Σ x⊗y⊗z + Φ_A(ξ)⊗y⊗z + x⊗Φ_B(η)⊗z + x⊗y⊗Φ_C(τ)
    side 2: Σ ξ⊗η⊗τ + Φ_A(x)⊗η⊗τ + ξ⊗Φ_B(y)⊗τ + ξ⊗η⊗Φ_C(z)
    """
    _check_compatible(point, profile)
    if side == 1:
        base, moved = (point.x, point.y, point.z), (point.xi, point.eta, point.tau)
    elif side == 2:
        base, moved = (point.xi, point.eta, point.tau), (point.x, point.y, point.z)
    else:
        raise ValidationError(f"side must be 1 or 2, got {side}")
    phi_a, phi_b, phi_c = profile.maps
    triples = []
    for alpha in range(point.r):
        u, v, w = (family[alpha] for family in base)
        triples.append((u, v, w))
        triples.append((phi_a.apply(list(moved[0][alpha])), v, w))
        triples.append((u, phi_b.apply(list(moved[1][alpha])), w))
        triples.append((u, v, phi_c.apply(list(moved[2][alpha]))))
    return _sum_of_triples(point.m, triples)


def assemble_W(point: SamplePoint) -> Tensor3:
    """φ(p) = Σ (x, ξ) ⊗ (y, η) ⊗ (z, τ) in the 2m x 2m x 2m space of the eight blocks"""
    m = point.m
    triples = [
        (
            point.x[alpha] + point.xi[alpha],
            point.y[alpha] + point.eta[alpha],
            point.z[alpha] + point.tau[alpha],
        )
        for alpha in range(point.r)
    ]
    return _sum_of_triples(m, triples, (2 * m, 2 * m, 2 * m))


# ----------------------------------------------------------------------------
# Spaces 𝒫, 𝒬, 𝒬′
# ----------------------------------------------------------------------------


def image_basis(psi: MatrixQ) -> List[Vector]:
    """Independent columns of Ψ, lexicographically first"""
    columns = [psi.apply(unit_vector(psi.cols, n)) for n in range(psi.cols)]
    sparse = [{i: v for i, v in enumerate(col) if v} for col in columns]
    return [columns[n] for n in independent_indices(sparse)]


def _add(u: Sequence, v: Sequence) -> Vector:
    return [Fraction(a) + b for a, b in zip(u, v)]


def p_generators(point: SamplePoint, profile: SubspaceProfile) -> List[Generator]:
    """b⊗y⊗z, x⊗b⊗z, x⊗y⊗b with b running over a basis of the matching image"""
    bases = [image_basis(psi) for psi in profile.maps]
    generators = []
    for x, y, z in zip(point.x, point.y, point.z):
        generators.extend([(b, y, z)] for b in bases[0])
        generators.extend([(x, b, z)] for b in bases[1])
        generators.extend([(x, y, b)] for b in bases[2])
    return generators


def q_generators(point: SamplePoint, profile: SubspaceProfile) -> List[Generator]:
    psi_a, psi_b, psi_c = profile.maps
    units = [unit_vector(point.m, n) for n in range(point.m)]
    generators = []
    for x, y, z, xi, eta, tau in zip(point.x, point.y, point.z, point.xi, point.eta, point.tau):
        a, b, c = psi_a.apply(list(xi)), psi_b.apply(list(eta)), psi_c.apply(list(tau))
        generators.extend([(e, y, z), (e, b, z), (e, y, c)] for e in units)
        generators.extend([(x, e, z), (a, e, z), (x, e, c)] for e in units)
        generators.extend([(x, y, e), (a, y, e), (x, b, e)] for e in units)
    return generators


def q_prime_generators(point: SamplePoint, profile: SubspaceProfile) -> List[Generator]:
    psi_a, psi_b, psi_c = profile.maps
    units = [unit_vector(point.m, n) for n in range(point.m)]
    generators = []
    for x, y, z, xi, eta, tau in zip(point.x, point.y, point.z, point.xi, point.eta, point.tau):
        xs = _add(x, psi_a.apply(list(xi)))
        ys = _add(y, psi_b.apply(list(eta)))
        zs = _add(z, psi_c.apply(list(tau)))
        generators.extend([(e, ys, zs)] for e in units)
        generators.extend([(xs, e, zs)] for e in units)
        generators.extend([(xs, ys, e)] for e in units)
    return generators


def flatten_generator(generator: Generator) -> SparseVector:
    out: SparseVector = {}
    for triple in generator:
        for idx, value in outer_vector(*triple).items():
            total = out.get(idx, 0) + value
            if total:
                out[idx] = total
            else:
                out.pop(idx, None)
    return out


def build_tangent_spaces(
    point: SamplePoint, profile: SubspaceProfile
) -> Tuple[List[SparseVector], List[SparseVector], List[SparseVector]]:
    """
    Generator lists of 𝒫, 𝒬 and 𝒬′ as vectors of ℚ^{m³}

    Returns:
        (P, Q, Q′) with r·Σ rank Ψ_I, 3rm and 3rm generators
    """
    _check_compatible(point, profile)
    return (
        [flatten_generator(g) for g in p_generators(point, profile)],
        [flatten_generator(g) for g in q_generators(point, profile)],
        [flatten_generator(g) for g in q_prime_generators(point, profile)],
    )


# ----------------------------------------------------------------------------
# Adapted coordinates and the projection onto ℛ
# ----------------------------------------------------------------------------


class AdaptedCoordinates:
    """Coordinates of ℚ^m in the basis (basis of im Ψ_I) ∪ (complement unit vectors)"""

    def __init__(self, profile: SubspaceProfile):
        self.m = profile.m
        self.ranks = profile.ranks
        self._bases = []
        for psi, complement in zip(profile.maps, profile.complements):
            basis = SpanBasis(track=True)
            images = [{i: v for i, v in enumerate(vec) if v} for vec in image_basis(psi)]
            units = [{c: Fraction(1)} for c in complement]
            basis.extend(images + units, range(len(images) + len(units)))
            self._bases.append(basis)

    def coordinates(self, mode: int, vector: Sequence) -> Vector:
        basis = self._bases[mode]
        found = basis.express({i: Fraction(v) for i, v in enumerate(vector) if v})
        out = [Fraction(0)] * len(vector)
        for n, value in found.items():
            out[n] = value
        return out

    def project_r(self, generator: Generator) -> SparseVector:
        """π_ℛ: keep adapted coordinates (i, j, k) with at most one image index"""
        m = self.m
        out: SparseVector = {}
        for triple in generator:
            adapted = [self.coordinates(n, vec) for n, vec in enumerate(triple)]
            for idx, value in outer_vector(*adapted).items():
                k = idx % m
                j = (idx // m) % m
                i = idx // (m * m)
                images = (i < self.ranks[0]) + (j < self.ranks[1]) + (k < self.ranks[2])
                if images > 1:
                    continue
                total = out.get(idx, 0) + value
                if total:
                    out[idx] = total
                else:
                    out.pop(idx, None)
        return out


def block_decomposition(profile: SubspaceProfile) -> List[CoordinateBlock]:
    """The eight blocks X_A ⊗ X_B ⊗ X_C, X_I ∈ {im Ψ_I, 𝒞_I}"""
    m = profile.m
    blocks = []
    for kinds in product(("im", "c"), repeat=3):
        dimension = 1
        for kind, rank in zip(kinds, profile.ranks):
            dimension *= rank if kind == "im" else m - rank
        blocks.append(CoordinateBlock(kinds, dimension))
    return blocks


def verify_block_decomposition(profile: SubspaceProfile) -> VerificationReport:
    """Blocks are exhaustive and independent, and dim ℛ = m³Δ"""
    m = profile.m
    blocks = block_decomposition(profile)
    report = VerificationReport(title="block_decomposition", summary={"profile": profile.to_dict()})
    total = sum(block.dimension for block in blocks)
    report.add(
        Assertion("dimensions_sum", total == m**3, len(blocks), f"sum = {total}, m³ = {m**3}"),
        {"sum": total},
    )

    factors = []
    for psi, complement in zip(profile.maps, profile.complements):
        factors.append({"im": image_basis(psi), "c": [unit_vector(m, c) for c in complement]})
    generators = []
    for block in blocks:
        for triple in product(*(factors[n][kind] for n, kind in enumerate(block.kinds))):
            generators.append(outer_vector(*triple))
    joint = rank_of_vectors(generators)
    report.add(
        Assertion("direct_sum", joint == m**3, len(generators), f"joint span dimension {joint}"),
        {"dimension": joint},
    )

    dim_r = sum(block.dimension for block in blocks if block.in_r)
    expected = m**3 * profile.big_delta
    report.add(
        Assertion("r_dimension", dim_r == expected, 1, f"dim R = {dim_r}"),
        {"dimension": dim_r, "expected": str(expected)},
    )
    report.summary["blocks"] = [block.to_dict() for block in blocks]
    report.summary["dim_L"] = sum(block.dimension for block in blocks if block.in_l)
    return report


# ----------------------------------------------------------------------------
# Dimension checks
# ----------------------------------------------------------------------------


def check_P_lower_bound(
    point: SamplePoint, profile: SubspaceProfile, r: Optional[int] = None
) -> DimensionCheck:
    """
    dim 𝒫 >= m³ − m·r·(3 − δ_A − δ_B − δ_C)

    The absolute form needs the tangent span 𝒪 to fill ℚ^{m³}, so it is assertive only
    then. The relative form dim 𝒫 >= dim 𝒪 − m·r·(3 − Σδ) holds for every input and is
    recorded in the details.
    """
    _check_compatible(point, profile)
    m = point.m
    r = point.r if r is None else r
    p_basis, _, _ = build_tangent_spaces(point, profile)
    dim_p = rank_of_vectors(p_basis)
    dim_o = rank_of_vectors(tangent_generators(point.x, point.y, point.z))
    deficit = m * r * (3 - sum(profile.deltas))
    bound = m**3 - deficit
    relative = dim_o - deficit
    return DimensionCheck(
        name="P_lower_bound",
        dimension=dim_p,
        bound=bound,
        holds=dim_p >= bound,
        assertive=dim_o == m**3,
        details={"dim_O": dim_o, "relative_bound": str(relative), "relative_holds": dim_p >= relative},
    )


def check_image_bound(point: SamplePoint, profile: SubspaceProfile) -> DimensionCheck:
    """dim ⟨Ψ_A(ξ')⊗y⊗z + x⊗Ψ_B(η')⊗z + x⊗y⊗Ψ_C(τ')⟩ <= (δ_A + δ_B + δ_C)·m·r"""
    _check_compatible(point, profile)
    psi_a, psi_b, psi_c = profile.maps
    m = point.m
    units = [unit_vector(m, n) for n in range(m)]
    generators = []
    for x, y, z in zip(point.x, point.y, point.z):
        generators.extend(outer_vector(psi_a.apply(e), y, z) for e in units)
        generators.extend(outer_vector(x, psi_b.apply(e), z) for e in units)
        generators.extend(outer_vector(x, y, psi_c.apply(e)) for e in units)
    dimension = rank_of_vectors(generators)
    cap = sum(profile.deltas) * m * point.r
    return DimensionCheck("image_bound", dimension, cap, dimension <= cap)


def check_PQ_report(
    point: SamplePoint, profile: SubspaceProfile, k: int, eps: Fraction, mu: Fraction
) -> DimensionCheck:
    """dim(𝒫 + 𝒬) against m²(mμ − max{3k, mε}); reported, never asserted"""
    _check_compatible(point, profile)
    m = point.m
    p_basis, q_basis, _ = build_tangent_spaces(point, profile)
    dimension = rank_of_vectors(p_basis + q_basis)
    bound = m * m * (m * Fraction(mu) - max(3 * k, m * Fraction(eps)))
    return DimensionCheck(
        "PQ_lower_bound",
        dimension,
        bound,
        dimension >= bound,
        assertive=False,
        details={"dim_P": rank_of_vectors(p_basis), "dim_Q": rank_of_vectors(q_basis)},
    )


def check_Q_lower_bound(point: SamplePoint, profile: SubspaceProfile, k: int) -> DimensionCheck:
    """
    dim π_ℛ(𝒬) against m³Δ − 3km² (reported)

    π_ℛ(𝒬) = π_ℛ(𝒬′) generator by generator, since the two differ by terms with two
    image factors; the details record that this equality was checked.
    """
    _check_compatible(point, profile)
    m = point.m
    adapted = AdaptedCoordinates(profile)
    projected_q = [adapted.project_r(g) for g in q_generators(point, profile)]
    projected_q_prime = [adapted.project_r(g) for g in q_prime_generators(point, profile)]
    dimension = rank_of_vectors(projected_q)
    bound = m**3 * profile.big_delta - 3 * k * m * m
    return DimensionCheck(
        "Q_projection_lower_bound",
        dimension,
        bound,
        dimension >= bound,
        assertive=False,
        details={
            "projections_agree": spans_equal(projected_q, projected_q_prime),
            "reduced_R_dimension": reduced_r_dimension(profile.deltas, m, k),
        },
    )


# ----------------------------------------------------------------------------
# Closed forms
# ----------------------------------------------------------------------------


def _check_reduced_args(deltas: Sequence[Fraction], m: int, k: int) -> Tuple[Fraction, ...]:
    if not 0 <= k <= m:
        raise ValidationError(f"need 0 <= k <= m, got k={k}, m={m}")
    deltas = tuple(Fraction(d) for d in deltas)
    if len(deltas) != 3 or any(not 0 <= d <= 1 for d in deltas):
        raise ValidationError(f"need three deltas in [0, 1], got {deltas}")
    return deltas


def reduced_r_dimension(deltas: Sequence[Fraction], m: int, k: int) -> Fraction:
    """
    dim ℛ′ = z′_A c′_B c′_C + c′_A z′_B c′_C + c′_A c′_B z′_C + c′_A c′_B c′_C

    with c′_I = min{(1 − δ_I)m, m − k} and z′_I = m − k − c′_I.
    """
    deltas = _check_reduced_args(deltas, m, k)
    c = [min((1 - d) * m, Fraction(m - k)) for d in deltas]
    z = [m - k - value for value in c]
    return z[0] * c[1] * c[2] + c[0] * z[1] * c[2] + c[0] * c[1] * z[2] + c[0] * c[1] * c[2]


def r_case_formula(deltas: Sequence[Fraction], m: int, k: int) -> Tuple[str, Fraction]:
    """
    The closed form for dim ℛ′ by the number of complements shorter than m − k

    Returns:
        (case label, value)
    """
    deltas = _check_reduced_args(deltas, m, k)
    short = [d for d in deltas if (1 - d) * m < m - k]
    if len(short) <= 1:
        return ("saturated" if not short else "one_short"), Fraction((m - k) ** 3)
    if len(short) == 2:
        a, b = short
        value = m**3 * (1 - a * b) - k * m * m * (3 - a * b - a - b) + k * k * m * (2 - a - b)
        return "two_short", value
    a, b, c = deltas
    big_delta = 1 - a * b - a * c - b * c + 2 * a * b * c
    value = m**3 * big_delta - k * m * m * (3 - a * (2 - b) - b * (2 - c) - c * (2 - a))
    return "all_short", value


def image_cap_gap(m: int, delta_sum: Fraction) -> Dict[str, object]:
    """
    Image cap δ·m·r_m with r_m = (11/30)m² against the claimed δm³ − 3m²

    The cap falls below the claim exactly when m > 90 / (19δ).
    """
    delta_sum = Fraction(delta_sum)
    if not 0 < delta_sum <= 3:
        raise ValidationError(f"delta_sum must lie in (0, 3], got {delta_sum}")
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    r_m = Fraction(11, 30) * m * m
    cap = delta_sum * m * r_m
    claimed = delta_sum * m**3 - 3 * m * m
    threshold = Fraction(90) / (19 * delta_sum)
    return {
        "m": m,
        "r_m": r_m,
        "cap": cap,
        "claimed": claimed,
        "gap": cap < claimed,
        "threshold": threshold,
        "above_threshold": m > threshold,
    }

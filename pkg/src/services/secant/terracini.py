"""
Secant dimensions of the Segre variety of m x m x m tensors

The affine tangent span at r random points is computed exactly and compared with the
expected dimension min{r(3m − 2), m³}.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from config.forge_config import SAMPLE_HIGH, SAMPLE_LOW, TERRACINI_TRIALS
from models.errors import ValidationError
from models.geometry import SecantRow
from services.algebra.linalg import rank_of_vectors
from services.rank.certificates import generic_rank

logger = logging.getLogger(__name__)

SparseVector = Dict[int, Fraction]


def outer_vector(x: Sequence, y: Sequence, z: Sequence) -> SparseVector:
    """x ⊗ y ⊗ z flattened with index i·|y|·|z| + j·|z| + k"""
    b, c = len(y), len(z)
    out: SparseVector = {}
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            for k, zk in enumerate(z):
                if zk:
                    out[(i * b + j) * c + k] = Fraction(xi) * yj * zk
    return out


def unit_vector(m: int, n: int) -> List[Fraction]:
    vec = [Fraction(0)] * m
    vec[n] = Fraction(1)
    return vec


def secant_dim_flags(m: int) -> List[str]:
    return ["formula outside stated range"] if m < 4 else []


def secant_dim_formula(m: int, r: int) -> int:
    """Affine dimension min{r(3m − 2), m³} of the r-th secant variety"""
    if m < 1 or r < 0:
        raise ValidationError(f"need m >= 1 and r >= 0, got m={m}, r={r}")
    if m < 4:
        logger.warning(f"⚠️ secant dimension formula used outside its stated range (m = {m})")
    return min(r * (3 * m - 2), m**3)


def tangent_generators(
    xs: Sequence[Sequence], ys: Sequence[Sequence], zs: Sequence[Sequence]
) -> List[SparseVector]:
    """The 3rm generators e_i⊗y⊗z, x⊗e_j⊗z, x⊗y⊗e_k of the tangent span"""
    m = len(xs[0]) if xs else 0
    units = [unit_vector(m, n) for n in range(m)]
    generators = []
    for x, y, z in zip(xs, ys, zs):
        generators.extend(outer_vector(e, y, z) for e in units)
        generators.extend(outer_vector(x, e, z) for e in units)
        generators.extend(outer_vector(x, y, e) for e in units)
    return generators


def _sample_dimension(m: int, r: int, seed: int) -> int:
    rng = np.random.default_rng(seed)
    points = rng.integers(SAMPLE_LOW, SAMPLE_HIGH + 1, size=(3, r, m))
    xs, ys, zs = ([[int(v) for v in vec] for vec in family] for family in points)
    return rank_of_vectors(tangent_generators(xs, ys, zs))


def terracini_dimension(
    m: int, r: int, trials: int = TERRACINI_TRIALS, seed: int = 0, workers: int = 1
) -> int:
    """
    Largest exact tangent-span dimension over seeded random integer points

    Args:
        m: side of the cube
        r: number of points
        trials: independent draws (seeds seed, seed + 1, ...)
        seed: base seed
        workers: joblib worker count

    Returns:
        max over trials of the rank of the 3rm x m³ generator matrix
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if m < 1 or r < 0:
        raise ValidationError(f"need m >= 1 and r >= 0, got m={m}, r={r}")
    if r == 0:
        return 0
    dimensions = Parallel(n_jobs=workers)(
        delayed(_sample_dimension)(m, r, seed + trial) for trial in range(trials)
    )
    logger.debug(f"Terracini samples m={m}, r={r}: {dimensions}")
    return max(dimensions)


def secant_table(
    m: int,
    r: Optional[int] = None,
    trials: int = TERRACINI_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> List[SecantRow]:
    """Rows for one r, or for every r from 1 to the generic rank of m"""
    r_values = [r] if r is not None else list(range(1, generic_rank(m) + 1))
    rows = []
    for value in r_values:
        row = SecantRow(
            m=m,
            r=value,
            formula=secant_dim_formula(m, value),
            sampled=terracini_dimension(m, value, trials, seed, workers),
            flags=secant_dim_flags(m),
        )
        if not row.match and m >= 4:
            logger.warning(f"⚠️ sampled dimension {row.sampled} below formula {row.formula} (m={m}, r={value})")
        rows.append(row)
    logger.info(f"✅ secant table m={m}: {sum(row.match for row in rows)}/{len(rows)} rows match")
    return rows


def generic_rank_check(m: int) -> Dict[str, object]:
    """The generic rank is the first r whose secant variety fills the whole space"""
    rank = generic_rank(m)
    filled = secant_dim_formula(m, rank) == m**3
    below = rank == 1 or secant_dim_formula(m, rank - 1) < m**3
    return {"m": m, "generic_rank": rank, "fills": filled, "minimal": below, "holds": filled and below}

"""
Grid minimization of μ = min over [0,1]³ of max{μ₁, μ₂}

The objective is symmetric in (α, β, γ), so the grid is restricted to α ≤ β ≤ γ and
split by α across joblib workers. Ties go to the lexicographically smallest point,
which keeps serial and parallel runs identical.
"""

import logging
import time
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from config.forge_config import MU_GRID_STEP, MU_REFINE_FACTOR, MU_REFINE_LEVELS
from models.errors import ValidationError
from models.search import MuPoint, MuSearchResult

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
TWO_THIRDS = 2.0 / 3.0

Candidate = Tuple[float, float, float, float]


def _check_unit(values) -> None:
    for v in values:
        if not 0 <= v <= 1:
            raise ValidationError(f"coordinates must lie in [0, 1], got {tuple(values)}")


def _mu_arrays(a, b, g):
    """μ₁ and μ₂ evaluated elementwise on broadcastable arrays"""
    na, nb, ng = 1 - a, 1 - b, 1 - g
    mu1 = (a + b + g) / 3 + na * nb * ng
    mu2 = (
        na * nb * ng
        + a * nb * ng
        + b * na * ng
        + g * na * nb
        + np.maximum(0.0, a * b * ng - TWO_THIRDS * np.minimum(a, b))
        + np.maximum(0.0, a * g * nb - TWO_THIRDS * np.minimum(a, g))
        + np.maximum(0.0, b * g * na - TWO_THIRDS * np.minimum(b, g))
    )
    return mu1, mu2


def mu_values(alpha: float, beta: float, gamma: float) -> Tuple[float, float, float]:
    """(μ₁, μ₂, max) in double precision"""
    _check_unit((alpha, beta, gamma))
    mu1, mu2 = _mu_arrays(np.float64(alpha), np.float64(beta), np.float64(gamma))
    return float(mu1), float(mu2), float(max(mu1, mu2))


def _positive_part(value: Fraction) -> Fraction:
    return value if value > 0 else Fraction(0)


def weak_mu2_exact(alpha: Fraction, beta: Fraction, gamma: Fraction) -> Fraction:
    """μ₂ without its three max-terms"""
    a, b, g = alpha, beta, gamma
    return (1 - a) * (1 - b) * (1 - g) + a * (1 - b) * (1 - g) + b * (1 - a) * (1 - g) + g * (1 - a) * (1 - b)


def mu_values_exact(alpha, beta, gamma) -> Tuple[Fraction, Fraction, Fraction]:
    """(μ₁, μ₂, max) over the rationals"""
    a, b, g = (Fraction(v) for v in (alpha, beta, gamma))
    _check_unit((a, b, g))
    mu1 = (a + b + g) / 3 + (1 - a) * (1 - b) * (1 - g)
    two_thirds = Fraction(2, 3)
    mu2 = (
        weak_mu2_exact(a, b, g)
        + _positive_part(a * b * (1 - g) - two_thirds * min(a, b))
        + _positive_part(a * g * (1 - b) - two_thirds * min(a, g))
        + _positive_part(b * g * (1 - a) - two_thirds * min(b, g))
    )
    return mu1, mu2, max(mu1, mu2)


def gap_witness(alpha, beta, gamma) -> Optional[str]:
    """
    Which inequality certifies max{μ₁, μ₂} > 1/2 at a point, checked exactly

    Returns:
        "mu1", "weak_mu2" (μ₂ without its max-terms), "mu2" (needed at the six
        permutations of (0, 1/2, 1)) or None when no branch exceeds 1/2
    """
    a, b, g = (Fraction(v) for v in (alpha, beta, gamma))
    mu1, mu2, _ = mu_values_exact(a, b, g)
    if mu1 > HALF:
        return "mu1"
    if weak_mu2_exact(a, b, g) > HALF:
        return "weak_mu2"
    if mu2 > HALF:
        return "mu2"
    return None


def _divisions(step: float) -> int:
    if not 0 < step <= 0.5:
        raise ValidationError(f"step must lie in (0, 0.5], got {step}")
    n = int(round(1 / step))
    if abs(n * step - 1) > 1e-9:
        raise ValidationError(f"step {step} does not divide [0, 1]")
    return n


def sorted_grid_size(n: int) -> int:
    """Number of grid points with α <= β <= γ on n + 1 levels per axis"""
    return (n + 1) * (n + 2) * (n + 3) // 6


def _slab_minimum(n: int, indices: List[int]) -> Optional[Candidate]:
    """Lexicographically first minimum over α-slabs, β and γ restricted to α <= β <= γ"""
    grid = np.arange(n + 1) / n
    best: Optional[Candidate] = None
    for i in indices:
        b = grid[i:, None]
        g = grid[None, i:]
        mu1, mu2 = _mu_arrays(grid[i], b, g)
        objective = np.maximum(mu1, mu2)
        objective = np.where(g >= b, objective, np.inf)
        flat = int(np.argmin(objective))
        j, l = divmod(flat, objective.shape[1])
        value = float(objective[j, l])
        candidate = (value, float(grid[i]), float(grid[i + j]), float(grid[i + l]))
        if best is None or candidate < best:
            best = candidate
    return best


def _local_minimum(center: Tuple[float, float, float], step: float) -> Tuple[Candidate, int]:
    """Full box of ±MU_REFINE_FACTOR steps around center, clipped to the cube"""
    offsets = np.arange(-MU_REFINE_FACTOR, MU_REFINE_FACTOR + 1) * step
    axes = [np.unique(np.clip(c + offsets, 0.0, 1.0)) for c in center]
    a, b, g = np.meshgrid(*axes, indexing="ij")
    mu1, mu2 = _mu_arrays(a, b, g)
    objective = np.maximum(mu1, mu2)
    flat = int(np.argmin(objective))
    idx = np.unravel_index(flat, objective.shape)
    candidate = (float(objective[idx]), float(a[idx]), float(b[idx]), float(g[idx]))
    return candidate, objective.size


def _point(candidate: Candidate) -> MuPoint:
    _, a, b, g = candidate
    mu1, mu2, _ = mu_values(a, b, g)
    return MuPoint(a, b, g, mu1, mu2)


def minimize_mu(
    step: float = MU_GRID_STEP, refine_levels: int = MU_REFINE_LEVELS, workers: int = 1
) -> MuSearchResult:
    """
    Grid search of μ with optional local refinement

    Args:
        step: grid spacing, must divide [0, 1]
        refine_levels: rounds of local search, each with the step divided by MU_REFINE_FACTOR
        workers: joblib worker count over α-slabs

    Returns:
        MuSearchResult with one incumbent per level (level 0 is the coarse grid)
    """
    start = time.perf_counter()
    n = _divisions(step)
    if refine_levels < 0:
        raise ValidationError(f"refine_levels must be >= 0, got {refine_levels}")
    logger.info(f"🔧 mu grid search: step={step}, {sorted_grid_size(n):,} sorted grid points")

    slabs = [list(range(w, n + 1, max(1, workers))) for w in range(max(1, workers))]
    results = Parallel(n_jobs=workers)(delayed(_slab_minimum)(n, slab) for slab in slabs if slab)
    best = min(r for r in results if r is not None)
    levels = [_point(best)]
    points = sorted_grid_size(n)

    local_step = step
    for _ in range(refine_levels):
        local_step /= MU_REFINE_FACTOR
        candidate, size = _local_minimum(best[1:], local_step)
        points += size
        if candidate < best:
            best = candidate
        levels.append(_point(best))

    argmin = _point(best)
    result = MuSearchResult(
        mu=argmin.objective,
        argmin=argmin,
        grid_points=points,
        levels=levels,
        seconds=time.perf_counter() - start,
    )
    logger.info(
        f"✅ mu = {result.mu:.6f} at ({argmin.alpha:.4f}, {argmin.beta:.4f}, {argmin.gamma:.4f})"
    )
    return result


def check_positive_gap(step: float, workers: int = 1) -> bool:
    """
    True when max{μ₁, μ₂} > 1/2 on every grid point

    The float minimum decides; its argmin is re-evaluated exactly on the rational grid.
    """
    n = _divisions(step)
    result = minimize_mu(step, 0, workers)
    point = result.argmin
    exact = mu_values_exact(*(Fraction(round(c * n), n) for c in point.coordinates))[2]
    holds = result.mu > 0.5 and exact > HALF
    marker = "✅" if holds else "❌"
    logger.info(f"{marker} 2mu - 1 > 0 on the step-{step} grid: min = {result.mu:.6f}")
    return holds

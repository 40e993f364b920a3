"""
Exact parameter bounds L⁻_{k,m}, L⁺_{k,m}, r_{m,ε} and the search for the smallest feasible m

Every feasibility decision is made over the rationals. The float prefilter only decides
which (k, m) pairs are clearly infeasible; anything within PREFILTER_MARGIN of the
boundary is re-checked exactly.
"""

import logging
import math
import time
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from config.forge_config import DEFAULT_M_MAX, PREFILTER_MARGIN
from models.errors import ValidationError
from models.search import BoundParams, ScanOutcome
from services.algebra.rational import ceil_fraction

logger = logging.getLogger(__name__)

SCAN_BLOCK = 2000


def r_of(m: int, eps: Fraction) -> int:
    """r_{m,ε} = ⌈(1 + ε)m² / 3⌉"""
    eps = Fraction(eps)
    if eps < 0:
        raise ValidationError(f"eps must be >= 0, got {eps}")
    return ceil_fraction((1 + eps) * m * m / 3)


def check_km(k: int, m: int) -> None:
    if not 1 <= k <= m - 1:
        raise ValidationError(f"need 1 <= k <= m-1, got k={k}, m={m}")


def L_bounds(k: int, m: int, mu: Fraction) -> Tuple[Fraction, Fraction]:
    """
    Lower and upper ends of the admissible ε-range for (k, m)

    Args:
        k: kernel dimension, 1 <= k <= m-1
        m: block size
        mu: the constant μ as an exact rational

    Returns:
        (L⁻_{k,m}, L⁺_{k,m})
    """
    check_km(k, m)
    mu = Fraction(mu)
    gap = 2 * mu - 1
    m2 = m * m
    lower = max(
        Fraction(9, k + 1)
        - Fraction((6 * k - 2) * m2 - (9 * k * k + 9) * m + (3 * k**3 + 9 * k + 6), m2 * (3 * m - 3 * k - 2)),
        Fraction(2 * m2 + 9 * m - 6, m2 * (3 * m - 2)),
    )
    upper = min(
        gap + (2 * (gap - 9 * k - 8) * m2 - 9 * m + 6) / (m2 * (3 * m - 2)),
        gap / 3 + (2 * (gap - 24) * m2 - 27 * m + 18) / (3 * m2 * (9 * m - 2)),
    )
    return lower, upper


def feasibility_window(k: int, m: int, mu: Fraction) -> Optional[Tuple[Fraction, Fraction]]:
    """[L⁻, L⁺) when nonempty, else None"""
    lower, upper = L_bounds(k, m, mu)
    return (lower, upper) if lower < upper else None


def window_params(k: int, m: int, mu: Fraction) -> Optional[BoundParams]:
    """BoundParams with the window and its r-range, r_hi taken at the open upper end"""
    window = feasibility_window(k, m, mu)
    if window is None:
        return None
    eps_lo, eps_hi = window
    return BoundParams(k, m, mu, eps_lo, eps_hi, r_of(m, eps_lo), r_of(m, eps_hi))


def k_ceiling(m: int, mu: Fraction) -> int:
    """
    Largest k that can be feasible at m

    L⁻ > 0 always, and the first branch of L⁺ is <= 0 once
    18km² >= 3(2μ − 1)m³ − 16m² − 9m + 6.
    """
    bound = (3 * (2 * Fraction(mu) - 1) * m**3 - 16 * m * m - 9 * m + 6) / (18 * m * m)
    return min(m - 1, ceil_fraction(bound) - 1)


def _float_margins(m: int, mu: float, ks: np.ndarray) -> np.ndarray:
    """L⁻ − L⁺ in double precision for every k in ks"""
    m = float(m)
    m2 = m * m
    gap = 2 * mu - 1
    lower = np.maximum(
        9 / (ks + 1) - ((6 * ks - 2) * m2 - (9 * ks * ks + 9) * m + (3 * ks**3 + 9 * ks + 6)) / (m2 * (3 * m - 3 * ks - 2)),
        (2 * m2 + 9 * m - 6) / (m2 * (3 * m - 2)),
    )
    upper = np.minimum(
        gap + (2 * (gap - 9 * ks - 8) * m2 - 9 * m + 6) / (m2 * (3 * m - 2)),
        gap / 3 + (2 * (gap - 24) * m2 - 27 * m + 18) / (3 * m2 * (9 * m - 2)),
    )
    return lower - upper


def _candidate_ks(m: int, mu: Fraction, k_max: Optional[int], prefilter: bool) -> List[int]:
    top = k_ceiling(m, mu)
    if k_max is not None:
        top = min(top, k_max)
    if top < 1:
        return []
    if not prefilter:
        return list(range(1, top + 1))
    ks = np.arange(1, top + 1, dtype=np.float64)
    margins = _float_margins(m, float(mu), ks)
    return [int(k) for k in ks[margins < PREFILTER_MARGIN]]


def _scan_block(
    ms: List[int], mu: Fraction, k_max: Optional[int], prefilter: bool
) -> Tuple[Optional[Tuple[int, int]], int, int]:
    """First feasible (m, k) in the block, with the number of m scanned and exact checks"""
    checks = 0
    for n, m in enumerate(ms):
        for k in _candidate_ks(m, mu, k_max, prefilter):
            checks += 1
            if feasibility_window(k, m, mu) is not None:
                return (m, k), n + 1, checks
    return None, len(ms), checks


def find_min_m(
    mu: Fraction,
    m_max: int = DEFAULT_M_MAX,
    k_max: Optional[int] = None,
    workers: int = 1,
    prefilter: bool = True,
) -> ScanOutcome:
    """
    Smallest m <= m_max admitting some k with L⁻_{k,m} < L⁺_{k,m} (smallest such k)

    Blocks of m are scanned in parallel, `workers` blocks at a time; the first batch that
    contains a feasible m ends the scan and the smallest (m, k) in it wins.
    """
    start = time.perf_counter()
    mu = Fraction(mu)
    if m_max < 2:
        raise ValidationError(f"m_max must be >= 2, got {m_max}")
    logger.info(f"🔧 Scanning m <= {m_max:,} for mu = {mu} (prefilter={prefilter})")

    blocks = [list(range(lo, min(lo + SCAN_BLOCK, m_max + 1))) for lo in range(2, m_max + 1, SCAN_BLOCK)]
    batch = max(1, workers)
    scanned = 0
    checks = 0
    found = None
    for n in range(0, len(blocks), batch):
        results = Parallel(n_jobs=workers)(
            delayed(_scan_block)(block, mu, k_max, prefilter) for block in blocks[n:n + batch]
        )
        for hit, count, block_checks in results:
            checks += block_checks
            scanned += count
            if hit is not None:
                found = hit
                break
        if found is not None:
            break

    outcome = ScanOutcome(None, m_max, scanned, checks)
    if found is not None:
        m, k = found
        outcome.found = window_params(k, m, mu)
        logger.info(f"✅ smallest feasible m = {m} with k = {k}")
    else:
        logger.warning(f"⚠️ no feasible m <= {m_max:,} for mu = {mu}")
    outcome.seconds = time.perf_counter() - start
    return outcome


def asymptotic_k_threshold(mu: Fraction) -> int:
    """Smallest k with 9/(k + 1) < (2μ − 1)/3"""
    gap = 2 * Fraction(mu) - 1
    if gap <= 0:
        raise ValidationError(f"need mu > 1/2, got {mu}")
    return math.floor(Fraction(27) / gap)


def find_stable_m(k: int, eps: Fraction, mu: Fraction, m_max: int) -> Optional[int]:
    """
    Smallest m̄ >= k + 1 with L⁻_{k,m} <= ε < L⁺_{k,m} for every m̄ < m <= m_max

    Returns:
        m̄, or None when the condition already fails at m_max
    """
    eps = Fraction(eps)
    if m_max < k + 2:
        raise ValidationError(f"m_max must exceed k + 1, got k={k}, m_max={m_max}")
    for m in range(m_max, k + 1, -1):
        lower, upper = L_bounds(k, m, mu)
        if not lower <= eps < upper:
            return None if m == m_max else m
    return k + 1

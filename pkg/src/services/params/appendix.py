"""
Executable checks of the parameter inequalities behind the feasibility window

For sampled (k, m):
    r_lower_split  r_{m,L⁻} >= 3m²/(k+1) + ⌈(m−k)³/(3(m−k)−2)⌉
    r_lower_generic r_{m,L⁻} >= ⌈m³/(3m−2)⌉
    dimension_gap  (3m−2)r_{m,ε}/2 < m²(mμ − max{3k, mε} − 3) for an ε inside (0, L⁺)
"""

import logging
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from config.forge_config import DEFAULT_APPENDIX_M_MAX, DEFAULT_APPENDIX_SAMPLES, DEFAULT_MU
from models.report import Assertion, VerificationReport
from services.algebra.rational import ceil_fraction, parse_rational
from services.params.bounds import L_bounds, check_km, feasibility_window, r_of

logger = logging.getLogger(__name__)

REFERENCE_KM = (328, 48352)


def r_lower_split(k: int, m: int, r: int) -> bool:
    return r >= Fraction(3 * m * m, k + 1) + ceil_fraction(Fraction((m - k) ** 3, 3 * (m - k) - 2))


def r_lower_generic(m: int, r: int) -> bool:
    return r >= ceil_fraction(Fraction(m**3, 3 * m - 2))


def dimension_gap(k: int, m: int, mu: Fraction, eps: Fraction) -> bool:
    r = r_of(m, eps)
    return Fraction((3 * m - 2) * r, 2) < m * m * (m * mu - max(3 * k, m * eps) - 3)


def gap_epsilon(k: int, m: int, mu: Fraction) -> Optional[Fraction]:
    """Midpoint of the window when it is nonempty, else L⁺/2 when L⁺ > 0"""
    window = feasibility_window(k, m, mu)
    if window is not None:
        return (window[0] + window[1]) / 2
    _, upper = L_bounds(k, m, mu)
    return upper / 2 if upper > 0 else None


def check_pair(k: int, m: int, mu: Fraction) -> Dict[str, Optional[bool]]:
    """
    All three inequalities at one (k, m)

    Returns:
        {"r_lower_split", "r_lower_generic", "dimension_gap"} with None when the gap
        inequality has no admissible ε
    """
    check_km(k, m)
    mu = Fraction(mu)
    lower, _ = L_bounds(k, m, mu)
    r = r_of(m, lower)
    eps = gap_epsilon(k, m, mu)
    return {
        "r_lower_split": r_lower_split(k, m, r),
        "r_lower_generic": r_lower_generic(m, r),
        "dimension_gap": None if eps is None else dimension_gap(k, m, mu, eps),
    }


def verify_appendix(
    m_max: int = DEFAULT_APPENDIX_M_MAX,
    samples: int = DEFAULT_APPENDIX_SAMPLES,
    seed: int = 0,
    mu: Fraction = None,
    include_reference: bool = True,
) -> VerificationReport:
    """
    Check the three inequalities on seeded random (k, m) with 2 <= m <= m_max

    Args:
        m_max: upper end of the sampled m range
        samples: number of random pairs
        seed: numpy seed
        mu: the constant μ (defaults to the configured value)
        include_reference: also check the reference pair (328, 48352)
    """
    mu = parse_rational(DEFAULT_MU) if mu is None else Fraction(mu)
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(samples):
        m = int(rng.integers(2, m_max + 1))
        k = int(rng.integers(1, m))
        pairs.append((k, m))
    if include_reference:
        pairs.append(REFERENCE_KM)

    logger.info(f"🔧 Checking parameter inequalities on {len(pairs)} pairs (m <= {m_max:,})")
    report = VerificationReport(title="appendix", summary={"mu": str(mu), "seed": seed, "m_max": m_max})
    failures: Dict[str, Optional[tuple]] = {name: None for name in ("r_lower_split", "r_lower_generic", "dimension_gap")}
    counts = dict.fromkeys(failures, 0)
    for k, m in pairs:
        for name, holds in check_pair(k, m, mu).items():
            if holds is None:
                continue
            counts[name] += 1
            if not holds and failures[name] is None:
                failures[name] = (k, m)

    for name, witness in failures.items():
        report.add(
            Assertion(name, witness is None, counts[name]),
            None if witness is None else {"k": witness[0], "m": witness[1]},
        )
    if report.passed:
        logger.info("✅ all parameter inequalities hold")
    else:
        logger.error(f"❌ parameter inequality violated: {report.witnesses}")
    return report

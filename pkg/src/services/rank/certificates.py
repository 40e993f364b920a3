"""
Rank certificates: the sandwich of sound lower bounds and verified decompositions
"""

import logging
from fractions import Fraction
from typing import List, Tuple

from config.forge_config import ALS_RESTARTS
from models.certificate import RankCertificate
from models.errors import ValidationError
from models.tensor import Decomposition, RankOneTerm, Tensor3
from services.algebra.rational import ceil_fraction
from services.algebra.tensor_ops import flattening_ranks
from services.rank.decomposition_search import (
    als_search,
    best_slice_decomposition,
    known_decomposition,
)
from services.rank.substitution import best_substitution_bound

logger = logging.getLogger(__name__)


def certified_lower_bound(tensor: Tensor3) -> Tuple[int, str]:
    """max(flattening ranks, best substitution bound) with its witness"""
    if tensor.is_zero():
        return 0, "zero tensor"
    ranks = flattening_ranks(tensor)
    lower = max(ranks)
    witness = f"flattening mode {'ABC'[ranks.index(lower)]}"
    substitution, description = best_substitution_bound(tensor)
    if substitution > lower:
        lower, witness = substitution, description
    return lower, witness


def certified_rank(
    tensor: Tensor3,
    restarts: int = ALS_RESTARTS,
    seed: int = 0,
    workers: int = 1,
) -> RankCertificate:
    """
    Certificate sandwich lower <= R(T) <= upper

    The upper side starts from the structured decompositions and asks ALS for shorter
    ones, escalating the target from the lower bound.
    """
    lower, lower_witness = certified_lower_bound(tensor)
    if tensor.is_zero():
        return RankCertificate(0, lower_witness, 0, Decomposition(tensor.dims, ()))

    best = best_slice_decomposition(tensor)
    known = known_decomposition(tensor)
    if known is not None and len(known) < len(best):
        best = known
    for target in range(lower, len(best)):
        found = als_search(tensor, target, restarts, seed, workers)
        if found is not None:
            best = found
            break
    if not best.certifies(tensor):
        raise ValidationError("decomposition failed exact re-summation")
    certificate = RankCertificate(lower, lower_witness, len(best), best)
    marker = "✅" if certificate.exact else "⚠️"
    logger.info(f"{marker} rank certificate {tensor.dims}: {certificate.lower} <= R <= {certificate.upper}")
    return certificate


def generic_rank_flags(m: int) -> List[str]:
    return ["formula outside stated range"] if m < 4 else []


def generic_rank(m: int) -> int:
    """⌈m³ / (3m − 2)⌉, the rank of a generic m x m x m tensor (cited for m >= 4)"""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if m < 4:
        logger.warning(f"⚠️ generic rank formula used outside its stated range (m = {m})")
    return ceil_fraction(Fraction(m**3, 3 * m - 2))


def _clone_vector(vector: Tuple[Fraction, ...], v: int) -> List[Fraction]:
    return [value for value in vector for _ in range(v)]


def transfer_clone_decomposition(decomposition: Decomposition, v: int) -> Decomposition:
    """x ⊗ y ⊗ z -> (x ⊗ 1_v) ⊗ (y ⊗ 1_v) ⊗ (z ⊗ 1_v), certifying the clone"""
    if v < 1:
        raise ValidationError(f"clone size must be >= 1, got {v}")
    dims = tuple(d * v for d in decomposition.target_dims)
    return Decomposition(
        dims,
        tuple(
            RankOneTerm(_clone_vector(t.x, v), _clone_vector(t.y, v), _clone_vector(t.z, v))
            for t in decomposition.terms
        ),
    )

"""
Machine verification of the Φ-family structure
"""

import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Set, Tuple

import numpy as np
from joblib import Parallel, delayed

from config.forge_config import FAMILY_SAMPLES, SAMPLE_HIGH, SAMPLE_LOW
from models.phi import PhiFunction, PhiParams
from models.report import Assertion, VerificationReport
from services.algebra.linalg import matrix_rank
from services.phi.phi_family import (
    decode_position,
    clone_identity,
    enumerate_family,
    expected_clone_coefficients,
    membership_in_M,
    phi_tensor,
    span_basis,
    span_dimension,
    unit_key_to_position,
    unit_set_closed_form,
)

logger = logging.getLogger(__name__)


def _scan_chunk(params: PhiParams, chunk: List[Tuple[int, ...]]) -> Tuple[Counter, Set, List]:
    """Diagonal coverage, off-diagonal hits and rank failures of a slice of the family"""
    coverage = Counter()
    hits = set()
    rank_failures = []
    for values in chunk:
        matrix = phi_tensor(params, PhiFunction(values, params.sigma))
        if matrix_rank(matrix.to_matrix()) != 1:
            rank_failures.append(list(values))
        for p, q in matrix.entries():
            i, row = decode_position(params, p)
            j, col = decode_position(params, q)
            if i == j:
                coverage[(p, q)] += 1
            else:
                hits.add(((i, row), (j, col)))
    return coverage, hits, rank_failures


def _chunks(items: List, count: int) -> List[List]:
    size = max(1, -(-len(items) // count))
    return [items[n:n + size] for n in range(0, len(items), size)]


def _block_diagonal_violation(params: PhiParams, entries: Dict[Tuple[int, int], Fraction]):
    """First off-diagonal entry whose witness digits differ, or None"""
    for (p, q), value in sorted(entries.items()):
        if not value:
            continue
        i, row = decode_position(params, p)
        j, col = decode_position(params, q)
        if i == j:
            continue
        differing = params.differing(i, j)
        tau = differing[0]
        if row[tau] != col[tau]:
            return {"block": [i, j], "row": list(row), "col": list(col), "tau": tau + 1}
    return None


class FamilyVerifier:
    """Checks coverage, rank one, block-diagonality, unit set and clone membership"""

    def __init__(self, params: PhiParams, budget: int, workers: int = 1, seed: int = 0):
        """
        Args:
            params: family parameters (must be enumerable within budget)
            budget: maximal family size
            workers: joblib worker count for the family scan
            seed: seed for the random span elements
        """
        self.params = params
        self.budget = budget
        self.workers = workers
        self.seed = seed

    def verify(self, samples: int = FAMILY_SAMPLES) -> VerificationReport:
        params = self.params
        logger.info(
            f"🔧 Verifying Phi family r={params.r}, theta={params.theta}, sigma={params.sigma}"
        )
        family = [phi.values for phi in enumerate_family(params, self.budget)]
        report = VerificationReport(title="phi_family", summary={"params": params.to_dict()})

        results = Parallel(n_jobs=self.workers)(
            delayed(_scan_chunk)(params, chunk) for chunk in _chunks(family, self.workers)
        )
        coverage = Counter()
        brute_units: Set = set()
        rank_failures: List = []
        for chunk_coverage, chunk_hits, chunk_failures in results:
            coverage.update(chunk_coverage)
            brute_units |= chunk_hits
            rank_failures.extend(chunk_failures)

        # every diagonal-block entry covered exactly once
        side = params.side
        bad = None
        for i in range(params.r):
            for p in range(side):
                for q in range(side):
                    position = (i * side + p, i * side + q)
                    if coverage.get(position, 0) != 1:
                        bad = {"position": list(position), "count": coverage.get(position, 0)}
                        break
                if bad:
                    break
            if bad:
                break
        report.add(
            Assertion("diagonal_coverage", bad is None, params.r * side * side,
                      "diagonal blocks sum to all-ones with multiplicity 1"),
            bad,
        )

        report.add(
            Assertion("rank_one", not rank_failures, len(family)),
            {"phi": rank_failures[0]} if rank_failures else None,
        )

        closed_units = unit_set_closed_form(params)
        mismatch = sorted(closed_units ^ brute_units)
        report.add(
            Assertion("unit_set_closed_form", not mismatch, len(closed_units),
                      "closed form equals brute force"),
            {"unit": str(mismatch[0])} if mismatch else None,
        )

        violation = self._check_block_diagonal(closed_units, samples)
        report.add(
            Assertion("off_diagonal_block_diagonal", violation is None, samples),
            violation,
        )

        basis = span_basis(params, self.budget)
        expected_dim = span_dimension(params)
        report.add(
            Assertion("span_dimension", basis.rank == expected_dim, expected_dim,
                      f"dim M = {basis.rank}"),
            {"dimension": basis.rank, "expected": expected_dim},
        )

        found = membership_in_M(params, clone_identity(params), basis=basis)
        expected = expected_clone_coefficients(params)
        report.add(
            Assertion("clone_membership", found is not None and found == expected, 1,
                      "w^Sigma in span with coefficients 1 and -sigma^d"),
            {"found": found is not None},
        )
        report.summary.update(
            {"family_size": len(family), "units": len(closed_units), "span_dimension": basis.rank}
        )
        if report.passed:
            logger.info("✅ Phi family structure verified")
        else:
            logger.error(f"❌ Phi family verification failed: {report.witnesses[:1]}")
        return report

    def _check_block_diagonal(self, units: Set, samples: int):
        """Random rational combinations of 𝓕 ∪ 𝒰 keep the witness digits aligned"""
        params = self.params
        rng = np.random.default_rng(self.seed)
        family = [phi_tensor(params, phi) for phi in enumerate_family(params, self.budget)]
        unit_positions = [unit_key_to_position(params, key) for key in sorted(units)]
        if params.r < 2:
            return None
        for _ in range(samples):
            entries: Dict[Tuple[int, int], Fraction] = {}
            weights = rng.integers(SAMPLE_LOW, SAMPLE_HIGH + 1, size=len(family) + len(unit_positions))
            for weight, matrix in zip(weights[: len(family)], family):
                if weight:
                    for position, v in matrix.entries().items():
                        entries[position] = entries.get(position, 0) + int(weight) * v
            for weight, position in zip(weights[len(family):], unit_positions):
                if weight:
                    entries[position] = entries.get(position, 0) + int(weight)
            violation = _block_diagonal_violation(params, entries)
            if violation is not None:
                return violation
        return None


def verify_family_structure(
    params: PhiParams, budget: int, samples: int = FAMILY_SAMPLES, workers: int = 1, seed: int = 0
) -> VerificationReport:
    return FamilyVerifier(params, budget, workers, seed).verify(samples)

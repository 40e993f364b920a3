"""
Main orchestrator wiring the services behind every subcommand
"""

import json
import logging
import os
import sys
from fractions import Fraction
from typing import Any, Dict, Tuple

# Add src directory to Python path when running as standalone script
if __name__ == "__main__":
    current_dir = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.dirname(current_dir)
    if src_dir not in sys.path:
        sys.path.insert(0, src_dir)

from config.forge_config import (
    ALS_RESTARTS,
    DEFAULT_APPENDIX_M_MAX,
    DEFAULT_APPENDIX_SAMPLES,
    DEFAULT_M_MAX,
    DEFAULT_MU,
    FAMILY_SAMPLES,
    MU_GRID_STEP,
    MU_REFINE_LEVELS,
    TERRACINI_TRIALS,
)
from models.errors import ConfigError, VerificationFailure
from models.phi import PhiParams
from models.run_config import RunConfig
from services.algebra.rational import parse_rational
from services.algebra.serialization import (
    decomposition_from_dict,
    subspace_from_dict,
    tensor_from_dict,
)
from services.algebra.tensor_ops import concise_modes, flattening_ranks, trivial_rank_bounds
from services.constructions.builders import augment, clone_tensor
from services.optimization.mu_grid import check_positive_gap, mu_values_exact
from services.optimization.mu_grid import minimize_mu
from services.params.appendix import verify_appendix
from services.params.bounds import find_min_m
from services.phi.family_verifier import FamilyVerifier
from services.phi.phi_family import span_dimension, unit_count
from services.rank.certificates import certified_lower_bound, certified_rank, transfer_clone_decomposition
from services.secant.terracini import secant_table

logger = logging.getLogger(__name__)

Outcome = Tuple[Any, bool]


def load_json(path: str) -> Any:
    """Read a JSON document; OSError and JSONDecodeError propagate to the caller"""
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


class TensorForge:
    """Runs one subcommand from a RunConfig and returns (report, passed)"""

    def __init__(self, config: RunConfig):
        self.config = config
        self._handlers = {
            "mu": self.run_mu,
            "params": self.run_params,
            "verify-appendix": self.run_verify_appendix,
            "phi": self.run_phi,
            "rank": self.run_rank,
            "clone": self.run_clone,
            "augment": self.run_augment,
            "secant": self.run_secant,
            "tensor": self.run_tensor,
        }

    def run(self) -> Outcome:
        logger.info(f"🔧 Running {self.config.subcommand}")
        return self._handlers[self.config.subcommand]()

    def _require_input(self) -> str:
        if not self.config.input_path:
            raise ConfigError(f"{self.config.subcommand} needs --input")
        return self.config.input_path

    def _require_option(self, name: str) -> Any:
        value = self.config.option(name)
        if value is None:
            raise ConfigError(f"{self.config.subcommand} needs --{name.replace('_', '-')}")
        return value

    # ------------------------------------------------------------------
    # μ and parameters
    # ------------------------------------------------------------------

    def run_mu(self) -> Outcome:
        cfg = self.config
        step = float(cfg.option("step", MU_GRID_STEP))
        result = minimize_mu(step, int(cfg.option("refine", MU_REFINE_LEVELS)), cfg.workers)
        report: Dict[str, Any] = result.to_dict()
        passed = True
        if cfg.option("exact_check", False):
            point = result.argmin
            exact = mu_values_exact(*(Fraction(c).limit_denominator(10**6) for c in point.coordinates))
            report["exact_objective"] = exact[2]
            report["positive_gap"] = check_positive_gap(step, cfg.workers)
            passed = report["positive_gap"]
        return report, passed

    def run_params(self) -> Outcome:
        cfg = self.config
        mu = parse_rational(cfg.option("mu", DEFAULT_MU))
        outcome = find_min_m(
            mu,
            int(cfg.option("m_max", DEFAULT_M_MAX)),
            cfg.option("k_max"),
            cfg.workers,
        )
        return outcome, True

    def run_verify_appendix(self) -> Outcome:
        cfg = self.config
        report = verify_appendix(
            int(cfg.option("m_max", DEFAULT_APPENDIX_M_MAX)),
            int(cfg.option("samples", DEFAULT_APPENDIX_SAMPLES)),
            cfg.seed,
            parse_rational(cfg.option("mu", DEFAULT_MU)),
        )
        return report, report.passed

    # ------------------------------------------------------------------
    # Φ family
    # ------------------------------------------------------------------

    def run_phi(self) -> Outcome:
        cfg = self.config
        r = int(self._require_option("r"))
        theta = int(cfg.option("theta", (r - 1).bit_length()))
        sigma = int(cfg.option("sigma", 2))
        params = PhiParams.with_default_pi(r, theta, sigma)
        if not cfg.option("verify", False):
            summary = {
                "params": params.to_dict(),
                "family_size": params.family_size,
                "units": unit_count(params),
                "span_dimension": span_dimension(params),
            }
            return summary, True
        verifier = FamilyVerifier(params, cfg.budget, cfg.workers, cfg.seed)
        report = verifier.verify(int(cfg.option("samples", FAMILY_SAMPLES)))
        return report, report.passed

    # ------------------------------------------------------------------
    # Tensors
    # ------------------------------------------------------------------

    def run_rank(self) -> Outcome:
        cfg = self.config
        tensor = tensor_from_dict(load_json(self._require_input()))
        restarts = max(1, min(ALS_RESTARTS, cfg.budget))
        certificate = certified_rank(tensor, restarts, cfg.seed, cfg.workers)
        return certificate, True

    def run_clone(self) -> Outcome:
        cfg = self.config
        tensor = tensor_from_dict(load_json(self._require_input()))
        v = int(self._require_option("v"))
        cloned = clone_tensor(tensor, v)
        report: Dict[str, Any] = {"v": v, "dims": list(cloned.dims), "tensor": cloned}
        passed = True
        path = cfg.option("decomposition")
        if path:
            decomposition = decomposition_from_dict(load_json(path))
            if not decomposition.certifies(tensor):
                raise VerificationFailure(
                    "decomposition does not re-sum to the input tensor",
                    {"terms": len(decomposition), "dims": list(tensor.dims)},
                )
            transferred = transfer_clone_decomposition(decomposition, v)
            clone_ok = transferred.certifies(cloned)
            report.update(
                {
                    "decomposition": transferred,
                    "clone_certified": clone_ok,
                }
            )
            passed = clone_ok
        return report, passed

    def run_augment(self) -> Outcome:
        tensor = tensor_from_dict(load_json(self._require_input()))
        subspaces = [subspace_from_dict(load_json(self._require_option(name))) for name in ("ua", "ub", "uc")]
        augmented = augment(tensor, *subspaces)
        report = {
            "dims": list(augmented.dims),
            "tensor": augmented,
            "subspace_dims": [s.dim for s in subspaces],
        }
        return report, True

    def run_tensor(self) -> Outcome:
        tensor = tensor_from_dict(load_json(self._require_input()))
        lower, witness = certified_lower_bound(tensor)
        trivial_lower, trivial_upper = trivial_rank_bounds(tensor)
        report = {
            "canonical": tensor,
            "dims": list(tensor.dims),
            "nnz": tensor.nnz,
            "flattening_ranks": list(flattening_ranks(tensor)),
            "concise": list(concise_modes(tensor)),
            "lower_bound": lower,
            "lower_witness": witness,
            "trivial_bounds": [trivial_lower, trivial_upper],
        }
        return report, True

    # ------------------------------------------------------------------
    # Secant dimensions
    # ------------------------------------------------------------------

    def run_secant(self) -> Outcome:
        cfg = self.config
        m = int(self._require_option("m"))
        r = cfg.option("r")
        rows = secant_table(
            m,
            None if r is None else int(r),
            int(cfg.option("trials", TERRACINI_TRIALS)),
            cfg.seed,
            cfg.workers,
        )
        # the formula is only cited for m >= 4
        passed = m < 4 or all(row.match for row in rows)
        if cfg.report_format == "csv":
            return rows, passed
        return {"m": m, "rows": rows}, passed


def main():
    """Small demonstration run of the toolkit"""
    from config.forge_config import LOG_FORMAT, LOG_LEVEL

    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    try:
        for subcommand, options in (
            ("mu", {"step": 0.25}),
            ("phi", {"r": 2, "theta": 1, "sigma": 2, "verify": True}),
            ("secant", {"m": 4, "r": 2}),
        ):
            report, passed = TensorForge(RunConfig(subcommand, options=options)).run()
            marker = "✅" if passed else "❌"
            print(f"{marker} {subcommand}: passed={passed}")
    except Exception as e:
        print(f"❌ An error occurred: {e}")


if __name__ == "__main__":
    main()

"""
Data models and structures
"""

from .errors import (
    ForgeError,
    ValidationError,
    ParseError,
    SupportError,
    SubspaceContainmentError,
    BudgetExceededError,
    ConfigError,
    VerificationFailure,
)
from .tensor import Tensor3, MatrixQ, RankOneTerm, Decomposition
from .subspace import MatrixSubspace, ModificationPlan
from .phi import PhiParams, PhiFunction, FactoredMatrix
from .certificate import RankCertificate
from .geometry import CoordinateBlock, SamplePoint, SubspaceProfile, DimensionCheck, SecantRow
from .search import MuPoint, MuSearchResult, BoundParams, ScanOutcome
from .report import Assertion, VerificationReport
from .run_config import RunConfig

__all__ = [
    # Errors
    "ForgeError",
    "ValidationError",
    "ParseError",
    "SupportError",
    "SubspaceContainmentError",
    "BudgetExceededError",
    "ConfigError",
    "VerificationFailure",
    # Tensors
    "Tensor3",
    "MatrixQ",
    "RankOneTerm",
    "Decomposition",
    "MatrixSubspace",
    "ModificationPlan",
    # Phi family
    "PhiParams",
    "PhiFunction",
    "FactoredMatrix",
    # Results
    "RankCertificate",
    "SamplePoint",
    "SubspaceProfile",
    "DimensionCheck",
    "SecantRow",
    "CoordinateBlock",
    "MuPoint",
    "MuSearchResult",
    "BoundParams",
    "ScanOutcome",
    "Assertion",
    "VerificationReport",
    "RunConfig",
]

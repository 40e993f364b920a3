"""
Data classes for the μ grid search and the (μ, k, m, ε) parameter search
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from models.errors import ValidationError
from models.tensor import format_rational


@dataclass(frozen=True)
class MuPoint:
    """Grid point (α, β, γ) with both branches of the minimax objective"""

    alpha: float
    beta: float
    gamma: float
    mu1: float
    mu2: float

    @property
    def objective(self) -> float:
        return max(self.mu1, self.mu2)

    @property
    def coordinates(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "argmin": [self.alpha, self.beta, self.gamma],
            "mu1": self.mu1,
            "mu2": self.mu2,
            "objective": self.objective,
        }


@dataclass(frozen=True)
class MuSearchResult:
    """Outcome of minimize_mu, one incumbent per refinement level"""

    mu: float
    argmin: MuPoint
    grid_points: int
    levels: List[MuPoint] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "argmin": [self.argmin.alpha, self.argmin.beta, self.argmin.gamma],
            "grid_points": self.grid_points,
            "levels": [p.objective for p in self.levels],
            "seconds": round(self.seconds, 3),
        }


R_HI_CONVENTION = "r_hi = ceil((1 + eps_hi) m^2 / 3), the supremum over the half-open window"


@dataclass(frozen=True)
class BoundParams:
    """(μ, k, m) with an optional feasibility window [eps_lo, eps_hi) and its r-range"""

    k: int
    m: int
    mu: Fraction
    eps_lo: Optional[Fraction] = None
    eps_hi: Optional[Fraction] = None
    r_lo: Optional[int] = None
    r_hi: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.k <= self.m - 1:
            raise ValidationError(f"need 1 <= k <= m-1, got k={self.k}, m={self.m}")
        object.__setattr__(self, "mu", Fraction(self.mu))
        if (self.eps_lo is None) != (self.eps_hi is None):
            raise ValidationError("window needs both eps_lo and eps_hi")
        if self.eps_lo is not None:
            object.__setattr__(self, "eps_lo", Fraction(self.eps_lo))
            object.__setattr__(self, "eps_hi", Fraction(self.eps_hi))
            if not self.eps_lo < self.eps_hi:
                raise ValidationError(f"empty window [{self.eps_lo}, {self.eps_hi})")
        if self.r_lo is not None and self.r_hi is not None and self.r_lo > self.r_hi:
            raise ValidationError(f"r_lo {self.r_lo} > r_hi {self.r_hi}")

    @property
    def has_window(self) -> bool:
        return self.eps_lo is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "m": self.m,
            "mu": format_rational(self.mu),
            "eps_lo": None if self.eps_lo is None else format_rational(self.eps_lo),
            "eps_hi": None if self.eps_hi is None else format_rational(self.eps_hi),
            "r_lo": self.r_lo,
            "r_hi": self.r_hi,
            "r_hi_convention": R_HI_CONVENTION,
        }


@dataclass
class ScanOutcome:
    """find_min_m result: the first feasible parameters, or None, plus statistics"""

    found: Optional[BoundParams]
    m_max: int
    scanned_m: int = 0
    exact_checks: int = 0
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = self.found.to_dict() if self.found else {"found": False}
        out.update(
            {
                "m_max": self.m_max,
                "scanned": self.scanned_m,
                "exact_checks": self.exact_checks,
                "seconds": round(self.seconds, 3),
            }
        )
        return out

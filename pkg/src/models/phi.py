"""
Data classes for the Φ-tensor family
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Tuple

from models.errors import ValidationError
from models.tensor import MatrixQ, format_rational


@dataclass(frozen=True)
class PhiParams:
    """
    Combinatorial data (r, θ, σ, π) of a Φ-family

    pi[i] is the function π_i: {1..θ} -> {1,2} stored as a θ-tuple.
    """

    r: int
    theta: int
    sigma: int
    pi: Tuple[Tuple[int, ...], ...]
    flags: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValidationError(f"r must be >= 1, got {self.r}")
        if self.theta < 0:
            raise ValidationError(f"theta must be >= 0, got {self.theta}")
        if self.sigma < 1:
            raise ValidationError(f"sigma must be >= 1, got {self.sigma}")
        if 2**self.theta < self.r:
            raise ValidationError(
                f"2^theta = {2 ** self.theta} < r = {self.r}: no room for distinct pi"
            )
        pi = tuple(tuple(int(v) for v in row) for row in self.pi)
        if len(pi) != self.r:
            raise ValidationError(f"expected {self.r} pi functions, got {len(pi)}")
        for n, row in enumerate(pi):
            if len(row) != self.theta or any(v not in (1, 2) for v in row):
                raise ValidationError(f"pi[{n}] = {row} is not a map {{1..theta}} -> {{1,2}}")
        if len(set(pi)) != len(pi):
            raise ValidationError(f"pi functions must be pairwise distinct: {pi}")
        object.__setattr__(self, "pi", pi)
        flags = tuple(self.flags)
        if self.theta == 0 and "theta=0" not in flags:
            flags = flags + ("theta=0",)
        object.__setattr__(self, "flags", flags)

    @classmethod
    def with_default_pi(cls, r: int, theta: int, sigma: int) -> "PhiParams":
        """Assign the first r maps {1..θ} -> {1,2} in binary order"""
        if theta < 0:
            raise ValidationError(f"theta must be >= 0, got {theta}")
        pi = tuple(row for _, row in zip(range(r), product((1, 2), repeat=theta)))
        return cls(r, theta, sigma, pi)

    @property
    def side(self) -> int:
        """σ^θ, the clone size of each of the r blocks"""
        return self.sigma**self.theta

    @property
    def family_size(self) -> int:
        """(σ²)^θ"""
        return self.sigma ** (2 * self.theta)

    @property
    def size(self) -> int:
        """Row (and column) count r·σ^θ of the ambient matrices"""
        return self.r * self.side

    def differing(self, i: int, j: int) -> List[int]:
        """Positions γ (0-based) where π_i and π_j disagree"""
        return [g for g in range(self.theta) if self.pi[i][g] != self.pi[j][g]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "theta": self.theta,
            "sigma": self.sigma,
            "pi": [list(row) for row in self.pi],
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class PhiFunction:
    """Φ: {1..θ} -> {0..σ²−1}"""

    values: Tuple[int, ...]
    sigma: int

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        bound = self.sigma * self.sigma
        for g, v in enumerate(values):
            if not 0 <= v < bound:
                raise ValidationError(f"Phi({g + 1}) = {v} outside [0, {bound - 1}]")
        object.__setattr__(self, "values", values)

    @property
    def theta(self) -> int:
        return len(self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {"values": list(self.values), "sigma": self.sigma}


@dataclass(frozen=True)
class FactoredMatrix:
    """Rank-one matrix left · rightᵀ with sparse factors (r·σ^θ coordinates when square)"""

    left: Dict[int, Fraction]
    right: Dict[int, Fraction]
    rows: int
    cols: int

    def __post_init__(self):
        for name, size in (("left", self.rows), ("right", self.cols)):
            vec = {int(k): Fraction(v) for k, v in getattr(self, name).items() if v}
            if not vec:
                raise ValidationError(f"factor {name} must be nonzero")
            if any(not 0 <= k < size for k in vec):
                raise ValidationError(f"factor {name} index outside [0, {size})")
            object.__setattr__(self, name, vec)

    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {
            (p, q): u * v for p, u in self.left.items() for q, v in self.right.items()
        }

    def vectorize(self) -> Dict[int, Fraction]:
        return {p * self.cols + q: v for (p, q), v in self.entries().items()}

    def to_matrix(self) -> MatrixQ:
        return MatrixQ((self.rows, self.cols), self.entries())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "left": [[k, format_rational(v)] for k, v in sorted(self.left.items())],
            "right": [[k, format_rational(v)] for k, v in sorted(self.right.items())],
        }

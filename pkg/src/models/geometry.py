"""
Data classes for secant-geometry sampling
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from models.errors import ValidationError
from models.tensor import MatrixQ, format_rational

Vector = Tuple[Fraction, ...]
_FAMILIES = ("x", "y", "z", "xi", "eta", "tau")


@dataclass(frozen=True)
class SamplePoint:
    """A point (x^α, y^α, z^α, ξ^α, η^α, τ^α)_{α<r} with vectors of length m"""

    m: int
    r: int
    x: Tuple[Vector, ...]
    y: Tuple[Vector, ...]
    z: Tuple[Vector, ...]
    xi: Tuple[Vector, ...]
    eta: Tuple[Vector, ...]
    tau: Tuple[Vector, ...]
    allow_zero: bool = False

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise ValidationError(f"need m, r >= 1, got m={self.m}, r={self.r}")
        for name in _FAMILIES:
            vectors = tuple(tuple(Fraction(v) for v in vec) for vec in getattr(self, name))
            if len(vectors) != self.r:
                raise ValidationError(f"{name} holds {len(vectors)} vectors, expected {self.r}")
            for alpha, vec in enumerate(vectors):
                if len(vec) != self.m:
                    raise ValidationError(f"{name}[{alpha}] has length {len(vec)}, expected {self.m}")
                if not self.allow_zero and not any(vec):
                    raise ValidationError(f"{name}[{alpha}] is zero")
            object.__setattr__(self, name, vectors)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"m": self.m, "r": self.r}
        for name in _FAMILIES:
            out[name] = [[format_rational(v) for v in vec] for vec in getattr(self, name)]
        return out


@dataclass(frozen=True)
class SubspaceProfile:
    """
    The three m x m maps Ψ_A, Ψ_B, Ψ_C with their image ratios and complements

    complements[n] lists coordinate indices whose unit vectors span a complement
    of im Ψ; it is computed greedily when omitted.
    """

    psi_a: MatrixQ
    psi_b: MatrixQ
    psi_c: MatrixQ
    complements: Optional[Tuple[Tuple[int, ...], ...]] = None
    ranks: Tuple[int, int, int] = field(init=False)

    def __post_init__(self):
        from services.algebra.linalg import SpanBasis, matrix_rank

        m = self.psi_a.rows
        for name, psi in zip(("A", "B", "C"), self.maps):
            if psi.dims != (m, m):
                raise ValidationError(f"Psi_{name} must be {m}x{m}, got {psi.dims}")
        ranks = tuple(matrix_rank(psi) for psi in self.maps)
        complements = []
        for n, psi in enumerate(self.maps):
            basis = SpanBasis()
            basis.extend(list(psi.transpose().row_map().values()))
            if self.complements is None:
                chosen = tuple(basis.extend([{c: Fraction(1)} for c in range(m)], range(m)))
            else:
                chosen = tuple(self.complements[n])
                if any(not 0 <= c < m for c in chosen):
                    raise ValidationError(f"complement index out of range: {chosen}")
                basis.extend([{c: Fraction(1)} for c in chosen])
                if len(chosen) != m - ranks[n] or basis.rank != m:
                    raise ValidationError(
                        f"coordinates {chosen} do not complement im Psi_{'ABC'[n]}"
                    )
            complements.append(chosen)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "complements", tuple(complements))

    @property
    def maps(self) -> Tuple[MatrixQ, MatrixQ, MatrixQ]:
        return (self.psi_a, self.psi_b, self.psi_c)

    @property
    def m(self) -> int:
        return self.psi_a.rows

    @property
    def deltas(self) -> Tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(rank, self.m) for rank in self.ranks)

    @property
    def big_delta(self) -> Fraction:
        """Δ = 1 − δAδB − δAδC − δBδC + 2δAδBδC"""
        da, db, dc = self.deltas
        return 1 - da * db - da * dc - db * dc + 2 * da * db * dc

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "ranks": list(self.ranks),
            "deltas": [format_rational(d) for d in self.deltas],
            "Delta": format_rational(self.big_delta),
            "complements": [list(c) for c in self.complements],
        }


@dataclass
class DimensionCheck:
    """Exact dimension compared with a bound; assertive checks must hold"""

    name: str
    dimension: int
    bound: Fraction
    holds: bool
    assertive: bool = True
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "bound": format_rational(self.bound),
            "holds": self.holds,
            "assertive": self.assertive,
            "details": self.details,
        }


@dataclass
class SecantRow:
    """One row of the secant dimension table"""

    m: int
    r: int
    formula: int
    sampled: int
    flags: List[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.formula == self.sampled

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "r": self.r,
            "formula": self.formula,
            "sampled": self.sampled,
            "match": self.match,
        }


@dataclass(frozen=True)
class CoordinateBlock:
    """X_A ⊗ X_B ⊗ X_C with every X_I either im Ψ_I ("im") or its complement ("c")"""

    kinds: Tuple[str, str, str]
    dimension: int

    @property
    def label(self) -> str:
        return "⊗".join(f"{kind}_{mode}" for kind, mode in zip(self.kinds, "ABC"))

    @property
    def image_factors(self) -> int:
        return sum(kind == "im" for kind in self.kinds)

    @property
    def in_r(self) -> bool:
        """Blocks of ℛ carry at most one image factor"""
        return self.image_factors <= 1

    @property
    def in_l(self) -> bool:
        """Blocks of ℒ carry one or two image factors"""
        return self.image_factors in (1, 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "dimension": self.dimension,
            "in_R": self.in_r,
            "in_L": self.in_l,
        }

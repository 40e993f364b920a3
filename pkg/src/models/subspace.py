"""
Data classes for matrix subspaces and modification plans
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from models.errors import ValidationError
from models.tensor import Index2, MatrixQ, _check_dims


@dataclass(frozen=True)
class MatrixSubspace:
    """Subspace of rows x cols matrices given by a linearly independent basis"""

    ambient_dims: Index2
    basis: Tuple[MatrixQ, ...] = ()

    def __post_init__(self):
        # imported here: services.algebra depends on models
        from services.algebra.linalg import rank_of_vectors

        dims = _check_dims(self.ambient_dims, 2)
        basis = tuple(self.basis)
        for n, matrix in enumerate(basis):
            if matrix.dims != dims:
                raise ValidationError(
                    f"basis element {n} has dims {matrix.dims}, expected {dims}"
                )
        if rank_of_vectors([m.vectorize() for m in basis]) != len(basis):
            raise ValidationError("subspace basis is not linearly independent")
        object.__setattr__(self, "ambient_dims", dims)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def spanned_by(cls, ambient_dims: Index2, generators: List[MatrixQ]) -> "MatrixSubspace":
        """Keep the lexicographically first independent generators"""
        from services.algebra.linalg import independent_indices

        keep = independent_indices([g.vectorize() for g in generators])
        return cls(ambient_dims, tuple(generators[n] for n in keep))

    @classmethod
    def empty(cls, ambient_dims: Index2) -> "MatrixSubspace":
        return cls(ambient_dims, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[Dict[int, Fraction]]:
        return [m.vectorize() for m in self.basis]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ambient": list(self.ambient_dims),
            "basis": [m.to_dict() for m in self.basis],
        }


@dataclass(frozen=True)
class ModificationPlan:
    """
    Coefficients of a modification T + sum_l w_l ⊗ c_l

    coefficients has shape (dim W) x (mode dimension): row l holds c_l in the
    coordinates of the modified mode.
    """

    mode: str
    subspace: MatrixSubspace
    coefficients: MatrixQ

    def __post_init__(self):
        mode = str(self.mode).upper()
        if mode not in ("A", "B", "C"):
            raise ValidationError(f"mode must be one of A, B, C; got {self.mode!r}")
        if self.subspace.dim == 0:
            raise ValidationError("a modification needs a nonzero subspace")
        if self.coefficients.rows != self.subspace.dim:
            raise ValidationError(
                f"coefficient rows {self.coefficients.rows} != dim W {self.subspace.dim}"
            )
        object.__setattr__(self, "mode", mode)

    @classmethod
    def zero(cls, mode: str, subspace: MatrixSubspace, mode_dim: int) -> "ModificationPlan":
        return cls(mode, subspace, MatrixQ.zeros(subspace.dim, mode_dim))

    def negated(self) -> "ModificationPlan":
        return ModificationPlan(self.mode, self.subspace, self.coefficients.scale(-1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "subspace": self.subspace.to_dict(),
            "coefficients": self.coefficients.to_dict(),
        }

"""
Data classes for exact sparse tensors and matrices
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Tuple, Union

from models.errors import ValidationError

Index3 = Tuple[int, int, int]
Index2 = Tuple[int, int]
Scalar = Union[int, Fraction]


def format_rational(value: Scalar) -> str:
    """Render as "p/q" in lowest terms (q >= 1, sign on p)"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _check_dims(dims: Tuple[int, ...], arity: int) -> Tuple[int, ...]:
    dims = tuple(dims)
    if len(dims) != arity or any(not isinstance(d, int) or d < 1 for d in dims):
        raise ValidationError(f"dims must be {arity} positive integers, got {dims}")
    return dims


@dataclass(frozen=True)
class Tensor3:
    """Sparse order-3 tensor over the rationals (0-based coordinates)"""

    dims: Index3
    entries: Dict[Index3, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        dims = _check_dims(self.dims, 3)
        clean: Dict[Index3, Fraction] = {}
        for idx, value in self.entries.items():
            idx = tuple(idx)
            if len(idx) != 3 or any(not 0 <= idx[n] < dims[n] for n in range(3)):
                raise ValidationError(f"index {idx} out of range for dims {dims}")
            value = Fraction(value)
            if value == 0:
                raise ValidationError(f"zero entry stored at {idx}")
            clean[idx] = value
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_entries(
        cls, dims: Index3, items: Iterable[Tuple[Index3, Scalar]]
    ) -> "Tensor3":
        """Accumulate (index, value) pairs, dropping whatever cancels to zero"""
        acc: Dict[Index3, Fraction] = {}
        for idx, value in items:
            idx = tuple(idx)
            acc[idx] = acc.get(idx, Fraction(0)) + Fraction(value)
        return cls(dims, {idx: v for idx, v in acc.items() if v != 0})

    @classmethod
    def zeros(cls, dims: Index3) -> "Tensor3":
        return cls(dims, {})

    @classmethod
    def diagonal(cls, n: int) -> "Tensor3":
        """Unit tensor sum_i e_i x e_i x e_i"""
        return cls((n, n, n), {(i, i, i): Fraction(1) for i in range(n)})

    @classmethod
    def ones(cls, dims: Index3) -> "Tensor3":
        a, b, c = dims
        return cls(
            dims,
            {
                (i, j, k): Fraction(1)
                for i in range(a)
                for j in range(b)
                for k in range(c)
            },
        )

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def get(self, i: int, j: int, k: int) -> Fraction:
        return self.entries.get((i, j, k), Fraction(0))

    def sorted_entries(self) -> List[Tuple[Index3, Fraction]]:
        return sorted(self.entries.items())

    def __add__(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims:
            raise ValidationError(f"dims mismatch {self.dims} vs {other.dims}")
        return Tensor3.from_entries(
            self.dims, list(self.entries.items()) + list(other.entries.items())
        )

    def __neg__(self) -> "Tensor3":
        return Tensor3(self.dims, {idx: -v for idx, v in self.entries.items()})

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return self + (-other)

    def scale(self, factor: Scalar) -> "Tensor3":
        factor = Fraction(factor)
        if factor == 0:
            return Tensor3.zeros(self.dims)
        return Tensor3(self.dims, {idx: v * factor for idx, v in self.entries.items()})

    def to_numpy(self):
        """Dense float64 copy (only for floating-point proposals)"""
        import numpy as np

        dense = np.zeros(self.dims, dtype=np.float64)
        for (i, j, k), value in self.entries.items():
            dense[i, j, k] = float(value)
        return dense

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the canonical JSON document"""
        return {
            "dims": list(self.dims),
            "entries": [
                [i, j, k, format_rational(v)] for (i, j, k), v in self.sorted_entries()
            ],
        }


@dataclass(frozen=True)
class MatrixQ:
    """Sparse rational matrix"""

    dims: Index2
    entries: Dict[Index2, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        dims = _check_dims(self.dims, 2)
        clean: Dict[Index2, Fraction] = {}
        for idx, value in self.entries.items():
            idx = tuple(idx)
            if len(idx) != 2 or not (0 <= idx[0] < dims[0] and 0 <= idx[1] < dims[1]):
                raise ValidationError(f"index {idx} out of range for dims {dims}")
            value = Fraction(value)
            if value == 0:
                raise ValidationError(f"zero entry stored at {idx}")
            clean[idx] = value
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_entries(
        cls, dims: Index2, items: Iterable[Tuple[Index2, Scalar]]
    ) -> "MatrixQ":
        acc: Dict[Index2, Fraction] = {}
        for idx, value in items:
            idx = tuple(idx)
            acc[idx] = acc.get(idx, Fraction(0)) + Fraction(value)
        return cls(dims, {idx: v for idx, v in acc.items() if v != 0})

    @classmethod
    def from_rows(cls, rows: List[List[Scalar]]) -> "MatrixQ":
        """Build from a dense row list"""
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        return cls.from_entries(
            (n_rows, n_cols),
            (((i, j), v) for i, row in enumerate(rows) for j, v in enumerate(row)),
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls((rows, cols), {})

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls((n, n), {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def ones(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(
            (rows, cols),
            {(i, j): Fraction(1) for i in range(rows) for j in range(cols)},
        )

    @classmethod
    def unit(cls, dims: Index2, i: int, j: int) -> "MatrixQ":
        return cls(dims, {(i, j): Fraction(1)})

    @classmethod
    def outer(cls, left: List[Scalar], right: List[Scalar]) -> "MatrixQ":
        return cls.from_entries(
            (len(left), len(right)),
            (
                ((i, j), Fraction(x) * Fraction(y))
                for i, x in enumerate(left)
                if x != 0
                for j, y in enumerate(right)
                if y != 0
            ),
        )

    @property
    def rows(self) -> int:
        return self.dims[0]

    @property
    def cols(self) -> int:
        return self.dims[1]

    def get(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def sorted_entries(self) -> List[Tuple[Index2, Fraction]]:
        return sorted(self.entries.items())

    def row_map(self) -> Dict[int, Dict[int, Fraction]]:
        """Nonzero rows as sparse dicts"""
        out: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), v in self.entries.items():
            out.setdefault(i, {})[j] = v
        return out

    def vectorize(self) -> Dict[int, Fraction]:
        """Row-major flattening into a sparse vector of length rows*cols"""
        return {i * self.cols + j: v for (i, j), v in self.entries.items()}

    @classmethod
    def from_vector(cls, dims: Index2, vector: Dict[int, Fraction]) -> "MatrixQ":
        cols = dims[1]
        return cls(dims, {(n // cols, n % cols): v for n, v in vector.items() if v != 0})

    def transpose(self) -> "MatrixQ":
        return MatrixQ(
            (self.cols, self.rows), {(j, i): v for (i, j), v in self.entries.items()}
        )

    def kron(self, other: "MatrixQ") -> "MatrixQ":
        r2, c2 = other.dims
        return MatrixQ(
            (self.rows * r2, self.cols * c2),
            {
                (i1 * r2 + i2, j1 * c2 + j2): v1 * v2
                for (i1, j1), v1 in self.entries.items()
                for (i2, j2), v2 in other.entries.items()
            },
        )

    def apply(self, vector: List[Fraction]) -> List[Fraction]:
        """Matrix-vector product"""
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vector[j]:
                out[i] += v * vector[j]
        return out

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        if self.dims != other.dims:
            raise ValidationError(f"dims mismatch {self.dims} vs {other.dims}")
        return MatrixQ.from_entries(
            self.dims, list(self.entries.items()) + list(other.entries.items())
        )

    def scale(self, factor: Scalar) -> "MatrixQ":
        factor = Fraction(factor)
        if factor == 0:
            return MatrixQ.zeros(*self.dims)
        return MatrixQ(self.dims, {idx: v * factor for idx, v in self.entries.items()})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dims": list(self.dims),
            "entries": [[i, j, format_rational(v)] for (i, j), v in self.sorted_entries()],
        }


@dataclass(frozen=True)
class RankOneTerm:
    """Simple tensor x ⊗ y ⊗ z"""

    x: Tuple[Fraction, ...]
    y: Tuple[Fraction, ...]
    z: Tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("x", "y", "z"):
            vec = tuple(Fraction(v) for v in getattr(self, name))
            if not any(vec):
                raise ValidationError(f"rank-one factor {name} must be nonzero")
            object.__setattr__(self, name, vec)

    @property
    def dims(self) -> Index3:
        return (len(self.x), len(self.y), len(self.z))

    def entries(self) -> Iterable[Tuple[Index3, Fraction]]:
        for i, xi in enumerate(self.x):
            if not xi:
                continue
            for j, yj in enumerate(self.y):
                if not yj:
                    continue
                xy = xi * yj
                for k, zk in enumerate(self.z):
                    if zk:
                        yield (i, j, k), xy * zk

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": [format_rational(v) for v in self.x],
            "y": [format_rational(v) for v in self.y],
            "z": [format_rational(v) for v in self.z],
        }


@dataclass(frozen=True)
class Decomposition:
    """A list of rank-one terms claimed to sum to a target tensor"""

    target_dims: Index3
    terms: Tuple[RankOneTerm, ...] = ()

    def __post_init__(self):
        dims = _check_dims(self.target_dims, 3)
        terms = tuple(self.terms)
        for term in terms:
            if term.dims != dims:
                raise ValidationError(
                    f"term dims {term.dims} do not match target {dims}"
                )
        object.__setattr__(self, "target_dims", dims)
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def resum(self) -> Tensor3:
        """Exact re-summation of all outer products"""
        return Tensor3.from_entries(
            self.target_dims, (item for term in self.terms for item in term.entries())
        )

    def certifies(self, target: Tensor3) -> bool:
        return target.dims == self.target_dims and self.resum() == target

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_dims": list(self.target_dims),
            "terms": [term.to_dict() for term in self.terms],
        }

"""
Exact linear algebra over the rationals

Sparse rational vectors are packed into sympy DomainMatrix objects over QQ; ranks,
pivots and coordinates all come from DomainMatrix.rank() and DomainMatrix.rref().
"""

import logging
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from models.tensor import MatrixQ

logger = logging.getLogger(__name__)

SparseVector = Dict[int, Fraction]


def to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def column_matrix(
    vectors: Sequence[SparseVector], positions: Optional[Dict[int, int]] = None
) -> DomainMatrix:
    """
    Sparse DomainMatrix over QQ whose columns are the given vectors

    Args:
        vectors: sparse vectors keyed by coordinate
        positions: coordinate -> row map; built from the joint support when omitted

    Returns:
        A len(positions) x len(vectors) matrix
    """
    if positions is None:
        support = sorted({c for vec in vectors for c, v in vec.items() if v})
        positions = {c: n for n, c in enumerate(support)}
    rows: Dict[int, Dict[int, object]] = {}
    for j, vec in enumerate(vectors):
        for c, v in vec.items():
            if v:
                rows.setdefault(positions[c], {})[j] = to_qq(v)
    return DomainMatrix(rows, (len(positions), len(vectors)), QQ)


def _pivots(vectors: Sequence[SparseVector]) -> Tuple[int, ...]:
    """Pivot columns of the reduced row echelon form, i.e. the greedy independent subset"""
    if not any(any(vec.values()) for vec in vectors):
        return ()
    _, pivots = column_matrix(vectors).rref()
    return tuple(pivots)


def rank_of_vectors(vectors: Iterable[SparseVector]) -> int:
    """Exact rank of a family of sparse rational vectors"""
    vectors = [vec for vec in vectors if any(vec.values())]
    if not vectors:
        return 0
    return column_matrix(vectors).rank()


def matrix_rank(matrix: MatrixQ) -> int:
    """Exact rank of a rational matrix"""
    if not matrix.entries:
        return 0
    rows: Dict[int, Dict[int, object]] = {}
    for (i, j), v in matrix.entries.items():
        rows.setdefault(i, {})[j] = to_qq(v)
    return DomainMatrix(rows, matrix.dims, QQ).rank()


class SpanBasis:
    """
    Span of a growing family of generators, kept as its greedy independent subset

    Membership and coordinates are read off the rref of [independent generators | targets].
    """

    def __init__(self, track: bool = False):
        """
        Args:
            track: allow express(), which writes vectors in terms of the added generators
        """
        self.track = track
        self._columns: List[SparseVector] = []
        self.independent_tags: List[Hashable] = []

    @property
    def rank(self) -> int:
        return len(self._columns)

    def extend(
        self, vectors: Sequence[SparseVector], tags: Optional[Sequence[Hashable]] = None
    ) -> List[Hashable]:
        """
        Add generators in order with a single rref

        Returns:
            Tags of the generators that enlarged the span
        """
        tags = list(tags) if tags is not None else [None] * len(vectors)
        cleaned = [{c: Fraction(v) for c, v in vec.items() if v} for vec in vectors]
        offset = self.rank
        accepted = []
        for pivot in _pivots(self._columns + cleaned):
            if pivot >= offset:
                self._columns.append(cleaned[pivot - offset])
                self.independent_tags.append(tags[pivot - offset])
                accepted.append(tags[pivot - offset])
        return accepted

    def add(self, vector: SparseVector, tag: Hashable = None) -> bool:
        """Add a generator; True when it enlarged the span"""
        return bool(self.extend([vector], [tag]))

    def _solve(self, vectors: Sequence[SparseVector]) -> List[Optional[Dict[int, Fraction]]]:
        """Coordinates in the independent generators (by position), None outside the span"""
        r = self.rank
        support = sorted({c for vec in self._columns + list(vectors) for c, v in vec.items() if v})
        positions = {c: n for n, c in enumerate(support)}
        if not positions:
            return [{} for _ in vectors]
        reduced, _ = column_matrix(self._columns + list(vectors), positions).rref()
        rows = reduced.to_dod()
        solutions = []
        for n in range(len(vectors)):
            col = r + n
            column = {i: row[col] for i, row in rows.items() if row.get(col)}
            if any(i >= r for i in column):
                solutions.append(None)
            else:
                solutions.append({i: from_qq(v) for i, v in column.items()})
        return solutions

    def contains(self, vector: SparseVector) -> bool:
        return self._solve([vector])[0] is not None

    def express_all(
        self, vectors: Sequence[SparseVector]
    ) -> List[Optional[Dict[Hashable, Fraction]]]:
        """Coefficients of every vector in terms of the added generators (None outside the span)"""
        if not self.track:
            raise ValueError("express() needs a tracking basis")
        return [
            None if found is None else {self.independent_tags[i]: v for i, v in found.items()}
            for found in self._solve(vectors)
        ]

    def express(self, vector: SparseVector) -> Optional[Dict[Hashable, Fraction]]:
        """Coefficients writing the vector in terms of added generators, or None"""
        return self.express_all([vector])[0]


def independent_indices(vectors: Sequence[SparseVector]) -> List[int]:
    """Greedy (lexicographically first) maximal independent subset, as indices"""
    return list(_pivots(vectors))


def spans_equal(first: Sequence[SparseVector], second: Sequence[SparseVector]) -> bool:
    """Equal spans: both families have the rank of their union"""
    joint = rank_of_vectors(list(first) + list(second))
    return rank_of_vectors(first) == joint == rank_of_vectors(second)


def rank_factorization(matrix: MatrixQ) -> List[Tuple[List[Fraction], List[Fraction]]]:
    """
    Exact rank factorization M = sum_l column_l ⊗ row_l

    Rows of the factorization are the lexicographically first independent rows
    of M; columns hold the coefficients of every row in that basis, read off
    the rref of M transposed.
    """
    rows = matrix.row_map()
    if not rows:
        return []
    transposed: Dict[int, Dict[int, object]] = {}
    for (i, j), v in matrix.entries.items():
        transposed.setdefault(j, {})[i] = to_qq(v)
    reduced, pivots = DomainMatrix(transposed, (matrix.cols, matrix.rows), QQ).rref()
    coefficients = reduced.to_dod()
    factors = []
    for l, i in enumerate(pivots):
        column = [Fraction(0)] * matrix.rows
        for n, v in coefficients.get(l, {}).items():
            if v:
                column[n] = from_qq(v)
        dense_row = [Fraction(0)] * matrix.cols
        for j, v in rows[i].items():
            dense_row[j] = v
        factors.append((column, dense_row))
    return factors


def nullspace(vectors: Sequence[SparseVector]) -> List[List[Fraction]]:
    """Basis of the relations c with sum_j c_j * vectors[j] = 0"""
    if not any(any(vec.values()) for vec in vectors):
        return [[Fraction(int(i == j)) for j in range(len(vectors))] for i in range(len(vectors))]
    kernel = column_matrix(vectors).nullspace().to_dod()
    relations = []
    for _, row in sorted(kernel.items()):
        relation = [Fraction(0)] * len(vectors)
        for j, v in row.items():
            if v:
                relation[j] = from_qq(v)
        relations.append(relation)
    return relations

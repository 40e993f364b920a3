"""
Canonical JSON codec for tensors, matrices and matrix subspaces
"""

import json
import logging
from typing import Any, Dict, List

from models.errors import ParseError, ValidationError
from models.subspace import MatrixSubspace
from models.tensor import Decomposition, MatrixQ, RankOneTerm, Tensor3
from services.algebra.rational import parse_rational

logger = logging.getLogger(__name__)


def _dump(document: Dict[str, Any]) -> bytes:
    return json.dumps(document, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _load(data: bytes) -> Any:
    try:
        text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
        return json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(f"malformed document: {e}")


def _dims(document: Dict[str, Any], key: str, arity: int) -> tuple:
    dims = document.get(key)
    if (
        not isinstance(dims, list)
        or len(dims) != arity
        or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in dims)
    ):
        raise ParseError(f"malformed document: {key} must be {arity} positive integers")
    return tuple(dims)


def _entries(document: Dict[str, Any], dims: tuple) -> Dict[tuple, Any]:
    raw = document.get("entries")
    if not isinstance(raw, list):
        raise ParseError("malformed document: entries must be a list")
    arity = len(dims)
    entries = {}
    previous = None
    for row in raw:
        if not isinstance(row, list) or len(row) != arity + 1:
            raise ParseError(f"malformed document: bad entry {row!r}")
        idx = tuple(row[:arity])
        if any(not isinstance(i, int) or isinstance(i, bool) for i in idx):
            raise ParseError(f"malformed document: bad index {idx!r}")
        if any(not 0 <= i < d for i, d in zip(idx, dims)):
            raise ParseError(f"index out of range: {idx} for dims {dims}")
        value = parse_rational(row[arity])
        if value == 0:
            raise ParseError(f"zero entry present at {idx}")
        if previous is not None and idx <= previous:
            raise ParseError(f"malformed document: entries not strictly sorted at {idx}")
        previous = idx
        entries[idx] = value
    return entries


def tensor_from_dict(document: Dict[str, Any]) -> Tensor3:
    if not isinstance(document, dict):
        raise ParseError("malformed document: object expected")
    dims = _dims(document, "dims", 3)
    return Tensor3(dims, _entries(document, dims))


def matrix_from_dict(document: Dict[str, Any]) -> MatrixQ:
    if not isinstance(document, dict):
        raise ParseError("malformed document: object expected")
    dims = _dims(document, "dims", 2)
    return MatrixQ(dims, _entries(document, dims))


def serialize_tensor(tensor: Tensor3) -> bytes:
    """Canonical bytes: sorted keys, entries sorted by index, rationals as "p/q" """
    return _dump(tensor.to_dict())


def deserialize_tensor(data: bytes) -> Tensor3:
    return tensor_from_dict(_load(data))


def serialize_matrix(matrix: MatrixQ) -> bytes:
    return _dump(matrix.to_dict())


def deserialize_matrix(data: bytes) -> MatrixQ:
    return matrix_from_dict(_load(data))


def subspace_from_dict(document: Dict[str, Any]) -> MatrixSubspace:
    if not isinstance(document, dict):
        raise ParseError("malformed document: object expected")
    ambient = _dims(document, "ambient", 2)
    basis_raw = document.get("basis")
    if not isinstance(basis_raw, list):
        raise ParseError("malformed document: basis must be a list")
    basis: List[MatrixQ] = [matrix_from_dict(item) for item in basis_raw]
    try:
        return MatrixSubspace(ambient, tuple(basis))
    except ValidationError as e:
        raise ParseError(f"malformed document: {e}")


def serialize_subspace(subspace: MatrixSubspace) -> bytes:
    return _dump(subspace.to_dict())


def deserialize_subspace(data: bytes) -> MatrixSubspace:
    return subspace_from_dict(_load(data))


def decomposition_from_dict(document: Dict[str, Any]) -> Decomposition:
    """{"target_dims": [a, b, c], "terms": [{"x": [...], "y": [...], "z": [...]}, ...]}"""
    if not isinstance(document, dict):
        raise ParseError("malformed document: object expected")
    dims = _dims(document, "target_dims", 3)
    raw = document.get("terms")
    if not isinstance(raw, list):
        raise ParseError("malformed document: terms must be a list")
    terms = []
    for item in raw:
        if not isinstance(item, dict) or any(not isinstance(item.get(f), list) for f in "xyz"):
            raise ParseError(f"malformed document: bad term {item!r}")
        factors = [tuple(parse_rational(v) for v in item[f]) for f in "xyz"]
        try:
            terms.append(RankOneTerm(*factors))
        except ValidationError as e:
            raise ParseError(f"malformed document: {e}")
    try:
        return Decomposition(dims, tuple(terms))
    except ValidationError as e:
        raise ParseError(f"malformed document: {e}")


def serialize_decomposition(decomposition: Decomposition) -> bytes:
    return _dump(decomposition.to_dict())


def deserialize_decomposition(data: bytes) -> Decomposition:
    return decomposition_from_dict(_load(data))

"""
Shared fixtures for the tensorforge test suite
"""

import json
import os
import sys

import pytest

# Add src directory to path
SRC_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if SRC_DIR not in sys.path:
    sys.path.insert(0, SRC_DIR)

from models.tensor import Tensor3  # noqa: E402
from services.algebra.tensor_ops import matmul_tensor, strassen_decomposition  # noqa: E402


@pytest.fixture
def write_json(tmp_path):
    """Write a document (anything with to_dict, or plain JSON data) and return its path"""

    def _write(name, document):
        if hasattr(document, "to_dict"):
            document = document.to_dict()
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def matmul_2x2():
    return matmul_tensor(2, 2, 2)


@pytest.fixture
def strassen():
    return strassen_decomposition()


@pytest.fixture
def w_state():
    """e0⊗e0⊗e1 + e0⊗e1⊗e0 + e1⊗e0⊗e0"""
    return Tensor3((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})

"""
Tensor-building combinators
"""

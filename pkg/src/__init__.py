"""
tensorforge: exact-arithmetic toolkit for tensor rank additivity counterexamples
"""

__version__ = "1.0.0"
__author__ = "tensorforge Team"

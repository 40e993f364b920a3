"""
Exact linear algebra and tensor arithmetic
"""

"""
Secant and tangent-space geometry
"""

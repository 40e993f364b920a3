"""
Certified rank bounds
"""

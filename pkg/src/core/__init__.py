"""
Core orchestration
"""

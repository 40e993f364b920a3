"""
Service layer modules, one subpackage per toolkit area
"""

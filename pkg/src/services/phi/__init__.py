"""
Phi-tensor family
"""

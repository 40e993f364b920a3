"""
Parameter window search
"""

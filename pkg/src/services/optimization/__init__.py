"""
minimax grid search
"""

"""
Command-line front end and report rendering
"""

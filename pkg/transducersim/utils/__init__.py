"""
Utilities module initialization
"""

"""
Development utilities (test suite).
"""

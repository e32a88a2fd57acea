"""
Pytest configuration for flocking tests.
"""

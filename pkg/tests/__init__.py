"""
Test package for the key predistribution connectivity library.
"""

"""
Models package for the Entropy Algebra Toolkit
"""

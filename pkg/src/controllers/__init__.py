"""
Controllers package for the Entropy Algebra Toolkit
"""

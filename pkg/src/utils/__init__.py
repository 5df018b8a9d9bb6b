"""
Utils package for the Entropy Algebra Toolkit
"""

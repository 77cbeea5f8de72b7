"""
Core domain types, exact time arithmetic and laxity/routing math.
"""

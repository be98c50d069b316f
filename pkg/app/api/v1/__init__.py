"""
API v1 routes for the surgery calculator.
"""

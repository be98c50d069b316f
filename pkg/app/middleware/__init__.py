"""
Middleware components for the surgery calculator.
"""

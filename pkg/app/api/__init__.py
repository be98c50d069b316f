"""
HTTP surface of the surgery calculator.
"""

"""
Knot Floer surgery calculator

Heegaard Floer homology of integer surgeries on knots in S³ and reducibility obstructions.
"""

__version__ = "1.0.0"

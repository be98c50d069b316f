"""
Knot builders and hypothesis strategies shared by the test modules.
"""

from hypothesis import strategies as st

from app.services.knotio import torus_knot_alexander
from app.services.staircase import staircase_from_alexander, staircase_from_gaps


def torus(a: int, b: int):
    return staircase_from_alexander(torus_knot_alexander(a, b))


# A palindromic gap sequence is a composition of g followed by its mirror.
half_gaps = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=4)


def staircase_of(half):
    return staircase_from_gaps(tuple(half) + tuple(reversed(half)))

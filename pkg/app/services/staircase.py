"""
L-space knot model: staircase complexes built from admissible Alexander polynomials.
Exposes the genus, ν and the V_s / H_s sequences, plus the genus and ν of general complexes.
"""

from functools import lru_cache
from math import ceil
from typing import Dict, Iterator, List, Sequence, Tuple

from app.core.exceptions import (
    GradingInconsistencyError,
    InadmissiblePolynomialError,
    InvalidRequestError,
)
from app.models.algebra_models import ChainComplexF2
from app.models.knot_models import BifilteredComplex, Generator, StaircaseKnot, SymmetricLaurent
from app.services.algebra import complex_homology, induced_rank


def admissibility_problem(alexander: SymmetricLaurent) -> str:
    """Why Δ is not an L-space knot candidate, or "" when it is."""
    exponents = alexander.nonzero_exponents()
    if not exponents:
        return "polynomial is zero"
    coefficients = [alexander.coefficient(k) for k in exponents]
    if any(abs(c) != 1 for c in coefficients):
        return "non-zero coefficients must all be ±1"
    if coefficients[0] != 1:
        return "top coefficient must be +1"
    if any(a == b for a, b in zip(coefficients, coefficients[1:])):
        return "non-zero coefficients must alternate in sign"
    return ""


def is_admissible(alexander: SymmetricLaurent) -> bool:
    return not admissibility_problem(alexander)


def staircase_gaps(alexander: SymmetricLaurent) -> Tuple[int, ...]:
    exponents = alexander.nonzero_exponents()
    return tuple(a - b for a, b in zip(exponents, exponents[1:]))


def gaps_to_alexander(gaps: Sequence[int]) -> SymmetricLaurent:
    """Alexander polynomial of the staircase with the given step lengths.

    The steps must be positive, even in number and palindromic; the genus is
    half their sum.
    """
    if any(step < 1 for step in gaps):
        raise InvalidRequestError("staircase steps must be positive", details={"gaps": list(gaps)})
    if len(gaps) % 2 or tuple(gaps) != tuple(reversed(gaps)):
        raise InvalidRequestError("staircase steps must form an even palindrome", details={"gaps": list(gaps)})
    genus = sum(gaps) // 2
    exponent = genus
    coefficients = {exponent: 1}
    sign = 1
    for step in gaps:
        exponent -= step
        sign = -sign
        coefficients[exponent] = sign
    return SymmetricLaurent(coefficients=coefficients)


def staircase_complex(gaps: Sequence[int]) -> BifilteredComplex:
    """The staircase x0, ..., x_{2k}: odd generators cover their two even neighbours."""
    genus = sum(gaps) // 2
    i, j = 0, genus
    generators = [Generator(name="x0", i=i, j=j, gr=0)]
    for m, step in enumerate(gaps):
        if m % 2 == 0:
            i += step
        else:
            j -= step
        generators.append(Generator(name=f"x{m + 1}", i=i, j=j, gr=(m + 1) % 2))

    last = len(generators) - 1
    differential = {
        f"x{m}": (f"x{m - 1}", f"x{m + 1}")
        for m in range(1, last, 2)
    }
    flip = {f"x{m}": f"x{last - m}" for m in range(last + 1) if m != last - m}
    return BifilteredComplex(generators=tuple(generators), differential=differential, flip=flip)


def _a_plus_elements(cx: BifilteredComplex, s: int) -> Tuple[ChainComplexF2, List[int]]:
    """Elements U^m x of A+_s with grading <= 1; a subcomplex, exact in gradings <= 0."""
    index: Dict[Tuple[str, int], int] = {}
    gradings: List[int] = []
    for gen in cx.generators:
        top = max(gen.i, gen.j - s)
        for m in range(ceil((gen.gr - 1) / 2), top + 1):
            index[(gen.name, m)] = len(gradings)
            gradings.append(gen.gr - 2 * m)

    differential = set()
    for (name, m), position in index.items():
        for target in cx.targets(name):
            image = index.get((target, m))
            if image is not None:
                differential.add((position, image))
    return ChainComplexF2(gradings=tuple(gradings), differential=frozenset(differential)), gradings


def a_plus_tower_bottom(cx: BifilteredComplex, s: int) -> int:
    """Bottom grading of H_*(A+_s), which must be a single tower through grading 0."""
    complex_, _ = _a_plus_elements(cx, s)
    homology = complex_homology(complex_)
    support = {g: d for g, d in homology.nonzero().items() if g <= 0}
    if not support:
        raise GradingInconsistencyError(f"H(A+_{s}) vanishes in grading 0", details={"s": s})
    bottom = min(support)
    expected = {g: 1 for g in range(bottom, 1, 2)}
    if support != expected or bottom % 2:
        raise GradingInconsistencyError(
            f"H(A+_{s}) is not a single tower below grading 0",
            details={"s": s, "dims": {str(g): d for g, d in support.items()}},
        )
    return bottom


@lru_cache(maxsize=512)
def _v_sequence(gaps: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    cx = staircase_complex(gaps)
    genus = sum(gaps) // 2
    return tuple((s, -a_plus_tower_bottom(cx, s) // 2) for s in range(-genus, genus + 1))


def staircase_from_gaps(gaps: Sequence[int]) -> StaircaseKnot:
    alexander = gaps_to_alexander(gaps)
    return _build(alexander, tuple(gaps))


def staircase_from_alexander(alexander: SymmetricLaurent) -> StaircaseKnot:
    """Staircase model of an admissible Δ with V_s from the homology of A+_s.

    Δ = 1 gives the trivial sentinel with genus 0.
    """
    problem = admissibility_problem(alexander)
    if problem:
        raise InadmissiblePolynomialError(str(alexander), problem)
    return _build(alexander, staircase_gaps(alexander))


def _build(alexander: SymmetricLaurent, gaps: Tuple[int, ...]) -> StaircaseKnot:
    genus = alexander.genus
    v_values = dict(_v_sequence(gaps))
    knot = StaircaseKnot(
        genus=genus,
        alexander=alexander,
        gaps=gaps,
        v_values=v_values,
        complex=staircase_complex(gaps),
    )
    if v_values[genus] != 0 or v_values[-genus] != genus:
        raise GradingInconsistencyError(
            "staircase V sequence does not stabilise at ±g",
            details={"genus": genus, "v": {str(s): v for s, v in v_values.items()}},
        )
    return knot


def torsion_coefficients(alexander: SymmetricLaurent) -> Dict[int, int]:
    """t_s = Σ_{j>=1} j·a_{|s|+j} for 0 <= s <= g."""
    genus = alexander.genus
    return {
        s: sum(j * alexander.coefficient(s + j) for j in range(1, genus - s + 1))
        for s in range(0, genus + 1)
    }


def compositions(total: int) -> Iterator[Tuple[int, ...]]:
    """Every ordered sequence of positive integers summing to `total`."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def admissible_polynomials(genus: int) -> List[SymmetricLaurent]:
    """All admissible Alexander polynomials of the given genus."""
    if genus < 1:
        raise InvalidRequestError("genus must be positive", details={"genus": genus})
    found = []
    for half in compositions(genus):
        found.append(gaps_to_alexander(half + tuple(reversed(half))))
    return found


# ν and genus of general complexes


def hat_a_complex(cx: BifilteredComplex, s: int) -> Tuple[ChainComplexF2, Dict[str, int]]:
    """Â_s: each generator at level max(i, j - s), terms kept between equal levels."""
    level = {gen.name: max(gen.i, gen.j - s) for gen in cx.generators}
    position = {gen.name: k for k, gen in enumerate(cx.generators)}
    gradings = tuple(gen.gr - 2 * level[gen.name] for gen in cx.generators)
    differential = frozenset(
        (position[name], position[target])
        for name in position
        for target in cx.targets(name)
        if level[target] == level[name]
    )
    return ChainComplexF2(gradings=gradings, differential=differential), position


def hat_b_complex(cx: BifilteredComplex) -> Tuple[ChainComplexF2, Dict[str, int]]:
    """B̂: each generator at level i, terms kept between equal i."""
    by_name = cx.by_name()
    position = {gen.name: k for k, gen in enumerate(cx.generators)}
    gradings = tuple(gen.gr - 2 * gen.i for gen in cx.generators)
    differential = frozenset(
        (position[name], position[target])
        for name in position
        for target in cx.targets(name)
        if by_name[target].i == by_name[name].i
    )
    return ChainComplexF2(gradings=gradings, differential=differential), position


def hat_v_pairs(cx: BifilteredComplex, s: int) -> List[Tuple[int, int]]:
    """v̂_s as (source, target) pairs: x ↦ x when A(x) <= s."""
    return [(k, k) for k, gen in enumerate(cx.generators) if gen.alexander <= s]


def hat_h_pairs(cx: BifilteredComplex, s: int) -> List[Tuple[int, int]]:
    """ĥ_s as (source, target) pairs: x ↦ flip(x) when A(x) >= s."""
    position = {gen.name: k for k, gen in enumerate(cx.generators)}
    return [
        (k, position[cx.flipped(gen.name)])
        for k, gen in enumerate(cx.generators)
        if gen.alexander >= s
    ]


def hat_a_dimension(cx: BifilteredComplex, s: int) -> int:
    complex_, _ = hat_a_complex(cx, s)
    return complex_homology(complex_).total


def hat_v_rank(cx: BifilteredComplex, s: int) -> int:
    """Rank of v̂_s on homology."""
    a_hat, _ = hat_a_complex(cx, s)
    b_hat, _ = hat_b_complex(cx)
    return induced_rank(a_hat, b_hat, hat_v_pairs(cx, s))


def knot_genus(cx: BifilteredComplex) -> int:
    """Largest Alexander grading with non-zero homology of the associated graded complex."""
    by_name = cx.by_name()
    supported = []
    for grading in sorted({gen.alexander for gen in cx.generators}):
        members = [gen for gen in cx.generators if gen.alexander == grading]
        position = {gen.name: k for k, gen in enumerate(members)}
        differential = frozenset(
            (position[gen.name], position[target])
            for gen in members
            for target in cx.targets(gen.name)
            if (by_name[target].i, by_name[target].j) == (gen.i, gen.j)
        )
        graded = ChainComplexF2(gradings=tuple(gen.gr for gen in members), differential=differential)
        if complex_homology(graded).total:
            supported.append(grading)
    return max(supported, default=0)


def nu_from_complex(cx: BifilteredComplex) -> int:
    """ν = min{s : v̂_s ≠ 0 on homology}."""
    amplitude = cx.alexander_amplitude
    for s in range(-amplitude, amplitude + 1):
        if hat_v_rank(cx, s):
            return s
    return amplitude


def genus_from_nu(cx: BifilteredComplex) -> int:
    """g = max{ν, max{s : dim Â_{s-1} > 1}}."""
    amplitude = cx.alexander_amplitude
    wide = [s for s in range(-amplitude + 1, amplitude + 2) if hat_a_dimension(cx, s - 1) > 1]
    return max([nu_from_complex(cx)] + wide)


def nu(knot: StaircaseKnot) -> int:
    """ν of an L-space knot, which must equal its genus."""
    value = nu_from_complex(knot.complex)
    first_zero = min(s for s in range(-knot.genus, knot.genus + 1) if knot.V(s) == 0)
    if value != knot.genus or first_zero != knot.genus:
        raise GradingInconsistencyError(
            "ν of a staircase differs from its genus",
            details={"nu": value, "first_vanishing_v": first_zero, "genus": knot.genus},
        )
    return value

"""
Ingestion and validation of knot data.
Alexander polynomials, torus knot parameters and model complexes read from JSON files.
"""

import json
from math import gcd
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError
from sympy import Poly, Symbol, div

from app.core.config import get_settings
from app.core.exceptions import (
    AlexanderSyntaxError,
    AsymmetricPolynomialError,
    ComplexValidationError,
    InvalidKnotSpecError,
    InvalidTorusKnotError,
    NormalizationError,
)
from app.core.logging import surgery_logger
from app.models.knot_models import BifilteredComplex, KnotKind, KnotSpec, SymmetricLaurent


CFK_KEYS = {"generators", "differential", "flip"}


class _Cursor:
    """Position-tracking reader over an Alexander polynomial expression."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def integer(self, expected: str) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise AlexanderSyntaxError(self.text, start, expected)
        return int(self.text[start:self.pos])

    def fail(self, expected: str) -> None:
        self.skip()
        raise AlexanderSyntaxError(self.text, self.pos, expected)


def _parse_term(cursor: _Cursor) -> tuple:
    """term := INT | [INT ['*']] 't' ['^' ['-'] INT]"""
    head = cursor.peek()
    coefficient = 1
    has_coefficient = False
    if head is not None and head.isdigit():
        coefficient = cursor.integer("coefficient")
        has_coefficient = True
        if cursor.take("*"):
            if cursor.peek() != "t":
                cursor.fail("'t' after '*'")
    if cursor.peek() != "t":
        if has_coefficient:
            return coefficient, 0
        cursor.fail("coefficient or 't'")
    cursor.take("t")
    exponent = 1
    if cursor.take("^"):
        negative = cursor.take("-")
        exponent = cursor.integer("exponent")
        if negative:
            exponent = -exponent
    return coefficient, exponent


def parse_alexander(text: str) -> SymmetricLaurent:
    """Parse and validate an Alexander polynomial such as "t - 1 + t^-1".

    Terms are integers, `c*t^k`, `t^k` or `t`, joined by `+` or `-`; whitespace
    is ignored. The result must satisfy a_k = a_{-k} and Δ(1) = 1.
    """
    cursor = _Cursor(text)
    coefficients: Dict[int, int] = {}

    sign = -1 if cursor.take("-") else 1
    if sign == 1:
        cursor.take("+")
    while True:
        coefficient, exponent = _parse_term(cursor)
        coefficients[exponent] = coefficients.get(exponent, 0) + sign * coefficient
        head = cursor.peek()
        if head is None:
            break
        if head == "+":
            sign = 1
        elif head == "-":
            sign = -1
        else:
            cursor.fail("'+', '-' or end of input")
        cursor.pos += 1

    polynomial = SymmetricLaurent(coefficients=coefficients)
    for exponent in polynomial.nonzero_exponents():
        mirror = polynomial.coefficient(-exponent)
        if polynomial.coefficient(exponent) != mirror:
            raise AsymmetricPolynomialError(exponent, polynomial.coefficient(exponent), mirror)
    value = polynomial.evaluate_at_one()
    if value != 1:
        raise NormalizationError(value)
    return polynomial


def torus_knot_alexander(a: int, b: int) -> SymmetricLaurent:
    """Symmetrized Alexander polynomial of T(a, b).

    Exact division (t^{ab} - 1)(t - 1) / ((t^a - 1)(t^b - 1)), then a shift by
    the genus (a - 1)(b - 1)/2.
    """
    if a < 2 or b <= a:
        raise InvalidTorusKnotError(a, b, "parameters must satisfy 2 <= a < b")
    if gcd(a, b) != 1:
        raise InvalidTorusKnotError(a, b, "parameters must be coprime")

    t = Symbol("t")
    quotient, remainder = div((t ** (a * b) - 1) * (t - 1), (t ** a - 1) * (t ** b - 1), t)
    if remainder != 0:
        raise InvalidTorusKnotError(a, b, "product formula did not divide exactly")
    genus = (a - 1) * (b - 1) // 2
    terms = Poly(quotient, t).as_dict()
    return SymmetricLaurent(coefficients={k - genus: int(c) for (k,), c in terms.items()})


def _complex_error(reason: str, message: str, **details: Any) -> ComplexValidationError:
    return ComplexValidationError(reason, message, details)


def validate_complex(cx: BifilteredComplex) -> BifilteredComplex:
    """Check names, filtration, grading drop, d∘d = 0 and the flip involution."""
    gens = cx.by_name()
    if len(gens) != len(cx.generators):
        raise _complex_error("schema", "generator names must be unique")

    for source, targets in cx.differential.items():
        if source not in gens:
            raise _complex_error("schema", f"differential of unknown generator '{source}'", generator=source)
        if len(set(targets)) != len(targets):
            raise _complex_error("schema", f"repeated target in d({source})", generator=source)
        for target in targets:
            if target not in gens:
                raise _complex_error("schema", f"d({source}) hits unknown generator '{target}'", generator=source)
            x, y = gens[source], gens[target]
            if y.i > x.i or y.j > x.j:
                raise _complex_error(
                    "filtration",
                    f"d({source}) hits {target} at ({y.i},{y.j}) above ({x.i},{x.j})",
                    generator=source,
                    target=target,
                )
            if y.gr != x.gr - 1:
                raise _complex_error(
                    "grading",
                    f"d({source}) hits {target}: grading drop is {x.gr - y.gr}, expected 1",
                    generator=source,
                    target=target,
                )

    for source in gens:
        parity: Dict[str, int] = {}
        for middle in cx.targets(source):
            for target in cx.targets(middle):
                parity[target] = parity.get(target, 0) ^ 1
        broken = sorted(name for name, bit in parity.items() if bit)
        if broken:
            raise _complex_error("d_squared", f"d(d({source})) = {' + '.join(broken)} is non-zero", generator=source)

    for name, image in cx.flip.items():
        if name not in gens or image not in gens:
            raise _complex_error("flip", f"flip pairs unknown generators '{name}' -> '{image}'")
    for name, gen in gens.items():
        image_name = cx.flipped(name)
        if cx.flipped(image_name) != name:
            raise _complex_error("flip", f"flip is not an involution at '{name}'", generator=name)
        image = gens[image_name]
        if (image.i, image.j) != (gen.j, gen.i):
            raise _complex_error(
                "flip",
                f"flip sends {name} at ({gen.i},{gen.j}) to {image_name} at ({image.i},{image.j})",
                generator=name,
            )
        if image.gr != gen.gr:
            raise _complex_error("flip", f"flip changes the grading of '{name}'", generator=name)
        flipped_boundary = sorted(cx.flipped(target) for target in cx.targets(name))
        if flipped_boundary != sorted(cx.targets(image_name)):
            raise _complex_error("flip", f"flip does not commute with d at '{name}'", generator=name)
    return cx


def _normalize(cx: BifilteredComplex) -> BifilteredComplex:
    return BifilteredComplex(
        generators=cx.generators,
        differential={name: tuple(targets) for name, targets in cx.differential.items() if targets},
        flip={name: image for name, image in cx.flip.items() if name != image},
    )


def parse_cfk(document: Union[str, bytes, Dict[str, Any]]) -> BifilteredComplex:
    """Parse a CFK JSON document and validate every complex invariant."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise _complex_error("schema", f"not valid JSON: {e.msg}", line=e.lineno, column=e.colno)
    if not isinstance(document, dict):
        raise _complex_error("schema", "top level must be a JSON object")
    unknown = sorted(set(document) - CFK_KEYS)
    if unknown:
        raise _complex_error("schema", f"unknown keys: {', '.join(unknown)}")
    if "generators" not in document:
        raise _complex_error("schema", "missing 'generators'")

    try:
        cx = BifilteredComplex.model_validate(
            {
                "generators": document["generators"],
                "differential": document.get("differential") or {},
                "flip": document.get("flip") or {},
            }
        )
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise _complex_error("schema", f"{location}: {first['msg']}")
    return validate_complex(_normalize(cx))


def serialize_cfk(cx: BifilteredComplex) -> str:
    """Deterministic JSON document for a complex; parse_cfk inverts it."""
    document = {
        "generators": [gen.model_dump() for gen in cx.generators],
        "differential": {name: list(targets) for name, targets in cx.differential.items() if targets},
    }
    flip = {name: image for name, image in cx.flip.items() if name != image}
    if flip:
        document["flip"] = flip
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def fixtures_dir() -> Path:
    return Path(get_settings().fixtures_dir)


def list_fixtures() -> List[str]:
    return sorted(path.name for path in fixtures_dir().glob("*.json"))


def read_cfk_file(path_text: str) -> tuple:
    """Locate a CFK file as given, or inside the fixtures directory, and parse it."""
    path = Path(path_text)
    if not path.exists():
        candidate = fixtures_dir() / path_text
        if not candidate.exists():
            raise InvalidKnotSpecError(f"cfk:{path_text}", "file not found")
        path = candidate
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidKnotSpecError(f"cfk:{path_text}", f"cannot read file: {e}")
    return parse_cfk(text), str(path)


def load_fixture(name: str) -> BifilteredComplex:
    """Parse one of the shipped model complexes, e.g. "fig8.json"."""
    cx, _ = read_cfk_file(str(fixtures_dir() / name))
    return cx


def parse_knot_spec(text: str) -> KnotSpec:
    """Parse `torus:a,b`, `alex:<polynomial>` or `cfk:<path>`."""
    kind, sep, body = text.partition(":")
    body = body.strip()
    if not sep or not body:
        raise InvalidKnotSpecError(text, "expected torus:a,b | alex:\"...\" | cfk:path")

    try:
        if kind == KnotKind.TORUS.value:
            parts = [part.strip() for part in body.split(",")]
            if len(parts) != 2 or not all(part.lstrip("-").isdigit() for part in parts):
                raise InvalidKnotSpecError(text, "torus knots are written torus:a,b")
            a, b = int(parts[0]), int(parts[1])
            torus_knot_alexander(a, b)
            return KnotSpec(kind=KnotKind.TORUS, raw=text, torus=(a, b))
        if kind == KnotKind.ALEXANDER.value:
            polynomial = parse_alexander(body.strip("\"'"))
            return KnotSpec(kind=KnotKind.ALEXANDER, raw=text, alexander=polynomial)
        if kind == KnotKind.CFK.value:
            cx, source = read_cfk_file(body)
            return KnotSpec(kind=KnotKind.CFK, raw=text, complex=cx, source=source)
    except (AlexanderSyntaxError, AsymmetricPolynomialError, NormalizationError,
            InvalidTorusKnotError, ComplexValidationError, InvalidKnotSpecError) as e:
        surgery_logger.validation_failed(source=text, error_code=e.error_code, message=e.message)
        raise
    raise InvalidKnotSpecError(text, f"unknown knot kind '{kind}'")

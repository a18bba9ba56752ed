"""JSON-friendly encodings.

Exact numbers are strings: rationals ``"p/q"``, field elements
``"p/q+r/s*theta"``.  Exact quaternions are 4-element lists of such strings,
float quaternions 4-element lists of floats (``"inf"`` for infinity), and
matrices 2x2 nested lists of quaternions.  A bare scalar stands for a real
quaternion on input.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from .quadfield import FieldElement, QuadraticField
from .quatalg import INFINITY, FloatQuaternion, Quaternion

_TERM = re.compile(r"[+-]?[^+-]+")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_rational(x: Fraction | int) -> str:
    return str(Fraction(x))


def parse_rational(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    s = s.strip().replace(" ", "")
    if not _RATIONAL.match(s):
        raise ValueError(f"not an exact rational: {s!r}")
    return Fraction(s)


def format_field_element(x: FieldElement) -> str:
    a, b = x.a, x.b
    if not b:
        return str(a)
    tail = "theta" if abs(b) == 1 else f"{abs(b)}*theta"
    if not a:
        return tail if b > 0 else "-" + tail
    return f"{a}{'+' if b > 0 else '-'}{tail}"


def parse_field_element(s: str | int, field: QuadraticField) -> FieldElement:
    if isinstance(s, int):
        return FieldElement(s, 0, field)
    text = s.replace(" ", "")
    if not text:
        raise ValueError("empty field element")
    a = Fraction(0)
    b = Fraction(0)
    for term in _TERM.findall(text):
        if term.endswith("theta"):
            coeff = term[: -len("theta")]
            if coeff.endswith("*"):
                coeff = coeff[:-1]
            if coeff in ("", "+"):
                b += 1
            elif coeff == "-":
                b -= 1
            else:
                b += parse_rational(coeff)
        else:
            a += parse_rational(term)
    return FieldElement(a, b, field)


def format_quaternion(q: Quaternion) -> list[str]:
    return [format_field_element(x) for x in q.coords]


def parse_quaternion(data: Any, field: QuadraticField) -> Quaternion:
    if isinstance(data, (str, int)) and not isinstance(data, bool):
        return Quaternion.scalar(parse_field_element(data, field), field)
    if not isinstance(data, (list, tuple)) or len(data) != 4:
        raise ValueError(f"quaternion must be a 4-element array, got {data!r}")
    return Quaternion([parse_field_element(x, field) for x in data], field)


def format_float_quaternion(q: FloatQuaternion) -> list[float] | str:
    if q.is_infinite:
        return "inf"
    return [float(x) for x in q.coords]


def parse_float_quaternion(data: Any) -> FloatQuaternion:
    if data == "inf" or data == "infinity":
        return INFINITY
    if isinstance(data, (int, float)) and not isinstance(data, bool):
        return FloatQuaternion(float(data))
    if not isinstance(data, (list, tuple)) or len(data) != 4:
        raise ValueError(f"quaternion must be a 4-element array or 'inf', got {data!r}")
    return FloatQuaternion(*(float(x) for x in data))


def is_exact_payload(data: Any) -> bool:
    """True when a quaternion/matrix payload carries exact (string/int) entries."""
    if isinstance(data, (list, tuple)):
        return all(is_exact_payload(x) for x in data)
    return isinstance(data, (str, int)) and not isinstance(data, bool) and data not in ("inf", "infinity")


def format_matrix(g) -> list[list]:
    fmt = format_quaternion if isinstance(g.a, Quaternion) else format_float_quaternion
    return [[fmt(g.a), fmt(g.b)], [fmt(g.c), fmt(g.d)]]


def parse_matrix(data: Any, field: QuadraticField | None = None):
    from .matmob import QuatMat2

    if not (isinstance(data, (list, tuple)) and len(data) == 2 and all(len(r) == 2 for r in data)):
        raise ValueError("matrix must be a 2x2 array of quaternions")
    entries = [data[0][0], data[0][1], data[1][0], data[1][1]]
    if field is not None and is_exact_payload(data):
        return QuatMat2(*(parse_quaternion(e, field) for e in entries))
    return QuatMat2(*(parse_float_quaternion(e) for e in entries))


def format_point(p) -> dict:
    return {"q": format_float_quaternion(p.q), "t": float(p.t)}


def parse_point(data: Any):
    from .matmob import H5Point

    if not isinstance(data, dict) or "q" not in data or "t" not in data:
        raise ValueError('point must be {"q": [x0, x1, x2, x3], "t": t}')
    return H5Point(parse_float_quaternion(data["q"]), float(data["t"]))

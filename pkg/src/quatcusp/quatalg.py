"""Quaternions in (-1,-1 / K), exact over a quadratic field or in float64."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .quadfield import QQ, FieldElement, FieldMismatch, QuadraticField, embed_real_pair

Scalar = Union[int, Fraction, FieldElement]

__all__ = [
    "Quaternion",
    "FloatQuaternion",
    "QuaternionPair",
    "INFINITY",
    "quat",
    "galois_twist",
]


class Quaternion:
    """Exact quaternion x0 + x1 i + x2 j + x3 k with coordinates in K."""

    __slots__ = ("coords", "field")

    def __init__(self, coords: Iterable[Scalar], field: QuadraticField | None = None) -> None:
        coords = tuple(coords)
        if len(coords) != 4:
            raise ValueError("a quaternion has exactly 4 coordinates")
        if field is None:
            field = next((c.field for c in coords if isinstance(c, FieldElement)), QQ)
        out = []
        for c in coords:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatch(f"{c.field} vs {field}")
                out.append(c)
            else:
                out.append(FieldElement(c, 0, field))
        object.__setattr__(self, "coords", tuple(out))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @classmethod
    def _raw(cls, coords: tuple, field: QuadraticField) -> "Quaternion":
        obj = object.__new__(cls)
        object.__setattr__(obj, "coords", coords)
        object.__setattr__(obj, "field", field)
        return obj

    @classmethod
    def scalar(cls, x: Scalar, field: QuadraticField = QQ) -> "Quaternion":
        return cls((x, 0, 0, 0), field)

    @classmethod
    def zero(cls, field: QuadraticField = QQ) -> "Quaternion":
        return cls((0, 0, 0, 0), field)

    @classmethod
    def one(cls, field: QuadraticField = QQ) -> "Quaternion":
        return cls((1, 0, 0, 0), field)

    @property
    def x0(self) -> FieldElement:
        return self.coords[0]

    def _check(self, other: "Quaternion") -> None:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def _lift(self, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return Quaternion.scalar(other, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Quaternion._raw(tuple(x + y for x, y in zip(self.coords, o.coords)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Quaternion._raw(tuple(x - y for x, y in zip(self.coords, o.coords)), self.field)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "Quaternion":
        return Quaternion._raw(tuple(-x for x in self.coords), self.field)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return Quaternion._raw(tuple(x * other for x in self.coords), self.field)
        if not isinstance(other, Quaternion):
            return NotImplemented
        self._check(other)
        a0, a1, a2, a3 = self.coords
        b0, b1, b2, b3 = other.coords
        return Quaternion._raw(
            (
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ),
            self.field,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return Quaternion._raw(tuple(other * x for x in self.coords), self.field)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            inv = 1 / (other if isinstance(other, FieldElement) else Fraction(other))
            return self * inv
        return NotImplemented

    def __pow__(self, e: int) -> "Quaternion":
        if e < 0:
            return self.inverse() ** (-e)
        result = Quaternion.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "Quaternion":
        x0, x1, x2, x3 = self.coords
        return Quaternion._raw((x0, -x1, -x2, -x3), self.field)

    def nrd(self) -> FieldElement:
        x0, x1, x2, x3 = self.coords
        return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3

    def trd(self) -> FieldElement:
        return self.coords[0] * 2

    def real(self) -> FieldElement:
        return self.coords[0]

    def pure_part(self) -> "Quaternion":
        return Quaternion._raw((FieldElement(0, 0, self.field),) + self.coords[1:], self.field)

    def inverse(self) -> "Quaternion":
        n = self.nrd()
        if not n:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return self.conj() * n.inverse()

    def is_pure(self) -> bool:
        return not self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def galois(self) -> "Quaternion":
        return Quaternion._raw(tuple(x.conj() for x in self.coords), self.field)

    def to_float(self) -> "FloatQuaternion":
        return FloatQuaternion(*(float(x) for x in self.coords))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Quaternion):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == Quaternion.scalar(other, self.field)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def sort_key(self) -> tuple:
        return tuple((x.a, x.b) for x in self.coords)

    def __repr__(self) -> str:
        return f"Quaternion({[str(x) for x in self.coords]}, {self.field!r})"

    def __str__(self) -> str:
        out = ""
        for x, unit in zip(self.coords, ("", "i", "j", "k")):
            if not x:
                continue
            s = str(x)
            if unit:
                if s in ("1", "-1"):
                    s = s[:-1]
                elif "+" in s[1:] or "-" in s[1:]:
                    s = f"({s})*"
                else:
                    s += "*"
                s += unit
            if out and not s.startswith("-"):
                out += "+"
            out += s
        return out or "0"


def quat(field: QuadraticField = QQ, *coords: Scalar) -> Quaternion:
    """Shorthand: ``quat(K, 1, 2)`` is 1 + 2i over K."""
    c = list(coords) + [0] * (4 - len(coords))
    return Quaternion(c, field)


@dataclass(frozen=True)
class FloatQuaternion:
    """Hamilton quaternion with float64 coordinates, or the point at infinity."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    is_infinite: bool = False

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return (self.x0, self.x1, self.x2, self.x3)

    def _finite(self) -> None:
        if self.is_infinite:
            raise ValueError("arithmetic on the point at infinity")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = FloatQuaternion(float(other))
        if not isinstance(other, FloatQuaternion):
            return NotImplemented
        self._finite()
        other._finite()
        return FloatQuaternion(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2, self.x3 + other.x3)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = FloatQuaternion(float(other))
        if not isinstance(other, FloatQuaternion):
            return NotImplemented
        self._finite()
        other._finite()
        return FloatQuaternion(self.x0 - other.x0, self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3)

    def __neg__(self) -> "FloatQuaternion":
        self._finite()
        return FloatQuaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        self._finite()
        if isinstance(other, (int, float)):
            return FloatQuaternion(self.x0 * other, self.x1 * other, self.x2 * other, self.x3 * other)
        if not isinstance(other, FloatQuaternion):
            return NotImplemented
        other._finite()
        a0, a1, a2, a3 = self.x0, self.x1, self.x2, self.x3
        b0, b1, b2, b3 = other.x0, other.x1, other.x2, other.x3
        return FloatQuaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> "FloatQuaternion":
        self._finite()
        return FloatQuaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def nrd(self) -> float:
        self._finite()
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def trd(self) -> float:
        return 2.0 * self.x0

    def real(self) -> float:
        return self.x0

    def abs(self) -> float:
        return math.sqrt(self.nrd())

    def inverse(self) -> "FloatQuaternion":
        n = self.nrd()
        if n == 0.0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return self.conj() * (1.0 / n)

    def is_zero(self) -> bool:
        return not self.is_infinite and not any(self.coords)

    def __bool__(self) -> bool:
        return self.is_infinite or any(self.coords)

    def dist(self, other: "FloatQuaternion") -> float:
        return (self - other).abs()

    def to_float(self) -> "FloatQuaternion":
        return self

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return f"({self.x0:.6g}, {self.x1:.6g}, {self.x2:.6g}, {self.x3:.6g})"


INFINITY = FloatQuaternion(is_infinite=True)


class QuaternionPair(NamedTuple):
    first: FloatQuaternion
    second: FloatQuaternion


def galois_twist(q: Quaternion) -> QuaternionPair:
    """q -> (q, sigma(q)) as a pair of Hamilton quaternions."""
    pairs = [embed_real_pair(x) for x in q.coords]
    return QuaternionPair(
        FloatQuaternion(*(p[0] for p in pairs)),
        FloatQuaternion(*(p[1] for p in pairs)),
    )

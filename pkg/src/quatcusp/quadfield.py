"""Exact arithmetic in Q and in real quadratic fields Q(sqrt(n)).

Elements are stored as ``a + b*theta`` with rational ``a, b`` where
``theta = sqrt(n)`` if ``n % 4 != 1`` and ``theta = (1 + sqrt(n))/2``
otherwise, so ``Z_K = Z + Z*theta`` and integrality is a plain test on
``a`` and ``b``.  The rational field is the degenerate descriptor ``n = 1``
(no theta, trivial conjugation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Union

Rational = Union[int, Fraction]

__all__ = [
    "QQ",
    "QuadraticField",
    "FieldElement",
    "FieldMismatch",
    "is_squarefree",
    "fundamental_unit",
    "totally_positive_generator",
    "embed_real_pair",
    "norm_trace",
]


class FieldMismatch(ValueError):
    pass


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class QuadraticField:
    """Descriptor of K = Q(sqrt(n)); ``n == 1`` stands for K = Q."""

    n: int

    def __post_init__(self) -> None:
        if self.n != 1 and (self.n < 2 or not is_squarefree(self.n)):
            raise ValueError(f"n must be a squarefree integer > 1 (or 1 for Q), got {self.n}")

    @property
    def is_rational(self) -> bool:
        return self.n == 1

    @property
    def theta_is_half(self) -> bool:
        """True when theta = (1 + sqrt(n))/2."""
        return self.n % 4 == 1 and self.n != 1

    # theta^2 = trace_theta*theta - norm_theta
    @cached_property
    def trace_theta(self) -> int:
        return 1 if self.theta_is_half else 0

    @cached_property
    def norm_theta(self) -> Fraction:
        if self.is_rational:
            return Fraction(0)
        if self.theta_is_half:
            return Fraction(1 - self.n, 4)
        return Fraction(-self.n)

    def __call__(self, a: Rational = 0, b: Rational = 0) -> "FieldElement":
        return FieldElement(a, b, self)

    @property
    def theta(self) -> "FieldElement":
        if self.is_rational:
            raise ValueError("Q has no theta")
        return FieldElement(0, 1, self)

    def from_sqrt_form(self, p: Rational, q: Rational) -> "FieldElement":
        """The element p + q*sqrt(n)."""
        p, q = Fraction(p), Fraction(q)
        if self.is_rational:
            if q:
                raise ValueError("sqrt(1) form needs q = 0 over Q")
            return FieldElement(p, 0, self)
        if self.theta_is_half:
            # sqrt(n) = 2*theta - 1
            return FieldElement(p - q, 2 * q, self)
        return FieldElement(p, q, self)

    def __repr__(self) -> str:
        return "QQ" if self.is_rational else f"QuadraticField({self.n})"

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt({self.n}))"


QQ = QuadraticField(1)


class FieldElement:
    """Immutable element a + b*theta of a quadratic field."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: Rational = 0, b: Rational = 0, field: QuadraticField = QQ) -> None:
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if field.n == 1 and b:
            raise ValueError("nonzero theta coefficient over Q")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, field: QuadraticField) -> "FieldElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "field", field)
        return obj

    # --- coercion -------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement._raw(Fraction(other), Fraction(0), self.field)
        return NotImplemented

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._raw(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._raw(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, self.field)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        if not b and not d:
            return FieldElement._raw(a * c, b, self.field)
        f = self.field
        bd = b * d
        # theta^2 = t*theta - N
        return FieldElement._raw(
            a * c - bd * f.norm_theta, a * d + b * c + bd * f.trace_theta, f
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElement._raw(Fraction(1), Fraction(0), self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero field element")
        c = self.conj()
        return FieldElement._raw(c.a / nm, c.b / nm, self.field)

    # --- Galois structure -----------------------------------------------
    def conj(self) -> "FieldElement":
        """Galois conjugate: sqrt(n) -> -sqrt(n)."""
        if not self.b:
            return self
        # sigma(theta) = trace_theta - theta
        t = self.field.trace_theta
        return FieldElement._raw(self.a + self.b * t, -self.b, self.field)

    def norm(self) -> Fraction:
        f = self.field
        a, b = self.a, self.b
        # (a + b theta)(a + b sigma(theta)) = a^2 + a b t + b^2 N
        return a * a + a * b * f.trace_theta + b * b * f.norm_theta

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.trace_theta

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return not self.b

    def sqrt_form(self) -> tuple[Fraction, Fraction]:
        """(p, q) with self = p + q*sqrt(n)."""
        if self.field.theta_is_half:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def embeddings(self) -> tuple[float, float]:
        return embed_real_pair(self)

    def __float__(self) -> float:
        return _surd_to_float(*self.sqrt_form(), self.field.n)

    def sign(self) -> int:
        """Sign under the embedding with sqrt(n) > 0 (exact)."""
        p, q = self.sqrt_form()
        return _surd_sign(p, q, self.field.n)

    # --- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.a == other.a and self.b == other.b and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.field.n))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    # --- display ----------------------------------------------------------
    def __repr__(self) -> str:
        return f"FieldElement({self.a}, {self.b}, {self.field!r})"

    def __str__(self) -> str:
        from .serialize import format_field_element

        return format_field_element(self)

    def sqrt_str(self) -> str:
        """Human form in the sqrt(n) basis, e.g. ``(3+sqrt(13))/2``."""
        p, q = self.sqrt_form()
        if self.field.is_rational or not q:
            return str(p)
        den = p.denominator * q.denominator // _gcd(p.denominator, q.denominator)
        pn, qn = p * den, q * den
        s = f"{pn.numerator}" if pn else ""
        if qn == 1:
            s += ("+" if s else "") + f"sqrt({self.field.n})"
        elif qn == -1:
            s += f"-sqrt({self.field.n})"
        else:
            s += ("+" if s and qn > 0 else "") + f"{qn.numerator}*sqrt({self.field.n})"
        return s if den == 1 else f"({s})/{den}"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _surd_sign(p: Fraction, q: Fraction, n: int) -> int:
    """Exact sign of p + q*sqrt(n)."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if n == 1:
        s = p + q
        return (s > 0) - (s < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with n q^2
    d = p * p - n * q * q
    return sp if d > 0 else (sq if d < 0 else 0)


_FLOAT_GUARD_BITS = 128


def _surd_to_float(p: Fraction, q: Fraction, n: int) -> float:
    """Round p + q*sqrt(n) to float, within far less than half an ulp."""
    if n == 1 or not q:
        return float(p + q) if n == 1 else float(p)
    den = p.denominator * q.denominator
    P = p.numerator * q.denominator
    Q = q.numerator * p.denominator
    mag = max(abs(P), abs(Q) * isqrt(n) + 1, 1)
    # |P + Q sqrt(n)| >= 1/(2 mag), so relative error stays below 2^-GUARD
    k = _FLOAT_GUARD_BITS + mag.bit_length()
    scale = 1 << k
    r = isqrt(Q * Q * n * scale * scale)
    # r = floor(|Q| sqrt(n) 2^k); sqrt(n) is irrational so r is never exact
    qpart = r if Q > 0 else -r - 1
    return float(Fraction(P * scale + qpart, den * scale) + Fraction(1, 2 * den * scale))


def embed_real_pair(x: FieldElement) -> tuple[float, float]:
    """(x, sigma(x)) under the embedding with sqrt(n) > 0."""
    p, q = x.sqrt_form()
    n = x.field.n
    return _surd_to_float(p, q, n), _surd_to_float(p, -q, n)


def norm_trace(x: FieldElement) -> tuple[Fraction, Fraction]:
    return x.norm(), x.trace()


def _theta_cf_convergents(field: QuadraticField):
    """Yield convergents (p, q) of the continued fraction of theta."""
    D = field.n
    P, Q = (1, 2) if field.theta_is_half else (0, 1)
    s = isqrt(D)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + s) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(field: QuadraticField) -> FieldElement:
    """Fundamental unit eps > 1 of Z_K.

    Walks the convergents p/q of theta; the first with N(p - q*theta) = +-1
    gives the unit of smallest theta-coefficient, whose conjugate is eps.
    """
    if field.is_rational:
        raise ValueError("Q has no fundamental unit")
    for p, q in _theta_cf_convergents(field):
        u = FieldElement(p, -q, field)
        if abs(u.norm()) == 1:
            eps = u.conj()
            return eps if eps.sign() > 0 else -eps
    raise AssertionError("unreachable")


def totally_positive_generator(field: QuadraticField) -> FieldElement:
    """Generator of the totally positive units: eps if N(eps) = 1 else eps^2."""
    eps = fundamental_unit(field)
    return eps if eps.norm() == 1 else eps * eps

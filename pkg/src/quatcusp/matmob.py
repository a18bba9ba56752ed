"""2x2 quaternionic matrices, their Moebius action on H u {inf} and the
Poincare extension to upper half-space H^5 = {(q, t) : t > 0}.

Matrices carry either exact ``Quaternion`` entries or ``FloatQuaternion``
entries; the determinant, inverse and BG checks work on both, exactly in
the first case and with a tolerance in the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .linalg import solve_field
from .quadfield import FieldElement
from .quatalg import INFINITY, FloatQuaternion, Quaternion

Entry = Union[Quaternion, FloatQuaternion]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class QuatMat2:
    a: Entry
    b: Entry
    c: Entry
    d: Entry

    @property
    def entries(self) -> tuple[Entry, Entry, Entry, Entry]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, Quaternion)

    @property
    def field(self):
        return self.a.field if self.is_exact else None

    def __matmul__(self, other: "QuatMat2") -> "QuatMat2":
        return mat_mul(self, other)

    def __mul__(self, other: "QuatMat2") -> "QuatMat2":
        return mat_mul(self, other)

    def __neg__(self) -> "QuatMat2":
        return QuatMat2(-self.a, -self.b, -self.c, -self.d)

    def to_float(self) -> "QuatMat2":
        return QuatMat2(*(e.to_float() for e in self.entries))

    def galois(self) -> "QuatMat2":
        """Entrywise Galois conjugate (exact matrices only)."""
        return QuatMat2(*(e.galois() for e in self.entries))

    def scaled(self, s) -> "QuatMat2":
        return QuatMat2(*(e * s for e in self.entries))

    def max_dist(self, other: "QuatMat2") -> float:
        return max((x.to_float() - y.to_float()).abs() for x, y in zip(self.entries, other.entries))

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def mat_mul(g: QuatMat2, h: QuatMat2) -> QuatMat2:
    if g.is_exact != h.is_exact:
        raise TypeError("cannot multiply exact and floating matrices")
    return QuatMat2(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


# --- standard matrices ---------------------------------------------------------


def _unit_pair(like: Entry) -> tuple[Entry, Entry]:
    if isinstance(like, Quaternion):
        return Quaternion.zero(like.field), Quaternion.one(like.field)
    return FloatQuaternion(), FloatQuaternion(1.0)


def identity_like(like: Entry) -> QuatMat2:
    z, o = _unit_pair(like)
    return QuatMat2(o, z, z, o)


def inversion_matrix(like: Entry) -> QuatMat2:
    """J = [[0, 1], [1, 0]], acting as q -> q^-1."""
    z, o = _unit_pair(like)
    return QuatMat2(z, o, o, z)


def translation(b: Entry) -> QuatMat2:
    z, o = _unit_pair(b)
    return QuatMat2(o, b, z, o)


def diagonal(u: Entry, v: Entry | None = None) -> QuatMat2:
    z, _ = _unit_pair(u)
    return QuatMat2(u, z, z, u if v is None else v)


# --- determinant and inverse ---------------------------------------------------


def dieudonne_det_sq(g: QuatMat2):
    """det_H(g)^2 = |a|^2|d|^2 + |c|^2|b|^2 - 2 Re(c conj(a) b conj(d)).

    Exact (an element of K) for exact matrices, a float otherwise.
    """
    a, b, c, d = g.entries
    cross = (c * a.conj() * b * d.conj()).real()
    return a.nrd() * d.nrd() + c.nrd() * b.nrd() - cross * 2


def dieudonne_det(g: QuatMat2) -> float:
    v = dieudonne_det_sq(g)
    return math.sqrt(max(float(v), 0.0))


class NotUnimodular(ValueError):
    pass


def _is_identity(g: QuatMat2) -> bool:
    z, o = _unit_pair(g.a)
    return g.a == o and g.b == z and g.c == z and g.d == o


def _closed_form_inverse(g: QuatMat2) -> QuatMat2 | None:
    """Inverse of a det_H = 1 matrix by zero-pattern dispatch."""
    a, b, c, d = g.entries
    az, bz, cz, dz = (not a), (not b), (not c), (not d)
    if not (az or bz or cz or dz):
        return QuatMat2(
            a.conj() * d.nrd() - c.conj() * d * b.conj(),
            c.conj() * b.nrd() - a.conj() * b * d.conj(),
            b.conj() * c.nrd() - d.conj() * c * a.conj(),
            d.conj() * a.nrd() - b.conj() * a * c.conj(),
        )
    zero = a * 0
    if az:
        return QuatMat2(-(c.conj() * d * b.conj()), c.conj() * b.nrd(), b.conj() * c.nrd(), zero)
    if dz:
        return QuatMat2(zero, c.conj() * b.nrd(), b.conj() * c.nrd(), -(b.conj() * a * c.conj()))
    if bz:
        return QuatMat2(a.conj() * d.nrd(), zero, -(d.conj() * c * a.conj()), d.conj() * a.nrd())
    if cz:
        return QuatMat2(a.conj() * d.nrd(), -(a.conj() * b * d.conj()), zero, d.conj() * a.nrd())
    return None


def solve_inverse(g: QuatMat2) -> QuatMat2:
    """Right inverse of an exact matrix by a K-linear 8x8 solve.

    Left multiplication by g is K-linear on the 8 coordinates of a column
    (x; z), so each column of g^-1 solves one 8x8 system.
    """
    if not g.is_exact:
        raise TypeError("solve_inverse needs an exact matrix")
    F = g.field
    zero = FieldElement(0, 0, F)
    one = FieldElement(1, 0, F)
    basis = [Quaternion([one if m == s else zero for m in range(4)], F) for s in range(4)]
    # column of the 8x8 system for unknown coordinate s of x (top) or z (bottom)
    cols = []
    for top in (True, False):
        for e in basis:
            if top:
                upper, lower = g.a * e, g.c * e
            else:
                upper, lower = g.b * e, g.d * e
            cols.append(list(upper.coords) + list(lower.coords))
    A = [[cols[j][i] for j in range(8)] for i in range(8)]
    qz, qo = Quaternion.zero(F), Quaternion.one(F)
    out = []
    for rhs_top, rhs_bot in ((qo, qz), (qz, qo)):
        rhs = list(rhs_top.coords) + list(rhs_bot.coords)
        sol = solve_field(A, rhs, zero, one)
        if sol is None:
            raise ZeroDivisionError("matrix is singular")
        out.append((Quaternion(sol[:4], F), Quaternion(sol[4:], F)))
    (x, z), (y, w) = out
    return QuatMat2(x, y, z, w)


def sl2_inverse(g: QuatMat2) -> QuatMat2:
    """Inverse of g with det_H(g) = 1, entries built from g's own entries.

    When g has entries in an order O the closed forms only use products,
    conjugates and norms of those entries, so the inverse has entries in O.
    Exact matrices fall back to a linear solve if a closed form is missing.
    """
    det2 = dieudonne_det_sq(g)
    if g.is_exact:
        if det2 != 1:
            raise NotUnimodular(f"det_H^2 = {det2}, expected 1")
    elif abs(det2 - 1.0) > DEFAULT_TOL:
        raise NotUnimodular(f"det_H^2 = {det2}, expected 1")
    inv = _closed_form_inverse(g)
    if g.is_exact and (inv is None or not _is_identity(mat_mul(g, inv))):
        inv = solve_inverse(g)
    if inv is None:
        raise ZeroDivisionError("no closed-form inverse")
    return inv


# --- BG-conditions (Moebius maps preserving Re(q) > 0) --------------------------


def _is_zero(x, tol: float) -> bool:
    if isinstance(x, (FieldElement, Fraction, int)):
        return not x
    return abs(x) <= tol


def _quat_is_zero(q: Entry, tol: float) -> bool:
    if isinstance(q, Quaternion):
        return q.is_zero()
    return max(abs(v) for v in q.coords) <= tol


def bg_check(g: QuatMat2, variant: int = 1, tol: float = DEFAULT_TOL) -> bool:
    """One of the three equivalent BG-conditions for preserving Re(q) > 0.

    1: conj(g)^T J g = J;  2: Re(a c*) = Re(b d*) = 0, b* c + d* a = 1;
    3: Re(c d*) = Re(a b*) = 0, a d* + b c* = 1.  Exact for exact matrices.
    """
    a, b, c, d = g.entries
    _, one = _unit_pair(a)
    if variant == 1:
        # conj(g)^T J g = [[a* c + c* a, a* d + c* b], [b* c + d* a, b* d + d* b]]
        m11 = a.conj() * c + c.conj() * a
        m12 = a.conj() * d + c.conj() * b
        m21 = b.conj() * c + d.conj() * a
        m22 = b.conj() * d + d.conj() * b
        return (
            _quat_is_zero(m11, tol)
            and _quat_is_zero(m12 - one, tol)
            and _quat_is_zero(m21 - one, tol)
            and _quat_is_zero(m22, tol)
        )
    if variant == 2:
        return (
            _is_zero((a * c.conj()).real(), tol)
            and _is_zero((b * d.conj()).real(), tol)
            and _quat_is_zero(b.conj() * c + d.conj() * a - one, tol)
        )
    if variant == 3:
        return (
            _is_zero((c * d.conj()).real(), tol)
            and _is_zero((a * b.conj()).real(), tol)
            and _quat_is_zero(a * d.conj() + b * c.conj() - one, tol)
        )
    raise ValueError("variant must be 1, 2 or 3")


def bg_all(g: QuatMat2, tol: float = DEFAULT_TOL) -> tuple[bool, bool, bool]:
    return tuple(bg_check(g, v, tol) for v in (1, 2, 3))


def bg_residual(g: QuatMat2) -> float:
    """Largest violation across all three BG variants (float)."""
    f = g.to_float() if g.is_exact else g
    a, b, c, d = f.entries
    one = FloatQuaternion(1.0)
    terms = [
        abs((a * c.conj()).real()),
        abs((b * d.conj()).real()),
        (b.conj() * c + d.conj() * a - one).abs(),
        abs((c * d.conj()).real()),
        abs((a * b.conj()).real()),
        (a * d.conj() + b * c.conj() - one).abs(),
        (a.conj() * c + c.conj() * a).abs(),
        (a.conj() * d + c.conj() * b - one).abs(),
        (b.conj() * d + d.conj() * b).abs(),
    ]
    return max(terms)


# --- Iwasawa decomposition -------------------------------------------------------


class IwasawaFactors(NamedTuple):
    lam: float
    omega: FloatQuaternion
    alpha: FloatQuaternion
    beta: FloatQuaternion

    def matrix(self) -> QuatMat2:
        return iwasawa_compose(self.lam, self.omega, self.alpha, self.beta)


def iwasawa_compose(lam: float, omega: FloatQuaternion, alpha: FloatQuaternion, beta: FloatQuaternion) -> QuatMat2:
    """diag(lam, 1/lam) [[1, omega], [0, 1]] [[alpha, beta], [beta, alpha]]."""
    return QuatMat2(
        (alpha + omega * beta) * lam,
        (beta + omega * alpha) * lam,
        beta * (1.0 / lam),
        alpha * (1.0 / lam),
    )


class DecompositionError(ValueError):
    pass


def iwasawa_decompose(g: QuatMat2, tol: float = DEFAULT_TOL) -> IwasawaFactors:
    f = g.to_float() if g.is_exact else g
    if bg_residual(f) > tol:
        raise DecompositionError("matrix violates the BG-conditions")
    a, b, c, d = f.entries
    s = c.nrd() + d.nrd()
    if s == 0.0:
        raise DecompositionError("bottom row vanishes")
    lam = 1.0 / math.sqrt(s)
    alpha = d * lam
    beta = c * lam
    na, nb = alpha.abs(), beta.abs()
    if na < 1e-12 and nb < 1e-12:
        raise DecompositionError("ill-conditioned recovery")
    # a = lam (alpha + omega beta), b = lam (beta + omega alpha)
    if nb >= na:
        omega = (a * (1.0 / lam) - alpha) * beta.inverse()
    else:
        omega = (b * (1.0 / lam) - beta) * alpha.inverse()
    return IwasawaFactors(lam, omega, alpha, beta)


# --- Moebius action -------------------------------------------------------------


def moebius_apply(g: QuatMat2, q: FloatQuaternion) -> FloatQuaternion:
    """F_g(q) = (a q + b)(c q + d)^-1 on H u {inf}."""
    f = g.to_float() if g.is_exact else g
    a, b, c, d = f.entries
    if q.is_infinite:
        return INFINITY if c.is_zero() else a * c.inverse()
    den = c * q + d
    if den.is_zero():
        return INFINITY
    return (a * q + b) * den.inverse()


class MoebiusFactor(NamedTuple):
    """One elementary map: T (q + p), h (p q), hr (q p) or I (q^-1)."""

    kind: str
    param: FloatQuaternion | None

    def __call__(self, q: FloatQuaternion) -> FloatQuaternion:
        if q.is_infinite:
            if self.kind == "I":
                return FloatQuaternion()
            return INFINITY
        if self.kind == "T":
            return q + self.param
        if self.kind == "h":
            return self.param * q
        if self.kind == "hr":
            return q * self.param
        if self.kind == "I":
            return INFINITY if q.is_zero() else q.inverse()
        raise ValueError(self.kind)


def moebius_decompose(g: QuatMat2) -> list[MoebiusFactor]:
    """Elementary factors in application order.

    c != 0: T_{c^-1 d}, h_c, I, h_{b - a c^-1 d}, T_{a c^-1}.
    c == 0: q -> a q d^-1 + b d^-1 as h_a, hr_{d^-1}, T_{b d^-1}.
    """
    f = g.to_float() if g.is_exact else g
    a, b, c, d = f.entries
    if c.is_zero():
        dinv = d.inverse()
        return [MoebiusFactor("h", a), MoebiusFactor("hr", dinv), MoebiusFactor("T", b * dinv)]
    cinv = c.inverse()
    return [
        MoebiusFactor("T", cinv * d),
        MoebiusFactor("h", c),
        MoebiusFactor("I", None),
        MoebiusFactor("h", b - a * cinv * d),
        MoebiusFactor("T", a * cinv),
    ]


def compose_factors(factors: list[MoebiusFactor], q: FloatQuaternion) -> FloatQuaternion:
    for fac in factors:
        q = fac(q)
    return q


# --- Poincare extension -----------------------------------------------------------


@dataclass(frozen=True)
class H5Point:
    q: FloatQuaternion
    t: float

    def __post_init__(self) -> None:
        if not self.t > 0:
            raise ValueError("H5 points need t > 0")


def poincare_extend(g: QuatMat2, p: H5Point) -> H5Point:
    """Isometric extension of F_g to H^5 (g with det_H = 1)."""
    f = g.to_float() if g.is_exact else g
    a, b, c, d = f.entries
    q, t = p.q, p.t
    t2 = t * t
    w = c * q + d
    den = w.nrd() + c.nrd() * t2
    num = (a * q + b) * w.conj() + a * c.conj() * t2
    return H5Point(num * (1.0 / den), t / den)


def h5_distance(p1: H5Point, p2: H5Point) -> float:
    """Hyperbolic distance in the upper half-space model."""
    dq = (p1.q - p2.q).nrd()
    dt = p1.t - p2.t
    x = 1.0 + (dq + dt * dt) / (2.0 * p1.t * p2.t)
    return math.acosh(x)


# --- generators of PSL_2(O), O a Z-order ---------------------------------------------


class Generator(NamedTuple):
    name: str
    matrix: QuatMat2


# unit generators listed for the classical orders
_NAMED_UNIT_GENERATORS = {
    "lipschitz": ((0, 1, 0, 0), (0, 0, 1, 0)),
    "hurwitz": (
        (0, 1, 0, 0),
        (Fraction(1, 2),) * 4,
        (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)),
    ),
}
_UNIT_NAMES = {"lipschitz": ("i", "j"), "hurwitz": ("i", "xi", "tau")}
_BASIS_NAMES = {"lipschitz": ("1", "i", "j", "k"), "hurwitz": ("1", "i", "j", "xi")}


def generators(order) -> list[Generator]:
    """Inversion, translations by the Z-basis and diagonal unit matrices.

    Only for orders over Q; index 0 is always the inversion.
    """
    from .orders import torsion_generators, unit_torsion

    F = order.field
    if not F.is_rational:
        raise ValueError("generators() covers orders over Q only")
    one = Quaternion.one(F)
    gens = [Generator("I", inversion_matrix(one))]
    names = _BASIS_NAMES.get(order.name, tuple(f"b{m}" for m in range(len(order.zbasis))))
    for nm, w in zip(names, order.zbasis):
        gens.append(Generator(f"T_{nm}", translation(w)))
    if order.name in _NAMED_UNIT_GENERATORS:
        units = [Quaternion(u, F) for u in _NAMED_UNIT_GENERATORS[order.name]]
        unames = _UNIT_NAMES[order.name]
    else:
        units = torsion_generators(unit_torsion(order))
        unames = tuple(f"u{m}" for m in range(len(units)))
    for nm, u in zip(unames, units):
        gens.append(Generator(f"D_{nm}", diagonal(u)))
    return gens


def projective_normal_form(g: QuatMat2) -> QuatMat2:
    """Representative of g modulo -1: first nonzero coordinate positive."""
    for e in g.entries:
        for x in e.coords:
            if x:
                return g if x > 0 else -g
    return g

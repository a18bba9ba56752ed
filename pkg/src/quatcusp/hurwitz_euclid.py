"""Right-Euclidean arithmetic in the Hurwitz order over Z and reduction of
points of H^5 into the chimney |x_n| <= 1/2, |q|^2 + t^2 >= 1."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .matmob import H5Point, QuatMat2, generators, poincare_extend
from .orders import make_named_order, order_contains
from .quadfield import QQ
from .quatalg import FloatQuaternion, Quaternion

HALF = Fraction(1, 2)
_HURWITZ = None


def hurwitz_order():
    global _HURWITZ
    if _HURWITZ is None:
        _HURWITZ = make_named_order("hurwitz", QQ)
    return _HURWITZ


def _check_hurwitz(*qs: Quaternion) -> None:
    H = hurwitz_order()
    for q in qs:
        if not q.field.is_rational:
            raise ValueError("Hurwitz arithmetic needs rational quaternions")
        if not order_contains(H, q):
            raise ValueError(f"{q} is not a Hurwitz integer")


def _rational_coords(q: Quaternion) -> tuple[Fraction, ...]:
    return tuple(x.a for x in q.coords)


def _candidates(x: tuple[Fraction, ...]):
    """Lipschitz points of the unit box around x and the nearest half-integer points."""
    floors = [math.floor(v) for v in x]
    for bits in itertools.product((0, 1), repeat=4):
        yield tuple(Fraction(f + b) for f, b in zip(floors, bits))
    halves = [math.floor(v - HALF) + HALF for v in x]
    for bits in itertools.product((0, 1), repeat=4):
        yield tuple(h + b for h, b in zip(halves, bits))


def right_divmod(a: Quaternion, b: Quaternion) -> tuple[Quaternion, Quaternion]:
    """a = b*quot + rem with nrd(rem) < nrd(b).

    quot is a Hurwitz integer nearest to b^-1 a; ties go to the smallest
    remainder coordinate tuple.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero quaternion")
    _check_hurwitz(a, b)
    x = _rational_coords(b.inverse() * a)
    best = None
    for cand in _candidates(x):
        quot = Quaternion(cand, QQ)
        rem = a - b * quot
        key = (rem.nrd().a, _rational_coords(rem))
        if best is None or key < best[0]:
            best = (key, quot, rem)
    _, quot, rem = best
    assert rem.nrd() < b.nrd()
    return quot, rem


def _hurwitz_units() -> list[Quaternion]:
    out = []
    for m in range(4):
        for s in (1, -1):
            c = [0, 0, 0, 0]
            c[m] = s
            out.append(Quaternion(c, QQ))
    for signs in itertools.product((HALF, -HALF), repeat=4):
        out.append(Quaternion(signs, QQ))
    return out


HURWITZ_UNITS = tuple(_hurwitz_units())


def normalize_associate(g: Quaternion) -> Quaternion:
    """Canonical representative of g*U, U the 24 Hurwitz units."""
    return max((g * u for u in HURWITZ_UNITS), key=_rational_coords)


def _xgcd(a: Quaternion, b: Quaternion) -> tuple[Quaternion, Quaternion, Quaternion]:
    """(g, s, t) with a*s + b*t = g generating the right ideal aO + bO."""
    one, zero = Quaternion.one(QQ), Quaternion.zero(QQ)
    # invariant: r0 = a*s0 + b*t0, r1 = a*s1 + b*t1
    r0, s0, t0 = a, one, zero
    r1, s1, t1 = b, zero, one
    while not r1.is_zero():
        q, r = right_divmod(r0, r1)
        r0, s0, t0, r1, s1, t1 = r1, s1, t1, r, s0 - s1 * q, t0 - t1 * q
    return r0, s0, t0


def right_gcd(a: Quaternion, b: Quaternion) -> Quaternion:
    """Generator g of aO + bO, so a and b lie in gO; unit-normalized."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zeros")
    _check_hurwitz(a, b)
    g, _, _ = _xgcd(a, b)
    return normalize_associate(g)


class NotCoprime(ValueError):
    pass


def bezout_cusp_matrix(alpha: Quaternion, c: int) -> QuatMat2:
    """gamma = [[alpha, nu], [c, mu]] in SL_2(Hur) with gamma(inf) = alpha c^-1."""
    c = int(c)
    if c == 0:
        raise ValueError("c must be a nonzero integer")
    _check_hurwitz(alpha)
    cq = Quaternion.scalar(c, QQ)
    g, s, t = _xgcd(alpha, cq)
    if g.nrd() != 1:
        raise NotCoprime(f"{alpha} and {c} are not right-coprime")
    ginv = g.conj()
    mu = s * ginv
    nu = -(t * ginv)
    # keep mu small: mu -> mu - c*q, nu -> nu - alpha*q preserves alpha*mu - c*nu
    q, _ = right_divmod(mu, cq)
    mu = mu - cq * q
    nu = nu - alpha * q
    assert alpha * mu - cq * nu == 1
    return QuatMat2(alpha, nu, cq, mu)


# --- chimney reduction ---------------------------------------------------------------


def in_chimney(p: H5Point, tol: float = 1e-9) -> bool:
    return all(abs(x) <= 0.5 + tol for x in p.q.coords) and p.q.nrd() + p.t * p.t >= 1.0 - tol


@dataclass
class ChimneyPoint:
    p: H5Point
    witness_word: list[tuple[int, int]] = field(default_factory=list)
    t_trace: list[float] = field(default_factory=list)


class ReductionError(RuntimeError):
    def __init__(self, msg: str, trace: list[float]) -> None:
        super().__init__(msg)
        self.trace = trace


# generator indices in generators(hurwitz): 0 = I, 1 = T_1, 2 = T_i, 3 = T_j, 4 = T_xi
INVERSION, T_ONE, T_I, T_J, T_XI = range(5)


def _translation_word(n: tuple[int, int, int, int]) -> list[tuple[int, int]]:
    """Word for translation by n0 + n1 i + n2 j + n3 k, with k = 2 xi - 1 - i - j."""
    n0, n1, n2, n3 = n
    word = []
    for idx, e in ((T_XI, 2 * n3), (T_ONE, n0 - n3), (T_I, n1 - n3), (T_J, n2 - n3)):
        if e:
            word.append((idx, e))
    return word


def reduce_to_chimney(p: H5Point, max_steps: int = 10_000) -> ChimneyPoint:
    """Move p into the chimney by integer translations and the inversion.

    The word lists (generator index, exponent) pairs in application order.
    """
    q = [float(x) for x in p.q.coords]
    t = float(p.t)
    word: list[tuple[int, int]] = []
    trace = [t]
    for _ in range(max_steps):
        shift = tuple(-math.floor(x + 0.5) for x in q)
        if any(shift):
            q = [x + float(s) for x, s in zip(q, shift)]
            word.extend(_translation_word(shift))
        n = sum(x * x for x in q)
        if n + t * t >= 1.0:
            return ChimneyPoint(H5Point(FloatQuaternion(*q), t), word, trace)
        # inversion (q, t) -> (conj(q), t) / (|q|^2 + t^2)
        r = n + t * t
        q = [q[0] / r, -q[1] / r, -q[2] / r, -q[3] / r]
        t = t / r
        word.append((INVERSION, 1))
        trace.append(t)
    raise ReductionError(f"no chimney point after {max_steps} steps", trace)


def apply_word(word: list[tuple[int, int]], p: H5Point, gens: list[QuatMat2] | None = None) -> H5Point:
    """Apply (index, exponent) pairs of Hurwitz generators to p, left to right."""
    if gens is None:
        gens = [g.matrix.to_float() for g in generators(hurwitz_order())]
    for idx, e in word:
        g = gens[idx]
        if idx == INVERSION:
            if e % 2:
                p = poincare_extend(g, p)
            continue
        if g.c.is_zero() and g.a == g.d == FloatQuaternion(1.0):
            # T_b^e = T_{e b}
            g = QuatMat2(g.a, g.b * float(e), g.c, g.d)
            p = poincare_extend(g, p)
        else:
            for _ in range(abs(e)):
                p = poincare_extend(g if e > 0 else _float_inverse(g), p)
    return p


def _float_inverse(g: QuatMat2) -> QuatMat2:
    from .matmob import sl2_inverse

    return sl2_inverse(g)

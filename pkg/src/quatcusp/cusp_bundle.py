"""The cusp at infinity of PSL_2(O) for an order O over a real quadratic field.

The stabilizer of infinity is generated by translations T_b (b pure in O),
the scalar unit matrix D_1 = diag(eps, eps^-1) and the torsion units D_u.
Acting on the pure lattice, D_1 multiplies by eps^2, which gives an integer
monodromy of the 6-torus and the solvable group Z^6 x| Z.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .linalg import charpoly_int, det_int, inverse_rational, matpow_int, matvec, poly_mul, vecmat
from .matmob import (
    H5Point,
    QuatMat2,
    bg_check,
    diagonal,
    dieudonne_det_sq,
    inversion_matrix,
    moebius_apply,
    poincare_extend,
    translation,
)
from .orders import Order, TorsionGroup, ambient_coords, torsion_generators, unit_torsion
from .quadfield import FieldElement, fundamental_unit
from .quatalg import FloatQuaternion, Quaternion, QuaternionPair, galois_twist

ANOSOV_TOL = 1e-9


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GammaGenerators:
    translations: tuple[QuatMat2, ...]
    scalar_units: QuatMat2 | None
    torsion_units: tuple[QuatMat2, ...]
    inversion: QuatMat2 | None
    torsion_order: int = 0

    def all(self) -> list[QuatMat2]:
        out = list(self.translations)
        if self.scalar_units is not None:
            out.append(self.scalar_units)
        out.extend(self.torsion_units)
        if self.inversion is not None:
            out.append(self.inversion)
        return out


def _certify(g: QuatMat2, what: str) -> QuatMat2:
    if dieudonne_det_sq(g) != 1:
        raise CertificationError(f"{what}: det_H^2 != 1")
    if not all(bg_check(g, v) for v in (1, 2, 3)):
        raise CertificationError(f"{what}: BG-conditions fail")
    return g


def gamma_generators(order: Order) -> GammaGenerators:
    """Generators of the modular group of the order, each certified exactly."""
    F = order.field
    one = Quaternion.one(F)
    trans = tuple(_certify(translation(b), f"T_{b}") for b in im_lattice_basis(order).basis)
    scalar = None
    if not F.is_rational:
        eps = fundamental_unit(F)
        scalar = _certify(diagonal(one * eps, one * eps.inverse()), "D_1")
    group = unit_torsion(order)
    # D_u needs sigma(u) in O as well; the icosian ring is not sigma-stable
    stable = TorsionGroup(tuple(u for u in group if u.galois() in order))
    units = torsion_generators(stable)
    tors = tuple(_certify(diagonal(u), f"D_{u}") for u in units)
    inv = _certify(inversion_matrix(one), "I")
    return GammaGenerators(trans, scalar, tors, inv, len(group))


def stabilizer_generators(order: Order) -> GammaGenerators:
    """Generators of the stabilizer of infinity: everything but the inversion."""
    g = gamma_generators(order)
    return GammaGenerators(g.translations, g.scalar_units, g.torsion_units, None, g.torsion_order)


# --- Galois-twisted action -----------------------------------------------------------

PairPoint = Union[QuaternionPair, tuple]


def pair_action(g: QuatMat2, p: PairPoint):
    """(F_g(p1), F_sigma(g)(p2)) on pairs of boundary points or H^5 points."""
    if not g.is_exact:
        raise TypeError("pair_action needs an exact matrix")
    g1 = g.to_float()
    g2 = g.galois().to_float()
    p1, p2 = p
    if isinstance(p1, H5Point):
        return (poincare_extend(g1, p1), poincare_extend(g2, p2))
    return QuaternionPair(moebius_apply(g1, p1), moebius_apply(g2, p2))


def fixes_infinity_pair(g: QuatMat2) -> bool:
    """Exact infinity-branch check: c and sigma(c) vanish."""
    return g.c.is_zero() and g.galois().c.is_zero()


# --- lattice and monodromy -----------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    basis: tuple[Quaternion, ...]
    twisted: tuple[tuple[float, ...], ...]
    condition_number: float

    def coordinates(self, q: Quaternion) -> list[Fraction]:
        return vecmat(ambient_coords(q)[self._width :], self._inv)

    @property
    def _width(self) -> int:
        return 1 if self.basis[0].field.is_rational else 2

    @property
    def _inv(self):
        return _pure_inverse(self.basis)


_INV_CACHE: dict = {}


def _pure_inverse(basis: tuple[Quaternion, ...]):
    key = basis
    if key not in _INV_CACHE:
        w = 1 if basis[0].field.is_rational else 2
        _INV_CACHE[key] = inverse_rational([ambient_coords(b)[w:] for b in basis])
    return _INV_CACHE[key]


def _twist_vector(q: Quaternion) -> tuple[float, ...]:
    first, second = galois_twist(q)
    if q.field.is_rational:
        return first.coords[1:]
    return first.coords[1:] + second.coords[1:]


def im_lattice_basis(order: Order) -> LatticeBasis:
    """Pure sublattice basis with its image under q -> (q, sigma(q)) in R^6."""
    from .orders import pure_sublattice

    basis = tuple(pure_sublattice(order))
    twisted = tuple(_twist_vector(b) for b in basis)
    cond = float(np.linalg.cond(np.array(twisted)))
    if not math.isfinite(cond) or cond > 1e12:
        raise CertificationError("twisted pure lattice is rank deficient")
    return LatticeBasis(basis, twisted, cond)


def multiplication_matrix(lattice: LatticeBasis, x: FieldElement) -> list[list[int]]:
    """Matrix of b -> x b on the lattice; column j holds the coordinates of x b_j."""
    cols = []
    for b in lattice.basis:
        coords = lattice.coordinates(b * x)
        if any(c.denominator != 1 for c in coords):
            raise CertificationError(f"{x} * {b} leaves the lattice")
        cols.append([int(c) for c in coords])
    n = len(cols)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class MonodromyCertificate:
    matrix: list[list[int]]
    charpoly: list[int]
    det: int
    trace_unit: int | None
    anosov: bool
    eigen_moduli: list[float]
    unit: FieldElement | None = None
    ell: int | None = None
    torsion_order: int | None = None


def _cube_root_quadratic(cp: Sequence[int]) -> tuple[int, int] | None:
    """(p, q) with cp = (x^2 + p x + q)^3, if such integers exist."""
    if len(cp) != 7 or cp[0] != 1 or cp[1] % 3:
        return None
    p = cp[1] // 3
    rest = cp[2] - 3 * p * p
    if rest % 3:
        return None
    q = rest // 3
    quad = [1, p, q]
    if poly_mul(poly_mul(quad, quad), quad) != list(cp):
        return None
    return p, q


def _moduli(cp: Sequence[int]) -> list[float]:
    pq = _cube_root_quadratic(cp)
    if pq is not None:
        p, q = pq
        disc = p * p - 4 * q
        if disc > 0:
            # larger root directly, the other from the product q (no cancellation)
            s = math.sqrt(disc)
            big = (-p + math.copysign(s, -p)) / 2 if p else s / 2
            roots = [big, q / big]
        else:
            r = cmath.sqrt(disc)
            roots = [(-p + r) / 2, (-p - r) / 2]
        return sorted(abs(z) for z in roots for _ in range(3))
    return sorted(float(abs(z)) for z in np.roots(np.array(cp, dtype=float)))


def anosov_certificate(m: Sequence[Sequence[int]]) -> MonodromyCertificate:
    """Determinant, characteristic polynomial and hyperbolicity of an integer matrix."""
    m = [[int(x) for x in row] for row in m]
    cp = charpoly_int(m)
    det = det_int(m)
    moduli = _moduli(cp)
    anosov = abs(det) == 1 and all(abs(r - 1.0) > ANOSOV_TOL for r in moduli)
    pq = _cube_root_quadratic(cp)
    trace = -pq[0] if pq is not None else None
    return MonodromyCertificate(m, cp, det, trace, anosov, moduli)


def monodromy(order: Order, ell: int = 1) -> MonodromyCertificate:
    """Integer matrix of b -> eps^(2 ell) b on the pure lattice of the order."""
    F = order.field
    if F.is_rational:
        raise ValueError("monodromy needs a real quadratic field")
    ell = int(ell)
    lattice = im_lattice_basis(order)
    unit = fundamental_unit(F) ** (2 * ell)
    m = multiplication_matrix(lattice, unit)
    cert = anosov_certificate(m)
    tr = unit.trace()
    return MonodromyCertificate(
        cert.matrix,
        cert.charpoly,
        cert.det,
        int(tr),
        cert.anosov,
        cert.eigen_moduli,
        unit,
        ell,
        len(unit_torsion(order)),
    )


def twisted_action_residual(order: Order, ell: int = 1) -> float:
    """Max deviation between (v, w) -> (eps^2l v, sigma(eps^2l) w) and the matrix on R^6."""
    lattice = im_lattice_basis(order)
    unit = fundamental_unit(order.field) ** (2 * ell)
    e1, e2 = unit.embeddings()
    m = monodromy(order, ell).matrix
    B = np.array(lattice.twisted)  # row j = twisted b_j
    half = B.shape[1] // 2
    scale = np.array([e1] * half + [e2] * half)
    lhs = B * scale
    rhs = np.array(m, dtype=float).T @ B
    return float(np.max(np.abs(lhs - rhs)))


# --- the solvable group Z^6 x| Z -----------------------------------------------------


@dataclass(frozen=True)
class SolvElement:
    lattice_part: tuple[int, ...]
    shift: int = 0

    @classmethod
    def identity(cls, dim: int = 6) -> "SolvElement":
        return cls((0,) * dim, 0)


@dataclass
class _Powers:
    m: list[list[int]]
    cache: dict = field(default_factory=dict)

    def __call__(self, e: int) -> list[list[int]]:
        if e not in self.cache:
            self.cache[e] = matpow_int(self.m, e)
        return self.cache[e]


_POWERS: dict = {}


def _power(m: Sequence[Sequence[int]], e: int) -> list[list[int]]:
    key = tuple(tuple(r) for r in m)
    if key not in _POWERS:
        _POWERS[key] = _Powers([list(r) for r in m])
    return _POWERS[key](e)


def solv_mul(g: SolvElement, h: SolvElement, m: Sequence[Sequence[int]]) -> SolvElement:
    """(l1, s1)(l2, s2) = (l1 + M^s1 l2, s1 + s2)."""
    moved = matvec(_power(m, g.shift), h.lattice_part)
    return SolvElement(tuple(x + y for x, y in zip(g.lattice_part, moved)), g.shift + h.shift)


def solv_inverse(g: SolvElement, m: Sequence[Sequence[int]]) -> SolvElement:
    moved = matvec(_power(m, -g.shift), g.lattice_part)
    return SolvElement(tuple(-x for x in moved), -g.shift)


def solv_pow(g: SolvElement, e: int, m: Sequence[Sequence[int]]) -> SolvElement:
    base = g if e >= 0 else solv_inverse(g, m)
    out = SolvElement.identity(len(g.lattice_part))
    for _ in range(abs(e)):
        out = solv_mul(out, base, m)
    return out

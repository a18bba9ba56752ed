"""Z_K-orders in (-1,-1 / K) stored as full-rank Z-lattices.

A quaternion over K = Q(sqrt(n)) has 8 rational coordinates in the ambient
frame (1, theta, i, theta*i, j, theta*j, k, theta*k); over Q only 4.  An
order keeps a Z-basis in that frame, so membership, intersection with the
pure subspace and unit enumeration are integer linear algebra.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .linalg import hnf, integer_kernel, inverse_rational, rank_rational, vecmat
from .quadfield import QQ, FieldElement, FieldMismatch, QuadraticField
from .quatalg import Quaternion, quat

NAMED_ORDERS = ("lipschitz", "hurwitz", "binary_octahedral", "binary_icosahedral")


def ambient_coords(q: Quaternion) -> list[Fraction]:
    if q.field.is_rational:
        return [x.a for x in q.coords]
    out = []
    for x in q.coords:
        out.append(x.a)
        out.append(x.b)
    return out


def from_ambient(v: Sequence, field: QuadraticField) -> Quaternion:
    if field.is_rational:
        return Quaternion([Fraction(x) for x in v], field)
    return Quaternion([FieldElement(v[2 * m], v[2 * m + 1], field) for m in range(4)], field)


def _common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for x in values:
        d = d * x.denominator // math.gcd(d, x.denominator)
    return d


@dataclass(frozen=True)
class RingCertificate:
    ok: bool
    contains_one: bool
    witness: tuple[int, int] | None = None
    witness_product: Quaternion | None = None


class Order:
    """Full-rank Z-lattice in B_K given by an exact Z-basis."""

    def __init__(self, field: QuadraticField, zbasis: Sequence[Quaternion], name: str | None = None) -> None:
        zbasis = tuple(zbasis)
        dim = 4 if field.is_rational else 8
        for q in zbasis:
            if q.field != field:
                raise FieldMismatch(f"basis element over {q.field}, order over {field}")
        if len(zbasis) != dim:
            raise ValueError(f"an order over {field} needs {dim} basis quaternions, got {len(zbasis)}")
        rows = [ambient_coords(q) for q in zbasis]
        if rank_rational(rows) != dim:
            raise ValueError("basis quaternions are linearly dependent over Q")
        self.field = field
        self.zbasis = zbasis
        self.name = name
        self._rows = rows
        self._inv = inverse_rational(rows)

    @property
    def rank(self) -> int:
        return len(self.zbasis)

    def coordinates(self, q: Quaternion) -> list[Fraction]:
        """Rational coordinates of q in the Z-basis."""
        if q.field != self.field:
            raise FieldMismatch(f"{q.field} vs {self.field}")
        return vecmat(ambient_coords(q), self._inv)

    def __contains__(self, q: Quaternion) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(q))

    def element(self, coeffs: Sequence[int]) -> Quaternion:
        v = vecmat(list(coeffs), self._rows)
        return from_ambient(v, self.field)

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        """Exact Gram matrix of Q(u) = |u|^2 + |sigma(u)|^2 (|u|^2 over Q)."""
        n = self.rank
        G = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                x = self.zbasis[i].coords
                y = self.zbasis[j].coords
                dot = sum((a * b for a, b in zip(x, y)), FieldElement(0, 0, self.field))
                val = dot.a if self.field.is_rational else dot.trace()
                G[i][j] = G[j][i] = val
        return G

    def __repr__(self) -> str:
        return f"Order({self.name or 'custom'}, {self.field!r})"


def _tensor_basis(field: QuadraticField, basis: Sequence[Quaternion]) -> list[Quaternion]:
    if field.is_rational:
        return list(basis)
    theta = field.theta
    out = []
    for e in basis:
        out.append(e)
        out.append(e * theta)
    return out


def make_named_order(name: str, field: QuadraticField = QQ) -> Order:
    """Lipschitz, Hurwitz, binary octahedral (n=2) or binary icosahedral (n=5) order."""
    F = field
    one, i, j, k = quat(F, 1), quat(F, 0, 1), quat(F, 0, 0, 1), quat(F, 0, 0, 0, 1)
    half = Fraction(1, 2)
    if name == "lipschitz":
        basis = [one, i, j, k]
    elif name == "hurwitz":
        xi = quat(F, half, half, half, half)
        basis = [one, i, j, xi]
    elif name == "binary_octahedral":
        if F.n != 2:
            raise ValueError("binary_octahedral order needs K = Q(sqrt(2))")
        s = F.theta / 2  # 1/sqrt(2)
        eta = (one + i) * s
        delta = (one + j) * s
        basis = [one, eta, delta, eta * delta]
    elif name == "binary_icosahedral":
        if F.n != 5:
            raise ValueError("binary_icosahedral order needs K = Q(sqrt(5))")
        phi = F.theta
        zeta = quat(F, phi / 2, (phi - 1) / 2, half)
        basis = [one, i, zeta, i * zeta]
    else:
        raise ValueError(f"unknown order {name!r}; expected one of {NAMED_ORDERS}")
    return Order(F, _tensor_basis(F, basis), name=name)


def order_contains(order: Order, q: Quaternion) -> bool:
    return q in order


def verify_ring(order: Order) -> RingCertificate:
    """Check 1 in O and closure of O under products of basis elements."""
    if Quaternion.one(order.field) not in order:
        return RingCertificate(False, False)
    for a, p in enumerate(order.zbasis):
        for b, q in enumerate(order.zbasis):
            prod = p * q
            if prod not in order:
                return RingCertificate(False, True, (a, b), prod)
    return RingCertificate(True, True)


def pure_frame(field: QuadraticField) -> list[str]:
    if field.is_rational:
        return ["i", "j", "k"]
    return ["i", "theta*i", "j", "theta*j", "k", "theta*k"]


def pure_sublattice(order: Order) -> list[Quaternion]:
    """Canonical Z-basis of the trace-zero elements of the order.

    Kernel of the real-part map on Z^rank, then row Hermite normal form in
    the pure frame (i, theta*i, j, theta*j, k, theta*k), positive pivots.
    """
    width = 1 if order.field.is_rational else 2
    real_cols = [row[:width] for row in order._rows]
    den = _common_denominator(x for row in real_cols for x in row)
    A = [[int(x * den) for x in row] for row in real_cols]
    kernel = integer_kernel(A)
    pure_vecs = [vecmat(c, order._rows)[width:] for c in kernel]
    den = _common_denominator(x for v in pure_vecs for x in v)
    H = hnf([[int(x * den) for x in v] for v in pure_vecs])
    basis = []
    for row in H:
        v = [Fraction(0)] * width + [Fraction(x, den) for x in row]
        basis.append(from_ambient(v, order.field))
    return basis


# --- torsion units ------------------------------------------------------------


def short_vectors(gram: Sequence[Sequence[Fraction]], bound: Fraction, margin: float = 1e-6) -> list[tuple[int, ...]]:
    """All nonzero integer x with x^T G x <= bound (Fincke-Pohst).

    Float Cholesky with a safety margin prunes the search; every candidate
    is re-checked exactly against the rational Gram matrix.
    """
    n = len(gram)
    G = np.array([[float(x) for x in row] for row in gram])
    R = np.linalg.cholesky(G).T  # G = R^T R, R upper triangular
    diag = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]  # mu[i][j] = r_ij / r_ii
    C = float(bound) + margin
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def exact_value(v):
        return sum(gram[i][j] * v[i] * v[j] for i in range(n) for j in range(n))

    def search(i: int, remaining: float) -> None:
        center = -sum(mu[i][j] * x[j] for j in range(i + 1, n))
        radius = math.sqrt(max(remaining, 0.0) / diag[i])
        lo = math.ceil(center - radius - 1e-9)
        hi = math.floor(center + radius + 1e-9)
        for xi in range(lo, hi + 1):
            x[i] = xi
            rem = remaining - diag[i] * (xi - center) ** 2
            if rem < -margin:
                continue
            if i == 0:
                if any(x):
                    v = tuple(x)
                    if exact_value(v) <= bound:
                        out.append(v)
            else:
                search(i - 1, rem)
        x[i] = 0

    search(n - 1, C)
    out.sort()
    return out


_ELEMENT_ORDER_CAP = 240


def element_order(u: Quaternion) -> int:
    one = Quaternion.one(u.field)
    p = u
    for k in range(1, _ELEMENT_ORDER_CAP + 1):
        if p == one:
            return k
        p = p * u
    raise ValueError("element of infinite (or too large) order")


# census {element order: count} for the exceptional binary polyhedral groups
_POLYHEDRAL = {
    "2T": (24, {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}),
    "2O": (48, {1: 1, 2: 1, 3: 8, 4: 18, 6: 8, 8: 12}),
    "2I": (120, {1: 1, 2: 1, 3: 20, 4: 30, 5: 24, 6: 20, 10: 24}),
}


def _phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def cyclic_census(m: int) -> dict[int, int]:
    return {d: _phi(d) for d in range(1, m + 1) if m % d == 0}


def dicyclic_census(n: int) -> dict[int, int]:
    """Element orders of Q_{4n}: a cyclic C_{2n} plus 2n elements of order 4."""
    census = Counter(cyclic_census(2 * n))
    census[4] += 2 * n
    return dict(census)


@dataclass(frozen=True)
class Classification:
    kind: str  # "C", "Q", "2T", "2O", "2I"
    parameter: int | None = None

    @property
    def label(self) -> str:
        if self.kind == "C":
            return f"C_{self.parameter}"
        if self.kind == "Q":
            return f"Q_{4 * self.parameter}"
        return self.kind

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class TorsionGroup:
    elements: tuple[Quaternion, ...]
    classification: Classification | None = None
    census: dict[int, int] = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, u: Quaternion) -> bool:
        return u in set(self.elements)


class UnrecognizedGroup(ValueError):
    pass


def classify_torsion(group: TorsionGroup | Sequence[Quaternion]) -> Classification:
    """Identify a finite subgroup of H^1 by (|G|, element-order census)."""
    elements = tuple(group.elements if isinstance(group, TorsionGroup) else group)
    elset = set(elements)
    for u in elements:
        for v in elements:
            if u * v not in elset:
                raise UnrecognizedGroup("set is not closed under multiplication")
    size = len(elements)
    census = dict(Counter(element_order(u) for u in elements))
    if census == cyclic_census(size):
        return Classification("C", size)
    if size % 4 == 0 and size >= 8 and census == dicyclic_census(size // 4):
        return Classification("Q", size // 4)
    for name, (order, expected) in _POLYHEDRAL.items():
        if size == order and census == expected:
            return Classification(name)
    raise UnrecognizedGroup(f"order {size} with census {sorted(census.items())}")


def unit_torsion(order: Order) -> TorsionGroup:
    """All u in the order with nrd(u) = 1, sorted canonically and classified."""
    cached = order.__dict__.get("_torsion")
    if cached is not None:
        return cached
    bound = Fraction(1) if order.field.is_rational else Fraction(2)
    one = FieldElement(1, 0, order.field)
    units = []
    for coeffs in short_vectors(order.gram, bound):
        u = order.element(coeffs)
        if u.nrd() == one:
            units.append(u)
    units.sort(key=lambda q: q.sort_key())
    group = TorsionGroup(tuple(units))
    cls = classify_torsion(group)
    census = dict(sorted(Counter(element_order(u) for u in units).items()))
    result = TorsionGroup(tuple(units), cls, census)
    order.__dict__["_torsion"] = result
    return result


def generate_subgroup(gens: Iterable[Quaternion]) -> set[Quaternion]:
    gens = list(gens)
    if not gens:
        return set()
    one = Quaternion.one(gens[0].field)
    group = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return group


def torsion_generators(group: TorsionGroup) -> list[Quaternion]:
    """Greedy small generating set, scanning elements by decreasing order."""
    ranked = sorted(group.elements, key=lambda u: (-element_order(u), u.sort_key()))
    gens: list[Quaternion] = []
    span: set[Quaternion] = set()
    for u in ranked:
        if len(span) == len(group.elements):
            break
        if u not in span:
            gens.append(u)
            span = generate_subgroup(gens)
    return gens


def order_from_dict(data: dict) -> Order:
    """Build a custom order from ``{"n": int, "name": str, "basis": [[...4 strings], ...]}``."""
    from .serialize import parse_quaternion

    if "n" not in data or "basis" not in data:
        raise ValueError('order description needs "n" and "basis"')
    field = QuadraticField(int(data["n"]))
    basis = [parse_quaternion(q, field) for q in data["basis"]]
    return Order(field, basis, name=data.get("name"))


def load_order_file(path: str) -> Order:
    """Read a TOML or JSON order description."""
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    else:
        import json

        with open(path) as fh:
            data = json.load(fh)
    return order_from_dict(data)

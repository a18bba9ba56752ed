"""Command-line front end. Every subcommand prints one JSON envelope:

    {"schema": ..., "command": ..., "status": "ok"|"error", "payload": ..., "diagnostics": [...]}

Exact numbers are strings; floats only appear in geometric fields.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import cusp_bundle as cb
from . import hurwitz_euclid as he
from . import matmob as mm
from .orders import (
    NAMED_ORDERS,
    Order,
    load_order_file,
    make_named_order,
    pure_sublattice,
    torsion_generators,
    unit_torsion,
    verify_ring,
)
from .quadfield import QuadraticField, fundamental_unit
from .serialize import (
    format_field_element,
    format_float_quaternion,
    format_matrix,
    format_point,
    format_quaternion,
    parse_float_quaternion,
    parse_matrix,
    parse_point,
    parse_quaternion,
)

SCHEMA = "quatcusp-cli/1"


@dataclass
class CommandResult:
    status: str
    payload: Any
    diagnostics: list[str] = field(default_factory=list)
    command: str = ""

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        }
        return json.dumps(doc, ensure_ascii=False)


class InputError(ValueError):
    pass


# --- input helpers ---------------------------------------------------------------


def _load_json(text: str) -> Any:
    """Inline JSON, or ``@path`` / an existing path to a JSON file."""
    path = text[1:] if text.startswith("@") else text
    if text.startswith("@") or (os.path.exists(path) and not text.lstrip().startswith(("[", "{"))):
        with open(path) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} at position {exc.pos}") from None


def _field(n: int) -> QuadraticField:
    try:
        return QuadraticField(n)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _order(ref: str, n: int) -> Order:
    if ref in NAMED_ORDERS:
        try:
            return make_named_order(ref, _field(n))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if os.path.exists(ref):
        return load_order_file(ref)
    raise InputError(f"unknown order {ref!r}; use one of {', '.join(NAMED_ORDERS)} or a .toml/.json file")


def _matrix(text: str, n: int):
    data = _load_json(text)
    try:
        return parse_matrix(data, _field(n))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad matrix: {exc}") from None


def _fmt_fe(x) -> str:
    return format_field_element(x)


# --- subcommands ------------------------------------------------------------------


def cmd_field(args, diag: list[str]) -> dict:
    F = _field(args.n)
    if F.is_rational:
        diag.append("n = 1 is the rational field; no fundamental unit")
        return {"n": 1, "field": "Q"}
    eps = fundamental_unit(F)
    return {
        "n": F.n,
        "theta": "(1+sqrt(%d))/2" % F.n if F.theta_is_half else "sqrt(%d)" % F.n,
        "fundamental_unit": _fmt_fe(eps),
        "fundamental_unit_sqrt": eps.sqrt_str(),
        "norm": str(eps.norm()),
        "trace": str(eps.trace()),
        "embeddings": list(eps.embeddings()),
    }


def cmd_order(args, diag: list[str]) -> dict:
    O = _order(args.order, args.n)
    cert = verify_ring(O)
    if not cert.ok:
        diag.append(f"not a ring: product of basis elements {cert.witness} leaves the lattice")
    return {
        "name": O.name,
        "n": O.field.n,
        "basis": [format_quaternion(q) for q in O.zbasis],
        "is_ring": cert.ok,
        "contains_one": cert.contains_one,
        "pure_basis": [format_quaternion(q) for q in pure_sublattice(O)],
    }


def cmd_units(args, diag: list[str]) -> dict:
    O = _order(args.order, args.n)
    G = unit_torsion(O)
    payload = {
        "count": len(G),
        "class": G.classification.label if G.classification else None,
        "census": {str(k): v for k, v in G.census.items()},
        "generators": [format_quaternion(u) for u in torsion_generators(G)],
    }
    if args.list:
        payload["elements"] = [format_quaternion(u) for u in G]
    return payload


def cmd_bg(args, diag: list[str]) -> dict:
    g = _matrix(args.matrix, args.n)
    variants = [args.variant] if args.variant else [1, 2, 3]
    out = {str(v): mm.bg_check(g, v, args.tolerance) for v in variants}
    return {"exact": g.is_exact, "variants": out, "residual": mm.bg_residual(g)}


def cmd_iwasawa(args, diag: list[str]) -> dict:
    g = _matrix(args.matrix, args.n)
    f = mm.iwasawa_decompose(g, args.tolerance)
    return {
        "lambda": f.lam,
        "omega": format_float_quaternion(f.omega),
        "alpha": format_float_quaternion(f.alpha),
        "beta": format_float_quaternion(f.beta),
        "reassembly_error": f.matrix().max_dist(g),
    }


def cmd_det(args, diag: list[str]) -> dict:
    g = _matrix(args.matrix, args.n)
    d2 = mm.dieudonne_det_sq(g)
    return {
        "det_sq": _fmt_fe(d2) if g.is_exact else d2,
        "det": mm.dieudonne_det(g),
        "unimodular": (d2 == 1) if g.is_exact else abs(d2 - 1.0) <= args.tolerance,
    }


def cmd_inverse(args, diag: list[str]) -> dict:
    g = _matrix(args.matrix, args.n)
    inv = mm.sl2_inverse(g)
    payload: dict = {"inverse": format_matrix(inv)}
    if g.is_exact:
        ident = mm.identity_like(g.a)
        payload["verified"] = (g @ inv) == ident and (inv @ g) == ident
        if args.order:
            O = _order(args.order, args.n)
            payload["entries_in_order"] = all(e in O for e in inv.entries)
    return payload


def _point_arg(text: str):
    if text.strip() in ("inf", "infinity"):
        return mm.INFINITY
    data = _load_json(text)
    if isinstance(data, dict):
        return parse_point(data)
    return parse_float_quaternion(data)


def cmd_act(args, diag: list[str]) -> dict:
    g = _matrix(args.matrix, args.n)
    p = _point_arg(args.point)
    if isinstance(p, mm.H5Point):
        if args.pair:
            raise InputError("--pair takes boundary points only")
        return {"image": format_point(mm.poincare_extend(g, p))}
    if args.pair:
        if not g.is_exact:
            raise InputError("--pair needs an exact matrix")
        img = cb.pair_action(g, (p, p if args.point2 is None else _point_arg(args.point2)))
        return {"image": [format_float_quaternion(img.first), format_float_quaternion(img.second)]}
    return {"image": format_float_quaternion(mm.moebius_apply(g, p))}


def cmd_reduce(args, diag: list[str]) -> dict:
    p = parse_point(_load_json(args.point))
    r = he.reduce_to_chimney(p, args.max_steps)
    check = he.apply_word(r.witness_word, p)
    err = max((check.q - r.p.q).abs(), abs(check.t - r.p.t))
    return {
        "point": format_point(r.p),
        "word": [list(w) for w in r.witness_word],
        "generators": [g.name for g in mm.generators(he.hurwitz_order())],
        "in_chimney": he.in_chimney(r.p, args.tolerance),
        "witness_error": err,
    }


def cmd_cusp(args, diag: list[str]) -> dict:
    F = _field(1)
    try:
        alpha = parse_quaternion(_load_json(args.alpha), F)
    except ValueError as exc:
        raise InputError(f"bad alpha: {exc}") from None
    g = he.bezout_cusp_matrix(alpha, args.c)
    img = mm.moebius_apply(g, mm.INFINITY)
    target = (alpha * parse_quaternion([str(args.c), 0, 0, 0], F).inverse()).to_float()
    H = he.hurwitz_order()
    return {
        "gamma": format_matrix(g),
        "det_sq_is_one": mm.dieudonne_det_sq(g) == 1,
        "entries_in_order": all(e in H for e in g.entries),
        "image_of_infinity": format_float_quaternion(img),
        "image_matches": (img - target).abs() <= args.tolerance,
    }


def cmd_monodromy(args, diag: list[str]) -> dict:
    O = _order(args.order, args.n)
    c = cb.monodromy(O, args.ell)
    eps = fundamental_unit(O.field)
    return {
        "matrix": c.matrix,
        "charpoly": c.charpoly,
        "det": c.det,
        "anosov": c.anosov,
        "eigen_moduli": c.eigen_moduli,
        "fundamental_unit": _fmt_fe(eps),
        "trace_eps_sq": str(c.trace_unit),
        "ell": c.ell,
        "torsion_order": c.torsion_order,
    }


def cmd_solv(args, diag: list[str]) -> dict:
    O = _order(args.order, args.n)
    m = cb.monodromy(O, 1).matrix
    dim = len(m)
    if args.g is not None:
        g = _solv_arg(args.g, dim)
        h = _solv_arg(args.h, dim) if args.h is not None else cb.SolvElement.identity(dim)
        prod = cb.solv_mul(g, h, m)
        return {"product": [list(prod.lattice_part), prod.shift], "monodromy": m}
    rng = random.Random(args.seed)
    ok = True
    for _ in range(args.samples):
        a, b, c = (_random_solv(rng, dim) for _ in range(3))
        e = cb.SolvElement.identity(dim)
        ok &= cb.solv_mul(cb.solv_mul(a, b, m), c, m) == cb.solv_mul(a, cb.solv_mul(b, c, m), m)
        ok &= cb.solv_mul(a, e, m) == a == cb.solv_mul(e, a, m)
        ok &= cb.solv_mul(a, cb.solv_inverse(a, m), m) == e
    return {"samples": args.samples, "seed": args.seed, "axioms_hold": bool(ok), "monodromy": m}


def _solv_arg(text: str, dim: int) -> cb.SolvElement:
    data = _load_json(text)
    try:
        lat, shift = data
        lat = tuple(int(x) for x in lat)
        if len(lat) != dim:
            raise ValueError
        return cb.SolvElement(lat, int(shift))
    except (ValueError, TypeError):
        raise InputError(f"solvable element must be [[{dim} integers], shift]") from None


def _random_solv(rng: random.Random, dim: int) -> cb.SolvElement:
    return cb.SolvElement(tuple(rng.randint(-5, 5) for _ in range(dim)), rng.randint(-3, 3))


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the flags without defaults so they don't mask earlier values
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--json", action="store_true", default=d(True), help="JSON output (default)")
        g.add_argument("--tolerance", type=float, default=d(1e-9), help="tolerance for geometric checks")
        g.add_argument("--seed", type=int, default=d(0), help="seed for randomized commands")
        return g

    common = global_flags(True)
    p = argparse.ArgumentParser(prog="quatcusp", description=__doc__.splitlines()[0], parents=[global_flags(False)])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    sp = add("field", cmd_field, "fundamental unit of Q(sqrt n)")
    sp.add_argument("--n", type=int, required=True)

    for name, fn, hlp in (("order", cmd_order, "basis and ring check of an order"), ("units", cmd_units, "norm-one unit group")):
        sp = add(name, fn, hlp)
        sp.add_argument("--order", required=True, help="named order or .toml/.json file")
        sp.add_argument("--n", type=int, default=1)
        if name == "units":
            sp.add_argument("--list", action="store_true", help="list every unit")

    for name, fn, hlp in (
        ("bg", cmd_bg, "BG-conditions"),
        ("iwasawa", cmd_iwasawa, "Iwasawa decomposition"),
        ("det", cmd_det, "Dieudonne determinant"),
        ("inverse", cmd_inverse, "inverse of a det 1 matrix"),
        ("act", cmd_act, "Moebius action or Poincare extension"),
    ):
        sp = add(name, fn, hlp)
        sp.add_argument("--matrix", required=True, help="2x2 JSON array of quaternions, or @file")
        sp.add_argument("--n", type=int, default=1, help="field for exact (string) entries")
        if name == "bg":
            sp.add_argument("--variant", type=int, choices=(1, 2, 3))
        if name == "inverse":
            sp.add_argument("--order", help="check inverse entries against this order")
        if name == "act":
            sp.add_argument("--point", required=True, help='quaternion, "inf" or {"q": [...], "t": t}')
            sp.add_argument("--pair", action="store_true", help="act by (g, sigma(g)) on a point pair")
            sp.add_argument("--point2", help="second boundary point for --pair")

    sp = add("reduce", cmd_reduce, "reduce an H^5 point into the chimney")
    sp.add_argument("--point", required=True)
    sp.add_argument("--max-steps", type=int, default=10_000)

    sp = add("cusp", cmd_cusp, "matrix sending infinity to alpha c^-1")
    sp.add_argument("--alpha", required=True, help="Hurwitz integer as a JSON 4-array")
    sp.add_argument("--c", type=int, required=True)

    sp = add("monodromy", cmd_monodromy, "monodromy of the cusp torus bundle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", required=True)
    sp.add_argument("--ell", type=int, default=1)

    sp = add("solv", cmd_solv, "the solvable group Z^6 x| Z")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", default="lipschitz")
    sp.add_argument("--g", help="[[lattice part], shift]")
    sp.add_argument("--h", help="[[lattice part], shift]")
    sp.add_argument("--samples", type=int, default=100)
    return p


def run(argv: Sequence[str] | None = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if not exc.code:
            raise
        return CommandResult("error", None, [f"usage error (argparse exit {exc.code})"], "")
    diag: list[str] = []
    try:
        payload = args.func(args, diag)
    except (InputError, ValueError, ZeroDivisionError, ArithmeticError, RuntimeError, OSError) as exc:
        return CommandResult("error", None, diag + [f"{type(exc).__name__}: {exc}"], args.command)
    return CommandResult("ok", payload, diag, args.command)


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    print(result.to_json())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

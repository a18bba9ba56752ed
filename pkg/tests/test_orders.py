import itertools
import json
import time
from fractions import Fraction

import pytest

from oracles import hurwitz_units_brute
from quatcusp.orders import (
    Order,
    classify_torsion,
    cyclic_census,
    dicyclic_census,
    element_order,
    generate_subgroup,
    load_order_file,
    make_named_order,
    order_contains,
    order_from_dict,
    pure_sublattice,
    torsion_generators,
    unit_torsion,
    verify_ring,
    UnrecognizedGroup,
)
from quatcusp.quadfield import QQ, QuadraticField
from quatcusp.quatalg import Quaternion, quat

H = Fraction(1, 2)


def test_hurwitz_units_match_brute_force(hurwitz_q):
    G = unit_torsion(hurwitz_q)
    assert {tuple(x.a for x in u.coords) for u in G} == hurwitz_units_brute()
    assert G.classification.label == "2T"


def test_lipschitz_units(lipschitz_q):
    G = unit_torsion(lipschitz_q)
    assert len(G) == 8 and G.classification.label == "Q_8"


def _box_units(order, coord_values):
    """Brute-force units: every coordinate from a finite candidate list."""
    F = order.field
    found = set()
    for c in itertools.product(coord_values, repeat=4):
        q = Quaternion(c, F)
        if q.nrd() == 1 and q in order:
            found.add(q)
    return found


def test_octahedral_units_brute_force():
    F = QuadraticField(2)
    O = make_named_order("binary_octahedral", F)
    # |x| <= 1 and |sigma x| <= 1 with x in (1/2) Z[sqrt 2] leaves few candidates
    vals = {F.from_sqrt_form(Fraction(a, 2), Fraction(b, 2)) for a in range(-2, 3) for b in range(-1, 2)}
    vals = [v for v in vals if all(abs(e) <= 1 for e in v.embeddings())]
    G = unit_torsion(O)
    assert set(G) == _box_units(O, vals)
    assert len(G) == 48 and G.classification.label == "2O"


def test_icosahedral_units_brute_force():
    F = QuadraticField(5)
    O = make_named_order("binary_icosahedral", F)
    vals = {F(Fraction(a, 2), Fraction(b, 2)) for a in range(-4, 5) for b in range(-2, 3)}
    vals = [v for v in vals if all(abs(e) <= 1 for e in v.embeddings())]
    G = unit_torsion(O)
    assert set(G) == _box_units(O, vals)
    assert len(G) == 120 and G.classification.label == "2I"


@pytest.mark.parametrize("name, n, size, label", [("hurwitz", 13, 24, "2T"), ("lipschitz", 2, 8, "Q_8"), ("hurwitz", 2, 24, "2T")])
def test_tensored_units(name, n, size, label):
    G = unit_torsion(make_named_order(name, QuadraticField(n)))
    assert (len(G), G.classification.label) == (size, label)


@pytest.mark.parametrize("name, n", [("lipschitz", 1), ("hurwitz", 1), ("hurwitz", 2), ("binary_octahedral", 2), ("binary_icosahedral", 5), ("lipschitz", 13)])
def test_named_orders_are_rings(name, n):
    O = make_named_order(name, QuadraticField(n))
    cert = verify_ring(O)
    assert cert.ok and cert.contains_one


def test_verify_ring_reports_witness():
    O = Order(QQ, [quat(QQ, 1), quat(QQ, 0, 1), quat(QQ, 0, 0, 1), quat(QQ, 0, 0, 0, H)])
    cert = verify_ring(O)
    assert not cert.ok and cert.contains_one
    a, b = cert.witness
    assert cert.witness_product == O.zbasis[a] * O.zbasis[b]
    assert cert.witness_product not in O


def test_order_validation():
    with pytest.raises(ValueError):
        Order(QQ, [quat(QQ, 1), quat(QQ, 0, 1), quat(QQ, 1, 1), quat(QQ, 0, 0, 0, 1)])
    with pytest.raises(ValueError):
        make_named_order("binary_octahedral", QuadraticField(3))
    with pytest.raises(ValueError):
        make_named_order("nope")


def test_membership(hurwitz_q):
    assert order_contains(hurwitz_q, quat(QQ, H, H, H, -H))
    assert not order_contains(hurwitz_q, quat(QQ, H, H))
    assert hurwitz_q.coordinates(quat(QQ, 0, 0, 0, 1)) == [-1, -1, -1, 2]


def test_pure_sublattice():
    assert pure_sublattice(make_named_order("hurwitz", QQ)) == [quat(QQ, 0, 1), quat(QQ, 0, 0, 1), quat(QQ, 0, 0, 0, 1)]
    for n in (2, 13):
        F = QuadraticField(n)
        t = F.theta
        expected = [quat(F, 0, 1), quat(F, 0, t), quat(F, 0, 0, 1), quat(F, 0, 0, t), quat(F, 0, 0, 0, 1), quat(F, 0, 0, 0, t)]
        assert pure_sublattice(make_named_order("hurwitz", F)) == expected
        assert pure_sublattice(make_named_order("lipschitz", F)) == expected


def test_pure_sublattice_is_saturated():
    # every pure element among small combinations of the order basis is in span_Z(P)
    F = QuadraticField(2)
    O = make_named_order("binary_octahedral", F)
    P = pure_sublattice(O)
    assert all(q.is_pure() and q in O for q in P)
    span = Order(F, [quat(F, 1), quat(F, F.theta)] + P)
    hits = 0
    for c in itertools.product(range(-1, 2), repeat=8):
        x = O.element(c)
        if x.is_pure():
            hits += 1
            assert x in span
    assert hits > 1


def test_census_tables_from_presentations():
    # 2T from s = xi, t = i; 2O adds (1+i)/sqrt 2; 2I from the icosian zeta
    assert classify_torsion(generate_subgroup([quat(QQ, H, H, H, H), quat(QQ, 0, 1)])).label == "2T"
    F2 = QuadraticField(2)
    s = F2.theta / 2
    G = generate_subgroup([quat(F2, s, s), quat(F2, s, 0, s)])
    assert len(G) == 48 and classify_torsion(G).label == "2O"
    F5 = QuadraticField(5)
    phi = F5.theta
    G = generate_subgroup([quat(F5, phi / 2, (phi - 1) / 2, H), quat(F5, 0, 1)])
    assert len(G) == 120 and classify_torsion(G).label == "2I"


def test_dicyclic_versus_2t():
    # Q_24 and 2T both have 24 elements; the census separates them
    F = QuadraticField(3)
    zeta12 = quat(F, F.theta / 2, H)
    G = generate_subgroup([zeta12, quat(F, 0, 0, 1)])
    assert len(G) == 24 and classify_torsion(G).label == "Q_24"
    C = generate_subgroup([zeta12])
    assert classify_torsion(C).label == "C_12"
    assert cyclic_census(12) == {1: 1, 2: 1, 3: 2, 4: 2, 6: 2, 12: 4}
    assert dicyclic_census(6)[4] == 2 + 12


def test_classify_rejects_non_groups():
    with pytest.raises(UnrecognizedGroup):
        classify_torsion([quat(QQ, 1), quat(QQ, 0, 1)])


def test_element_orders():
    assert element_order(quat(QQ, -1)) == 2
    assert element_order(quat(QQ, H, H, H, H)) == 6
    assert element_order(quat(QQ, -H, H, H, H)) == 3


def test_torsion_generators_generate(hurwitz_q):
    G = unit_torsion(hurwitz_q)
    assert generate_subgroup(torsion_generators(G)) == set(G)


def test_order_files(tmp_path):
    data = {"n": 1, "name": "hurwitz-file", "basis": [["1", 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], ["1/2", "1/2", "1/2", "1/2"]]}
    js = tmp_path / "o.json"
    js.write_text(json.dumps(data))
    toml = tmp_path / "o.toml"
    toml.write_text('n = 1\nname = "hurwitz-file"\nbasis = [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["1/2","1/2","1/2","1/2"]]\n')
    for path in (js, toml):
        O = load_order_file(str(path))
        assert len(unit_torsion(O)) == 24
    with pytest.raises(ValueError):
        order_from_dict({"name": "x"})


def test_torsion_timing():
    start = time.perf_counter()
    unit_torsion(make_named_order("hurwitz", QQ))
    assert time.perf_counter() - start < 5

"""Group construction, the spec grammar, and conjugacy structure."""

import math

import pytest

from hkr.errors import CapExceeded, ParseError
from hkr.groupcore import (
    ConjugacyClass,
    Permutation,
    centralizer,
    conjugacy_classes,
    cyc_group,
    dih_group,
    direct_product,
    make_group,
    named_group,
    q8_group,
    sym_group,
)


def brute_classes(G):
    """Conjugation orbits by direct orbit expansion, no centralizer tricks."""
    seen = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        orbit = {h * g * h.inverse() for h in G.elements}
        seen |= orbit
        out.append(frozenset(orbit))
    return set(out)


def test_permutation_composition_applies_right_factor_first():
    a = Permutation((1, 0, 2))
    b = Permutation((0, 2, 1))
    ab = a * b
    for i in range(3):
        assert ab.images[i] == a.images[b.images[i]]


def test_permutation_inverse_and_power():
    g = Permutation.from_cycles(5, [(0, 1, 2), (3, 4)])
    assert g * g.inverse() == Permutation.identity(5)
    assert g.order() == 6
    for k in range(-6, 7):
        acc = Permutation.identity(5)
        for _ in range(abs(k)):
            acc = acc * (g if k >= 0 else g.inverse())
        assert g**k == acc


def test_cycle_string_round_trip():
    g = Permutation.from_cycles(6, [(0, 3), (1, 4, 5)])
    assert g.cycle_string() == "(0 3)(1 4 5)"
    assert Permutation.identity(4).cycle_string() == "()"


def test_conjugate_by_convention():
    g = Permutation.from_cycles(4, [(0, 1)])
    h = Permutation.from_cycles(4, [(0, 2)])
    assert g.conjugate_by(h) == h * g * h.inverse()


def test_make_group_closure_and_order():
    G = make_group(3, [Permutation((1, 0, 2)), Permutation((1, 2, 0))])
    assert G.order == 6
    for a in G.elements:
        for b in G.elements:
            assert a * b in G
            assert a.inverse() in G


def test_make_group_rejects_degree_mismatch():
    with pytest.raises(ValueError):
        make_group(3, [Permutation((1, 0, 2, 3))])


def test_make_group_order_cap():
    gens = [Permutation.from_cycles(9, [(0, 1)]), Permutation.from_cycles(9, [tuple(range(9))])]
    with pytest.raises(CapExceeded):
        make_group(9, gens, order_cap=1000)


def test_named_constructors_orders():
    assert cyc_group(1).order == 1
    assert cyc_group(12).order == 12
    assert dih_group(1).order == 2
    assert dih_group(7).order == 14
    assert sym_group(4).order == 24
    assert q8_group().order == 8
    assert q8_group().exponent() == 4
    # Q8 has a unique involution, unlike Dih(4) of the same order
    assert sum(1 for g in q8_group() if g.order() == 2) == 1


def test_grammar_accepts_spec_forms():
    cases = {
        "Cyc(6)": 6,
        "Sym(3)": 6,
        "Dih(5)": 10,
        "Q8": 8,
        "Cyc(2)*Cyc(3)": 6,
        "(Cyc(2)*Cyc(2))*Sym(3)": 24,
        "Perm(4; (0 1)(2 3), (0 2))": 8,
        " Cyc( 4 ) * Q8 ": 32,
    }
    for spec, order in cases.items():
        assert named_group(spec).order == order


def test_grammar_rejections_name_the_problem():
    for bad in ("Sim(3)", "Cyc(3", "Cyc(3))", "Perm(3; ())", "Cyc(x)", ""):
        with pytest.raises(ParseError):
            named_group(bad)


def test_named_group_shares_instances():
    assert named_group("Sym(3)") is named_group("Sym( 3 )")


def test_direct_product_structure():
    G = direct_product(cyc_group(2), sym_group(3))
    assert G.order == 12
    assert not G.is_abelian()
    assert G.exponent() == 6
    assert len(conjugacy_classes(G)) == 6


def test_conjugacy_classes_match_brute_force():
    for spec in ("Sym(3)", "Sym(4)", "Dih(4)", "Q8", "Cyc(2)*Dih(4)"):
        G = named_group(spec)
        got = {frozenset(c.members) for c in conjugacy_classes(G)}
        assert got == brute_classes(G)


def test_conjugacy_class_invariants():
    for spec in ("Sym(4)", "Q8", "Dih(6)"):
        G = named_group(spec)
        classes = conjugacy_classes(G)
        assert sum(c.size for c in classes) == G.order
        assert classes[0].representative.is_identity()
        for c in classes:
            assert c.representative == min(c.members)
            assert c.centralizer_order * c.size == G.order
        # canonical order: by size, then least representative
        keys = [(c.size, c.representative) for c in classes]
        assert keys == sorted(keys)


def test_centralizer_against_brute_force():
    G = named_group("Sym(4)")
    for g in list(G.elements)[::5]:
        C = centralizer(G, [g])
        brute = {h for h in G.elements if h * g == g * h}
        assert set(C.elements) == brute
    pair = [G.elements[1], G.elements[5]]
    C = centralizer(G, pair)
    assert set(C.elements) == {
        h for h in G.elements if all(h * g == g * h for g in pair)
    }


def test_exponent_is_lcm_of_orders():
    for spec in ("Sym(4)", "Q8", "Cyc(12)", "Dih(6)"):
        G = named_group(spec)
        assert G.exponent() == math.lcm(*(g.order() for g in G.elements))


def test_abelian_detection():
    assert named_group("Cyc(8)*Cyc(6)").is_abelian()
    assert not named_group("Dih(3)").is_abelian()


def test_class_dataclass_is_hashable():
    c = conjugacy_classes(named_group("Sym(3)"))[0]
    assert isinstance(c, ConjugacyClass)
    assert hash(c) == hash(c)

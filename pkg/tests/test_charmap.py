"""Character tables, the character map, and the power operations.

The table builder has two independent engines (generator bookkeeping for
abelian groups, modular eigenspace splitting otherwise); several tests run
both on the same group and require identical value sets.
"""

import math
from fractions import Fraction
from itertools import permutations

import pytest

from hkr.charmap import (
    MAX_POWER_OP_DEGREE,
    _abelian_rows,
    _charpoly_mod,
    _dft,
    _dixon_rows,
    _find_modular_prime,
    _inverse_dft,
    _root_of_order,
    _uniform_sum_is_zero,
    adams_psi,
    char_matrix_rank,
    character_map,
    character_table,
    galois_fixed_dim,
    irreducible_characters,
    orthogonality_report,
    psi_level,
    total_power,
)
from hkr.commuting import is_p_power_order, rank_prediction
from hkr.errors import CapExceeded, HkrError
from hkr.groupcore import Permutation, conjugacy_classes, named_group, sym_group
from hkr.rings import CyclotomicNumber, zeta


def int_values(chi):
    return tuple(v.rational_value() for v in chi.values)


def test_cyclic_two_table():
    table = character_table(named_group("Cyc(2)"))
    assert table.size == 2
    rows = {tuple(table.value(i, j) for j in range(2)) for i in range(2)}
    one = CyclotomicNumber.from_rational(2, 1)
    assert rows == {(one, one), (one, -one)}


def test_sym3_table_frozen():
    # classes in canonical order: identity, 3-cycles (size 2), transpositions (size 3)
    table = character_table(named_group("Sym(3)"))
    values = [
        [table.value(i, j).rational_value() for j in range(3)] for i in range(3)
    ]
    assert values == [[1, 1, 1], [1, 1, -1], [2, -1, 0]]
    assert [c.size for c in table.classes] == [1, 2, 3]


def test_cyclic_three_values_are_cube_roots():
    table = character_table(named_group("Cyc(3)"))
    w = zeta(3)
    got = {tuple(table.value(i, j) for j in range(3)) for i in range(3)}
    one = CyclotomicNumber.from_rational(3, 1)
    assert got == {
        (one, one, one),
        (one, w, w * w),
        (one, w * w, w),
    }


def test_degree_multisets():
    for spec, degrees in (
        ("Sym(4)", [1, 1, 2, 3, 3]),
        ("Q8", [1, 1, 1, 1, 2]),
        ("Dih(4)", [1, 1, 1, 1, 2]),
        ("Sym(3)*Sym(3)", [1, 1, 1, 1, 2, 2, 2, 2, 4]),
    ):
        table = character_table(named_group(spec))
        assert sorted(table.degrees) == degrees


def test_degree_sum_rule_on_suite():
    for spec in ("Cyc(5)", "Dih(6)", "Sym(4)", "Q8", "Cyc(2)*Q8", "Dih(9)"):
        G = named_group(spec)
        table = character_table(G)
        assert sum(d * d for d in table.degrees) == G.order


def test_abelian_and_dixon_engines_agree():
    for spec in ("Cyc(6)", "Cyc(2)*Cyc(2)", "Cyc(8)", "Cyc(3)*Cyc(3)"):
        G = named_group(spec)
        classes = conjugacy_classes(G)
        m = G.exponent()
        rows_a = _abelian_rows(G, classes, m)
        rows_d = _dixon_rows(G, classes, m)
        canon_a = {tuple(tuple(sorted(t.items())) for t in row) for row in rows_a}
        canon_d = {tuple(tuple(sorted(t.items())) for t in row) for row in rows_d}
        assert canon_a == canon_d


def test_table_rows_are_orthogonal_on_suite():
    for spec in ("Cyc(12)", "Sym(4)", "Q8", "Dih(5)", "Cyc(2)*Sym(3)", "Dih(12)"):
        report = orthogonality_report(character_table(named_group(spec)))
        assert report.ok, report.failures


def test_column_orthogonality_values():
    # Sym(3) values are rational, so sum chi_i(a)*chi_i(b) over rows directly:
    # it equals the centralizer order when a == b and zero otherwise.
    G = named_group("Sym(3)")
    table = character_table(G)
    centralizer_orders = [G.order // c.size for c in table.classes]
    assert centralizer_orders == [6, 3, 2]
    for a in range(3):
        for b in range(3):
            total = sum(
                table.value(i, a).rational_value() * table.value(i, b).rational_value()
                for i in range(3)
            )
            expected = centralizer_orders[a] if a == b else 0
            assert total == expected


def test_uniform_sum_certificate():
    assert _uniform_sum_is_zero([0, 0, 0], 6) is False  # all-zero list, not a root sum
    assert _uniform_sum_is_zero([0, 2, 4], 6) is True  # full set of cube roots
    assert _uniform_sum_is_zero([0, 3, 0, 3], 6) is True  # doubled pair of square roots
    with pytest.raises(HkrError):
        _uniform_sum_is_zero([0, 0, 2], 6)


def test_dft_round_trip_and_naive_agreement():
    m = 12
    q = _find_modular_prime(m, 50)
    y = _root_of_order(q, m)
    values = [(3 * i * i + 1) % q for i in range(m)]
    fwd = _dft(values, y, q)
    naive = [sum(values[t] * pow(y, s * t, q) for t in range(m)) % q for s in range(m)]
    assert fwd == naive
    assert _inverse_dft(fwd, y, q) == values


def test_charpoly_against_leibniz_expansion():
    def polymul(a, b, q):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
        return out

    def brute_charpoly(M, q):
        # det(xI - M) via permutation expansion over F_q[x], ascending coeffs
        n = len(M)
        poly = [0] * (n + 1)
        for perm in permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = [1]
            for i in range(n):
                if perm[i] == i:
                    term = polymul(term, [-M[i][i] % q, 1], q)
                else:
                    term = polymul(term, [-M[i][perm[i]] % q], q)
            for d, c in enumerate(term):
                poly[d] = (poly[d] + sign * c) % q
        return poly

    q = 101
    mats = [
        [[2]],
        [[1, 2], [3, 4]],
        [[0, 1, 0], [0, 0, 1], [1, 5, 2]],
        [[3, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8], [9, 7, 9, 3]],
    ]
    for M in mats:
        assert _charpoly_mod([row[:] for row in M], q) == brute_charpoly(M, q)


def test_find_modular_prime_properties():
    for m, order in ((6, 24), (12, 100), (4, 8)):
        q = _find_modular_prime(m, order)
        assert q % m == 1
        assert q > 2 * math.isqrt(order) + 1
        assert all(q % d for d in range(2, math.isqrt(q) + 1))


def test_class_function_algebra():
    G = named_group("Sym(3)")
    chis = irreducible_characters(G)
    a, b = chis[1], chis[2]
    assert int_values(a + b) == (3, 0, -1)
    assert int_values(a * b) == (2, -1, 0)
    assert int_values(-a) == (-1, -1, 1)
    assert (a - a).values[0].is_zero()


def test_character_map_frozen_values():
    G = named_group("Sym(3)")
    deg2 = next(c for c in irreducible_characters(G) if c.values[0] == 2)
    at3 = character_map(G, 3, deg2)
    assert at3.conductor == 3
    assert int_values(at3) == (2, -1)
    at2 = character_map(G, 2, deg2)
    assert at2.conductor == 2
    assert int_values(at2) == (2, 0)


def test_character_map_is_a_ring_map():
    for spec, p in (("Sym(3)", 2), ("Q8", 2), ("Dih(6)", 3)):
        G = named_group(spec)
        chis = irreducible_characters(G)
        a, b = chis[0], chis[-1]
        fa, fb = character_map(G, p, a), character_map(G, p, b)
        assert character_map(G, p, a + b) == fa + fb
        assert character_map(G, p, a * b) == fa * fb


def test_character_map_restricts_to_p_power_classes():
    G = named_group("Dih(6)")
    chi = irreducible_characters(G)[-1]
    img = character_map(G, 2, chi)
    for cls in img.classes:
        assert is_p_power_order(cls.representative, 2)
    assert len(img.classes) == rank_prediction(G, 2, 1)


def test_adams_psi_is_power_evaluation():
    for spec in ("Sym(4)", "Q8", "Cyc(6)"):
        G = named_group(spec)
        for chi in irreducible_characters(G):
            for m in (1, 2, 3, 5):
                psi = adams_psi(m, chi)
                for cls in chi.classes:
                    g = cls.representative
                    assert psi.value_at(g) == chi.value_at(g**m)


def test_adams_operations_compose():
    G = named_group("Dih(4)")
    for chi in irreducible_characters(G):
        assert adams_psi(1, chi) == chi
        lhs = adams_psi(2, adams_psi(3, chi))
        assert lhs == adams_psi(6, chi)


def test_char_matrix_rank_frozen():
    assert char_matrix_rank(named_group("Q8"), 2) == 5
    assert char_matrix_rank(named_group("Sym(3)"), 2) == 2
    assert char_matrix_rank(named_group("Sym(3)"), 3) == 2
    assert char_matrix_rank(named_group("Cyc(12)"), 2) == 4


def test_char_matrix_rank_equals_p_power_class_count():
    for spec in ("Sym(4)", "Dih(6)", "Cyc(9)", "Cyc(2)*Q8"):
        G = named_group(spec)
        for p in (2, 3):
            classes = conjugacy_classes(G)
            want = sum(1 for c in classes if is_p_power_order(c.representative, p))
            assert char_matrix_rank(G, p) == want


def test_total_power_p1_is_identity_pairing():
    G = named_group("Sym(3)")
    chi = irreducible_characters(G)[2]
    P = total_power(1, chi)
    # Sym(1) has one class; the row is chi itself
    assert [v for v in P.values] == list(chi.values)


def test_total_power_matches_cycle_formula():
    G = named_group("Sym(3)")
    chi = irreducible_characters(G)[2]
    k = 3
    P = total_power(k, chi)
    sclasses = conjugacy_classes(sym_group(k))
    n = len(chi.classes)
    assert len(P.classes) == len(sclasses) * n
    for si, scls in enumerate(sclasses):
        lens = scls.representative.cycle_lengths()
        for gi, gcls in enumerate(chi.classes):
            assert P.classes[si * n + gi] == (scls, gcls)
            g = gcls.representative
            want = CyclotomicNumber.from_rational(chi.conductor, 1)
            for ell in lens:
                want = want * chi.value_at(g**ell)
            assert P.values[si * n + gi] == want


def test_total_power_degree_cap():
    chi = irreducible_characters(named_group("Cyc(2)"))[0]
    with pytest.raises(CapExceeded):
        total_power(MAX_POWER_OP_DEGREE + 1, chi)


def test_psi_level_equals_adams_on_small_suite():
    for spec in ("Sym(3)", "Q8", "Cyc(6)"):
        G = named_group(spec)
        for chi in irreducible_characters(G):
            for p, k in ((2, 1), (2, 2), (3, 1)):
                assert psi_level(p, k, chi) == adams_psi(p**k, chi)


def test_psi_level_rejects_non_unit_evaluation():
    chi = irreducible_characters(named_group("Sym(3)"))[0]
    with pytest.raises(ValueError):
        psi_level(2, 1, chi, j=2)


def test_galois_fixed_dim_equals_rank_prediction():
    for spec, p, k in (
        ("Cyc(4)", 2, 2),
        ("Sym(3)", 2, 1),
        ("Sym(3)", 3, 1),
        ("Q8", 2, 2),
        ("Dih(4)", 2, 2),
        ("Cyc(15)", 5, 1),
    ):
        G = named_group(spec)
        assert galois_fixed_dim(G, p, k) == rank_prediction(G, p, 1)


def test_galois_fixed_dim_level_validation():
    with pytest.raises(HkrError):
        galois_fixed_dim(named_group("Cyc(8)"), 2, 1)  # 2-part of exponent is 8


def test_table_cap():
    with pytest.raises(CapExceeded):
        character_table(named_group("Dih(1024)"))


def test_to_json_shapes():
    table = character_table(named_group("Sym(3)"))
    doc = table.to_json()
    assert doc["conductor"] == 6
    assert len(doc["irreducibles"]) == 3
    assert [c["size"] for c in doc["classes"]] == [1, 2, 3]
    chi = table.irreducible(2)
    cdoc = chi.to_json()
    assert len(cdoc["values"]) == 3

import json

import numpy as np
import pytest

from apnwb import constructions as C
from apnwb import errors
from apnwb.gf2n import get_field, is_cube
from apnwb.vbf import algebraic_degree, is_apn, vbf_from_terms

from conftest import cubes, noncubes, outside_half
from oracles import mulmod, powmod


def omega(F):
    return F.z(F.order // 3)


def tr_half(F, v):
    return v ^ powmod(v, F.q, F.modulus, F.n) if v else 0


def naive_fs(F, s, a, b, c, x):
    """f_s(x) evaluated with shift-and-add arithmetic."""
    f, n = F.modulus, F.n
    t1 = tr_half(F, mulmod(int(b), powmod(x, 3, f, n), f, n))
    t2 = tr_half(F, mulmod(int(c), powmod(x, (1 << s) + 1, f, n), f, n))
    aq = powmod(int(a), F.q, f, n)
    return mulmod(int(a), t1, f, n) ^ mulmod(aq, t2, f, n)


def test_fs_matches_naive_evaluation(F10, rng):
    z = F10.primitive
    f = C.build_fs(F10, 3, z, z, z ** 3)
    for x in rng.integers(0, F10.size, 1000):
        assert f.table[x] == naive_fs(F10, 3, z, z, z ** 3, int(x))


def test_trace_composed_reproduces_fs(F10):
    z = F10.primitive
    a, b, c = z ** 7, z, z ** 40
    f = C.build_trace_composed(F10, [(b, 3)], [(c, 9)], a)
    assert f == C.build_fs(F10, 3, a, b, c)


@pytest.mark.parametrize("s", [1, 3, 7])
def test_trace_composed_equals_quadrinomial(F10, s):
    w = omega(F10)
    q = F10.q
    f = C.build_trace_composed(F10, [(w * w, 3)], [(w * w, (1 << s) + 1)], w)
    quad = vbf_from_terms(F10, [(F10.one, 3), (w, (1 << s) + 1), (w * w, 3 * q),
                                (F10.one, ((1 << s) + 1) * q % F10.order)])
    assert f == quad


def test_single_trace_is_never_apn(F6, rng):
    for _ in range(10):
        a = outside_half(F6)[int(rng.integers(56))]
        b = F6(int(rng.integers(1, 64)))
        f = C.build_trace_composed(F6, [(b, 3), (b * b, 5)], [], a)
        assert len(set(f.table.tolist())) <= F6.q
        assert not is_apn(f)


def test_trace_composed_errors(F6):
    with pytest.raises(errors.DegenerateA):
        C.build_trace_composed(F6, [(F6.one, 3)], [], F6.one)
    with pytest.raises(errors.NonzeroConstant):
        C.build_trace_composed(F6, [(F6.one, 0)], [], F6.primitive)
    with pytest.raises(errors.OddExtension):
        F5 = get_field(5)
        C.build_trace_composed(F5, [(F5.one, 3)], [], F5.primitive)


def test_fs_errors(F6, F10):
    z = F10.primitive
    with pytest.raises(errors.OddnessViolation):
        C.build_fs(F10, 2, z, z, z)
    with pytest.raises(errors.ZeroInput):
        C.build_fs(F10, 3, z, F10.zero, z)
    with pytest.raises(errors.DegenerateA):
        C.build_fs(F10, 3, F10.one, z, z)
    with pytest.raises(errors.OddExtension):
        F8 = get_field(8)
        C.build_fs(F8, 3, F8.primitive, F8.primitive, F8.primitive)


def test_f15_instance_is_apn(F10):
    z = F10.primitive
    assert not is_cube(z)
    assert is_apn(C.build_fs(F10, 3, z, z, z ** 3))


def test_item_vii_instance(F10, rng):
    z = F10.primitive
    hits = 0
    for _ in range(20):
        b, c = (F10(int(v)) for v in rng.integers(1, F10.size, 2))
        rep = C.check_theorem31_item(F10, "vii", 9, z, b, c)
        if rep.satisfied:
            hits += 1
            assert is_apn(C.build_fs(F10, 9, z, b, c))
    assert hits > 0


def test_checker_reports_cube_b(F6):
    b = cubes(F6)[3]
    rep = C.check_theorem31_item(F6, "iii", 3, F6.primitive, b, b ** 3)
    assert not rep.satisfied
    assert "b is a cube" in rep.witness


def test_checker_examples(F10):
    w = omega(F10)
    assert C.check_theorem31_item(F10, "i", 3, w, w * w, w * w).satisfied
    b = noncubes(F10)[0]
    assert C.check_theorem31_item(F10, "iii", 3, F10.primitive, b, b ** 3).satisfied
    rep = C.check_theorem31_item(F10, "iii", 5, F10.primitive, b, b ** 3)
    assert not rep.satisfied and "exponent" in rep.witness


def test_zero_ratio_is_unsatisfied(F10):
    rep = C.check_theorem31_item(F10, "i", 3, F10.primitive, F10.primitive, F10.zero)
    assert not rep.satisfied and rep.witness


def test_report_needs_witness():
    with pytest.raises(ValueError):
        C.ConditionReport("i", False)


@pytest.mark.parametrize("item", C.THEOREM_ITEMS)
def test_mask_agrees_with_scalar_checker(F10, item, rng):
    s = C.item_s(F10, item)
    mask = C.theorem31_condition_mask(F10, item, s)
    for b, c in rng.integers(0, F10.size, size=(300, 2)):
        rep = C.check_theorem31_item(F10, item, s, None, F10(int(b)), F10(int(c)))
        assert rep.satisfied == mask[b, c]
    # make sure positives are covered too
    pos = np.argwhere(mask)
    for b, c in pos[rng.choice(len(pos), 20)] if len(pos) else []:
        assert C.check_theorem31_item(F10, item, s, None, F10(int(b)), F10(int(c))).satisfied


def test_item_iv_readings(F10):
    stmt = C.theorem31_condition_mask(F10, "iv", 7, "statement")
    proof = C.theorem31_condition_mask(F10, "iv", 7, "proof")
    assert proof.sum() == 0
    # c = b^(2^2s - 2^s + 1) always meets the statement reading
    b = noncubes(F10)[0]
    e = (1 << 14) - (1 << 7) + 1
    assert e % 3 == 0
    assert stmt[b.bits, (b ** e).bits]
    assert C.check_theorem31_item(F10, "iv", 7, F10.primitive, b, b ** e).satisfied
    assert not C.check_theorem31_item(F10, "iv", 7, F10.primitive, b, b ** e, "proof").satisfied


def test_fs_tables_agree_with_builder(F6):
    a = F6.primitive
    pairs = [(3, 5), (9, 17)]
    tabs = C.fs_tables(F6, 3, [a.bits], pairs)
    for k, (b, c) in enumerate(pairs):
        assert np.array_equal(tabs[0, k], C.build_fs(F6, 3, a, F6(b), F6(c)).table)


def test_hexanomial_contains_f3_shape(F10):
    q, m = F10.q, F10.m
    a, b, e = F10.z(3), F10.z(5), F10.z(77)
    assert not b.in_subfield(m)
    for s in (1, 3):
        h = C.build_hexanomial(F10, m, s, b, F10.zero, F10.one, e, a)
        terms = [(a ** (1 - q) * (b + b ** q), q + 1), (F10.one, (1 << s) + 1),
                 (F10.one, ((1 << s) + 1) * q % F10.order), (e, ((1 << s) * q + 1) % F10.order),
                 (e ** q, (1 << s) + q)]
        assert h == vbf_from_terms(F10, terms).scale(a ** q)


def test_hexanomial_reduces_to_corollary(F10):
    z = F10.primitive
    b = z
    g, e = C.corollary_coefficients(F10, 2, b)
    h = C.build_hexanomial(F10, 1, 2, b, F10.zero, g, e, z)
    assert h == C.build_corollary(F10, 2, z, b)


def test_hexanomial_zero_coefficients(F6):
    f = C.build_hexanomial(F6, 1, 2, F6.zero, F6.zero, F6.zero, F6.zero, F6.primitive)
    assert not f.table.any()


def test_corollary_variants_at_n6(F6):
    for v in (1, 2):
        for b in noncubes(F6):
            assert is_apn(C.build_corollary(F6, v, F6.primitive, b))


def test_corollary_errors(F6):
    with pytest.raises(errors.CubeB):
        C.build_corollary(F6, 1, F6.primitive, F6.one)
    with pytest.raises(errors.DegenerateA):
        C.build_corollary(F6, 1, F6.one, F6.primitive)
    with pytest.raises(ValueError):
        C.build_corollary(F6, 3, F6.primitive, F6.primitive)


def test_corollary_variant2_at_n10(F10):
    z = F10.primitive
    assert is_apn(C.build_corollary(F10, 2, z, z))


def test_example1(F10):
    f = C.example1_instance(F10)
    assert is_apn(f)
    assert is_cube(F10.one)
    rep = C.example1_verify(F10)
    assert rep["apn"] and "fallback_exponents" not in rep
    ks = C.example1_scan(F10)
    assert 369 in ks
    for k in ks[:3]:
        assert is_apn(C.example1_instance(F10, k))


def test_catalog(F10):
    cat = C.catalog_f2_10(F10)
    assert len(cat) == 20
    names = [n for n, _ in cat]
    assert len(set(names)) == 20
    for name, f in cat:
        assert is_apn(f), name
    deg = {n: algebraic_degree(f) for n, f in cat}
    assert deg["Kasami x^57"] == 4
    assert deg["Dobbertin x^339"] == 5
    assert all(d == 2 for n, d in deg.items() if n not in ("Kasami x^57", "Dobbertin x^339"))
    assert not any("nverse" in n for n in names)


def test_catalog_subfield_generator(F10):
    g = C.subfield_generator(F10, 5)
    assert g.in_subfield(5)
    assert all(g ** k != 1 for k in range(1, 31)) and g ** 31 == 1
    smaller = [x for x in range(1, g.bits) if F10(x).in_subfield(5) and F10(x) != 1]
    assert smaller == []  # no element of the subfield below g other than 1


def test_taniguchi_matches_per_x_expression(F10, rng):
    z = F10.primitive
    q = F10.q
    g = C.subfield_generator(F10, 5)
    f = C.build_taniguchi(F10, 1, F10.one, g ** 7, z)
    for xb in rng.integers(0, F10.size, 200):
        x = F10(int(xb))
        L = z ** q * x + z * x ** q
        T = x + x ** q
        want = z * L * T + L ** (4 + 8) + L ** 4 * T ** 2 + g ** 7 * T ** 3
        assert f(x) == want


def test_f4_matches_definition(F10, rng):
    z = F10.primitive
    f = C.build_f4(F10, z)
    for xb in rng.integers(0, F10.size, 200):
        x = F10(int(xb))
        t = (z ** 3 * x ** 9).trace()
        assert f(x) == x ** 3 + (z.inverse() if t else F10.zero)


def test_pm2_u_set(F10):
    U = C.pm2_u_set(F10)
    assert len(U) == 62
    j = (F10.q + 1) // 3
    w = F10.z(j)
    assert set(int(u) for u in U) == {int(w ** i) for i in range(1, 1024) if i % 3}


def test_pm2_search(F10, rng):
    U = C.pm2_u_set(F10)
    bs = [cubes(F10)[int(k)] for k in rng.choice(340, 4, replace=False)]
    us = [U[int(k)] for k in rng.choice(len(U), 3, replace=False)]
    hits = C.search_Pm2(F10, bs, us)
    assert hits
    for h in hits:
        assert h.apn
        assert (h.c ** 4 / h.b) in us


def test_pm2_property_by_enumeration(F10):
    # compare satisfies_pm2 with a literal reading of the implication
    q = F10.q
    b = cubes(F10)[5]
    for c in (F10.z(3), F10.z(100), F10.one):
        ok = True
        w = c ** 4 / b
        for xb in range(2, F10.size):
            x = F10(xb)
            val = w * (x ** q + x ** 4) / (x + x * x)
            if val.in_subfield(5) and is_cube(x + x * x):
                ok = False
                break
        assert C.satisfies_pm2(F10, b, c) == ok


def test_pm2_rejects_noncube_b(F10):
    assert not C.satisfies_pm2(F10, noncubes(F10)[0], F10.one)


def test_params_json_round_trip(F10):
    z = F10.primitive
    f = C.build_fs(F10, 3, z, z, z ** 3)
    text = f.provenance.to_json()
    doc = json.loads(text)
    assert doc["coeffs"]["c"] == "z^3"
    p = C.ConstructionParams.from_json(text)
    assert C.build(p) == f


def test_params_accept_hex(F10):
    doc = {"family": "Fs", "field_n": 10, "coeffs": {"s": 3, "a": "0x2", "b": "z^1", "c": "0x8"}}
    p = C.ConstructionParams.from_dict(doc)
    assert p.coeffs["c"] == F10.z(3)
    assert is_apn(C.build(p))


def test_params_round_trip_every_family(F10):
    for name, f in C.catalog_f2_10(F10):
        p = C.ConstructionParams.from_json(f.provenance.to_json())
        assert C.build(p) == f, name


def test_params_reject_foreign_elements(F10, F6):
    with pytest.raises(ValueError):
        C.ConstructionParams("Fs", 10, {"a": F6.one})
    with pytest.raises(ValueError):
        C.ConstructionParams("Nope", 10, {})

import numpy as np
import pytest

from apnwb import errors
from apnwb.gf2n import (
    DEFAULT_MODULI,
    Field,
    FieldElement,
    RootCount,
    get_field,
    is_cube,
    is_irreducible,
    polar_decompose,
    solve_affine_p2,
    trace_rel,
    williams_classify,
)

from conftest import cubes, noncubes
from oracles import conway_masks, mulmod, powmod


def test_shipped_moduli_are_conway_polynomials():
    assert DEFAULT_MODULI == conway_masks(20)


def test_known_moduli():
    assert DEFAULT_MODULI[2] == 0b111
    assert DEFAULT_MODULI[10] == 0x46F  # x^10+x^6+x^5+x^3+x^2+x+1


@pytest.mark.parametrize("n", range(2, 21))
def test_primitive_element_is_x(n):
    assert get_field(n).gen == 2


def test_gf4_arithmetic():
    F = get_field(2)
    w = F.primitive
    assert w * w == w + 1
    assert w ** 3 == 1
    assert w.trace() == 1
    assert solve_affine_p2(F.one, F.one) == {w, w * w}


@pytest.mark.parametrize("n", [3, 6, 8])
def test_mul_matches_shift_and_add(n):
    F = get_field(n)
    xs = F.elements()
    grid = F.mul(xs[:, None], xs[None, :])
    for a in range(F.size):
        for b in range(0, F.size, 7):
            assert grid[a, b] == mulmod(a, b, F.modulus, n)


def test_tables_at_large_n():
    F = get_field(20)
    rng = np.random.default_rng(3)
    for a, b in rng.integers(1, F.size, size=(50, 2)):
        assert int(F.mul(a, b)) == mulmod(int(a), int(b), F.modulus, 20)
    assert F.exp_table[F.order] == 1


def test_pow_and_inverse(F6):
    for x in range(1, F6.size):
        for e in (0, 1, 5, 63, 64, 200, 2 ** 70 + 3):
            assert int(F6.pow(x, e)) == powmod(x, e, F6.modulus, 6)
        assert int(F6.mul(x, F6.inv(x))) == 1
    with pytest.raises(errors.DivisionByZero):
        F6.inv(0)
    with pytest.raises(ZeroDivisionError):
        F6.zero.inverse()


def test_negative_powers(F6):
    z = F6.primitive
    assert z ** -1 * z == 1
    assert z ** -5 == (z ** 5).inverse()


def test_width_and_modulus_validation():
    with pytest.raises(errors.UnsupportedWidth):
        Field(1)
    with pytest.raises(errors.UnsupportedWidth):
        Field(21)
    with pytest.raises(errors.UnsupportedWidth):
        Field(4, 0b111)
    with pytest.raises(errors.ReducibleModulus):
        Field(4, 0b10101)  # (x^2+x+1)^2


def test_custom_modulus():
    F = Field(4, 0b11001)  # x^4+x^3+1
    assert is_irreducible(0b11001)
    assert F.gen == 2
    G = get_field(4)
    assert F != G
    with pytest.raises(errors.FieldMismatch):
        F.one + G.one


def test_element_ints_and_str(F10):
    z = F10.primitive
    assert z + 1 == F10(3)
    assert str(F10.z(369)) == "z^369"
    assert str(F10.zero) == "0"
    assert repr(F10(5)) == "GF(2^10)(0x5)"
    with pytest.raises(ValueError):
        F10(1 << 10)


def test_trace_values(F6):
    # absolute trace by definition
    for x in range(F6.size):
        acc, y = 0, x
        for _ in range(6):
            acc ^= y
            y = mulmod(y, y, F6.modulus, 6)
        assert acc in (0, 1)
        assert F6.trace_table[x] == acc


def test_relative_trace_lands_in_subfield(F10):
    xs = F10.elements()
    t = F10.trace_rel(xs, 5)
    assert F10.in_subfield(t, 5).all()
    assert F10.in_subfield(F10.trace_rel(xs, 2), 2).all()
    with pytest.raises(errors.NotADivisor):
        F10.trace_rel(xs, 3)
    assert trace_rel(F10.z(7), 5) == F10.z(7) + F10.z(7) ** 32


def test_cube_classes(F6, F10):
    for F in (F6, F10):
        cube_set = set(int(v) for v in F.pow(F.elements(), 3))
        for x in range(F.size):
            assert is_cube(F(x)) == (x in cube_set)
    # odd n: cubing permutes the field
    F5 = get_field(5)
    assert F5.is_cube(F5.elements()).all()


def test_half_subfield_is_all_cubes(F10):
    for x in range(1, F10.size):
        if F10(x).in_subfield(5):
            assert is_cube(F10(x))


def test_polar_decomposition(F10):
    q = F10.q
    for x in range(1, F10.size):
        u = F10(x)
        v, k = polar_decompose(u)
        assert v * k == u
        assert v ** (q + 1) == 1
        assert k ** (q - 1) == 1
    with pytest.raises(errors.ZeroInput):
        polar_decompose(F10.zero)
    with pytest.raises(errors.OddExtension):
        polar_decompose(get_field(5).one)


def test_solve_affine_p2_matches_enumeration(F6):
    xs = [F6(t) for t in range(F6.size)]
    for a in range(F6.size):
        for b in range(0, F6.size, 5):
            A, B = F6(a), F6(b)
            want = {t for t in xs if t * t + A * t + B == 0}
            assert solve_affine_p2(A, B) == want


def test_williams_matches_root_count(F6, F10):
    for F in (F6, F10):
        cnt = np.bincount(F.pow(F.elements(), 3) ^ F.elements(), minlength=F.size)
        for a in range(1, F.size):
            res = williams_classify(F(a))
            assert res.kind.count == cnt[a]
            if res.kind is not RootCount.ONE_ROOT:
                t1 = res.t1
                assert t1 * t1 + F(a) * t1 + 1 == 0


def test_williams_rejects_zero(F6):
    with pytest.raises(errors.ZeroInput):
        williams_classify(F6.zero)


def test_noncube_helpers(F6):
    assert len(noncubes(F6)) == 42
    assert len(cubes(F6)) == 21


def test_lazy_tables_for_large_fields():
    F = Field(18)
    assert "_exp" not in F.__dict__
    assert int(F.mul(2, 3)) == 6
    assert "_exp" in F.__dict__


def test_frobenius_is_additive(F10, rng):
    a, b = rng.integers(0, F10.size, size=(2, 100))
    for k in (1, 3, 5):
        assert np.array_equal(F10.frob(a ^ b, k), F10.frob(a, k) ^ F10.frob(b, k))
    x = FieldElement(int(a[0]), F10)
    assert x.frob(10) == x
    assert x.conj() == x ** 32

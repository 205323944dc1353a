import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from titsalt import poly as P
from titsalt.fields import (
    QQ,
    AlgFunctionField,
    FieldError,
    FunctionField,
    NumberField,
    clear_denominators,
    discriminant,
    factor_mod_p,
    finite_field,
)
from titsalt.matrix import Matrix

K = NumberField([1, 0, 1])
GF7 = finite_field(7)
GF9 = finite_field(3, [2, 2, 1])
QX = FunctionField(QQ, "x")
GX = FunctionField(finite_field(5), "x")
KX = FunctionField(K, "x")
ALG = AlgFunctionField(QX, (QX.parse("-x"), QX.zero, QX.one), "b")

small = st.integers(-6, 6)


def rat():
    return st.builds(lambda a, b: mpq(a, b), small, st.integers(1, 4))


def element(F):
    if F is QQ:
        return rat()
    if F.is_finite:
        return st.integers(0, F.order - 1).map(F.element)
    if F is K:
        return st.lists(rat(), min_size=2, max_size=2).map(lambda c: P.trim(QQ, c))
    if isinstance(F, FunctionField):
        b = element(F.base)
        poly = st.lists(b, max_size=3).map(lambda c: P.trim(F.base, c))
        return st.tuples(poly, poly).map(lambda nd: F.div(F.from_poly(nd[0]), F.from_poly(nd[1]))
                                          if nd[1] else F.from_poly(nd[0]))
    if F is ALG:
        return st.lists(element(QX), min_size=2, max_size=2).map(lambda c: P.trim(QX, c))
    raise TypeError(F)


FIELDS = [QQ, GF7, GF9, K, QX, GX, KX, ALG]


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.describe())
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_field_axioms(F, data):
    a, b, c = (data.draw(element(F)) for _ in range(3))
    assert F.eq(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert F.eq(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert F.eq(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    assert F.eq(F.mul(a, b), F.mul(b, a))
    assert F.is_zero(F.sub(a, a))
    if not F.is_zero(a):
        assert F.eq(F.mul(a, F.inv(a)), F.one)
    assert F.eq(F.canonicalize(F.canonicalize(a)), F.canonicalize(a))


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.describe())
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_format_parse_round_trip(F, data):
    a = data.draw(element(F))
    assert F.eq(F.parse(F.format(a)), a)


def test_spec_arithmetic():
    assert QQ.add(mpq(1, 2), mpq(1, 3)) == mpq(5, 6)
    a = K.parse("a")
    assert K.eq(K.mul(a, a), K.from_int(-1))
    assert QX.eq(QX.parse("(x^2-1)/(x-1)"), QX.parse("x+1"))
    assert QX.format(QX.parse("(x^2-1)/(x-1)")) == "x + 1"


def test_division_by_zero():
    for F in FIELDS:
        with pytest.raises((ZeroDivisionError, FieldError)):
            F.inv(F.zero)


def test_function_field_denominator_is_monic():
    e = QX.parse("1/(2*x - 4)")
    num, den = e
    assert den[-1] == 1 and num == (mpq(1, 2),)


def test_reducible_number_field_rejected():
    with pytest.raises(FieldError):
        NumberField([-1, 0, 1])


def test_multivariate_rejected():
    with pytest.raises(FieldError):
        FunctionField(QX, "y")


def test_discriminant_examples():
    assert discriminant([0, 1]) == 1
    assert discriminant([1, 0, 1]) == -4
    assert discriminant([-1, -1, 1]) == 5
    with pytest.raises(ValueError):
        discriminant([1, 0, 2])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5))
def test_discriminant_matches_sympy(coeffs):
    import sympy

    t = sympy.Symbol("t")
    f = coeffs + [1]
    expected = sympy.discriminant(sympy.Poly(list(reversed(f)), t))
    assert discriminant(f) == int(expected)


def test_factor_mod_p_examples():
    assert factor_mod_p([-1, 0, 1], 5) == [(1, 1), (4, 1)]
    assert factor_mod_p([1, 0, 1], 5) == [(2, 1), (3, 1)]
    assert factor_mod_p([1, 0, 1], 3) == [(1, 0, 1)]


def _mulmod(fs, p):
    F = finite_field(p)
    out = (1,)
    for f in fs:
        out = P.mul(F, out, tuple(f))
    return out


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=7), st.sampled_from([2, 3, 5, 7, 13]))
def test_factor_mod_p_properties(coeffs, p):
    import sympy

    f = [c % p for c in coeffs] + [1]
    fs = factor_mod_p(f, p)
    assert _mulmod(fs, p) == P.trim(finite_field(p), f)
    t = sympy.Symbol("t")
    for g in fs:
        assert sympy.Poly(list(reversed(g)), t, modulus=p).is_irreducible
    assert fs == sorted(fs, key=lambda g: (len(g), tuple(reversed(g))))
    expected = sympy.factor_list(sympy.Poly(list(reversed(f)), t, modulus=p))[1]
    assert sorted(len(g) - 1 for g in fs) == sorted(
        sympy.degree(g.as_expr(), t) for g, m in expected for _ in range(m))


def test_factor_over_extension_field():
    F = GF9
    f = P.from_ints(F, [1, 0, 1])  # splits over GF(9)
    fs = P.factor(F, f)
    assert len(fs) == 2 and all(len(g) == 2 for g in fs)
    prod = P.mul(F, fs[0], fs[1])
    assert prod == f


def test_clear_denominators_examples():
    assert clear_denominators([Matrix.parse(QQ, [["0", "1"], ["-1", "0"]])]).mu == 1
    assert clear_denominators([Matrix.parse(QQ, [["1/2", "0"], ["0", "2"]])]).mu == 2
    ring = clear_denominators([Matrix.parse(QX, [["1/(x-1)", "0"], ["0", "1"]])])
    assert ring.mu_str == "x - 1"


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(rat(), min_size=4, max_size=4), min_size=1, max_size=3))
def test_clear_denominators_property(entries):
    mats = [Matrix(QQ, [e[:2], e[2:]]) for e in entries]
    mats = [m for m in mats if m.det() != 0]
    if not mats:
        return
    mu = clear_denominators(mats).mu
    for g in mats + [m.inverse() for m in mats]:
        for e in g.entries():
            assert (e * mu**4).denominator == 1

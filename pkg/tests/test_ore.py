import random

import pytest
import sympy

from divring.errors import InputError
from divring.group_algebra import GroupAlgebra
from divring.groups import FreeAbelian, heisenberg_group, klein_bottle_group
from divring.ore import OreLaurent, gcld, lclm, skew_divide
from divring.scalars import GF, QQ
from divring.tower import PolyZTower, UnsupportedWitness, hf_witness_check

K = klein_bottle_group()
KT = PolyZTower(K, QQ)
Qt = OreLaurent(QQ, [], [], var="t")
TS = sympy.Symbol("t")


def _poly(L, coeffs):
    return L.poly({k: L.below(c) for k, c in coeffs.items()})


def test_commutative_division():
    q, r = skew_divide(_poly(Qt, {2: 1, 0: -1}), _poly(Qt, {1: 1, 0: -1}))
    assert q == _poly(Qt, {1: 1, 0: 1}) and r.is_zero()
    a = _poly(Qt, {3: 2, 1: 1})
    q, r = skew_divide(a, a)
    assert q == _poly(Qt, {0: 1}) and r.is_zero()


def test_klein_skew_division():
    L = KT.levels[2]
    A = KT.levels[1]
    a = A.t()
    t2 = L.poly({2: A.one})
    at = L.poly({1: a})
    q, r = skew_divide(t2, at)
    assert q == L.poly({1: a}) and r.is_zero()


def test_common_denominator():
    a, b = _poly(Qt, {1: 1, 0: -1}), _poly(Qt, {1: 1, 0: 1})
    s, s2 = lclm(a, b)
    assert s * a == s2 * b
    assert (s * a).degree() - (s * a).low() == 2
    s, s2 = lclm(a, a)
    assert s * a == s2 * a and (s * a).degree() == 1
    one = _poly(Qt, {0: 1})
    s, s2 = lclm(one, a)
    assert (s * one).degree() == 1


def test_gcld_is_common_left_divisor():
    x = _poly(Qt, {1: 1, 0: -1})
    a = x * _poly(Qt, {1: 1, 0: 2})
    b = x * _poly(Qt, {2: 1, 0: 5})
    assert gcld(a, b) == x


def test_simple_inverses():
    x = Qt.t() - Qt.one
    y = Qt.inv(x)
    assert y.den == x.num and y.num == Qt.one.num
    assert Qt.inv(Qt.one) == Qt.one


def test_klein_tower_inverse():
    a, b = (KT.monomial(g) for g in K.gens())
    assert KT.top.inv(a * b) == a * KT.top.inv(b)
    assert (a * b) * (a * KT.top.inv(b)) == KT.top.one


@pytest.mark.parametrize("G", [FreeAbelian(1), FreeAbelian(2), K, heisenberg_group()], ids=repr)
def test_relators_map_to_one(G):
    T = PolyZTower(G, QQ)
    for r in G.relators():
        assert T.monomial(G.normal_form(r)) == T.top.one


def _towers():
    return [("Q(t)", PolyZTower(FreeAbelian(1, ["t"]), QQ)), ("Z2", PolyZTower(FreeAbelian(2), QQ)),
            ("Klein", KT), ("Klein/F3", PolyZTower(K, GF(3)))]


def _element(T, rng):
    x = T.embed(T.algebra.random_element(rng, 2, 1))
    y = T.embed(T.algebra.random_element(rng, 2, 1))
    return x if T.top.is_zero(y) or rng.random() < 0.5 else x * T.top.inv(y)


@pytest.mark.parametrize("name,T", _towers(), ids=[n for n, _ in _towers()])
def test_field_axioms(name, T):
    R = T.top
    rng = random.Random(5)
    for _ in range(500):
        x, y, z = (_element(T, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z
        assert x + (-x) == R.zero
        if not R.is_zero(x):
            assert x * R.inv(x) == R.one == R.inv(x) * x


@pytest.mark.parametrize("name,T", _towers(), ids=[n for n, _ in _towers()])
def test_skew_relation(name, T):
    rng = random.Random(6)
    for j in range(1, len(T.levels)):
        L = T.levels[j]
        for _ in range(30):
            d = _lower(T, j - 1, rng)
            assert L.t() * L.constant(d) == L.constant(L.sigma(d)) * L.t()


def _lower(T, j, rng):
    # a random element of level j built from monomials in its generators
    L = T.levels[j]
    if j == 0:
        return L(rng.randint(-3, 3))
    x = L.zero
    for _ in range(2):
        x = x + L.monomial(_lower(T, j - 1, rng), rng.randint(-2, 2))
    return x if L.is_zero(x) or rng.random() < 0.5 else L.inv(x)


def test_canonical_fraction_forms():
    L = KT.top
    rng = random.Random(7)
    for _ in range(50):
        x = _element(KT, rng)
        u = L.poly({1: KT.levels[1].t() + KT.levels[1].one, 0: KT.levels[1].one})
        y = L.fraction(u * x.den, u * x.num)
        assert (y.den, y.num) == (x.den, x.num)


def _to_sympy(x):
    def p(sp):
        return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * TS ** k for k, c in sp.c.items())
    return p(x.num) / p(x.den)


def _random_rational(rng):
    def poly():
        return {k: rng.randint(-4, 4) for k in range(rng.randint(0, 3))} or {0: 1}
    num = _poly(Qt, poly())
    den = _poly(Qt, poly())
    if den.is_zero():
        den = _poly(Qt, {0: 1})
    return Qt.from_poly(num) * Qt.inv(Qt.from_poly(den))


def test_commutative_oracle():
    rng = random.Random(8)
    for _ in range(500):
        x, y = _random_rational(rng), _random_rational(rng)
        X, Y = _to_sympy(x), _to_sympy(y)
        assert sympy.cancel(_to_sympy(x + y) - (X + Y)) == 0
        assert sympy.cancel(_to_sympy(x * y) - X * Y) == 0
        if not Qt.is_zero(y):
            assert sympy.cancel(_to_sympy(x * Qt.inv(y)) - X / Y) == 0


def test_sigma_inverse_is_verified():
    A = OreLaurent(QQ, [], [], var="a")
    with pytest.raises(InputError):
        OreLaurent(A, [A.t() * A.t()], [A.t()], var="b")


def test_hf_witness_klein():
    a, b = K.gens()
    rep = hf_witness_check(KT, [a], b, 3, mode="HF")
    assert rep["independent"]
    rep = hf_witness_check(KT, [a, b ** 2], mode="L", transversal=[K.identity(), b])
    assert rep["independent"]
    rep = hf_witness_check(KT, [a], K.identity(), 1, mode="HF")
    assert not rep["independent"]


def test_hf_witness_unsupported():
    a, b = K.gens()
    with pytest.raises(UnsupportedWitness, match="unsupported witness configuration"):
        hf_witness_check(KT, [b], a, 1, mode="HF")


def test_embedding_is_multiplicative():
    A = GroupAlgebra(QQ, K)
    rng = random.Random(9)
    for _ in range(100):
        x, y = A.random_element(rng, 3, 2), A.random_element(rng, 3, 2)
        assert KT.embed(x * y) == KT.embed(x) * KT.embed(y)

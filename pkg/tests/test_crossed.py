import random

import pytest

from divring.crossed import (
    CrossedProduct,
    ExtensionCrossedProduct,
    ZeroDivisorWitness,
    crossed_inverse,
    domain_fuzz,
    klein_extension,
)
from divring.errors import InputError
from divring.scalars import GF, QQ


@pytest.fixture(scope="module")
def klein_q():
    return ExtensionCrossedProduct(klein_extension(), QQ)


def _parts(E):
    ext = E.ext
    a, c = ext.normal.gens()
    (b,) = [ext.pair(ext.normal.identity(), 1)]
    return E.monomial(ext.pair(a, 0)), E.monomial(b), E.monomial(ext.pair(c, 0))


def test_worked_inverse(klein_q):
    E = klein_q
    R = E.ring
    a, b, c = _parts(E)
    x = a + b
    one_minus_c_inv = R.inv(R.one - c)
    closed = R.inv(a) * one_minus_c_inv - one_minus_c_inv * b
    y = crossed_inverse(x)
    assert y == closed
    assert x * y == R.one == y * x


def test_unit_inverse(klein_q):
    R = klein_q.ring
    a, b, c = _parts(klein_q)
    y = crossed_inverse(b)
    assert b * y == R.one == y * b
    assert crossed_inverse(R.one) == R.one


def test_relation_b_squared_is_c(klein_q):
    a, b, c = _parts(klein_q)
    assert b * b == c
    assert b * a * crossed_inverse(b) == crossed_inverse(a)


@pytest.mark.parametrize("field", [QQ, GF(3)], ids=repr)
def test_random_inverses(field):
    E = ExtensionCrossedProduct(klein_extension(), field)
    R = E.ring
    rng = random.Random(12)
    done = 0
    while done < 200:
        x = E.embed(E.algebra.random_element(rng, 3, 2))
        if R.is_zero(x):
            continue
        y = crossed_inverse(x)
        assert x * y == R.one and y * x == R.one
        done += 1


def test_associativity_on_random_triples(klein_q):
    R = klein_q.ring
    rng = random.Random(13)
    for _ in range(100):
        x, y, z = (klein_q.embed(klein_q.algebra.random_element(rng, 2, 1)) for _ in range(3))
        assert (x * y) * z == x * (y * z)


def test_compatibility_square(klein_q):
    rng = random.Random(14)
    for _ in range(100):
        h = klein_q.normal_algebra.random_element(rng, 3, 2)
        assert klein_q.square_commutes(h)


def test_domain_fuzz_f2():
    E = ExtensionCrossedProduct(klein_extension(), GF(2))
    rep = domain_fuzz(E, 200, 3, seed=1)
    assert rep["outcome"] == "no zero divisors found"
    assert rep["seed"] == 1


def test_trivial_quotient_never_finds_zero_divisors():
    R = CrossedProduct(QQ, [[0]], [[]])
    rep = domain_fuzz(R, 50, 1, seed=2, sampler=lambda rng: R.embed(QQ(rng.randint(1, 5))))
    assert rep["outcome"] == "no zero divisors found"


def test_negative_control_z2():
    R = CrossedProduct(QQ, [[0, 1], [1, 0]], [[], []])
    u = R.unit(1)
    x, y = R.one + u, R.one - u
    assert R.is_zero(x * y)
    with pytest.raises(ZeroDivisorWitness) as info:
        crossed_inverse(x)
    w = info.value
    assert R.is_zero(w.left * w.right)
    choices = [x, y]
    rep = domain_fuzz(R, 50, 2, seed=0, sampler=lambda rng: rng.choice(choices))
    assert rep["outcome"] == "zero divisor found"
    assert "counterexample" in rep


def test_bad_cocycle_rejected():
    # the quotient table must be a group table
    with pytest.raises(InputError):
        CrossedProduct(QQ, [[0, 1], [0, 1]], [[], []])

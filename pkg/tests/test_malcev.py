import random

import pytest

from divring.errors import InputError
from divring.group_algebra import GroupAlgebra
from divring.groups import FreeGroup
from divring.malcev import MNRing, MagnusOrder, magnus_degree, magnus_expansion, mn_inverse, mn_rank
from divring.scalars import GF, QQ

F2 = FreeGroup(2, ["x", "y"])
A = GroupAlgebra(QQ, F2)
x, y = F2.gens()
X, Y = A.monomial(x), A.monomial(y)


def test_inverse_of_monomial_is_exact():
    R = MNRing(QQ, F2, 4)
    inv = mn_inverse(R.from_algebra(X))
    assert inv.tail is None and inv.terms == {~x: QQ.one}


def test_geometric_series():
    R = MNRing(QQ, F2, 3)
    inv = mn_inverse(R.from_algebra(1 - X), 3)
    assert inv.terms == {F2.identity(): 1, x: 1, x ** 2: 1, x ** 3: 1}
    assert inv.tail == x ** 4
    neg = mn_inverse(R.from_algebra(X - 1), 3)
    assert neg.terms == {g: -c for g, c in inv.terms.items()}
    prod = R.from_algebra(1 - X) * inv
    assert prod.terms == {F2.identity(): 1}
    assert "O(" in repr(inv)


def test_group_algebra_input_is_rejected():
    with pytest.raises(InputError, match="from_algebra"):
        mn_inverse(1 - X, 3)


def _random_nonzero(rng, field, support=4):
    B = GroupAlgebra(field, F2)
    while True:
        a = B.random_element(rng, support, 2)
        if a.terms:
            return a


@pytest.mark.parametrize("field", [QQ, GF(3)], ids=repr)
def test_inverse_multiplies_back(field):
    rng = random.Random(21)
    for trial in range(100):
        N = rng.randint(1, 5)
        R = MNRing(field, F2, N)
        a = R.from_algebra(_random_nonzero(rng, field))
        inv = mn_inverse(a, N)
        one = F2.identity()
        for prod in (a * inv, inv * a):
            assert prod.terms == {one: field.one}
            assert prod.tail is None or R.magnus.less(one, prod.tail)


def test_certified_terms_are_stable_under_higher_order():
    rng = random.Random(22)
    for _ in range(60):
        a = _random_nonzero(rng, QQ, 3)
        lo = mn_inverse(MNRing(QQ, F2, 2).from_algebra(a), 2)
        hi = mn_inverse(MNRing(QQ, F2, 5).from_algebra(a), 5)
        order = MagnusOrder(F2)
        for g, c in hi.terms.items():
            if lo.tail is None or order.less(g, lo.tail):
                assert lo.terms.get(g, 0) == c
        for g in lo.terms:
            assert hi.terms.get(g) == lo.terms[g]


def test_order_examples():
    order = MagnusOrder(F2)
    e = F2.identity()
    assert order.sort([x * y, x, e, ~x, y, ~y]) == [~x, ~y, e, y, x, x * y]


def test_order_is_bi_invariant():
    order = MagnusOrder(F2)
    rng = random.Random(23)
    for _ in range(300):
        g, h, k = (F2.random_element(rng, 5) for _ in range(3))
        if g == h:
            continue
        lt = order.less(g, h)
        assert order.less(k * g, k * h) == lt
        assert order.less(g * k, h * k) == lt
        assert order.less(h, g) != lt


def test_magnus_degree():
    assert magnus_degree(F2.identity()) == 0
    assert magnus_degree(x) == 1
    assert magnus_degree(x * y * ~x * ~y) == 2
    for g in F2.ball(3):
        assert (magnus_degree(g) == 0) == g.is_identity()


def test_magnus_expansion_of_inverse_letter():
    # x^-1 -> 1 - X + X^2 - ..., keyed by words in the variable indices
    exp = magnus_expansion((-1,), 3)
    assert exp == {(): 1, (1,): -1, (1, 1): 1, (1, 1, 1): -1}


def test_rank_examples():
    col = mn_rank([[X - 1], [Y - 1]], 2)
    assert col["lower_bound"] == 1 and col["stabilized"] and col["exact"]
    row = mn_rank([[X - 1, Y - 1]], 2)
    assert row["lower_bound"] == 1 and row["stabilized"]
    I3 = [[A.one if i == j else A.zero for j in range(3)] for i in range(3)]
    r = mn_rank(I3, 1)
    assert r["lower_bound"] == 3 and r["stabilized"]
    Z = [[A.zero] * 2 for _ in range(2)]
    r = mn_rank(Z, 2)
    assert r["lower_bound"] == 0 and r["stabilized"]


def test_rank_monotone_and_bounded():
    rng = random.Random(24)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        M = [[A.random_element(rng, 2, 1) if rng.random() < 0.7 else A.zero for _ in range(n)] for _ in range(m)]
        prev = 0
        for N in range(1, 5):
            r = mn_rank(M, N)["lower_bound"]
            assert prev <= r <= min(m, n)
            prev = r


def test_dependent_rows_give_a_stable_lower_bound():
    # second row = (x + 1) * first row; truncation leaves only a tail, never a false pivot
    M = [[X - 1, Y - 1], [(X + 1) * (X - 1), (X + 1) * (Y - 1)]]
    for N in (2, 3, 4):
        r = mn_rank(M, N)
        assert r["lower_bound"] == 1 and r["stabilized"] and not r["exact"]

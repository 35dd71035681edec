import random

import pytest

from divring import linalg
from divring.errors import InputError
from divring.group_algebra import GroupAlgebra
from divring.groups import FreeAbelian, FreeGroup, klein_bottle_group
from divring.malcev import MNRing
from divring.ore import OreLaurent
from divring.rank import (
    RankAnnotation,
    RingHom,
    axiom_suite,
    compare_on_samples,
    division_rank,
    evaluation_hom,
    map_matrix,
    matrix_sampler,
    pullback,
    rank_over_tower,
)
from divring.scalars import QQ
from divring.tower import PolyZTower

Qt = OreLaurent(QQ, [], [], var="t")
t = Qt.t()
Z2T = PolyZTower(FreeAbelian(2, ["x", "y"]), QQ)
KT = PolyZTower(klein_bottle_group(), QQ)


def test_examples():
    assert rank_over_tower([[t, Qt.zero], [Qt.zero, t + 1]], Qt) == 2
    x, y = (Z2T.monomial(g) for g in Z2T.group.gens())
    R = Z2T.top
    assert rank_over_tower([[x - R.one, y - R.one]], R) == 1
    assert rank_over_tower([[R.zero] * 3] * 2, R) == 0
    assert isinstance(rank_over_tower([[t]], Qt), int)


def test_free_group_rank_is_annotated_lower_bound():
    F2 = FreeGroup(2, ["x", "y"])
    A = GroupAlgebra(QQ, F2)
    X, Y = (A.monomial(g) for g in F2.gens())
    R = MNRing(QQ, F2, 3)
    assert rank_over_tower([[X - 1], [Y - 1]], R) == 1
    r = rank_over_tower([[X - 1, Y - 1], [(X + 1) * (X - 1), (X + 1) * (Y - 1)]], R)
    assert isinstance(r, RankAnnotation) and int(r) == 1 and r.stabilized
    assert ">=1" in repr(r)


def _sampler(T):
    return matrix_sampler(T.top, 3, 0.6, lambda rng: T.embed(T.algebra.random_element(rng, 2, 1)))


@pytest.mark.parametrize("name,T", [("Q(t)", PolyZTower(FreeAbelian(1, ["t"]), QQ)), ("Z2", Z2T), ("Klein", KT)],
                         ids=["Q(t)", "Z2", "Klein"])
def test_row_and_column_elimination_agree(name, T):
    rng = random.Random(41)
    sample = _sampler(T)
    for _ in range(200):
        M = sample(rng)
        assert linalg.rank(T.top, M) == linalg.column_rank(T.top, M)


def test_pullback_examples():
    rk = division_rank(QQ, "Q")
    at0 = pullback(rk, evaluation_hom(Qt, [0], QQ, "t->0"))
    assert at0([[t]]) == 0
    ident = pullback(division_rank(Qt), RingHom(Qt, Qt, lambda v: v, "id"))
    rng = random.Random(42)
    sample = matrix_sampler(Qt, 3, 0.6, lambda r: Qt.monomial(QQ(r.randint(1, 3)), r.randint(-2, 2)) + Qt.one)
    for _ in range(50):
        M = sample(rng)
        assert ident(M) == division_rank(Qt)(M)
    assert "pullback along t->0" in repr(at0)


def test_pullback_along_abelianization():
    F2 = FreeGroup(2, ["x", "y"])
    A = GroupAlgebra(QQ, F2)
    Z2 = Z2T.group

    def abelianize(a):
        out = {}
        for g, c in a.terms.items():
            v = [0, 0]
            for letter in g.word():
                v[abs(letter) - 1] += 1 if letter > 0 else -1
            h = Z2.from_vector(v)
            out[h] = out.get(h, QQ.zero) + c
        return Z2T.embed(Z2T.algebra.element(out))

    X, Y = (A.monomial(g) for g in F2.gens())
    rk = pullback(division_rank(Z2T.top, "Z2 tower"), RingHom(A, Z2T.top, abelianize, "ab"))
    assert rk([[X * Y - Y * X]]) == 0
    assert rk([[X - 1]]) == 1


def test_pullback_reports_failing_entry():
    rk = pullback(division_rank(QQ), evaluation_hom(Qt, [0], QQ, "t->0"))
    with pytest.raises(InputError, match=r"t->0 failed at entry \(0, 1\)"):
        rk([[Qt.one, Qt.inv(t)]])


def test_axiom_suite_q_t():
    rep = axiom_suite(division_rank(Qt, "Q(t)"), matrix_sampler(Qt, 3, 0.6,
                      lambda r: Qt.monomial(QQ(r.randint(-2, 2)), r.randint(-2, 2)) + Qt.t(r.randint(0, 1))),
                      trials=200, seed=7)
    assert rep["passed"] and rep["spot_checks"] == {"rk(1)": 1, "rk(0)": 0}
    assert all(v == 200 for v in rep["checks"].values())


def test_pullback_preserves_axioms():
    rk = pullback(division_rank(QQ), evaluation_hom(Qt, [2], QQ, "t->2"))
    assert rk.carrier is Qt
    sample = matrix_sampler(Qt, 3, 0.6, lambda r: Qt.monomial(QQ(r.randint(-2, 2)), r.randint(0, 2)))
    rep = axiom_suite(rk, sample, trials=100, seed=8)
    assert rep["passed"]


def test_broken_rank_function_is_caught():
    bad = division_rank(Qt)
    bad.evaluator = lambda rows: len(rows)
    rep = axiom_suite(bad, matrix_sampler(Qt, 3, 0.6, lambda r: Qt.one), trials=20, seed=9)
    assert not rep["passed"] and rep["violations"]


def test_comparisons():
    full = division_rank(Qt, "Q(t)")
    at0 = pullback(division_rank(QQ), evaluation_hom(Qt, [0], QQ, "t->0"))
    at1 = pullback(division_rank(QQ), evaluation_hom(Qt, [1], QQ, "t->1"))
    sample = [[[t]], [[t - 1]]]
    rep = compare_on_samples(at0, full, sample)
    assert rep["relation"] == "<=" and rep["scope"] == "on this sample"
    assert rep["strictly_less"][0]["values"] == [0, 1]
    assert compare_on_samples(full, full, sample)["relation"] == "="
    rep = compare_on_samples(at0, at1, sample)
    assert rep["relation"] == "incomparable"
    assert rep["strictly_less"] and rep["strictly_greater"]


def test_map_matrix_identity():
    M = [[t, Qt.one]]
    assert map_matrix(lambda v: v, M) == M

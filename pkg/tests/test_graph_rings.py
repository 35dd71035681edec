import random

import pytest

from divring.errors import InputError
from divring.graph_rings import (
    GraphGroupRings,
    GraphOfRingsSpec,
    PathError,
    alpha,
    amalgam_module_form,
    amalgam_normal_form,
    beta,
    embed_injectivity_fuzz,
    free_algebra_certificate,
    hnn_syllable_form,
    is_linked_expression,
    linked_normal_form,
    linked_tokens,
    polynomial_basis,
)
from divring.group_algebra import GroupAlgebra
from divring.groups import GraphEdge, GraphOfGroups
from divring.ore import OreLaurent
from divring.scalars import GF, QQ

Qx = OreLaurent(QQ, [], [], var="x")
Qy = OreLaurent(QQ, [], [], var="y")
BX = polynomial_basis(Qx, name="x")
BY = polynomial_basis(Qy, name="y")


def _one_edge(kind):
    if kind == "F2-hnn":
        return GraphOfGroups([1], [GraphEdge(0, 0, 0, ((),), ((),))], [], 0)
    if kind == "BS(1,2)":
        return GraphOfGroups([1], [GraphEdge(0, 0, 1, ((1,),), ((2,),))], [], 0)
    if kind == "Z2-hnn":
        return GraphOfGroups([2], [GraphEdge(0, 0, 1, ((1,), (0,)), ((0,), (1,)))], [], 0)
    if kind == "Z*Z":
        return GraphOfGroups([1, 1], [GraphEdge(0, 1, 0, ((),), ((),))], [0], 0)
    if kind == "trefoil":
        return GraphOfGroups([1, 1], [GraphEdge(0, 1, 1, ((2,),), ((3,),))], [0], 0)
    if kind == "Z2-vertex":
        return GraphOfGroups([2], [], [], 0)
    raise KeyError(kind)


KINDS = ["F2-hnn", "BS(1,2)", "Z2-hnn", "Z*Z", "trefoil", "Z2-vertex"]


def test_square_normal_form():
    x, y = Qx.t(), Qy.t()
    raw = [[("B", x), ("B", x)], [("B", x), ("C", y)], [("C", y), ("B", x)], [("C", y), ("C", y)]]
    form = amalgam_module_form(raw, BX, BY)
    assert set(form) == {(("B", 2),), (("B", 1), ("C", 1)), (("C", 1), ("B", 1)), (("C", 2),)}
    assert all(c == 1 for c in form.values())
    nf = amalgam_normal_form(raw, BX, BY)
    assert [(w, repr(c)) for w, c in nf] == [((), "x^2"), ((("C", 1),), "x"), ((("C", 2),), "1"),
                                             ((("C", 1), ("B", 1)), "1")]


@pytest.mark.parametrize("depth", [1, 3, 6])
def test_free_algebra_certificate(depth):
    cert = free_algebra_certificate(BX, BY, depth=depth)
    assert cert["basis_size"] == cert["expected"] == sum(2 ** d for d in range(depth + 1))
    assert cert["bijective"]


def _three_vertex_spec():
    rings = [OreLaurent(QQ, [], [], var=f"u{i}") for i in range(3)]
    edges = [(0, 1), (1, 2), (2, 0)]

    def into(v):
        return lambda r: rings[v].from_scalar(r)

    maps = {}
    for i, (s, d) in enumerate(edges):
        maps[(i, 1)] = into(d)
        maps[(i, -1)] = into(s)
    return GraphOfRingsSpec(rings, edges, tree=[0, 1], base=0, edge_rings=[QQ] * 3, edge_maps=maps)


def test_round_trip_on_random_loops():
    S = _three_vertex_spec()
    rng = random.Random(31)
    for _ in range(100):
        z = S.random_loop(rng, rng.randint(0, 6))
        assert z.is_loop_sum()
        assert beta(alpha(z)) == z
        t = alpha(z)
        assert alpha(beta(t)) == t


def test_round_trip_is_additive_and_multiplicative():
    S = _three_vertex_spec()
    rng = random.Random(32)
    for _ in range(30):
        z, w = S.random_loop(rng, 3), S.random_loop(rng, 4)
        assert alpha(z + w) == alpha(z) + alpha(w)
        assert alpha(z * w) == alpha(z) * alpha(w)
        assert beta(alpha(z * w)) == z * w


def test_path_errors_carry_position():
    S = _three_vertex_spec()
    with pytest.raises(PathError, match="position 1"):
        S.loop(S.vertex_rings[0].one, [((0, -1), S.vertex_rings[2].one)])
    with pytest.raises(InputError):
        GraphOfRingsSpec(S.vertex_rings, S.edges, tree=[0], base=0)


@pytest.mark.parametrize("kind", ["F2-hnn", "BS(1,2)", "Z2-hnn"])
def test_hnn_words_are_linked(kind):
    G = _one_edge(kind)
    rings = GraphGroupRings(G, QQ)
    X, Y = rings.bases()
    rng = random.Random(33)
    for _ in range(100):
        g = G.random_loop(rng, rng.randint(0, 4), 2)
        form = hnn_syllable_form([rings.raw_word(g)], X, Y)
        for w in form:
            assert is_linked_expression(linked_tokens(w, X, Y))


@pytest.mark.parametrize("kind", ["F2-hnn", "BS(1,2)", "Z2-hnn", "Z*Z", "trefoil"])
def test_normal_form_is_multiplicative_and_unique(kind):
    G = _one_edge(kind)
    rings = GraphGroupRings(G, QQ)
    left, right = rings.bases()
    rng = random.Random(34)
    seen = {}
    for _ in range(150):
        g, h = G.random_loop(rng, 3, 2), G.random_loop(rng, 3, 2)
        two = linked_normal_form([rings.raw_word(g) + rings.raw_word(h)], left, right, rings.kind)
        one = linked_normal_form([rings.raw_word(g * h)], left, right, rings.kind)
        assert two == one
        key = repr(one)
        assert seen.setdefault(key, g * h) == g * h


def test_hnn_relation():
    G = _one_edge("BS(1,2)")
    rings = GraphGroupRings(G, QQ)
    A = GroupAlgebra(QQ, G)
    a, t = G.gens()
    assert rings.normal_form(A.monomial(~t * a * t)) == rings.normal_form(A.monomial(a ** 2))


@pytest.mark.parametrize("kind", KINDS)
def test_embed_injectivity_fuzz(kind):
    rep = embed_injectivity_fuzz(_one_edge(kind), QQ, trials=100, seed=1)
    assert rep["outcome"] == "injective on samples"
    assert rep["nonzero_images"] == 100


def test_embed_fuzz_positive_characteristic():
    rep = embed_injectivity_fuzz(_one_edge("F2-hnn"), GF(2), trials=50, seed=2)
    assert not rep["witnesses"]


def test_two_edge_graphs_are_refused():
    G = GraphOfGroups([1, 1], [GraphEdge(0, 1, 0, ((),), ((),)), GraphEdge(0, 1, 0, ((),), ((),))], [0], 0)
    with pytest.raises(InputError, match="at most one edge"):
        GraphGroupRings(G, QQ)

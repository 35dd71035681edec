"""Iterated Ore towers for poly-Z groups and linear-independence witnesses."""

from __future__ import annotations

from math import gcd
from typing import Sequence

from . import linalg
from .cosets import finite_index_data
from .errors import InputError, ResourceExceeded
from .group_algebra import GroupAlgebra, GroupAlgebraElement, GroupAlgebraHom
from .groups import FreeAbelian, GroupElement, PolyZ
from .ore import OreLaurent


class UnsupportedWitness(InputError):
    pass


def word_in(ring, word: Sequence[int]):
    """Product of ``ring.gens()`` along a signed word."""
    gens = ring.gens()
    x = ring.one
    for a in word:
        g = gens[abs(a) - 1]
        x = x * (g if a > 0 else ring.inv(g))
    return x


class PolyZTower:
    """The division ring ``Ore(...Ore(k[x_0^{+-1}])[x_1^{+-1}; sigma_1]...)`` of a poly-Z group.

    ``levels[j]`` is the fraction field after adjoining the first ``j``
    layers (``levels[0]`` is the base field); conjugation by ``x_j``
    becomes the twist of level ``j + 1``.
    """

    def __init__(self, spec, field):
        self.group = spec
        if isinstance(spec, FreeAbelian):
            spec = PolyZ.free_abelian(spec.num_gens, spec.names)
        if not isinstance(spec, PolyZ):
            raise InputError("a poly-Z or free-abelian group is required to build an Ore tower")
        self.spec = spec
        self.field = field
        self.levels = [field]
        for j in range(spec.layers):
            below = self.levels[-1]
            sigma = [word_in(below, w) for w in spec.raw_actions[j]]
            sigma_inv = [word_in(below, w) for w in spec.raw_inverse_actions[j]]
            try:
                layer = OreLaurent(below, sigma, sigma_inv, var=spec.names[j])
            except InputError as exc:
                raise InputError(f"automorphism of layer {spec.names[j]} does not extend: {exc}") from exc
            self.levels.append(layer)
        self.top = self.levels[-1]
        self.algebra = GroupAlgebra(field, self.group)
        self._mono: dict = {}
        self.embedding = GroupAlgebraHom(self.algebra, self.top, self.monomial, self.top.from_scalar,
                                         name=f"k[{spec!r}] -> tower")

    def __repr__(self):
        return f"PolyZTower({self.spec!r} over {self.field!r})"

    def _monomial_at(self, j: int, exps: tuple):
        if j == 0:
            return self.field.one
        key = (j, exps)
        v = self._mono.get(key)
        if v is None:
            L = self.levels[j]
            v = L.monomial(self._monomial_at(j - 1, exps[:-1]), exps[-1])
            self._mono[key] = v
        return v

    def monomial(self, g: GroupElement):
        """Image of a group element: ``x_0^e_0 ... x_{n-1}^e_{n-1}`` read in the tower.

        Elements of the original free-abelian group are accepted too, since
        their exponent vectors are the same normal form.
        """
        if g.spec is not self.group:
            self.spec._check(g)
        if self.spec.layers == 0:
            return self.field.one
        return self._monomial_at(self.spec.layers, tuple(g.data))

    def embed(self, x: GroupAlgebraElement):
        if self.spec.layers == 0:
            return sum((self.field(c) for c in x.terms.values()), self.field.zero)
        return self.embedding(x)

    def describe(self) -> dict:
        return {"kind": "polyz_tower", "layers": self.spec.layers, "field": repr(self.field),
                "top": self.top.describe() if self.spec.layers else {"kind": "base"}}


def build_polyz_tower(spec, field) -> PolyZTower:
    return PolyZTower(spec, field)


def expand(tower: PolyZTower, x, level: int) -> dict:
    """Left coordinates of ``x`` over ``levels[level]`` in the monomials of the higher layers.

    Defined only for elements that are Laurent polynomials in every layer
    above ``level``.
    """
    top = len(tower.levels) - 1

    def rec(y, j):
        if j == level:
            return {(): y}
        if not y.is_polynomial():
            raise UnsupportedWitness(
                f"unsupported witness configuration: element has a denominator in layer {tower.levels[j].var}"
            )
        out = {}
        for k, c in y.num.c.items():
            for key, v in rec(c, j - 1).items():
                out[key + (k,)] = v
        return out

    return rec(x, top)


def _prefix_spec(spec: PolyZ, m: int) -> PolyZ:
    return PolyZ(spec.raw_actions[:m], spec.raw_inverse_actions[:m], spec.names[:m])


def _generates_prefix(spec: PolyZ, gens: Sequence[GroupElement], m: int) -> bool:
    if m == 0:
        return True
    P = _prefix_spec(spec, m)
    sub = [P.from_exponents(g.data[:m]) for g in gens]
    try:
        return finite_index_data(P, sub).index == 1
    except ResourceExceeded:
        return False


def _independence(R, vectors: list[dict], labels: list[str]) -> dict:
    keys = sorted({k for v in vectors for k in v})
    rows = [[v.get(k, R.zero) for k in keys] for v in vectors]
    r = linalg.rank(R, rows) if keys else 0
    dependency = None
    if r < len(vectors):
        dep = linalg.left_kernel(R, rows)[0]
        dependency = [str(c) for c in dep]
    return {"count": len(vectors), "rank": r, "independent": r == len(vectors),
            "elements": labels, "dependency": dependency}


def hf_witness_check(tower: PolyZTower, subgroup_gens: Sequence[GroupElement], t: GroupElement | None = None,
                     range_: int = 1, mode: str = "HF", transversal: Sequence[GroupElement] | None = None) -> dict:
    """Linear independence of ``{t^i : |i| <= range_}`` (HF) or of a transversal (L).

    Independence is tested over the division closure of the subgroup's
    group algebra, which must be a level of the tower (HF mode) or, in L
    mode, the level below the top extended by a power ``x_top^d``.
    """
    spec = tower.spec
    n = spec.layers
    gens = list(subgroup_gens)
    for g in gens + ([t] if t is not None else []) + list(transversal or []):
        if g.spec is not tower.group:
            spec._check(g)
    if mode == "HF":
        if t is None or range_ < 1:
            raise InputError("HF mode needs t and range >= 1")
        m = max((max((i + 1 for i, e in enumerate(g.data) if e), default=0) for g in gens), default=0)
        if not _generates_prefix(spec, gens, m):
            raise UnsupportedWitness(
                "unsupported witness configuration: the subgroup is not an initial segment of the layers"
            )
        R = tower.levels[m]
        elems = [t ** i for i in range(-range_, range_ + 1)]
        vecs = [expand(tower, tower.monomial(g), m) for g in elems]
        report = _independence(R, vecs, [repr(g) for g in elems])
        report.update(mode="HF", closure=f"level {m}", t=repr(t), range=range_)
        return report
    if mode != "L":
        raise InputError(f"unknown witness mode {mode!r}")
    if transversal is None or not transversal:
        raise InputError("L mode needs a transversal")
    if n == 0:
        raise UnsupportedWitness("unsupported witness configuration: trivial group")
    top = n - 1
    lower, d = [], 0
    for g in gens:
        e = g.data[top]
        if e:
            d = gcd(d, abs(e))
        else:
            lower.append(g)
    # H must contain the lower layers, so every generator's lower part is in H too
    if not _generates_prefix(spec, lower, top):
        raise UnsupportedWitness(
            "unsupported witness configuration: the subgroup must contain all layers below the top"
        )
    elems = list(transversal)
    images = [tower.monomial(g) for g in elems]
    labels = [repr(g) for g in elems]
    if d == 0:
        vecs = [expand(tower, x, top) for x in images]
        report = _independence(tower.levels[top], vecs, labels)
        report.update(mode="L", closure=f"level {top}")
        return report
    L = tower.top
    S = OreLaurent(L.below, L._images_for(d), L._images_for(-d), var=f"({L.var}^{d})")
    vecs = []
    for x in images:
        if not x.is_polynomial():
            raise UnsupportedWitness("unsupported witness configuration: transversal image is not a polynomial")
        parts: dict = {}
        for k, c in x.num.c.items():
            j, r = divmod(k, d)
            parts.setdefault(r, {})[j] = c
        vecs.append({r: S.from_poly(S.poly(p)) for r, p in parts.items()})
    report = _independence(S, vecs, labels)
    report.update(mode="L", closure=f"level {top} extended by {L.var}^{d}")
    return report

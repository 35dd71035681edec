"""Coset enumeration (Todd-Coxeter, HLT strategy) and finite-index subgroup data."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from .errors import ResourceExceeded
from .groups import (FreeAbelian, FreeGroup, GroupElement, GroupError, GroupSpec, PolyZ, free_reduce, invert_word,
                     word_power)

DEFAULT_MAX_COSETS = int(os.environ.get("DIVRING_MAX_COSETS", "10000"))


class IndexBoundExceeded(ResourceExceeded):
    """Enumeration hit the coset ceiling; says nothing about the true index."""


class _Enumerator:
    def __init__(self, ngens, relators, subgens, max_cosets):
        self.ngens = ngens
        self.relators = [tuple(r) for r in relators if r]
        self.subgens = [tuple(w) for w in subgens if w]
        self.max_cosets = max_cosets
        self.table = [[None] * (2 * ngens)]
        self.parent = [0]
        self.letters = [s * (i + 1) for i in range(ngens) for s in (1, -1)]

    @staticmethod
    def col(a):
        return 2 * (abs(a) - 1) + (0 if a > 0 else 1)

    def live(self, c):
        return self.parent[c] == c

    def define(self, c, a):
        if len(self.table) >= self.max_cosets:
            raise IndexBoundExceeded(
                f"index bound exceeded: more than {self.max_cosets} cosets",
                ceiling="max_cosets", limit=self.max_cosets,
            )
        d = len(self.table)
        self.table.append([None] * (2 * self.ngens))
        self.parent.append(d)
        self.table[c][self.col(a)] = d
        self.table[d][self.col(-a)] = c

    def rep(self, c):
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def merge(self, k, l, queue):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def coincidence(self, a, b):
        queue = deque()
        self.merge(a, b, queue)
        while queue:
            g = queue.popleft()
            for x in self.letters:
                d = self.table[g][self.col(x)]
                if d is None:
                    continue
                self.table[d][self.col(-x)] = None
                mu, nu = self.rep(g), self.rep(d)
                if self.table[mu][self.col(x)] is not None:
                    self.merge(nu, self.table[mu][self.col(x)], queue)
                elif self.table[nu][self.col(-x)] is not None:
                    self.merge(mu, self.table[nu][self.col(-x)], queue)
                else:
                    self.table[mu][self.col(x)] = nu
                    self.table[nu][self.col(-x)] = mu

    def scan_and_fill(self, c, w):
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][self.col(w[i])] is not None:
                f = t[f][self.col(w[i])]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][self.col(-w[j])] is not None:
                b = t[b][self.col(-w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][self.col(w[i])] = b
                t[b][self.col(-w[i])] = f
                return
            self.define(f, w[i])

    def run(self):
        for w in self.subgens:
            self.scan_and_fill(0, w)
        c = 0
        while c < len(self.table):
            for r in self.relators:
                if not self.live(c):
                    break
                self.scan_and_fill(c, r)
            if self.live(c):
                for x in self.letters:
                    if self.table[c][self.col(x)] is None:
                        self.define(c, x)
            c += 1
        return self._standardize()

    def _standardize(self):
        order = {0: 0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for x in self.letters:
                d = self.rep(self.table[c][self.col(x)])
                if d not in order:
                    order[d] = len(order)
                    queue.append(d)
        out = [[None] * (2 * self.ngens) for _ in order]
        for c, k in order.items():
            for x in self.letters:
                out[k][self.col(x)] = order[self.rep(self.table[c][self.col(x)])]
        return out


def coset_table(ngens: int, relators, subgroup_words, max_cosets: int = DEFAULT_MAX_COSETS):
    """Coset table of the subgroup generated by ``subgroup_words``.

    Row ``c`` column ``2i`` (resp. ``2i+1``) is the coset ``c * x_{i+1}``
    (resp. ``c * x_{i+1}^{-1}``); coset 0 is the subgroup itself, and the
    numbering is the breadth-first order, so the table is canonical.
    """
    return _Enumerator(ngens, relators, subgroup_words, max_cosets).run()


def _col(a):
    return 2 * (abs(a) - 1) + (0 if a > 0 else 1)


@dataclass
class SubgroupData:
    """A finite-index subgroup together with a right transversal.

    ``transversal[c]`` represents coset ``c`` (``transversal[0]`` is the
    identity), so every ambient ``g`` factors as ``h * transversal[c]``.
    ``subgroup`` is an abstract spec for the subgroup when one is known and
    ``subgroup_images`` are the ambient images of its generators.
    """

    ambient: GroupSpec
    generators: list
    table: list
    transversal: list
    transversal_words: list
    subgroup: GroupSpec | None = None
    subgroup_images: list | None = None
    schreier: dict = field(default_factory=dict)
    rewriter: object = None

    @property
    def index(self) -> int:
        return len(self.transversal)

    def coset_of(self, g: GroupElement) -> int:
        c = 0
        for a in g.word():
            c = self.table[c][_col(a)]
        return c

    def contains(self, g: GroupElement) -> bool:
        return self.coset_of(g) == 0

    def membership(self, g: GroupElement):
        """Return ``(h, c)`` with ``g = h * transversal[c]`` and ``h`` in the subgroup."""
        c = self.coset_of(g)
        return g * ~self.transversal[c], c

    def is_normal(self) -> bool:
        return all(
            self.contains(t * h * ~t) for t in self.transversal for h in self.generators
        )

    def conjugation_action(self, c: int, h: GroupElement) -> GroupElement:
        t = self.transversal[c]
        return t * h * ~t

    def factor_set(self) -> dict:
        """``(i, j) -> (h_ij, k)`` with ``t_i t_j = h_ij t_k``."""
        out = {}
        for i, ti in enumerate(self.transversal):
            for j, tj in enumerate(self.transversal):
                h, k = self.membership(ti * tj)
                out[(i, j)] = (h, k)
        return out

    def to_subgroup(self, h: GroupElement) -> GroupElement:
        """Rewrite an ambient element of the subgroup in the subgroup's own spec."""
        if not self.contains(h):
            raise GroupError(f"{h!r} is not in the subgroup")
        if not self.schreier:
            if self.rewriter is None:
                raise GroupError("no rewriting process available for this subgroup")
            return self.rewriter(h)
        c = 0
        out = []
        for a in h.word():
            if a > 0:
                s = self.schreier.get((c, a))
                if s is not None:
                    out.append(s)
                c = self.table[c][_col(a)]
            else:
                d = self.table[c][_col(a)]
                s = self.schreier.get((d, -a))
                if s is not None:
                    out.append(-s)
                c = d
        return self.subgroup.normal_form(free_reduce(out))

    def from_subgroup(self, k: GroupElement) -> GroupElement:
        g = self.ambient.identity()
        for a in k.word():
            img = self.subgroup_images[abs(a) - 1]
            g = g * (img if a > 0 else ~img)
        return g


def finite_index_data(ambient: GroupSpec, subgroup_generators, *, subgroup: GroupSpec | None = None,
                      subgroup_images=None, max_cosets: int = DEFAULT_MAX_COSETS) -> SubgroupData:
    """Enumerate cosets of the subgroup generated by ``subgroup_generators``.

    For a free ambient group the subgroup spec and its rewriting process are
    produced by Reidemeister-Schreier.  Otherwise an abstract ``subgroup``
    with ``subgroup_images`` may be supplied; it is checked to be a
    homomorphism onto the enumerated subgroup.
    """
    gens = list(subgroup_generators)
    for g in gens:
        ambient._check(g)
    words = [g.word() for g in gens]
    table = coset_table(ambient.num_gens, ambient.relators(), words, max_cosets)
    n = len(table)
    # breadth-first spanning tree of the coset graph gives Schreier representatives
    tw = [None] * n
    tw[0] = ()
    tree_edges = set()
    queue = deque([0])
    letters = [s * (i + 1) for i in range(ambient.num_gens) for s in (1, -1)]
    while queue:
        c = queue.popleft()
        for a in letters:
            d = table[c][_col(a)]
            if tw[d] is None:
                tw[d] = tw[c] + (a,)
                tree_edges.add((c, a) if a > 0 else (d, -a))
                queue.append(d)
    transversal = [ambient.normal_form(w) for w in tw]
    data = SubgroupData(ambient, gens, table, transversal, tw)
    if isinstance(ambient, FreeGroup):
        images, schreier = [], {}
        for c in range(n):
            for i in range(1, ambient.num_gens + 1):
                if (c, i) in tree_edges:
                    continue
                d = table[c][_col(i)]
                schreier[(c, i)] = len(images) + 1
                images.append(ambient.normal_form(tw[c] + (i,) + invert_word(tw[d])))
        data.subgroup = FreeGroup(len(images), [f"s{k}" for k in range(len(images))])
        data.subgroup_images = images
        data.schreier = schreier
    elif subgroup is not None:
        images = list(subgroup_images or [])
        if len(images) != subgroup.num_gens:
            raise GroupError("need one ambient image per subgroup generator")
        for k, img in enumerate(images):
            if data.coset_of(img) != 0:
                raise GroupError(f"image {img!r} of subgroup generator {k} is not in the subgroup")
        check = coset_table(ambient.num_gens, ambient.relators(), [g.word() for g in images], max_cosets)
        if len(check) != n:
            raise GroupError("supplied subgroup images do not generate the enumerated subgroup")
        for r in subgroup.relators():
            g = ambient.identity()
            for a in r:
                g = g * (images[abs(a) - 1] if a > 0 else ~images[abs(a) - 1])
            if not g.is_identity():
                raise GroupError(f"subgroup relator {r} does not hold in the ambient group")
        data.subgroup = subgroup
        data.subgroup_images = images
        data.rewriter = _triangular_rewriter(ambient, subgroup, images)
    return data


def _triangular_rewriter(ambient, subgroup, images):
    """Peel subgroup generators off from the top layer down.

    Available for groups with exponent-vector normal forms when each image
    has a distinct leading (highest nonzero) layer, so that the leading
    exponent is a homomorphism on the layer prefix.
    """
    if not isinstance(ambient, (PolyZ, FreeAbelian)):
        return None
    leads = []
    for img in images:
        nz = [i for i, e in enumerate(img.data) if e]
        if not nz:
            return None
        leads.append(nz[-1])
    if len(set(leads)) != len(leads):
        return None
    order = sorted(range(len(images)), key=lambda k: -leads[k])

    def rewrite(h):
        v = h
        word = []
        for k in order:
            lead = leads[k]
            if any(v.data[i] for i in range(lead + 1, len(v.data))):
                raise GroupError(f"{h!r} is not in the span of the subgroup generators")
            q, r = divmod(v.data[lead], images[k].data[lead])
            if r:
                raise GroupError(f"{h!r} is not in the span of the subgroup generators")
            if q:
                v = v * images[k] ** (-q)
                word = list(word_power((k + 1,), q)) + word
        if not v.is_identity():
            raise GroupError(f"{h!r} is not in the span of the subgroup generators")
        return subgroup.normal_form(word)

    return rewrite

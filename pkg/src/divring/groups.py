"""Exact symbolic groups with unique normal forms.

Raw words are sequences of signed, 1-based generator indices: ``3`` is the
third generator and ``-3`` its inverse.  Every group spec turns raw words into
normal-form data, and two elements are equal iff their data are identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .scalars import InputError


class GroupError(InputError):
    """Invalid group data or an invalid word for a spec."""


Word = tuple  # tuple of nonzero ints


def free_reduce(word: Sequence[int]) -> tuple:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def invert_word(word: Sequence[int]) -> tuple:
    return tuple(-a for a in reversed(word))


def cyclically_reduce(word: Sequence[int]) -> tuple:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def word_power(word: Sequence[int], n: int) -> tuple:
    if n < 0:
        return tuple(invert_word(word)) * (-n)
    return tuple(word) * n


def syllables(word: Sequence[int]):
    """Group a word into (generator, exponent) runs."""
    out = []
    for a in word:
        g, e = abs(a), (1 if a > 0 else -1)
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return [(g, e) for g, e in out]


@dataclass(frozen=True, eq=False)
class GroupElement:
    spec: "GroupSpec"
    data: tuple

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.spec.multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return self.spec.invert(self)

    def __pow__(self, n: int) -> "GroupElement":
        return self.spec.power(self, n)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.spec is other.spec and self.data == other.data

    def __hash__(self):
        return hash((id(self.spec), self.data))

    def __lt__(self, other):
        return self.spec.sort_key(self) < self.spec.sort_key(other)

    def is_identity(self) -> bool:
        return self == self.spec.identity()

    def word(self) -> tuple:
        return self.spec.to_word(self)

    def __repr__(self):
        return self.spec.format(self)


class GroupSpec:
    """Common machinery; subclasses supply data-level operations."""

    names: list[str]

    @property
    def num_gens(self) -> int:
        return len(self.names)

    def _elem(self, data) -> GroupElement:
        return GroupElement(self, data)

    def identity(self) -> GroupElement:
        return self._elem(self._identity())

    def gens(self) -> list[GroupElement]:
        return [self.generator(i) for i in range(self.num_gens)]

    def generator(self, i: int) -> GroupElement:
        return self.normal_form([i + 1])

    def _check_letter(self, a, position):
        if not isinstance(a, int) or a == 0 or abs(a) > self.num_gens:
            raise GroupError(
                f"invalid generator index {a!r} at position {position} "
                f"(group has {self.num_gens} generators)"
            )

    def normal_form(self, raw: Sequence[int]) -> GroupElement:
        for pos, a in enumerate(raw):
            self._check_letter(a, pos)
        data = self._identity()
        for a in raw:
            data = self._mul(data, self._letter(a))
        return self._elem(data)

    def _check(self, *elems):
        for e in elems:
            if not isinstance(e, GroupElement) or e.spec is not self:
                raise GroupError(f"element {e!r} does not belong to {self!r}")

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self._check(g, h)
        return self._elem(self._mul(g.data, h.data))

    def invert(self, g: GroupElement) -> GroupElement:
        self._check(g)
        return self._elem(self._inv(g.data))

    def power(self, g: GroupElement, n: int) -> GroupElement:
        if n < 0:
            g, n = self.invert(g), -n
        result = self._identity()
        base = g.data
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return self._elem(result)

    def evaluate(self, raw: Sequence[int]) -> GroupElement:
        return self.normal_form(raw)

    def sort_key(self, g: GroupElement):
        return g.data

    def to_word(self, g: GroupElement) -> tuple:
        raise NotImplementedError

    def format(self, g: GroupElement) -> str:
        w = syllables(self.to_word(g))
        if not w:
            return "1"
        return "*".join(
            self.names[i - 1] if e == 1 else f"{self.names[i - 1]}^{e}" for i, e in w
        )

    def random_element(self, rng: random.Random, length: int) -> GroupElement:
        n = self.num_gens
        if n == 0:
            return self.identity()
        raw = [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(length)]
        return self.normal_form(raw)

    def relators(self) -> list[tuple]:
        raise GroupError(f"{type(self).__name__} has no finite presentation available")

    def ball(self, radius: int) -> list[GroupElement]:
        """All elements of word length at most ``radius``, in canonical order."""
        seen = {self.identity()}
        frontier = [self.identity()]
        letters = [self._elem(self._letter(s * (i + 1))) for i in range(self.num_gens) for s in (1, -1)]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for a in letters:
                    h = g * a
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return sorted(seen, key=self.sort_key)


class FreeGroup(GroupSpec):
    """Free group; data is the freely reduced word."""

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 0:
            raise GroupError("free group rank must be nonnegative")
        self.rank = rank
        self.names = list(names) if names else _default_names(rank)
        if len(self.names) != rank:
            raise GroupError("wrong number of generator names")

    def __repr__(self):
        return f"FreeGroup({self.rank})"

    def _identity(self):
        return ()

    def _letter(self, a):
        return (a,)

    def _mul(self, g, h):
        out = list(g)
        for a in h:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        return tuple(out)

    def _inv(self, g):
        return invert_word(g)

    def normal_form(self, raw):
        for pos, a in enumerate(raw):
            self._check_letter(a, pos)
        return self._elem(free_reduce(raw))

    def to_word(self, g):
        return g.data

    def sort_key(self, g):
        return (len(g.data), g.data)

    def relators(self):
        return []


class FreeAbelian(GroupSpec):
    """Free abelian group; data is the exponent vector."""

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 0:
            raise GroupError("rank must be nonnegative")
        self.rank = rank
        self.names = list(names) if names else _default_names(rank)
        if len(self.names) != rank:
            raise GroupError("wrong number of generator names")

    def __repr__(self):
        return f"FreeAbelian({self.rank})"

    def _identity(self):
        return (0,) * self.rank

    def _letter(self, a):
        v = [0] * self.rank
        v[abs(a) - 1] = 1 if a > 0 else -1
        return tuple(v)

    def _mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def _inv(self, g):
        return tuple(-x for x in g)

    def from_vector(self, v) -> GroupElement:
        if len(v) != self.rank:
            raise GroupError("exponent vector has wrong length")
        return self._elem(tuple(int(x) for x in v))

    def to_word(self, g):
        return sum((word_power((i + 1,), e) for i, e in enumerate(g.data)), ())

    def relators(self):
        return [
            (i + 1, j + 1, -(i + 1), -(j + 1))
            for i in range(self.rank)
            for j in range(i + 1, self.rank)
        ]


class PolyZ(GroupSpec):
    """An iterated extension of infinite cyclic groups.

    Layer ``j`` contributes a generator ``x_j`` that normalises the group of
    layers ``0..j-1``; its action ``x_j g x_j^{-1}`` is given by the images
    of the lower generators as raw words, together with the images of the
    inverse automorphism.  Elements are written ``x_0^{e_0} ... x_{n-1}^{e_{n-1}}``
    and stored as the exponent tuple.
    """

    def __init__(self, actions: Sequence[Sequence[Sequence[int]]],
                 inverse_actions: Sequence[Sequence[Sequence[int]]],
                 names: Sequence[str] | None = None):
        n = len(actions)
        if len(inverse_actions) != n:
            raise GroupError("need one inverse descriptor per layer")
        self.names = list(names) if names else _default_names(n)
        if len(self.names) != n:
            raise GroupError("wrong number of generator names")
        self.layers = n
        self._images: dict[tuple[int, int], list[tuple]] = {}
        self.raw_actions = [[tuple(w) for w in imgs] for imgs in actions]
        self.raw_inverse_actions = [[tuple(w) for w in imgs] for imgs in inverse_actions]
        for j in range(n):
            for label, imgs in (("action", actions[j]), ("inverse", inverse_actions[j])):
                if len(imgs) != j:
                    raise GroupError(
                        f"layer {j} ({self.names[j]}) {label} must give images of {j} lower generators"
                    )
                for w in imgs:
                    for pos, a in enumerate(w):
                        if not isinstance(a, int) or a == 0 or abs(a) > j:
                            raise GroupError(
                                f"layer {j} {label} image uses invalid generator {a!r} at position {pos}"
                            )
            self._images[(j, 1)] = [self._eval_prefix(j, w) for w in actions[j]]
            self._images[(j, -1)] = [self._eval_prefix(j, w) for w in inverse_actions[j]]
            self._images[(j, 0)] = [self._gen_prefix(j, i) for i in range(j)]
            self._validate_layer(j)

    def __repr__(self):
        return f"PolyZ({self.layers} layers)"

    @classmethod
    def free_abelian(cls, rank: int, names=None) -> "PolyZ":
        ident = [[(i + 1,) for i in range(j)] for j in range(rank)]
        return cls(ident, ident, names)

    # prefix-group helpers: data tuples of length j

    def _gen_prefix(self, j, i):
        v = [0] * j
        v[i] = 1
        return tuple(v)

    def _eval_prefix(self, j, word):
        data = (0,) * j
        for a in word:
            g = self._gen_prefix(j, abs(a) - 1)
            if a < 0:
                g = self._inv_n(j, g)
            data = self._mul_n(j, data, g)
        return data

    def _validate_layer(self, j):
        # inverse descriptor really inverts the action
        for i in range(j):
            g = self._gen_prefix(j, i)
            if self._act(j, 1, self._act(j, -1, g)) != g or self._act(j, -1, self._act(j, 1, g)) != g:
                raise GroupError(
                    f"layer {j} ({self.names[j]}): inverse descriptor does not invert the action "
                    f"on {self.names[i]}"
                )
        # the action respects the relations of the lower layers
        for i in range(j):
            for m in range(i):
                lhs = self._mul_n(j, self._mul_n(j, self._act(j, 1, self._gen_prefix(j, i)),
                                                 self._act(j, 1, self._gen_prefix(j, m))),
                                 self._inv_n(j, self._act(j, 1, self._gen_prefix(j, i))))
                rhs = self._act(j, 1, self._act_lower(i, j, self._gen_prefix(j, m)))
                if lhs != rhs:
                    raise GroupError(
                        f"layer {j} ({self.names[j]}) action is not a homomorphism "
                        f"(fails on relation between {self.names[i]} and {self.names[m]})"
                    )

    def _act_lower(self, i, j, g):
        # image of g (in prefix j, supported on layers < i) under x_i-conjugation
        low = g[:i]
        moved = self._act(i, 1, low)
        return moved + (0,) * (j - i)

    def _images_for(self, j, e):
        key = (j, e)
        if key not in self._images:
            step = 1 if e > 0 else -1
            prev = self._images_for(j, e - step)
            self._images[key] = [self._act(j, step, g) for g in prev]
        return self._images[key]

    def _act(self, j, e, g):
        """Apply the e-th power of x_j-conjugation to g in the prefix of j layers."""
        if e == 0 or j == 0:
            return g
        imgs = self._images_for(j, e)
        result = (0,) * j
        for i, ex in enumerate(g):
            if ex:
                result = self._mul_n(j, result, self._pow_n(j, imgs[i], ex))
        return result

    def _pow_n(self, j, g, n):
        if n < 0:
            g, n = self._inv_n(j, g), -n
        result = (0,) * j
        while n:
            if n & 1:
                result = self._mul_n(j, result, g)
            g = self._mul_n(j, g, g)
            n >>= 1
        return result

    def _mul_n(self, n, g, h):
        if n == 0:
            return ()
        if not any(h[:-1]):
            return g[:-1] + (g[-1] + h[-1],)
        moved = self._act(n - 1, g[-1], h[:-1])
        return self._mul_n(n - 1, g[:-1], moved) + (g[-1] + h[-1],)

    def _inv_n(self, n, g):
        if n == 0:
            return ()
        lower = self._inv_n(n - 1, g[:-1])
        return self._act(n - 1, -g[-1], lower) + (-g[-1],)

    def _identity(self):
        return (0,) * self.layers

    def _letter(self, a):
        g = self._gen_prefix(self.layers, abs(a) - 1)
        return g if a > 0 else self._inv_n(self.layers, g)

    def _mul(self, g, h):
        return self._mul_n(self.layers, g, h)

    def _inv(self, g):
        return self._inv_n(self.layers, g)

    def from_exponents(self, v) -> GroupElement:
        if len(v) != self.layers:
            raise GroupError("exponent vector has wrong length")
        return self._elem(tuple(int(x) for x in v))

    def action_image(self, j: int, e: int, g: tuple) -> tuple:
        """Exponent data of ``x_j^e g x_j^{-e}`` for ``g`` in the first j layers."""
        return self._act(j, e, tuple(g))

    def to_word(self, g):
        return sum((word_power((i + 1,), e) for i, e in enumerate(g.data)), ())

    def relators(self):
        rels = []
        for j in range(self.layers):
            for i in range(j):
                img = self._images[(j, 1)][i]
                img_word = sum((word_power((m + 1,), e) for m, e in enumerate(img)), ())
                r = cyclically_reduce((j + 1, i + 1, -(j + 1)) + invert_word(img_word))
                rels.append(r)
        return rels


class FiniteExtension(GroupSpec):
    """Extension of a normal subgroup by a finite quotient.

    Elements are pairs ``(n, q)`` standing for ``n * u_q``, multiplied by
    ``(n, q)(m, r) = (n * alpha_q(m) * f(q, r), q*r)``.  ``table[q][r]`` is the
    quotient product with 0 the identity; ``action[q]`` lists images of the
    normal generators; ``factor_set[(q, r)]`` is a normal element and missing
    entries are the identity.
    """

    def __init__(self, normal: GroupSpec, table: Sequence[Sequence[int]],
                 action: Sequence[Sequence[GroupElement]],
                 factor_set: dict | None = None, quotient_names: Sequence[str] | None = None):
        self.normal = normal
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        if any(len(row) != self.order for row in self.table):
            raise GroupError("quotient multiplication table must be square")
        if len(action) != self.order:
            raise GroupError("need one automorphism per quotient element")
        self.action = [list(imgs) for imgs in action]
        for q, imgs in enumerate(self.action):
            if len(imgs) != normal.num_gens:
                raise GroupError(f"action of quotient element {q} has wrong number of images")
        fs = dict(factor_set or {})
        ident = normal.identity()
        self.factor = [[fs.get((q, r), ident) for r in range(self.order)] for q in range(self.order)]
        qn = list(quotient_names) if quotient_names else [f"u{q}" for q in range(1, self.order)]
        self.quotient_names = ["1"] + qn
        self.names = list(normal.names) + qn
        self._inverse_q = []
        for q in range(self.order):
            inv = [r for r in range(self.order) if self.table[q][r] == 0]
            if len(inv) != 1:
                raise GroupError("quotient table is not a group")
            self._inverse_q.append(inv[0])
        self._validate()

    def __repr__(self):
        return f"FiniteExtension({self.normal!r} by order {self.order})"

    def alpha(self, q: int, n: GroupElement) -> GroupElement:
        imgs = self.action[q]
        result = self.normal.identity()
        for a in n.word():
            g = imgs[abs(a) - 1]
            result = result * (g if a > 0 else ~g)
        return result

    def _validate(self):
        N = self.normal
        Q = range(self.order)
        if any(self.table[0][q] != q or self.table[q][0] != q for q in Q):
            raise GroupError("quotient element 0 must be the identity")
        for q in Q:
            for r in Q:
                for s in Q:
                    if self.table[self.table[q][r]][s] != self.table[q][self.table[r][s]]:
                        raise GroupError("quotient table is not associative")
        if any(self.action[0][i] != g for i, g in enumerate(N.gens())):
            raise GroupError("identity of the quotient must act trivially")
        for q in Q:
            if self.factor[0][q] != N.identity() or self.factor[q][0] != N.identity():
                raise GroupError("factor set must be normalized: f(1,q) = f(q,1) = 1")
        try:
            rels = N.relators()
        except GroupError:
            rels = []
        for q in Q:
            for r in rels:
                img = N.identity()
                for a in r:
                    g = self.action[q][abs(a) - 1]
                    img = img * (g if a > 0 else ~g)
                if not img.is_identity():
                    raise GroupError(f"action of quotient element {q} does not respect relator {r}")
        for q in Q:
            for r in Q:
                f = self.factor[q][r]
                qr = self.table[q][r]
                for g in N.gens():
                    lhs = self.alpha(q, self.alpha(r, g))
                    rhs = f * self.alpha(qr, g) * ~f
                    if lhs != rhs:
                        raise GroupError(
                            f"action and factor set incompatible at ({q},{r}): "
                            "alpha_q alpha_r != conj(f(q,r)) alpha_qr"
                        )
                for s in Q:
                    lhs = f * self.factor[qr][s]
                    rhs = self.alpha(q, self.factor[r][s]) * self.factor[q][self.table[r][s]]
                    if lhs != rhs:
                        raise GroupError(f"factor set fails the cocycle identity at ({q},{r},{s})")

    def _identity(self):
        return (self.normal.identity().data, 0)

    def _letter(self, a):
        k = abs(a) - 1
        if k < self.normal.num_gens:
            g = self.normal.generator(k)
            d = (g.data, 0)
        else:
            d = (self.normal.identity().data, k - self.normal.num_gens + 1)
        return d if a > 0 else self._inv(d)

    def _n(self, data):
        return GroupElement(self.normal, data)

    def _mul(self, g, h):
        n, q = self._n(g[0]), g[1]
        m, r = self._n(h[0]), h[1]
        prod = n * self.alpha(q, m) * self.factor[q][r]
        return (prod.data, self.table[q][r])

    def _inv(self, g):
        n, q = self._n(g[0]), g[1]
        qi = self._inverse_q[q]
        f = self.factor[q][qi]
        y = ~n * ~f
        m = self.alpha(qi, ~f * y * f)
        return (m.data, qi)

    def pair(self, n: GroupElement, q: int) -> GroupElement:
        return self._elem((n.data, q))

    def split(self, g: GroupElement) -> tuple[GroupElement, int]:
        return self._n(g.data[0]), g.data[1]

    def sort_key(self, g):
        return (g.data[1], self.normal.sort_key(self._n(g.data[0])))

    def to_word(self, g):
        n, q = self.split(g)
        w = n.word()
        if q:
            w = w + (self.normal.num_gens + q,)
        return w

    def relators(self):
        """Relators of N, conjugation by each u_q, and u_q u_r = f(q,r) u_qr."""
        m = self.normal.num_gens

        def u(q):
            return (m + q,) if q else ()

        rels = [tuple(r) for r in self.normal.relators()]
        for q in range(1, self.order):
            for i, g in enumerate(self.normal.gens()):
                rels.append(u(q) + (i + 1,) + (-(m + q),) + invert_word(self.alpha(q, g).word()))
            for r in range(1, self.order):
                rel = u(q) + u(r) + invert_word(u(self.table[q][r])) + invert_word(self.factor[q][r].word())
                rels.append(rel)
        out = []
        for r in rels:
            r = cyclically_reduce(free_reduce(r))
            if r and r not in out:
                out.append(r)
        return out


@dataclass(frozen=True)
class GraphEdge:
    """Geometric edge between two free-abelian vertex groups.

    ``src_map``/``dst_map`` are integer matrices (list of rows) sending the
    edge group basis into the source and destination vertex groups.
    """
    src: int
    dst: int
    rank: int
    src_map: tuple
    dst_map: tuple


class _Lattice:
    """Image of an injective integer matrix, with canonical coset reduction."""

    def __init__(self, matrix, nrows: int, ncols: int):
        cols = [[matrix[r][c] for r in range(nrows)] for c in range(ncols)]
        trans = [[1 if i == c else 0 for i in range(ncols)] for c in range(ncols)]
        self.nrows, self.ncols = nrows, ncols
        pivots = []
        k = 0
        for row in range(nrows):
            if k == ncols:
                break
            while True:
                nz = [c for c in range(k, ncols) if cols[c][row] != 0]
                if not nz:
                    break
                c0 = min(nz, key=lambda c: abs(cols[c][row]))
                cols[k], cols[c0] = cols[c0], cols[k]
                trans[k], trans[c0] = trans[c0], trans[k]
                done = True
                for c in range(k + 1, ncols):
                    if cols[c][row]:
                        q = cols[c][row] // cols[k][row]
                        cols[c] = [a - q * b for a, b in zip(cols[c], cols[k])]
                        trans[c] = [a - q * b for a, b in zip(trans[c], trans[k])]
                        if cols[c][row]:
                            done = False
                if done:
                    break
            if k < ncols and cols[k][row] != 0:
                if cols[k][row] < 0:
                    cols[k] = [-a for a in cols[k]]
                    trans[k] = [-a for a in trans[k]]
                pivots.append(row)
                k += 1
        if k != ncols:
            raise GroupError("edge map is not injective")
        self.cols, self.trans, self.pivots = cols, trans, pivots

    def reduce(self, v):
        """Return (edge coordinates r, canonical rep s) with v = M r + s."""
        v = list(v)
        coeff = [0] * self.ncols
        for k, row in enumerate(self.pivots):
            q = v[row] // self.cols[k][row]
            if q:
                v = [a - q * b for a, b in zip(v, self.cols[k])]
                coeff[k] = q
        r = [sum(coeff[k] * self.trans[k][i] for k in range(self.ncols)) for i in range(self.ncols)]
        return tuple(r), tuple(v)


def _matvec(m, v, nrows):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(nrows))


class GraphOfGroups(GroupSpec):
    """Fundamental group of a finite graph of free abelian groups.

    Elements are reduced loop words ``g_0 t_{e_1} g_1 ... t_{e_n} g_n`` at the
    base vertex, with oriented edges ``(index, +1/-1)``; ``g_0`` is arbitrary
    and every later ``g_i`` is the canonical representative of its coset of
    the incoming edge group.  The defining relation used is
    ``t_e phi_e(r) t_e^{-1} = phi_ebar(r)`` where ``phi_e`` lands in the
    terminal vertex group of ``e``.
    """

    def __init__(self, vertex_ranks: Sequence[int], edges: Sequence[GraphEdge],
                 tree: Sequence[int] = (), base: int = 0,
                 vertex_names: Sequence[Sequence[str]] | None = None):
        self.vertex_ranks = list(vertex_ranks)
        self.edges = list(edges)
        self.tree = frozenset(tree)
        self.base = base
        nv = len(self.vertex_ranks)
        if not 0 <= base < nv:
            raise GroupError("base vertex out of range")
        for i, e in enumerate(self.edges):
            if not (0 <= e.src < nv and 0 <= e.dst < nv):
                raise GroupError(f"edge {i} has an endpoint out of range")
            for side, m, v in (("source", e.src_map, e.src), ("target", e.dst_map, e.dst)):
                if len(m) != self.vertex_ranks[v] or any(len(row) != e.rank for row in m):
                    raise GroupError(f"edge {i} {side} map has the wrong shape")
        self._lattices = {}
        for i, e in enumerate(self.edges):
            try:
                self._lattices[(i, 1)] = _Lattice(e.dst_map, self.vertex_ranks[e.dst], e.rank)
                self._lattices[(i, -1)] = _Lattice(e.src_map, self.vertex_ranks[e.src], e.rank)
            except GroupError as exc:
                raise GroupError(f"edge {i}: {exc}") from None
        self._check_tree()
        self.nontree = [i for i in range(len(self.edges)) if i not in self.tree]
        vn = vertex_names or [[f"v{v}_{i}" for i in range(r)] for v, r in enumerate(self.vertex_ranks)]
        self.vertex_names = [list(x) for x in vn]
        self.names = [n for names in self.vertex_names for n in names] + [f"t{i}" for i in self.nontree]
        self._gen_table = [(v, i) for v, r in enumerate(self.vertex_ranks) for i in range(r)]
        self._gen_table += [("t", i) for i in self.nontree]

    def __repr__(self):
        return f"GraphOfGroups({len(self.vertex_ranks)} vertices, {len(self.edges)} edges)"

    def _check_tree(self):
        nv = len(self.vertex_ranks)
        adj = {v: [] for v in range(nv)}
        for i in self.tree:
            if not 0 <= i < len(self.edges):
                raise GroupError(f"tree edge {i} out of range")
            e = self.edges[i]
            adj[e.src].append(((i, 1), e.dst))
            adj[e.dst].append(((i, -1), e.src))
        if len(self.tree) != nv - 1:
            raise GroupError("spanning tree must have exactly |V|-1 edges")
        paths = {self.base: ()}
        stack = [self.base]
        while stack:
            v = stack.pop()
            for oe, w in adj[v]:
                if w not in paths:
                    paths[w] = paths[v] + (oe,)
                    stack.append(w)
        if len(paths) != nv:
            raise GroupError("tree does not span the graph")
        self.geodesics = paths

    def origin(self, oe):
        e = self.edges[oe[0]]
        return e.src if oe[1] > 0 else e.dst

    def terminus(self, oe):
        e = self.edges[oe[0]]
        return e.dst if oe[1] > 0 else e.src

    def edge_map(self, oe):
        """Matrix of phi_e (into the terminus of the oriented edge)."""
        e = self.edges[oe[0]]
        return e.dst_map if oe[1] > 0 else e.src_map

    def _zero(self, v):
        return (0,) * self.vertex_ranks[v]

    def _identity(self):
        return (self._zero(self.base), ())

    def _reduce(self, g0, pairs):
        pending = tuple(pairs[-1][1]) if pairs else tuple(g0)
        suffix = []
        for i in range(len(pairs) - 1, -1, -1):
            oe = pairs[i][0]
            prev = tuple(pairs[i - 1][1]) if i > 0 else tuple(g0)
            r, s = self._lattices[oe].reduce(pending)
            back = _matvec(self.edge_map((oe[0], -oe[1])), r, self.vertex_ranks[self.origin(oe)])
            if not any(s) and suffix and suffix[0][0] == (oe[0], -oe[1]):
                s1 = suffix.pop(0)[1]
                pending = tuple(a + b + c for a, b, c in zip(prev, back, s1))
            else:
                suffix.insert(0, (oe, s))
                pending = tuple(a + b for a, b in zip(prev, back))
        return (pending, tuple(suffix))

    def _check_path(self, g0, pairs):
        at = self.base
        if len(g0) != self.vertex_ranks[at]:
            raise GroupError("initial vertex element has wrong length")
        for pos, (oe, g) in enumerate(pairs):
            if self.origin(oe) != at:
                raise GroupError(f"path condition violated at position {pos}: edge {oe} does not start at vertex {at}")
            at = self.terminus(oe)
            if len(g) != self.vertex_ranks[at]:
                raise GroupError(f"vertex element at position {pos} has wrong length")
        if at != self.base:
            raise GroupError("loop does not return to the base vertex")

    def loop(self, g0, pairs) -> GroupElement:
        """Normal form of an explicit loop word."""
        pairs = [(tuple(oe), tuple(g)) for oe, g in pairs]
        self._check_path(tuple(g0), pairs)
        return self._elem(self._reduce(tuple(g0), pairs))

    def _letter(self, a):
        kind, i = self._gen_table[abs(a) - 1]
        if kind == "t":
            e = self.edges[i]
            pre = self.geodesics[e.src]
            post = _reverse_path(self.geodesics[e.dst])
            oes = list(pre) + [(i, 1)] + list(post)
            pairs = [(oe, self._zero(self.terminus(oe))) for oe in oes]
            data = self._reduce(self._zero(self.base), pairs)
        else:
            v = kind
            vec = [0] * self.vertex_ranks[v]
            vec[i] = 1
            path = self.geodesics[v]
            if not path:
                data = (tuple(vec), ())
            else:
                pairs = [(oe, self._zero(self.terminus(oe))) for oe in path]
                pairs[-1] = (pairs[-1][0], tuple(vec))
                pairs += [(oe, self._zero(self.terminus(oe))) for oe in _reverse_path(path)]
                data = self._reduce(self._zero(self.base), pairs)
        return data if a > 0 else self._inv(data)

    def _mul(self, g, h):
        g0, gp = g
        h0, hp = h
        if gp:
            last_oe, last = gp[-1]
            pairs = list(gp[:-1]) + [(last_oe, tuple(a + b for a, b in zip(last, h0)))] + list(hp)
            return self._reduce(g0, pairs)
        return self._reduce(tuple(a + b for a, b in zip(g0, h0)), list(hp))

    def _inv(self, g):
        g0, gp = g
        if not gp:
            return (tuple(-a for a in g0), ())
        elems = [g0] + [x for _, x in gp]
        oes = [oe for oe, _ in gp]
        new0 = tuple(-a for a in elems[-1])
        pairs = []
        for k in range(len(oes) - 1, -1, -1):
            oe = oes[k]
            pairs.append(((oe[0], -oe[1]), tuple(-a for a in elems[k])))
        return self._reduce(new0, pairs)

    def sort_key(self, g):
        return (len(g.data[1]), g.data)

    def to_word(self, g):
        raise GroupError("graph-of-groups elements are loop words; use .data")

    def format(self, g):
        g0, pairs = g.data
        parts = [str(list(g0))]
        for (i, s), x in pairs:
            parts.append(f"t{i}" + ("" if s > 0 else "^-1"))
            parts.append(str(list(x)))
        return " ".join(parts)

    def random_loop(self, rng: random.Random, steps: int, radius: int = 2) -> GroupElement:
        at = self.base
        g0 = tuple(rng.randint(-radius, radius) for _ in range(self.vertex_ranks[at]))
        pairs = []
        out_edges = {}
        for i, e in enumerate(self.edges):
            out_edges.setdefault(e.src, []).append((i, 1))
            out_edges.setdefault(e.dst, []).append((i, -1))
        for _ in range(steps):
            if at not in out_edges:
                break
            oe = rng.choice(out_edges[at])
            at = self.terminus(oe)
            pairs.append((oe, tuple(rng.randint(-radius, radius) for _ in range(self.vertex_ranks[at]))))
        back = _reverse_path(self.geodesics[at])
        pairs += [(oe, self._zero(self.terminus(oe))) for oe in back]
        return self.loop(g0, pairs)


def _reverse_path(path):
    return tuple((i, -s) for i, s in reversed(path))


def _default_names(n: int) -> list[str]:
    base = "xyzwuvst"
    if n <= len(base):
        return list(base[:n])
    return [f"x{i}" for i in range(n)]


def klein_bottle_group() -> PolyZ:
    """<a, b | b a b^-1 = a^-1> with a in the bottom layer."""
    return PolyZ([[], [(-1,)]], [[], [(-1,)]], names=["a", "b"])


def heisenberg_group() -> PolyZ:
    """Layers z, x, y with [x, z] = [y, z] = 1 and y x y^-1 = x z."""
    return PolyZ(
        [[], [(1,)], [(1,), (2, 1)]],
        [[], [(1,)], [(1,), (2, -1)]],
        names=["z", "x", "y"],
    )


def cyclic_group(n: int) -> FiniteExtension:
    """The finite cyclic group of order n as an extension of the trivial group."""
    triv = FreeAbelian(0)
    table = [[(q + r) % n for r in range(n)] for q in range(n)]
    return FiniteExtension(triv, table, [[] for _ in range(n)],
                           quotient_names=[f"u{q}" if q > 1 else "u" for q in range(1, n)])

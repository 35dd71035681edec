"""Graphs of rings: tree and based presentations, normal forms, embedding checks.

Conventions.  An oriented edge is ``(index, sign)``; ``(i, -1)`` is the
reverse of ``(i, 1)``.  ``phi_e`` lands in the ring of the terminus of
``e`` and the edge relation is ``t_e phi_e(r) t_e^{-1} = phi_ebar(r)``, the
form in which every word is a path.  For an HNN extension with stable
letter ``t`` this reads ``t phi_1(a) t^{-1} = phi_0(a)``: a coefficient is
pushed left through ``t`` by writing it in the ``phi_1`` basis ``{1} + Y``
and through ``t^{-1}`` in the ``phi_0`` basis ``{1} + X``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Hashable, Sequence

from .errors import InputError, ResourceExceeded
from .group_algebra import GroupAlgebra, GroupAlgebraElement
from .groups import FreeAbelian, GraphOfGroups


class BasisEnumerationExceeded(ResourceExceeded):
    def __init__(self, detail: str = "", limit=None):
        msg = "basis enumeration exceeded" + (f": {detail}" if detail else "")
        super().__init__(msg, ceiling="basis_depth", limit=limit)


class PathError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


# ---------------------------------------------------------------- module bases


class ModuleBasis:
    """A left basis ``{1} + X`` of a ring ``B`` over ``phi(A)``.

    ``coords(b)`` returns ``{index: a}`` with ``b = sum phi(a) * element(index)``;
    ``one`` is the index of the basis element 1.
    """

    def __init__(self, ring, sub, phi: Callable, element: Callable, coords: Callable,
                 one: Hashable = 0, label: Callable | None = None, name: str = "X"):
        self.ring = ring
        self.sub = sub
        self.phi = phi
        self.element = element
        self.coords = coords
        self.one = one
        self.label = label or (lambda i: f"{name}{i}")
        self.name = name


def polynomial_basis(ring, depth: int = 64, name: str = "x") -> ModuleBasis:
    """The monomials ``1, t, t^2, ...`` of a one-variable polynomial ring over its base field."""
    base = ring.below

    def coords(b):
        if not b.is_polynomial():
            raise BasisEnumerationExceeded("element has a denominator", depth)
        out = {}
        for k, c in b.num.c.items():
            if k < 0 or k > depth:
                raise BasisEnumerationExceeded(f"monomial of degree {k} outside 0..{depth}", depth)
            out[k] = c
        return out

    def label(i):
        return "1" if i == 0 else (name if i == 1 else f"{name}^{i}")

    return ModuleBasis(ring, base, ring.from_scalar, ring.t, coords, 0, label, name)


def identity_basis(ring, name: str = "X") -> ModuleBasis:
    """``B`` over itself: the basis is ``{1}`` and ``X`` is empty."""
    return ModuleBasis(ring, ring, lambda a: a, lambda i: ring.one,
                       lambda b: {} if ring.is_zero(b) else {0: b}, 0, lambda i: "1", name)


def lattice_basis(vertex: GroupAlgebra, edge: GroupAlgebra, matrix, lattice, name: str = "X") -> ModuleBasis:
    """Coset representatives of a free-abelian edge group inside a vertex group.

    Coordinates are exact on the group algebra; they are the restriction of
    a basis of the vertex division ring over the edge division closure.
    """
    Vg, Eg = vertex.group, edge.group
    nrows = Vg.rank

    def phi_vec(r):
        return tuple(sum(matrix[i][j] * r[j] for j in range(len(r))) for i in range(nrows))

    def phi(a):
        if isinstance(a, GroupAlgebraElement):
            return vertex.element({Vg.from_vector(phi_vec(g.data)): c for g, c in a.terms.items()})
        return vertex.scalar(a)

    def coords(b):
        if not isinstance(b, GroupAlgebraElement):
            raise BasisEnumerationExceeded("coordinates are defined on group-algebra elements")
        out: dict = {}
        for g, c in b.terms.items():
            r, s = lattice.reduce(g.data)
            out.setdefault(s, {})
            key = Eg.from_vector(r)
            out[s][key] = out[s].get(key, edge.field.zero) + c
        return {s: edge.element(t) for s, t in out.items() if any(not edge.field.is_zero(v) for v in t.values())}

    def element(s):
        return vertex.monomial(Vg.from_vector(s))

    return ModuleBasis(vertex, edge, phi, element, coords, (0,) * nrows, lambda s: f"{name}{list(s)}", name)


def _add(R, d: dict, key, value):
    if key in d:
        v = d[key] + value
        if R.is_zero(v):
            del d[key]
        else:
            d[key] = v
    elif not R.is_zero(value):
        d[key] = value


def raw_product(*factors):
    """Distribute a product of sums; each factor is a list of letter lists."""
    out = [[]]
    for f in factors:
        out = [a + list(b) for a in out for b in f]
    return out


def _word_key(w):
    return (len(w), [repr(x) for x in w])


# ---------------------------------------------------------------- amalgams


def amalgam_module_form(raw, B: ModuleBasis, C: ModuleBasis) -> dict:
    """Coordinates of a sum of words over the left ``A``-basis of alternating sequences."""
    A = B.sub
    if C.sub is not A:
        raise InputError("both factors must share the amalgamated subring")
    bases = {"B": B, "C": C}
    total: dict = {}
    for term in raw:
        state = {(): A.one}
        for side, x in reversed(list(term)):
            if side not in bases:
                raise InputError(f"unknown letter side {side!r} in an amalgam word")
            S = bases[side]
            nxt: dict = {}
            for seq, a in state.items():
                y = x * S.phi(a)
                rest = seq
                if seq and seq[0][0] == side:
                    y = y * S.element(seq[0][1])
                    rest = seq[1:]
                for idx, c in S.coords(y).items():
                    key = rest if idx == S.one else ((side, idx),) + rest
                    _add(A, nxt, key, c)
            state = nxt
        for seq, a in state.items():
            _add(A, total, seq, a)
    return total


def amalgam_normal_form(raw, B: ModuleBasis, C: ModuleBasis) -> list:
    """Left ``B``-module normal form: basis words not beginning with ``X``."""
    R = B.ring
    out: dict = {}
    for seq, a in amalgam_module_form(raw, B, C).items():
        c = B.phi(a)
        if seq and seq[0][0] == "B":
            c = c * B.element(seq[0][1])
            seq = seq[1:]
        _add(R, out, seq, c)
    return sorted(out.items(), key=lambda kv: _word_key(kv[0]))


def format_sequence(seq, B: ModuleBasis, C: ModuleBasis) -> str:
    if not seq:
        return "1"
    return "*".join((B if side == "B" else C).label(i) for side, i in seq)


def free_algebra_certificate(B: ModuleBasis, C: ModuleBasis, letters=("x", "y"), depth: int = 6) -> dict:
    """Alternating basis sequences of total degree ``<= depth`` against free-algebra monomials.

    Every monomial word, multiplied out through the amalgam normal form,
    must land on exactly one basis sequence with coefficient 1, and the
    sequence count must match the number of monomials.
    """
    seqs = [()]
    frontier = [((), 0, None)]
    while frontier:
        nxt = []
        for seq, deg, last in frontier:
            for side in ("B", "C"):
                if side == last:
                    continue
                for i in range(1, depth - deg + 1):
                    s = seq + ((side, i),)
                    seqs.append(s)
                    nxt.append((s, deg + i, side))
        frontier = nxt
    gen = {"B": (letters[0], B.element(1)), "C": (letters[1], C.element(1))}
    words = [""]
    for n in range(1, depth + 1):
        words = words + [w + ch for w in words if len(w) == n - 1 for ch in letters]
    to_mono = {}
    for s in seqs:
        to_mono[s] = "".join(gen[side][0] * i for side, i in s)
    monomials = set(words)
    bijective = len(set(to_mono.values())) == len(seqs) and set(to_mono.values()) == monomials
    back = {}
    A = B.sub
    for w in words:
        raw = [[("B" if ch == letters[0] else "C", gen["B" if ch == letters[0] else "C"][1]) for ch in w]]
        form = amalgam_module_form(raw, B, C)
        ok = len(form) == 1 and list(form.values())[0] == A.one
        back[w] = list(form)[0] if ok else None
    coordinates_ok = all(back[w] is not None and to_mono[back[w]] == w for w in words)
    return {"depth": depth, "basis_size": len(seqs), "expected": 2 ** (depth + 1) - 1,
            "monomials": len(monomials), "bijective": bijective and coordinates_ok}


# ---------------------------------------------------------------- HNN extensions


def hnn_syllable_form(raw, X: ModuleBasis, Y: ModuleBasis) -> dict:
    """Reduced syllable words ``t^e1 z1 t^e2 z2 ...`` with left ``B``-coefficients.

    ``z_i`` is a ``Y`` index after ``t`` and an ``X`` index after ``t^{-1}``.
    """
    R = X.ring
    if Y.ring is not R or Y.sub is not X.sub:
        raise InputError("both edge bases must describe the same ring over the same edge ring")
    basis = {1: Y, -1: X}
    push = {1: X.phi, -1: Y.phi}
    total: dict = {}
    for term in raw:
        state = {(): R.one}
        for kind, x in reversed(list(term)):
            if kind == "B":
                state = {w: x * c for w, c in state.items()}
                state = {w: c for w, c in state.items() if not R.is_zero(c)}
                continue
            if kind != "t" or x not in (1, -1):
                raise InputError(f"bad HNN letter {(kind, x)!r}")
            e = x
            nxt: dict = {}
            for w, c in state.items():
                for idx, a in basis[e].coords(c).items():
                    coeff = push[e](a)
                    if idx == basis[e].one and w and w[0][0] == -e:
                        z = basis[-e].element(w[0][1])
                        _add(R, nxt, w[1:], coeff * z)
                    else:
                        _add(R, nxt, ((e, idx),) + w, coeff)
            state = nxt
        for w, c in state.items():
            _add(R, total, w, c)
    return total


def linked_tokens(word, X: ModuleBasis, Y: ModuleBasis) -> tuple:
    """Regroup a syllable word into the four letter classes of a linked expression.

    Classes: ``X``, ``Xt-`` (``x t^-1``, or ``t^-1`` alone), ``tY`` (``t y``,
    or ``t`` alone) and ``tYt-``.
    """
    syms = []
    for e, z in word:
        syms.append(("t", e))
        if (e == 1 and z != Y.one) or (e == -1 and z != X.one):
            syms.append(("Y" if e == 1 else "X", z))
    out = []
    i = 0
    while i < len(syms):
        s = syms[i]
        if s == ("t", 1):
            if i + 1 < len(syms) and syms[i + 1][0] == "Y":
                y = syms[i + 1][1]
                if i + 2 < len(syms) and syms[i + 2] == ("t", -1):
                    out.append(("tYt-", y))
                    i += 3
                else:
                    out.append(("tY", y))
                    i += 2
            else:
                out.append(("tY", None))
                i += 1
        elif s == ("t", -1):
            out.append(("Xt-", None))
            i += 1
        else:
            x = s[1]
            if i + 1 < len(syms) and syms[i + 1] == ("t", -1):
                out.append(("Xt-", x))
                i += 2
            else:
                out.append(("X", x))
                i += 1
    return tuple(out)


_SIGNS = {"X": ("-", "+"), "Xt-": ("-", "-"), "tY": ("+", "+"), "tYt-": ("+", "-")}


def is_linked_expression(tokens) -> bool:
    """Adjacent tokens must agree on the sign between them; ``X`` and ``Xt-`` cannot lead,
    except for the bare ``t^-1``."""
    if tokens:
        kind, z = tokens[0]
        if kind == "X" or (kind == "Xt-" and z is not None):
            return False
    for a, b in zip(tokens, tokens[1:]):
        if _SIGNS[a[0]][1] != _SIGNS[b[0]][0]:
            return False
    for kind, z in tokens:
        if kind == "tYt-" and z is None:
            return False
    return True


def format_tokens(tokens, X: ModuleBasis, Y: ModuleBasis) -> str:
    parts = []
    for kind, z in tokens:
        if kind == "X":
            parts.append(X.label(z))
        elif kind == "Xt-":
            parts.append("t^-1" if z is None else f"{X.label(z)}*t^-1")
        elif kind == "tY":
            parts.append("t" if z is None else f"t*{Y.label(z)}")
        else:
            parts.append(f"t*{Y.label(z)}*t^-1")
    return "*".join(parts) if parts else "1"


def hnn_normal_form(raw, X: ModuleBasis, Y: ModuleBasis) -> list:
    """Left ``B``-module normal form over linked expressions, as ``(tokens, coefficient)``."""
    form = hnn_syllable_form(raw, X, Y)
    out = [(linked_tokens(w, X, Y), c) for w, c in form.items()]
    return sorted(out, key=lambda kv: _word_key(kv[0]))


def linked_normal_form(raw, left: ModuleBasis, right: ModuleBasis, kind: str = "amalgam") -> list:
    """Dispatch to the amalgam or HNN normal form."""
    if kind == "amalgam":
        return amalgam_normal_form(raw, left, right)
    if kind == "hnn":
        return hnn_normal_form(raw, left, right)
    raise InputError(f"unknown normal form kind {kind!r}")


# ---------------------------------------------------------------- tree and based presentations


@dataclass
class GraphOfRingsSpec:
    """Finite connected graph with vertex rings, edge rings and edge maps.

    ``edges[i] = (src, dst)``; ``edge_maps[(i, s)]`` is ``phi`` of the
    oriented edge, into the ring of its terminus.
    """
    vertex_rings: list
    edges: list
    tree: Sequence[int] = ()
    base: int = 0
    edge_rings: list = dc_field(default_factory=list)
    edge_maps: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        nv = len(self.vertex_rings)
        self.tree = frozenset(self.tree)
        if not 0 <= self.base < nv:
            raise InputError("base vertex out of range")
        for i, (s, d) in enumerate(self.edges):
            if not (0 <= s < nv and 0 <= d < nv):
                raise InputError(f"edge {i} has an endpoint out of range")
        if len(self.tree) != nv - 1 or any(not 0 <= i < len(self.edges) for i in self.tree):
            raise InputError("spanning tree must consist of |V|-1 edges")
        adj = {v: [] for v in range(nv)}
        for i in self.tree:
            s, d = self.edges[i]
            adj[s].append(((i, 1), d))
            adj[d].append(((i, -1), s))
        paths = {self.base: ()}
        stack = [self.base]
        while stack:
            v = stack.pop()
            for oe, w in adj[v]:
                if w not in paths:
                    paths[w] = paths[v] + (oe,)
                    stack.append(w)
        if len(paths) != nv:
            raise InputError("tree does not span the graph")
        self.geodesics = paths
        for (i, s), phi in self.edge_maps.items():
            R = self.edge_rings[i]
            sample = [R.one] + list(getattr(R, "gens", lambda: [])())
            imgs = [phi(r) for r in sample]
            T = self.vertex_rings[self.terminus((i, s))]
            if any(T.is_zero(x) for x in imgs) or len(set(map(repr, imgs))) != len(imgs):
                raise InputError(f"edge map of {(i, s)} is not injective on the generators")

    def origin(self, oe):
        s, d = self.edges[oe[0]]
        return s if oe[1] > 0 else d

    def terminus(self, oe):
        s, d = self.edges[oe[0]]
        return d if oe[1] > 0 else s

    def gamma(self, v) -> list:
        return [("t", oe) for oe in self.geodesics[v]]

    def element(self, terms, presentation: str) -> "GraphRingElement":
        return GraphRingElement(self, terms, presentation)

    def vertex(self, v, r, presentation: str = "tree") -> "GraphRingElement":
        w = [("r", v, r)]
        if presentation == "based":
            w = self.gamma(v) + w + _inverse_letters(self.gamma(v))
        return GraphRingElement(self, {tuple(w): 1}, presentation)

    def loop(self, r0, steps, check: bool = True) -> "GraphRingElement":
        """The loop element ``r_0 t_{e_1} r_1 ... t_{e_n} r_n``; ``steps`` are ``(oe, r_i)`` pairs."""
        w = [("r", self.base, r0)]
        for oe, r in steps:
            w.append(("t", tuple(oe)))
            w.append(("r", self.terminus(tuple(oe)), r))
        if check:
            self.check_loop(w)
        return GraphRingElement(self, {tuple(w): 1}, "based")

    def random_loop(self, rng, steps: int, element: Callable | None = None) -> "GraphRingElement":
        """A random walk of ``steps`` edges from the base, closed up along the tree geodesic.

        ``element(rng, v)`` draws the ring element placed at vertex ``v``;
        by default it is ``vertex_rings[v].random_element(rng)``.
        """
        draw = element or (lambda r, v: self.vertex_rings[v].random_element(r))
        out_edges = {v: [] for v in range(len(self.vertex_rings))}
        for i, (s, d) in enumerate(self.edges):
            out_edges[s].append((i, 1))
            out_edges[d].append((i, -1))
        at = self.base
        path = []
        for _ in range(steps):
            oe = rng.choice(out_edges[at])
            path.append(oe)
            at = self.terminus(oe)
        path += [oe for _, oe in _inverse_letters(self.gamma(at))]
        return self.loop(draw(rng, self.base), [(oe, draw(rng, self.terminus(oe))) for oe in path])

    def check_loop(self, word):
        at = self.base
        for pos, letter in enumerate(word):
            if letter[0] == "r":
                if letter[1] != at:
                    raise PathError(f"ring element from vertex {letter[1]} but the path is at vertex {at}", pos)
            else:
                oe = letter[1]
                if not 0 <= oe[0] < len(self.edges) or oe[1] not in (1, -1):
                    raise PathError(f"unknown oriented edge {oe!r}", pos)
                if self.origin(oe) != at:
                    raise PathError(f"edge {oe} does not start at vertex {at}", pos)
                at = self.terminus(oe)
        if at != self.base:
            raise PathError("loop does not return to the base vertex", len(word))


def _inverse_letters(letters):
    return [("t", (oe[0], -oe[1])) for _, oe in reversed(letters)]


def _reduce_word(spec: GraphOfRingsSpec, word, drop_tree: bool):
    out: list = []
    for letter in word:
        if letter[0] == "r":
            _, v, r = letter
            R = spec.vertex_rings[v]
            if R.is_zero(r):
                return None
            if out and out[-1][0] == "r" and out[-1][1] == v:
                r = out.pop()[2] * r
                if R.is_zero(r):
                    return None
            if r == R.one:
                continue
            out.append(("r", v, r))
        else:
            oe = tuple(letter[1])
            if drop_tree and oe[0] in spec.tree:
                continue
            if out and out[-1][0] == "t" and out[-1][1] == (oe[0], -oe[1]):
                out.pop()
                continue
            out.append(("t", oe))
    return tuple(out)


class GraphRingElement:
    """A sum of words in vertex-ring elements and edge letters, in one of two presentations.

    Words are reduced by multiplying adjacent elements of the same vertex
    ring, cancelling ``t_e t_ebar`` and, in the tree presentation, deleting
    tree letters.
    """

    def __init__(self, spec: GraphOfRingsSpec, terms: dict, presentation: str):
        if presentation not in ("tree", "based"):
            raise InputError(f"unknown presentation {presentation!r}")
        self.spec = spec
        self.presentation = presentation
        out: dict = {}
        for w, c in terms.items():
            rw = _reduce_word(spec, w, presentation == "tree")
            if rw is None or c == 0:
                continue
            out[rw] = out.get(rw, 0) + c
            if out[rw] == 0:
                del out[rw]
        self.terms = out

    def _same(self, other):
        if not isinstance(other, GraphRingElement) or other.spec is not self.spec:
            raise InputError("graph-of-rings elements from different specs")
        if other.presentation != self.presentation:
            raise InputError("cannot mix the tree and based presentations; translate first")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return GraphRingElement(self.spec, t, self.presentation)

    def __mul__(self, other):
        self._same(other)
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                t[w1 + w2] = t.get(w1 + w2, 0) + c1 * c2
        return GraphRingElement(self.spec, t, self.presentation)

    def __eq__(self, other):
        return (isinstance(other, GraphRingElement) and other.spec is self.spec
                and other.presentation == self.presentation and other.terms == self.terms)

    def __hash__(self):
        return hash((self.presentation, frozenset(self.terms.items())))

    def is_loop_sum(self) -> bool:
        try:
            for w in self.terms:
                self.spec.check_loop(w)
        except PathError:
            return False
        return True

    def __repr__(self):
        def fmt(w):
            parts = []
            for letter in w:
                if letter[0] == "r":
                    parts.append(f"[{letter[2]}]_{letter[1]}")
                else:
                    i, s = letter[1]
                    parts.append(f"t{i}" if s > 0 else f"t{i}^-1")
            return " ".join(parts) or "1"
        if not self.terms:
            return "0"
        return " + ".join((f"{c}*" if c != 1 else "") + fmt(w) for w, c in self.terms.items())


def alpha(x: GraphRingElement) -> GraphRingElement:
    """Based to tree presentation: the projection killing tree letters."""
    if x.presentation != "based":
        raise InputError("alpha expects an element of the based presentation")
    for w in x.terms:
        x.spec.check_loop(w)
    return GraphRingElement(x.spec, x.terms, "tree")


def beta(x: GraphRingElement) -> GraphRingElement:
    """Tree to based presentation, conjugating by the tree geodesics ``gamma_v``."""
    if x.presentation != "tree":
        raise InputError("beta expects an element of the tree presentation")
    S = x.spec
    out: dict = {}
    for w, c in x.terms.items():
        nw: list = []
        for letter in w:
            if letter[0] == "r":
                g = S.gamma(letter[1])
                nw += g + [letter] + _inverse_letters(g)
            else:
                oe = letter[1]
                nw += S.gamma(S.origin(oe)) + [letter] + _inverse_letters(S.gamma(S.terminus(oe)))
        out[tuple(nw)] = out.get(tuple(nw), 0) + c
    return GraphRingElement(S, out, "based")


def translate_tree_base(x: GraphRingElement) -> GraphRingElement:
    """Move an element to the other presentation."""
    return alpha(x) if x.presentation == "based" else beta(x)


# ---------------------------------------------------------------- group algebras of graphs of groups


class GraphGroupRings:
    """Vertex and edge group algebras of a graph of groups with at most one edge.

    A loop edge gives an HNN extension and a tree edge an amalgam, each
    with the coset-representative bases of the edge groups.
    """

    def __init__(self, G: GraphOfGroups, field):
        if len(G.edges) > 1:
            raise InputError("embedding checks support graphs with at most one edge")
        self.G = G
        self.field = field
        self.vgroups = [FreeAbelian(r, names) for r, names in zip(G.vertex_ranks, G.vertex_names)]
        self.valg = [GroupAlgebra(field, V) for V in self.vgroups]
        self.kind = "vertex"
        if G.edges:
            e = G.edges[0]
            E = FreeAbelian(e.rank, [f"s{i}" for i in range(e.rank)] if e.rank else None)
            self.ealg = GroupAlgebra(field, E)
            # basis on the terminal side of (0, 1) uses phi_e, on the origin side phi_ebar
            self.dst_basis = lattice_basis(self.valg[e.dst], self.ealg, e.dst_map, G._lattices[(0, 1)], "Y")
            self.src_basis = lattice_basis(self.valg[e.src], self.ealg, e.src_map, G._lattices[(0, -1)], "X")
            self.kind = "hnn" if 0 not in G.tree else "amalgam"
        self._towers: dict = {}

    def tower(self, v):
        from .tower import PolyZTower
        if v not in self._towers:
            self._towers[v] = PolyZTower(self.vgroups[v], self.field)
        return self._towers[v]

    def vertex_monomial(self, v, vec):
        return self.valg[v].monomial(self.vgroups[v].from_vector(vec))

    def raw_word(self, g, c=1) -> list:
        g0, pairs = g.data
        base = self.G.base
        if self.kind == "hnn":
            letters = [("B", self.vertex_monomial(base, g0) * self.field(c))]
            for oe, x in pairs:
                letters.append(("t", oe[1]))
                letters.append(("B", self.vertex_monomial(base, x)))
            return letters
        side = {base: "B"}
        if self.kind == "amalgam":
            e = self.G.edges[0]
            side[e.dst if e.src == base else e.src] = "C"
        letters = [(side[base], self.vertex_monomial(base, g0) * self.field(c))]
        for oe, x in pairs:
            v = self.G.terminus(oe)
            letters.append((side[v], self.vertex_monomial(v, x)))
        return letters

    def bases(self):
        """``(left, right)`` bases for the normal form."""
        e = self.G.edges[0]
        if self.kind == "hnn":
            return self.src_basis, self.dst_basis
        base = self.G.base
        if e.src == base:
            return self.src_basis, self.dst_basis
        return self.dst_basis, self.src_basis

    def normal_form(self, x: GroupAlgebraElement) -> list:
        if self.kind == "vertex":
            raise InputError("a graph without edges has no linked normal form")
        raw = [self.raw_word(g, c) for g, c in x.terms.items()]
        left, right = self.bases()
        return linked_normal_form(raw, left, right, self.kind)

    def image_is_nonzero(self, x: GroupAlgebraElement) -> tuple[bool, Any]:
        """Nonzero test in the graph of division rings; returns ``(nonzero, evidence)``."""
        base = self.G.base
        T = self.tower(base)
        if self.kind == "vertex":
            y = self.valg[base].element({self.vgroups[base].from_vector(g.data[0]): c for g, c in x.terms.items()})
            img = T.embed(y)
            return not T.top.is_zero(img), img
        nf = self.normal_form(x)
        for w, c in nf:
            if not T.top.is_zero(T.embed(c)):
                return True, nf
        return False, nf


def embed_injectivity_fuzz(G: GraphOfGroups, field, trials: int = 100, seed: int = 0,
                           support: int = 4, radius: int = 2, steps: int = 3) -> dict:
    """Random nonzero elements of ``kG`` must have nonzero image in the graph of division rings.

    Any zero image is reported as a kernel witness.
    """
    rings = GraphGroupRings(G, field)
    A = GroupAlgebra(field, G)
    rng = random.Random(seed)
    witnesses = []
    done = 0
    while done < trials:
        terms = {}
        for _ in range(rng.randint(1, support)):
            g = G.random_loop(rng, rng.randint(0, steps), radius)
            c = rng.choice(field.sample())
            terms[g] = terms.get(g, field.zero) + c
        x = A.element(terms)
        if A.is_zero(x):
            continue
        done += 1
        ok, evidence = rings.image_is_nonzero(x)
        if not ok:
            witnesses.append({"element": repr(x), "normal_form": repr(evidence)})
    return {"trials": trials, "seed": seed, "kind": rings.kind, "support": support,
            "nonzero_images": trials - len(witnesses), "witnesses": witnesses,
            "outcome": "injective on samples" if not witnesses else "kernel witness found"}

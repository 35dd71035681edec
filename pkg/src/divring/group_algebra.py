"""Group algebras kG with finite support, matrices over them, and Fox calculus."""

from __future__ import annotations

import json
import random
from typing import Iterable, Sequence

from .errors import InputError
from .groups import GroupElement, GroupError, GroupSpec, cyclically_reduce, free_reduce


class GroupAlgebra:
    """The group algebra k[G] for an exact field k."""

    def __init__(self, field, group: GroupSpec):
        self.field = field
        self.group = group

    def __repr__(self):
        return f"{self.field!r}[{self.group!r}]"

    def __eq__(self, other):
        return isinstance(other, GroupAlgebra) and other.field == self.field and other.group is self.group

    def __hash__(self):
        return hash((self.field, id(self.group)))

    def element(self, terms) -> "GroupAlgebraElement":
        """Build from a mapping or an iterable of ``(coefficient, group element)``."""
        acc = {}
        items = terms.items() if isinstance(terms, dict) else ((g, c) for c, g in terms)
        F = self.field
        for g, c in items:
            self.group._check(g)
            c = F(c)
            acc[g] = acc.get(g, F.zero) + c
        return GroupAlgebraElement(self, {g: c for g, c in acc.items() if not F.is_zero(c)})

    def monomial(self, g: GroupElement, c=1) -> "GroupAlgebraElement":
        return self.element({g: c})

    def scalar(self, c) -> "GroupAlgebraElement":
        return self.monomial(self.group.identity(), c)

    def from_word(self, raw: Sequence[int], c=1) -> "GroupAlgebraElement":
        return self.monomial(self.group.normal_form(raw), c)

    @property
    def zero(self):
        return GroupAlgebraElement(self, {})

    @property
    def one(self):
        return self.scalar(1)

    def is_zero(self, x) -> bool:
        return not x.terms

    def gens(self):
        return [self.monomial(g) for g in self.group.gens()]

    def random_element(self, rng: random.Random, support: int, radius: int = 2, coeffs=None):
        """Random element with support size uniform in [1, support]."""
        coeffs = coeffs or self.field.sample()
        pool = self.group.ball(radius)
        k = rng.randint(1, min(support, len(pool)))
        return self.element({g: rng.choice(coeffs) for g in rng.sample(pool, k)})

    def augmentation(self, x) -> object:
        total = self.field.zero
        for c in x.terms.values():
            total = total + c
        return total


class GroupAlgebraElement:
    """Finite sum of field multiples of group elements."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: GroupAlgebra, terms: dict):
        self.parent = parent
        self.terms = terms

    def _same(self, other):
        if isinstance(other, GroupAlgebraElement):
            if other.parent != self.parent:
                raise GroupError("group algebra mismatch")
            return other
        return self.parent.scalar(other)

    def __add__(self, other):
        other = self._same(other)
        F = self.parent.field
        out = dict(self.terms)
        for g, c in other.terms.items():
            v = out.get(g, F.zero) + c
            if F.is_zero(v):
                out.pop(g, None)
            else:
                out[g] = v
        return GroupAlgebraElement(self.parent, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupAlgebraElement(self.parent, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            c = self.parent.field(other)
            if self.parent.field.is_zero(c):
                return self.parent.zero
            return GroupAlgebraElement(self.parent, {g: v * c for g, v in self.terms.items()})
        return ga_multiply(self, other)

    def __rmul__(self, other):
        c = self.parent.field(other)
        if self.parent.field.is_zero(c):
            return self.parent.zero
        return GroupAlgebraElement(self.parent, {g: c * v for g, v in self.terms.items()})

    def __pow__(self, n: int):
        result = self.parent.one
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return self.parent == other.parent and self.terms == other.terms
        try:
            return self == self.parent.scalar(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def support(self) -> list[GroupElement]:
        return sorted(self.terms, key=self.parent.group.sort_key)

    def sorted_terms(self):
        return [(g, self.terms[g]) for g in self.support()]

    def coefficient(self, g: GroupElement):
        return self.terms.get(g, self.parent.field.zero)

    def to_json(self):
        F = self.parent.field
        return [[list(g.word()) if _wordable(g) else _data(g), F.to_json(c)] for g, c in self.sorted_terms()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for g, c in self.sorted_terms():
            gs = repr(g)
            if g.is_identity():
                parts.append(str(c))
            elif c == 1:
                parts.append(gs)
            elif c == -1:
                parts.append("-" + gs)
            else:
                parts.append(f"{c}*{gs}")
        return " + ".join(parts).replace("+ -", "- ")


def _wordable(g):
    try:
        g.word()
        return True
    except GroupError:
        return False


def _data(g):
    return json.loads(json.dumps(g.data, default=list))


def ga_multiply(f: GroupAlgebraElement, g: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution product, collecting terms in normal form."""
    if f.parent != g.parent:
        raise GroupError("group algebra mismatch")
    F = f.parent.field
    out = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            h = a * b
            v = out.get(h, F.zero) + ca * cb
            out[h] = v
    return GroupAlgebraElement(f.parent, {h: c for h, c in out.items() if not F.is_zero(c)})


def evaluate_word(algebra_or_ring, images, word):
    """Image of a signed word under generator images with inverses supplied lazily."""
    R = algebra_or_ring
    result = R.one
    for a in word:
        img = images[abs(a) - 1]
        result = result * (img if a > 0 else img.inverse())
    return result


class GroupAlgebraHom:
    """Ring map k[G] -> S induced by a group map G -> S^x.

    ``image`` takes a group element and returns its image in the target;
    ``scalar`` embeds the field.
    """

    def __init__(self, source: GroupAlgebra, target, image, scalar=None, name: str = ""):
        self.source = source
        self.target = target
        self._image = image
        self._scalar = scalar or target.from_scalar
        self._cache = {}
        self.name = name

    def group_image(self, g: GroupElement):
        v = self._cache.get(g)
        if v is None:
            v = self._image(g)
            self._cache[g] = v
        return v

    def __call__(self, x: GroupAlgebraElement):
        if not isinstance(x, GroupAlgebraElement) or x.parent != self.source:
            raise InputError(f"{x!r} is not an element of {self.source!r}")
        total = self.target.zero
        for g, c in x.sorted_terms():
            total = total + self._scalar(c) * self.group_image(g)
        return total


def group_map_hom(source: GroupAlgebra, target: GroupAlgebra, gen_images: Sequence[GroupElement]):
    """k[G] -> k[H] induced by generator images; the caller vouches it is well defined."""
    H = target.group

    def image(g):
        h = H.identity()
        for a in g.word():
            img = gen_images[abs(a) - 1]
            h = h * (img if a > 0 else ~img)
        return target.monomial(h)

    return GroupAlgebraHom(source, target, image, target.scalar, name="group map")


# ---------------------------------------------------------------- matrices


class Matrix:
    """Dense matrix over a ring whose elements support + - * and whose parent
    exposes ``zero``, ``one`` and ``is_zero``."""

    def __init__(self, ring, rows: Sequence[Sequence]):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise InputError("ragged matrix rows")

    @classmethod
    def zeros(cls, ring, m: int, n: int):
        mat = cls(ring, [[ring.zero] * n for _ in range(m)])
        if m == 0:
            mat.ncols = n
        return mat

    @classmethod
    def identity(cls, ring, n: int):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise InputError(f"shape mismatch {self.shape} x {other.shape}")
        R = self.ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = R.zero
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if R.is_zero(a):
                        continue
                    b = other.rows[k][j]
                    if R.is_zero(b):
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        m = Matrix(R, out)
        m.ncols = other.ncols
        return m

    def __add__(self, other):
        if self.shape != other.shape:
            raise InputError("shape mismatch in matrix sum")
        m = Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])
        m.ncols = self.ncols
        return m

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for r in self.rows for a in r)

    def map(self, f, ring) -> "Matrix":
        rows = []
        for i, r in enumerate(self.rows):
            row = []
            for j, a in enumerate(r):
                try:
                    row.append(f(a))
                except (ArithmeticError, ValueError, KeyError) as exc:
                    raise InputError(f"entry ({i},{j}): {exc}") from exc
            rows.append(row)
        m = Matrix(ring, rows)
        m.ncols = self.ncols
        return m

    def transpose_positions(self) -> "Matrix":
        """Entrywise transpose; not a ring anti-automorphism over noncommutative rings."""
        m = Matrix(self.ring, [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])
        m.ncols = self.nrows
        return m

    def block_diag(self, other: "Matrix") -> "Matrix":
        return Matrix.block(self, Matrix.zeros(self.ring, self.nrows, other.ncols),
                            Matrix.zeros(self.ring, other.nrows, self.ncols), other)

    @staticmethod
    def block(A, C, Z, B) -> "Matrix":
        """[[A, C], [Z, B]]."""
        top = [ra + rc for ra, rc in zip(A.rows, C.rows)] if A.nrows else []
        bot = [rz + rb for rz, rb in zip(Z.rows, B.rows)] if B.nrows else []
        m = Matrix(A.ring, top + bot)
        m.ncols = A.ncols + B.ncols
        return m

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return "[" + "; ".join(", ".join(map(repr, r)) for r in self.rows) + "]"

    def to_json(self):
        return {"shape": list(self.shape), "rows": [[_entry_json(a) for a in r] for r in self.rows]}


def _entry_json(a):
    if hasattr(a, "to_json"):
        return a.to_json()
    return str(a)


# ------------------------------------------------------------- Fox calculus


def fox_derivative(A: GroupAlgebra, word: Sequence[int], j: int) -> GroupAlgebraElement:
    """d(word)/dx_j with d(uv) = du + u dv and d(x^-1) = -x^-1 (j is 1-based)."""
    G = A.group
    acc = {}
    prefix = G.identity()
    F = A.field
    for a in word:
        letter = G.normal_form([a])
        if abs(a) == j:
            if a > 0:
                acc[prefix] = acc.get(prefix, F.zero) + F.one
            else:
                h = prefix * letter
                acc[h] = acc.get(h, F.zero) - F.one
        prefix = prefix * letter
    return GroupAlgebraElement(A, {g: c for g, c in acc.items() if not F.is_zero(c)})


class ChainComplex:
    """Free chain complex C_n -> ... -> C_0 of left k[G]-modules.

    Maps act on row vectors from the right: ``differentials[p-1]`` is the
    ``dims[p] x dims[p-1]`` matrix of d_p, and a chain complex needs
    ``d_{p+1} * d_p = 0``, which is checked exactly at construction.
    """

    def __init__(self, algebra: GroupAlgebra, dims: Sequence[int], differentials: Sequence[Matrix],
                 check: bool = True):
        self.algebra = algebra
        self.dims = list(dims)
        self.differentials = list(differentials)
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise InputError("need one differential per positive degree")
        for p, d in enumerate(self.differentials, start=1):
            if d.shape != (self.dims[p], self.dims[p - 1]):
                raise InputError(f"d_{p} has shape {d.shape}, expected {(self.dims[p], self.dims[p - 1])}")
        if check:
            self.check()

    def d(self, p: int) -> Matrix | None:
        if 1 <= p <= len(self.differentials):
            return self.differentials[p - 1]
        return None

    def check(self):
        for p in range(2, len(self.dims)):
            prod = self.d(p) * self.d(p - 1)
            if not prod.is_zero():
                raise InputError(f"d_{p - 1} o d_{p} is not zero")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.dims))

    def to_json(self):
        return {"dims": self.dims, "differentials": [d.to_json() for d in self.differentials]}


def fox_complex(group: GroupSpec, field, relators: Iterable[Sequence[int]] | None = None) -> ChainComplex:
    """Presentation 2-complex: d_1 = column (x_j - 1), d_2 = Fox Jacobian."""
    A = GroupAlgebra(field, group)
    n = group.num_gens
    rels = [tuple(r) for r in (group.relators() if relators is None else relators)]
    for i, r in enumerate(rels):
        for pos, a in enumerate(r):
            if not isinstance(a, int) or a == 0 or abs(a) > n:
                raise InputError(f"relator {i}: invalid generator {a!r} at position {pos}")
        for pos in range(len(r)):
            if r[pos] == -r[(pos + 1) % len(r)] and len(r) > 1:
                raise InputError(f"relator {i} is not cyclically reduced at position {pos}")
        if not r:
            raise InputError(f"relator {i} is empty")
    d1 = Matrix(A, [[A.monomial(g) - 1] for g in group.gens()])
    d1.ncols = 1
    if not rels:
        return ChainComplex(A, [1, n], [d1])
    d2 = Matrix(A, [[fox_derivative(A, r, j) for j in range(1, n + 1)] for r in rels])
    d2.ncols = n
    return ChainComplex(A, [1, n, len(rels)], [d1, d2])


def check_reduced(word: Sequence[int]) -> bool:
    return tuple(word) == free_reduce(word) and tuple(word) == cyclically_reduce(word)

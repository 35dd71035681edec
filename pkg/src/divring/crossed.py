"""Finite crossed products D * Q over a division ring D.

``(d u_q)(d' u_r) = d alpha_q(d') f(q, r) u_{qr}`` with normalized factor
set ``f(1, q) = f(q, 1) = 1``.  Over a division ring such a ring is finite
dimensional, so it is a division ring exactly when it has no zero divisors;
inverses come from solving the left-regular linear system.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import linalg
from .errors import InputError
from .group_algebra import GroupAlgebra, GroupAlgebraElement, GroupAlgebraHom
from .groups import FiniteExtension, GroupElement
from .tower import PolyZTower


class ZeroDivisorWitness(ArithmeticError):
    """A nonzero ``v`` with ``v * x = 0``; carries both factors."""

    def __init__(self, message, left, right):
        super().__init__(message)
        self.left = left
        self.right = right


class CrossedProduct:
    """``below * Q`` for a finite group ``Q`` given by its multiplication table.

    ``action[q]`` lists the images of ``below.gens()`` under ``alpha_q``;
    ``factor[(q, r)]`` is a unit of ``below`` (missing entries mean 1).
    """

    kind = "crossed"

    def __init__(self, below, table: Sequence[Sequence[int]], action: Sequence[Sequence],
                 factor: dict | None = None, names: Sequence[str] | None = None, check: bool = True):
        self.below = below
        self.table = [list(r) for r in table]
        self.order = len(self.table)
        self.action = [list(a) for a in action]
        if len(self.action) != self.order:
            raise InputError("need one automorphism per quotient element")
        gens = below.gens()
        for q, imgs in enumerate(self.action):
            if len(imgs) != len(gens):
                raise InputError(f"action of quotient element {q} needs {len(gens)} images")
        fs = dict(factor or {})
        one = below.one
        self.factor = [[fs.get((q, r), one) for r in range(self.order)] for q in range(self.order)]
        self.names = ["1"] + (list(names) if names else [f"u{q}" for q in range(1, self.order)])
        self._inv_q = []
        for q in range(self.order):
            inv = [r for r in range(self.order) if self.table[q][r] == 0]
            if len(inv) != 1:
                raise InputError("quotient table is not a group")
            self._inv_q.append(inv[0])
        self._alpha_cache: dict = {}
        if check:
            self._validate()
        self.zero = CrossedElement(self, (below.zero,) * self.order)
        self.one = self.embed(below.one)

    def __repr__(self):
        return f"{self.below!r}*[Q of order {self.order}]"

    @property
    def base(self):
        return self.below.base

    def alpha(self, q: int, d):
        if q == 0:
            return d
        key = (q, d)
        v = self._alpha_cache.get(key)
        if v is None:
            v = self.below.evaluate(d, self.action[q], self.below)
            if len(self._alpha_cache) > 100000:
                self._alpha_cache.clear()
            self._alpha_cache[key] = v
        return v

    def _validate(self):
        B = self.below
        Q = range(self.order)
        T = self.table
        if any(T[0][q] != q or T[q][0] != q for q in Q):
            raise InputError("quotient element 0 must be the identity")
        for q in Q:
            for r in Q:
                for s in Q:
                    if T[T[q][r]][s] != T[q][T[r][s]]:
                        raise InputError("quotient table is not associative")
        gens = B.gens()
        if any(a != g for a, g in zip(self.action[0], gens)):
            raise InputError("the identity must act trivially")
        for q in Q:
            if self.factor[0][q] != B.one or self.factor[q][0] != B.one:
                raise InputError("factor set must be normalized: f(1,q) = f(q,1) = 1")
            for r in Q:
                if B.is_zero(self.factor[q][r]):
                    raise InputError(f"factor f({q},{r}) is zero")
        check = getattr(B, "relations_hold", None)
        if check is not None:
            for q in Q:
                bad = check(self.action[q])
                if bad is not None:
                    raise InputError(f"action of quotient element {q} does not respect the relation {bad}")
        for q in Q:
            for r in Q:
                f = self.factor[q][r]
                fi = B.inv(f)
                qr = T[q][r]
                for k, g in enumerate(gens):
                    if self.alpha(q, self.alpha(r, g)) != f * self.alpha(qr, g) * fi:
                        raise InputError(
                            f"alpha_{q} alpha_{r} differs from conjugation by f({q},{r}) after alpha_{qr} "
                            f"on generator {k}"
                        )
                for s in Q:
                    lhs = f * self.factor[qr][s]
                    rhs = self.alpha(q, self.factor[r][s]) * self.factor[q][T[r][s]]
                    if lhs != rhs:
                        raise InputError(f"factor set fails the cocycle identity at ({q},{r},{s})")

    # constructors

    def element(self, coords: Sequence) -> "CrossedElement":
        if len(coords) != self.order:
            raise InputError("wrong number of coordinates")
        return CrossedElement(self, tuple(self.below(c) if not _in(self.below, c) else c for c in coords))

    def embed(self, d) -> "CrossedElement":
        return CrossedElement(self, (d,) + (self.below.zero,) * (self.order - 1))

    def from_scalar(self, c) -> "CrossedElement":
        return self.embed(self.below.from_scalar(c))

    def __call__(self, c):
        if isinstance(c, CrossedElement) and c.parent is self:
            return c
        return self.from_scalar(c)

    def unit(self, q: int) -> "CrossedElement":
        coords = [self.below.zero] * self.order
        coords[q] = self.below.one
        return CrossedElement(self, tuple(coords))

    def gens(self):
        return [self.embed(g) for g in self.below.gens()] + [self.unit(q) for q in range(1, self.order)]

    # ring protocol

    def is_zero(self, x) -> bool:
        return all(self.below.is_zero(c) for c in x.coords)

    def inv(self, x):
        return crossed_inverse(x)

    def size(self, x) -> int:
        f = getattr(self.below, "size", None)
        return sum((f(c) if f else 1) for c in x.coords if not self.below.is_zero(c))

    def random_element(self, rng: random.Random, support: int = 2, **kw) -> "CrossedElement":
        """Nonzero element with support size uniform in ``[1, support]``."""
        from .ore import _random_below

        k = rng.randint(1, min(support, self.order))
        qs = rng.sample(range(self.order), k)
        coords = [self.below.zero] * self.order
        for q in qs:
            c = self.below.zero
            while self.below.is_zero(c):
                c = _random_below(self.below, rng, 2)
            coords[q] = c
        return CrossedElement(self, tuple(coords))

    def describe(self) -> dict:
        below = self.below.describe() if hasattr(self.below, "describe") else {"kind": "base"}
        return {"kind": "crossed_product", "order": self.order, "table": self.table,
                "action": [[str(v) for v in a] for a in self.action],
                "factor": {f"{q},{r}": str(self.factor[q][r]) for q in range(self.order)
                           for r in range(self.order) if self.factor[q][r] != self.below.one},
                "below": below}


def _in(B, c):
    parent = getattr(c, "parent", None)
    return parent is B


class CrossedElement:
    __slots__ = ("parent", "coords")

    def __init__(self, parent: CrossedProduct, coords: tuple):
        self.parent = parent
        self.coords = coords

    def _coerce(self, other):
        P = self.parent
        if isinstance(other, CrossedElement):
            if other.parent is not P:
                raise InputError("crossed product mismatch")
            return other
        if getattr(other, "parent", None) is P.below:
            return P.embed(other)
        return P.from_scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return CrossedElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CrossedElement(self.parent, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return CrossedElement(self.parent, tuple(_products(self, other)[0]))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def inverse(self):
        return crossed_inverse(self)

    def __eq__(self, other):
        if isinstance(other, CrossedElement):
            return self.parent is other.parent and self.coords == other.coords
        try:
            return self == self._coerce(other)
        except (InputError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return not self.parent.is_zero(self)

    def __repr__(self):
        P = self.parent
        parts = []
        for q, c in enumerate(self.coords):
            if P.below.is_zero(c):
                continue
            cs = str(c)
            if q == 0:
                parts.append(cs)
            else:
                parts.append(P.names[q] if cs == "1" else f"({cs})*{P.names[q]}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return [[q, c.to_json() if hasattr(c, "to_json") else str(c)]
                for q, c in enumerate(self.coords) if not self.parent.below.is_zero(c)]


def _products(x: CrossedElement, y: CrossedElement):
    """Coordinates of ``x*y`` and the list of nonzero partial products."""
    P = x.parent
    B = P.below
    out = [B.zero] * P.order
    partial = []
    for q, a in enumerate(x.coords):
        if B.is_zero(a):
            continue
        for r, b in enumerate(y.coords):
            if B.is_zero(b):
                continue
            term = a * P.alpha(q, b) * P.factor[q][r]
            s = P.table[q][r]
            out[s] = out[s] + term
            partial.append((q, r, term))
    return out, partial


def left_regular_matrix(x: CrossedElement) -> list[list]:
    """``M`` with ``(y * x).coords = y.coords * M`` for all ``y``."""
    P = x.parent
    B = P.below
    n = P.order
    M = [[B.zero] * n for _ in range(n)]
    for r in range(n):
        for q in range(n):
            c = x.coords[q]
            if B.is_zero(c):
                continue
            s = P.table[r][q]
            M[r][s] = P.alpha(r, c) * P.factor[r][q]
    return M


def crossed_inverse(x: CrossedElement) -> CrossedElement:
    """Solve ``y * x = 1`` over ``below``; a singular system yields a zero divisor."""
    P = x.parent
    B = P.below
    if P.is_zero(x):
        raise ZeroDivisionError("zero is not invertible")
    support = [q for q, c in enumerate(x.coords) if not B.is_zero(c)]
    if len(support) == 1:
        q = support[0]
        # (c u_q)^-1 = f(q^-1, q)^-1 alpha_{q^-1}(c^-1) u_{q^-1}
        qi = P._inv_q[q]
        c = B.inv(P.factor[qi][q]) * P.alpha(qi, B.inv(x.coords[q]))
        coords = [B.zero] * P.order
        coords[qi] = c
        return CrossedElement(P, tuple(coords))
    M = left_regular_matrix(x)
    target = [B.one] + [B.zero] * (P.order - 1)
    v = linalg.solve_left(B, M, target)
    if v is None:
        kernel = linalg.left_kernel(B, M)
        w = CrossedElement(P, tuple(kernel[0])) if kernel else None
        raise ZeroDivisorWitness("zero divisor witness: left-regular matrix is singular", w, x)
    y = CrossedElement(P, tuple(v))
    if x * y != P.one:
        raise ZeroDivisorWitness("zero divisor witness: left inverse is not a right inverse", y, x)
    return y


# ------------------------------------------------------ from group extensions


class ExtensionCrossedProduct:
    """``D_{kN} * Q`` built from a :class:`FiniteExtension` with a poly-Z or free-abelian ``N``.

    ``embedding`` is the map ``kG -> D_{kN} * Q`` sending ``(n, q)`` to
    ``n u_q``; ``normal_tower`` is the Ore tower of ``N``.
    """

    def __init__(self, ext: FiniteExtension, field):
        self.ext = ext
        self.field = field
        self.normal_tower = PolyZTower(ext.normal, field)
        D = self.normal_tower.top if ext.normal.num_gens else field
        self.below = D
        mono = self.normal_tower.monomial
        action = [[mono(g) for g in ext.action[q]] for q in range(ext.order)]
        factor = {(q, r): mono(ext.factor[q][r]) for q in range(ext.order) for r in range(ext.order)}
        self.ring = CrossedProduct(D, ext.table, action, factor, names=ext.quotient_names[1:])
        self.algebra = GroupAlgebra(field, ext)
        self.normal_algebra = GroupAlgebra(field, ext.normal)
        self.embedding = GroupAlgebraHom(self.algebra, self.ring, self.monomial, self.ring.from_scalar,
                                         name=f"k[{ext!r}] -> crossed product")

    def monomial(self, g: GroupElement) -> CrossedElement:
        n, q = self.ext.split(g)
        coords = [self.below.zero] * self.ext.order
        coords[q] = self.normal_tower.monomial(n)
        return CrossedElement(self.ring, tuple(coords))

    def embed(self, x: GroupAlgebraElement) -> CrossedElement:
        return self.embedding(x)

    def include_normal(self, h: GroupAlgebraElement) -> GroupAlgebraElement:
        """``kN -> kG``."""
        return self.algebra.element({self.ext.pair(n, 0): c for n, c in h.terms.items()})

    def square_commutes(self, h: GroupAlgebraElement) -> bool:
        """Both routes ``kN -> kG -> D`` and ``kN -> D_{kN} -> D`` agree on ``h``."""
        via_group = self.embed(self.include_normal(h))
        via_tower = self.ring.embed(self.normal_tower.embed(h))
        return via_group == via_tower


def klein_extension() -> FiniteExtension:
    """The Klein bottle group as Z^2 = <a, c> extended by Z/2, with u^2 = c and u a u^-1 = a^-1."""
    from .groups import FreeAbelian

    N = FreeAbelian(2, ["a", "c"])
    a, c = N.gens()
    return FiniteExtension(N, [[0, 1], [1, 0]], [[a, c], [~a, c]], {(1, 1): c}, quotient_names=["b"])


def domain_fuzz(ring, trials: int, support: int, seed: int = 0, sampler=None) -> dict:
    """Multiply random nonzero pairs; a zero product is reported as a certificate.

    ``ring`` is a :class:`CrossedProduct`, or an :class:`ExtensionCrossedProduct`
    whose group-algebra elements (support size uniform in ``[1, support]``,
    coefficients from the field's fixed sample) are used.
    """
    rng = random.Random(seed)
    if isinstance(ring, ExtensionCrossedProduct):
        ext = ring

        def draw():
            return ext.algebra.random_element(rng, support, radius=2)

        def image(x):
            return ext.embed(x)

        R = ext.ring
    else:
        R = ring

        def draw():
            return sampler(rng) if sampler else R.random_element(rng, support)

        def image(x):
            return x

    for trial in range(trials):
        x, y = draw(), draw()
        if not x or not y:
            continue
        X, Y = image(x), image(y)
        if R.is_zero(X) or R.is_zero(Y):
            return _certificate(trials, seed, trial, x, y, [], note="nonzero element with zero image")
        coords, partial = _products(X, Y)
        if all(R.below.is_zero(c) for c in coords):
            return _certificate(trials, seed, trial, x, y, partial)
    return {"trials": trials, "seed": seed, "support": support, "outcome": "no zero divisors found"}


def _certificate(trials, seed, trial, x, y, partial, note=None):
    rep = {
        "trials": trials, "seed": seed, "outcome": "zero divisor found", "trial": trial,
        "counterexample": {
            "left": repr(x), "right": repr(y),
            "partial_products": [{"q": q, "r": r, "term": str(t)} for q, r, t in partial],
        },
    }
    if note:
        rep["counterexample"]["note"] = note
    return rep

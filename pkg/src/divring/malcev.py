"""Mal'cev-Neumann series over a free group, certified below a tail bound.

The free group is bi-ordered through the Magnus embedding
``x_i -> 1 + X_i``: ``g < h`` when the first nonzero coefficient of
``mu(h) - mu(g)`` (monomials by degree, then lexicographically by variable
index) is positive.  A series stores exact coefficients for every support
element strictly below its ``tail``; anything unknown lies at or above the
tail.  ``tail = None`` means the series is exact.
"""

from __future__ import annotations

import functools
from math import comb
from typing import Sequence

from .errors import InputError, ResourceExceeded
from .group_algebra import GroupAlgebra, GroupAlgebraElement
from .groups import FreeGroup, GroupElement, syllables

MAX_MAGNUS_DEGREE = 256


class InconclusiveAtOrder(ArithmeticError):
    pass


def _syllable_series(i: int, k: int, D: int) -> list[tuple[tuple, int]]:
    out = []
    for j in range(0, D + 1):
        c = comb(k, j) if k > 0 else (-1) ** j * comb(-k + j - 1, j)
        if c:
            out.append(((i,) * j, c))
    return out


def magnus_expansion(word: Sequence[int], D: int) -> dict[tuple, int]:
    """Coefficients of ``mu(word)`` in degrees ``<= D`` (monomials as index tuples)."""
    series = {(): 1}
    for i, k in syllables(tuple(word)):
        factor = _syllable_series(i, k, D)
        nxt: dict = {}
        for m, a in series.items():
            room = D - len(m)
            for mono, b in factor:
                if len(mono) > room:
                    break
                key = m + mono
                nxt[key] = nxt.get(key, 0) + a * b
        series = {m: c for m, c in nxt.items() if c}
    return series


def _leading(word: Sequence[int]):
    """``(degree, monomial, coefficient)`` of the first nonzero term of ``mu(word) - 1``."""
    if not word:
        return None
    D = 1
    while True:
        s = magnus_expansion(word, D)
        s.pop((), None)
        if s:
            mono = min(s, key=lambda m: (len(m), m))
            return len(mono), mono, s[mono]
        if D >= MAX_MAGNUS_DEGREE:
            raise ResourceExceeded(f"Magnus degree above {MAX_MAGNUS_DEGREE}", ceiling="magnus_degree",
                                   limit=MAX_MAGNUS_DEGREE)
        D = min(2 * D, MAX_MAGNUS_DEGREE)


class MagnusOrder:
    """The bi-order on a free group, with cached signs."""

    def __init__(self, group: FreeGroup):
        if not isinstance(group, FreeGroup):
            raise InputError("the Magnus order is defined on free groups")
        self.group = group
        self._sign: dict = {}
        self.key = functools.cmp_to_key(self.compare)

    def sign(self, g: GroupElement) -> int:
        v = self._sign.get(g)
        if v is None:
            lead = _leading(g.data)
            v = 0 if lead is None else (1 if lead[2] > 0 else -1)
            self._sign[g] = v
        return v

    def compare(self, g: GroupElement, h: GroupElement) -> int:
        if g == h:
            return 0
        return -1 if self.sign(~g * h) > 0 else 1

    def less(self, g, h) -> bool:
        return self.compare(g, h) < 0

    def min(self, *elems):
        elems = [e for e in elems if e is not None]
        if not elems:
            return None
        best = elems[0]
        for e in elems[1:]:
            if self.compare(e, best) < 0:
                best = e
        return best

    def sort(self, elems):
        return sorted(elems, key=self.key)


def magnus_degree(g: GroupElement) -> int:
    """Lowest degree of ``mu(g) - 1``; zero exactly for the identity."""
    lead = _leading(g.data)
    return 0 if lead is None else lead[0]


class MNRing:
    """Series over ``field[F]`` with a fixed inversion order ``N``."""

    def __init__(self, field, group: FreeGroup, order: int = 4):
        if order < 1:
            raise InputError("truncation order must be at least 1")
        self.field = field
        self.group = group
        self.order_N = order
        self.magnus = MagnusOrder(group)
        self.algebra = GroupAlgebra(field, group)
        self.zero = MNSeries(self, {}, None)
        self.one = MNSeries(self, {group.identity(): field.one}, None)

    def __repr__(self):
        return f"MN({self.field!r}, F{self.group.num_gens}, N={self.order_N})"

    @property
    def base(self):
        return self.field

    def from_algebra(self, x: GroupAlgebraElement) -> "MNSeries":
        return MNSeries(self, dict(x.terms), None)

    def from_scalar(self, c) -> "MNSeries":
        c = self.field(c)
        if self.field.is_zero(c):
            return self.zero
        return MNSeries(self, {self.group.identity(): c}, None)

    def monomial(self, g, c=1) -> "MNSeries":
        return MNSeries(self, {g: self.field(c)}, None)

    # ring protocol for elimination: zero testing is only certified one way

    def is_zero(self, x) -> bool:
        return not x.terms and x.tail is None

    def certified_nonzero(self, x) -> bool:
        return bool(x.terms)

    def inv(self, x):
        return mn_inverse(x, self.order_N)

    def size(self, x) -> int:
        return len(x.terms)

    def describe(self):
        return {"kind": "malcev_neumann", "free_rank": self.group.num_gens, "order": self.order_N}


class MNSeries:
    __slots__ = ("ring", "terms", "tail")

    def __init__(self, ring: MNRing, terms: dict, tail: GroupElement | None):
        self.ring = ring
        F = ring.field
        if tail is not None:
            cmp = ring.magnus.compare
            terms = {g: c for g, c in terms.items() if cmp(g, tail) < 0 and not F.is_zero(c)}
        else:
            terms = {g: c for g, c in terms.items() if not F.is_zero(c)}
        self.terms = terms
        self.tail = tail

    @property
    def parent(self):
        return self.ring

    @property
    def exact(self) -> bool:
        return self.tail is None

    def support(self) -> list:
        return self.ring.magnus.sort(self.terms)

    def minimal_term(self):
        s = self.support()
        return s[0] if s else None

    def low(self):
        """Lower bound for the whole support, certified part and tail together."""
        return self.ring.magnus.min(self.minimal_term(), self.tail)

    def _coerce(self, other):
        if isinstance(other, MNSeries):
            if other.ring is not self.ring:
                raise InputError("series ring mismatch")
            return other
        if isinstance(other, GroupAlgebraElement):
            return self.ring.from_algebra(other)
        return self.ring.from_scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out[g] + c if g in out else c
        tail = self.ring.magnus.min(self.tail, other.tail)
        return MNSeries(self.ring, out, tail)

    __radd__ = __add__

    def __neg__(self):
        return MNSeries(self.ring, {g: -c for g, c in self.terms.items()}, self.tail)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        R = self.ring
        M = R.magnus
        bounds = []
        if other.tail is not None and (self.terms or self.tail is not None):
            bounds.append(self.low() * other.tail)
        if self.tail is not None and (other.terms or other.tail is not None):
            bounds.append(self.tail * other.low())
        tail = M.min(*bounds)
        out: dict = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = g * h
                out[k] = out[k] + a * b if k in out else a * b
        return MNSeries(R, out, tail)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def scale(self, c):
        c = self.ring.field(c)
        return MNSeries(self.ring, {g: c * v for g, v in self.terms.items()}, self.tail)

    def inverse(self):
        return mn_inverse(self, self.ring.order_N)

    def __eq__(self, other):
        if not isinstance(other, MNSeries):
            try:
                other = self._coerce(other)
            except (InputError, TypeError, ValueError):
                return NotImplemented
        return self.ring is other.ring and self.terms == other.terms and self.tail == other.tail

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.tail))

    def __repr__(self):
        parts = []
        for g in self.support():
            c = self.terms[g]
            gs = repr(g)
            if g.is_identity():
                parts.append(str(c))
            elif c == 1:
                parts.append(gs)
            elif c == -1:
                parts.append("-" + gs)
            else:
                parts.append(f"{c}*{gs}")
        body = " + ".join(parts) if parts else "0"
        if self.tail is not None:
            body += f" + O({self.tail!r})"
        return body

    def to_json(self):
        F = self.ring.field
        return {
            "order": self.ring.order_N,
            "terms": [[list(g.word()), F.to_json(self.terms[g])] for g in self.support()],
            "tail": None if self.tail is None else list(self.tail.word()),
        }


def mn_inverse(a, N: int | None = None) -> MNSeries:
    """Inverse of a nonzero element as ``(1 + eps)^-1 m^-1 c^-1`` with the geometric series cut at ``N``.

    ``a`` is a group-algebra element over a free group or a series; the
    truncation remainder sum_{k > N} (-eps)^k is supported at or above
    ``low(eps)^(N+1)``, which becomes (times ``m^-1``) the tail bound.
    """
    if isinstance(a, GroupAlgebraElement):
        raise InputError("convert with MNRing.from_algebra first")
    R = a.ring
    N = R.order_N if N is None else N
    if N < 1:
        raise InputError("truncation order must be at least 1")
    if not a.terms:
        if a.tail is None:
            raise ZeroDivisionError("zero is not invertible")
        raise InconclusiveAtOrder(f"inconclusive at order {N}: element is zero below its tail")
    F = R.field
    m = a.minimal_term()
    c = a.terms[m]
    ci = F.inv(c)
    mi = ~m
    rest = MNSeries(R, {g: v for g, v in a.terms.items() if g != m}, a.tail)
    eps = (R.monomial(mi, ci) * rest)
    if not eps.terms and eps.tail is None:
        return R.monomial(mi, ci)
    neg = -eps
    total = R.one
    power = R.one
    for _ in range(N):
        power = power * neg
        total = total + power
    e0 = eps.low()
    bound = e0 ** (N + 1)
    tail = R.magnus.min(total.tail, bound)
    series = MNSeries(R, total.terms, tail)
    return series * R.monomial(mi, ci)


def _eliminate(R: MNRing, rows):
    M = [list(r) for r in rows]
    m = len(M)
    n = len(M[0]) if M else 0
    pivots = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        cands = [i for i in range(r, m) if R.certified_nonzero(M[i][col])]
        if not cands:
            continue
        p = min(cands, key=lambda i: (len(M[i][col].terms), i))
        M[r], M[p] = M[p], M[r]
        inv = mn_inverse(M[r][col], R.order_N)
        for i in range(r + 1, m):
            f = M[i][col]
            if R.is_zero(f):
                continue
            g = f * inv
            M[i] = [x - g * y for x, y in zip(M[i], M[r])]
        pivots.append((r, col))
        r += 1
    rest_zero = all(R.is_zero(M[i][j]) for i in range(r, m) for j in range(n))
    return pivots, rest_zero


def mn_rank(matrix, N: int = 4, field=None) -> dict:
    """Certified lower bound for the rank over the Mal'cev-Neumann division ring.

    ``matrix`` is a list of rows of group-algebra elements over one free
    group.  Returns ``{"lower_bound", "stabilized", "exact", "order"}``;
    ``stabilized`` compares the pivot pattern at orders ``N - 1`` and ``N``.
    """
    if N < 1:
        raise InputError("truncation order must be at least 1")
    rows = [list(r) for r in matrix]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if m == 0 or n == 0:
        return {"lower_bound": 0, "stabilized": True, "exact": True, "order": N}
    A = rows[0][0].parent
    R = MNRing(A.field, A.group, N)
    conv = [[R.from_algebra(a) for a in r] for r in rows]
    pivots, rest_zero = _eliminate(R, conv)
    if N > 1:
        R0 = MNRing(A.field, A.group, N - 1)
        prev, _ = _eliminate(R0, [[R0.from_algebra(a) for a in r] for r in rows])
        stabilized = prev == pivots
    else:
        stabilized = len(pivots) == min(m, n) or rest_zero
    bound = len(pivots)
    exact = bound == min(m, n) or rest_zero
    return {"lower_bound": bound, "stabilized": stabilized or exact, "exact": exact, "order": N}

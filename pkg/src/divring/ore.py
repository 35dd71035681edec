"""Skew Laurent polynomials D[t, t^-1; sigma] and their left Ore fraction fields.

Multiplication follows ``t * c = sigma(c) * t``.  A fraction is stored as
``d^-1 n`` with ``d`` and ``n`` sharing no left factor of positive degree and
``d`` a polynomial with nonzero constant term and leading coefficient 1;
this form is unique, so equality is comparison of stored data.
"""

from __future__ import annotations

import os
import random
from typing import Sequence

from .errors import InputError, ResourceExceeded

DEFAULT_MAX_DEGREE = int(os.environ.get("DIVRING_MAX_DEGREE", "4096"))


class DegreeCeilingExceeded(ResourceExceeded):
    pass


class SkewPoly:
    """Finite sum ``sum c_k t^k`` with coefficients in ``layer.below``."""

    __slots__ = ("layer", "c", "_hash")

    def __init__(self, layer: "OreLaurent", coeffs: dict):
        self.layer = layer
        self.c = coeffs
        self._hash = None

    # bookkeeping

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        return max(self.c) if self.c else -1

    def low(self) -> int:
        return min(self.c) if self.c else 0

    def width(self) -> int:
        return self.degree() - self.low() if self.c else -1

    def lead(self):
        return self.c[self.degree()]

    def is_monomial(self) -> bool:
        return len(self.c) == 1

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.layer is other.layer and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.c.items()))
        return self._hash

    def __repr__(self):
        return self.layer.format_poly(self)

    # arithmetic

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        B = self.layer.below
        out = dict(self.c)
        for k, v in other.c.items():
            s = out[k] + v if k in out else v
            if B.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return SkewPoly(self.layer, out)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.layer, {k: -v for k, v in self.c.items()})

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        L = self.layer
        B = L.below
        out = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                v = a * L.sigma(b, i)
                k = i + j
                out[k] = out[k] + v if k in out else v
        out = {k: v for k, v in out.items() if not B.is_zero(v)}
        if out and max(out) - min(out) > L.max_degree:
            raise DegreeCeilingExceeded(
                f"degree ceiling exceeded in layer {L.var}: width {max(out) - min(out)} > {L.max_degree}",
                ceiling="max_degree", limit=L.max_degree,
            )
        return SkewPoly(L, out)

    def scale_left(self, c) -> "SkewPoly":
        B = self.layer.below
        if B.is_zero(c):
            return SkewPoly(self.layer, {})
        return SkewPoly(self.layer, {k: c * v for k, v in self.c.items()})

    def shift_right(self, k: int) -> "SkewPoly":
        """``self * t^k``."""
        return SkewPoly(self.layer, {i + k: v for i, v in self.c.items()})

    def shift_left(self, k: int) -> "SkewPoly":
        """``t^k * self``."""
        L = self.layer
        return SkewPoly(L, {i + k: L.sigma(v, k) for i, v in self.c.items()})

    def size(self) -> int:
        B = self.layer.below
        f = getattr(B, "size", None)
        return max(self.width(), 0) + 1 + sum(f(v) if f else 1 for v in self.c.values())


# ----------------------------------------------------------- Euclidean core


def _monomial(L, c, k) -> SkewPoly:
    return SkewPoly(L, {k: c})


def left_divmod(a: SkewPoly, b: SkewPoly):
    """``a = q*b + r`` with ``deg r < deg b``, both inputs supported in degrees >= 0."""
    L = b.layer
    B = L.below
    if b.is_zero():
        raise ZeroDivisionError("skew division by zero polynomial")
    m = b.degree()
    bm = b.lead()
    q = SkewPoly(L, {})
    r = a
    while not r.is_zero() and r.degree() >= m:
        k = r.degree() - m
        c = r.lead() * B.inv(L.sigma(bm, k))
        term = _monomial(L, c, k)
        q = q + term
        r = r - term * b
    return q, r


def right_divmod(a: SkewPoly, b: SkewPoly):
    """``a = b*q + r`` with ``deg r < deg b``."""
    L = b.layer
    B = L.below
    if b.is_zero():
        raise ZeroDivisionError("skew division by zero polynomial")
    m = b.degree()
    binv = B.inv(b.lead())
    q = SkewPoly(L, {})
    r = a
    while not r.is_zero() and r.degree() >= m:
        k = r.degree() - m
        c = L.sigma(binv * r.lead(), -m)
        term = _monomial(L, c, k)
        q = q + term
        r = r - b * term
    return q, r


def _to_poly_right(p: SkewPoly):
    """``p = p0 * t^s`` with ``p0`` having lowest degree 0."""
    s = p.low()
    return p.shift_right(-s), s


def _to_poly_left(p: SkewPoly):
    """``p = t^s * p0`` with ``p0`` having lowest degree 0."""
    s = p.low()
    return p.shift_left(-s), s


def skew_divide(a: SkewPoly, b: SkewPoly):
    """``a = q*b + r`` with ``r`` of smaller width than ``b``; Laurent inputs allowed.

    Writes ``a = t^i a0`` and ``b = t^j b0`` with polynomial ``a0, b0``,
    divides there and shifts back.
    """
    if b.is_zero():
        raise ZeroDivisionError("skew division by zero polynomial")
    if a.is_zero():
        return a, a
    a0, i = _to_poly_left(a)
    b0, j = _to_poly_left(b)
    q0, r0 = left_divmod(a0, b0)
    return q0.shift_left(i).shift_right(-j), r0.shift_left(i)


def _right_monic(p: SkewPoly) -> SkewPoly:
    """``p * u`` for the unit ``u = c t^-low`` making ``p`` a polynomial with leading coefficient 1."""
    L = p.layer
    p0 = p.shift_right(-p.low())
    n = p0.degree()
    lead = p0.c[n]
    if lead == L.below.one:
        return p0
    c = L.sigma(L.below.inv(lead), -n)
    return SkewPoly(L, {k: v * L.sigma(c, k) for k, v in p0.c.items()})


def gcld(a: SkewPoly, b: SkewPoly) -> SkewPoly:
    """The monic greatest common left divisor, a polynomial with lowest degree 0."""
    if a.is_zero():
        return _right_monic(b)
    if b.is_zero():
        return _right_monic(a)
    a, b = _right_monic(a), _right_monic(b)
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        if b.degree() == 0:
            return b
        _, r = right_divmod(a, b)
        a, b = b, (_right_monic(r) if not r.is_zero() else r)
    return a


def exact_left_quotient(g: SkewPoly, a: SkewPoly) -> SkewPoly:
    """The ``q`` with ``a = g*q``; raises if ``g`` does not divide ``a`` on the left."""
    if a.is_zero():
        return a
    a0, s = _to_poly_right(a)
    q, r = right_divmod(a0, g)
    if not r.is_zero():
        raise ArithmeticError("left division is not exact")
    return q.shift_right(s)


def lclm(a: SkewPoly, b: SkewPoly):
    """``(s, s2)`` with ``s*a = s2*b`` a least common left multiple.

    Extended Euclid on left division: each remainder is ``u*a + v*b`` and
    the first vanishing remainder gives ``u*a = -v*b``.
    """
    L = a.layer
    if a.is_zero() or b.is_zero():
        raise ZeroDivisionError("common multiple with zero")
    a0, i = _to_poly_left(a)
    b0, j = _to_poly_left(b)
    one = L.poly({0: L.below.one})
    zero = L.poly({})
    r0, r1 = a0, b0
    u0, u1 = one, zero
    v0, v1 = zero, one
    B = L.below
    while not r1.is_zero():
        q, r = left_divmod(r0, r1)
        u2, v2 = u0 - q * u1, v0 - q * v1
        if not r.is_zero():
            # left-monic remainders keep coefficients small
            c = B.inv(r.lead())
            r, u2, v2 = r.scale_left(c), u2.scale_left(c), v2.scale_left(c)
        r0, r1 = r1, r
        u0, u1 = u1, u2
        v0, v1 = v1, v2
    # u1*a0 + v1*b0 = 0, and a0 = t^-i a, b0 = t^-j b
    return u1.shift_right(-i), (-v1).shift_right(-j)


# --------------------------------------------------------------- the layer


class OreLaurent:
    """Fraction field of ``below[t, t^-1; sigma]``.

    ``sigma`` and ``sigma_inverse`` are the images of ``below.gens()``; the
    inverse is checked, and the images are checked to respect the defining
    relations of ``below``.
    """

    kind = "ore"

    def __init__(self, below, sigma: Sequence, sigma_inverse: Sequence, var: str = "t",
                 max_degree: int = DEFAULT_MAX_DEGREE, check: bool = True):
        self.below = below
        self.var = var
        self.max_degree = max_degree
        gens = below.gens()
        if len(sigma) != len(gens) or len(sigma_inverse) != len(gens):
            raise InputError(f"layer {var}: need {len(gens)} images for sigma and for its inverse")
        self._images = {0: list(gens), 1: list(sigma), -1: list(sigma_inverse)}
        self._sigma_cache: dict = {}
        self.trivial = all(s == g for s, g in zip(sigma, gens))
        # trivial twist over a commutative field: fractions admit gcd shortcuts
        self.commutative = self.trivial and getattr(below, "commutative", True)
        if check:
            self._check_sigma()
        self.zero = OreElement(self, self.poly({0: below.one}), self.poly({}))
        self.one = self.constant(below.one)

    def __repr__(self):
        return f"{self.below!r}({self.var})"

    @property
    def base(self):
        return self.below.base

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def depth(self) -> int:
        return getattr(self.below, "depth", 0) + 1

    def _check_sigma(self):
        gens = self.below.gens()
        for k, g in enumerate(gens):
            if self.sigma(self.sigma(g, -1), 1) != g or self.sigma(self.sigma(g, 1), -1) != g:
                raise InputError(f"layer {self.var}: supplied inverse does not invert sigma on generator {k}")
        check = getattr(self.below, "relations_hold", None)
        if check is not None:
            for e in (1, -1):
                bad = check(self._images[e])
                if bad is not None:
                    raise InputError(f"layer {self.var}: sigma does not respect the relation {bad}")

    def relations_hold(self, images):
        """First defining relation violated by the generator images, or ``None``."""
        B = self.below
        T = images[-1]
        lower = images[:-1]
        target = T.parent
        for k, g in enumerate(B.gens()):
            lhs = T * B.evaluate(g, lower, target)
            rhs = B.evaluate(self.sigma(g, 1), lower, target) * T
            if lhs != rhs:
                return f"{self.var}*g{k} = sigma(g{k})*{self.var}"
        inner = getattr(B, "relations_hold", None)
        return inner(lower) if inner else None

    def _images_for(self, k: int):
        imgs = self._images.get(k)
        if imgs is None:
            step = 1 if k > 0 else -1
            prev = self._images_for(k - step)
            B = self.below
            imgs = [B.evaluate(g, self._images[step], B) for g in prev]
            self._images[k] = imgs
        return imgs

    def sigma(self, c, k: int = 1):
        """``sigma^k(c)`` for ``c`` in ``below``."""
        if k == 0 or self.trivial:
            return c
        key = (k, c)
        v = self._sigma_cache.get(key)
        if v is None:
            v = self.below.evaluate(c, self._images_for(k), self.below)
            if len(self._sigma_cache) > 200000:
                self._sigma_cache.clear()
            self._sigma_cache[key] = v
        return v

    # constructors

    def poly(self, coeffs: dict) -> SkewPoly:
        B = self.below
        out = {}
        for k, v in coeffs.items():
            v = B(v)
            if not B.is_zero(v):
                out[int(k)] = v
        return SkewPoly(self, out)

    def fraction(self, den: SkewPoly, num: SkewPoly) -> "OreElement":
        """The element ``den^-1 * num``."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        return _normalize(self, den, num)

    def right_fraction(self, num: SkewPoly, den: SkewPoly) -> "OreElement":
        """The element ``num * den^-1``, converted to a left fraction."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return self.zero
        s, s2 = lclm(num, den)
        return _normalize(self, s, s2)

    def from_poly(self, p: SkewPoly) -> "OreElement":
        return _normalize(self, self.poly({0: self.below.one}), p)

    def constant(self, c) -> "OreElement":
        return OreElement(self, self.poly({0: self.below.one}), self.poly({0: c}))

    def embed(self, c) -> "OreElement":
        return self.constant(c)

    def from_scalar(self, c) -> "OreElement":
        return self.constant(self.below.from_scalar(c))

    def __call__(self, c) -> "OreElement":
        if isinstance(c, OreElement) and c.layer is self:
            return c
        return self.from_scalar(c)

    def t(self, k: int = 1) -> "OreElement":
        return OreElement(self, self.poly({0: self.below.one}), self.poly({k: self.below.one}))

    def monomial(self, c, k: int) -> "OreElement":
        return OreElement(self, self.poly({0: self.below.one}), self.poly({k: c}))

    def gens(self) -> list:
        return [self.embed(g) for g in self.below.gens()] + [self.t()]

    def gen_names(self) -> list[str]:
        inner = getattr(self.below, "gen_names", lambda: [])()
        return inner + [self.var]

    # ring protocol

    def is_zero(self, x) -> bool:
        return x.num.is_zero()

    def inv(self, x):
        return x.inverse()

    def size(self, x) -> int:
        return x.den.size() + x.num.size()

    def evaluate(self, x: "OreElement", images: Sequence, target):
        """Image under the homomorphism sending ``gens()`` to ``images``."""
        lower = list(images[:-1])
        T = images[-1]
        B = self.below
        if target is self and x.den.degree() == 0 and x.num.is_monomial() and x.num.degree() == 1 \
                and x.num.c[1] == B.one:
            return T
        if target is self and _is_monomial_unit(T) and all(_is_constant(v) for v in lower):
            return self._evaluate_monomial(x, [v.num.c[0] for v in lower], T)

        def ev(p: SkewPoly):
            total = target.zero
            for k in sorted(p.c):
                tk = _power(target, T, k)
                total = total + B.evaluate(p.c[k], lower, target) * tk
            return total

        num = ev(x.num)
        if x.den.degree() == 0:
            return num
        return target.inv(ev(x.den)) * num

    def _evaluate_monomial(self, x, lower, T):
        # t -> c t^e with the lower generators sent into ``below``: images of
        # polynomials stay polynomials, so only one normalization is needed
        B = self.below
        (e, c), = T.num.c.items()
        powers = {0: B.one}

        def coeff(k):
            v = powers.get(k)
            if v is None:
                if k > 0:
                    prev = coeff(k - 1)
                    v = prev * self.sigma(c, e * (k - 1))
                else:
                    # (c t^e)^-1 = sigma^-e(c^-1) t^-e
                    nxt = coeff(k + 1)
                    step = self.sigma(B.inv(c), -e)
                    v = nxt * self.sigma(step, e * (k + 1))
                powers[k] = v
            return v

        def ev(p):
            out = {}
            for k, v in p.c.items():
                w = B.evaluate(v, lower, B) * coeff(k)
                out[e * k] = w
            return SkewPoly(self, {k: v for k, v in out.items() if not B.is_zero(v)})

        num = ev(x.num)
        if x.den.degree() == 0:
            return OreElement(self, x.den, num)
        return _normalize(self, ev(x.den), num)

    def random_element(self, rng: random.Random, degree: int = 2, terms: int = 2, depth_terms: int = 2,
                       allow_zero: bool = False):
        """Random fraction with small numerator and denominator."""

        def rpoly(nonzero):
            while True:
                coeffs = {}
                for _ in range(rng.randint(1, terms)):
                    k = rng.randint(-degree // 2 if degree > 1 else 0, degree)
                    coeffs[k] = _random_below(self.below, rng, depth_terms)
                p = self.poly(coeffs)
                if p.c or not nonzero:
                    return p

        num = rpoly(not allow_zero)
        den = rpoly(True) if rng.random() < 0.5 else self.poly({0: self.below.one})
        return self.fraction(den, num)

    def describe(self) -> dict:
        below = self.below.describe() if hasattr(self.below, "describe") else {"kind": "base", "field": repr(self.below)}
        return {
            "kind": "ore_laurent",
            "var": self.var,
            "sigma": [str(v) for v in self._images[1]],
            "sigma_inverse": [str(v) for v in self._images[-1]],
            "below": below,
        }

    def format_poly(self, p: SkewPoly) -> str:
        if p.is_zero():
            return "0"
        parts = []
        for k in sorted(p.c):
            v = p.c[k]
            vs = str(v)
            if " " in vs or "/" in vs and k != 0:
                vs = f"({vs})"
            if k == 0:
                parts.append(vs)
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                if vs == "1":
                    parts.append(mono)
                elif vs == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"{vs}*{mono}")
        return " + ".join(parts)


def _is_constant(v) -> bool:
    return isinstance(v, OreElement) and v.den.degree() == 0 and (v.num.is_zero() or set(v.num.c) == {0})


def _is_monomial_unit(v) -> bool:
    return isinstance(v, OreElement) and v.den.degree() == 0 and v.num.is_monomial()


def _random_below(B, rng, terms):
    if hasattr(B, "random_element"):
        return B.random_element(rng, degree=1, terms=terms, depth_terms=1)
    return rng.choice(B.sample())


def _power(R, x, k: int):
    if k == 0:
        return R.one
    if k < 0:
        x, k = R.inv(x), -k
    result = x
    for _ in range(k - 1):
        result = result * x
    return result


def _normalize(L: OreLaurent, d: SkewPoly, n: SkewPoly) -> "OreElement":
    if n.is_zero():
        return L.zero
    g = gcld(d, n)
    if g.degree() > 0:
        d = exact_left_quotient(g, d)
        n = exact_left_quotient(g, n)
    return _finish(L, d, n)


def _finish(L: OreLaurent, d: SkewPoly, n: SkewPoly) -> "OreElement":
    """Normalize an already reduced fraction: denominator a polynomial with leading coefficient 1."""
    B = L.below
    s = d.low()
    lead = L.sigma(d.c[d.degree()], -s)
    c = B.inv(lead)
    d = d.shift_left(-s).scale_left(c)
    n = n.shift_left(-s).scale_left(c)
    return OreElement(L, d, n)


def _cancel(g: SkewPoly, a: SkewPoly, b: SkewPoly):
    if g.degree() > 0:
        return exact_left_quotient(g, a), exact_left_quotient(g, b)
    return a, b


def _commutative_add(L, d1, n1, d2, n2):
    # with g = gcd(d1, d2), any common factor of the new numerator and denominator divides g
    g = gcld(d1, d2)
    e1, e2 = _cancel(g, d1, d2)
    num = n1 * e2 + n2 * e1
    if num.is_zero():
        return L.zero
    h = gcld(num, g)
    num, g = _cancel(h, num, g)
    return _finish(L, e1 * e2 * g, num)


def _commutative_mul(L, d1, n1, d2, n2):
    # both inputs are reduced, so only cross factors can cancel
    n1, d2 = _cancel(gcld(n1, d2), n1, d2)
    n2, d1 = _cancel(gcld(n2, d1), n2, d1)
    return _finish(L, d1 * d2, n1 * n2)


class OreElement:
    """``den^-1 * num`` in reduced, normalized form."""

    __slots__ = ("layer", "den", "num", "_hash")

    def __init__(self, layer: OreLaurent, den: SkewPoly, num: SkewPoly):
        self.layer = layer
        self.den = den
        self.num = num
        self._hash = None

    @property
    def parent(self):
        return self.layer

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def _coerce(self, other):
        L = self.layer
        if isinstance(other, OreElement):
            if other.layer is L:
                return other
            if other.layer is L.below:
                return L.embed(other)
            raise InputError("tower mismatch")
        return L.from_scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        L = self.layer
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return _normalize(L, self.den, self.num + other.num)
        if L.commutative:
            return _commutative_add(L, self.den, self.num, other.den, other.num)
        s, s2 = lclm(self.den, other.den)
        return _normalize(L, s * self.den, s * self.num + s2 * other.num)

    __radd__ = __add__

    def __neg__(self):
        return OreElement(self.layer, self.den, -self.num)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        L = self.layer
        if self.num.is_zero() or other.num.is_zero():
            return L.zero
        d1, n1, d2, n2 = self.den, self.num, other.den, other.num
        if L.commutative:
            return _commutative_mul(L, d1, n1, d2, n2)
        if d2.degree() == 0:
            return _normalize(L, d1, n1 * n2)
        if n1.is_monomial():
            # n1 d2^-1 = (n1 d2 n1^-1)^-1 n1
            (k, c), = n1.c.items()
            B = L.below
            ci = B.inv(c)
            conj = SkewPoly(L, {i + 0: c * L.sigma(v, k) * L.sigma(ci, i) for i, v in d2.c.items()})
            return _normalize(L, conj * d1, n1 * n2)
        s, s2 = lclm(n1, d2)
        return _normalize(L, s * d1, s2 * n2)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def inverse(self) -> "OreElement":
        if self.num.is_zero():
            raise ZeroDivisionError("zero is not invertible")
        return _normalize(self.layer, self.num, self.den)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int):
        return _power(self.layer, self, k)

    def __eq__(self, other):
        if isinstance(other, OreElement):
            return self.layer is other.layer and self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self == self.layer.from_scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.den, self.num))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        ns = repr(self.num)
        if self.is_polynomial():
            return ns
        return f"({self.den!r})^-1*({ns})"

    def to_json(self):
        def poly_json(p):
            return [[k, _json(p.c[k])] for k in sorted(p.c)]

        return {"den": poly_json(self.den), "num": poly_json(self.num)}


def _json(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


def ore_common_denominator(f: OreElement, g: OreElement):
    """``(d, nf, ng)`` with ``f = d^-1 nf`` and ``g = d^-1 ng``; ``d`` a left-LCM of the denominators."""
    if f.layer is not g.layer:
        raise InputError("tower mismatch")
    if f.den == g.den:
        return f.den, f.num, g.num
    s, s2 = lclm(f.den, g.den)
    return s * f.den, s * f.num, s2 * g.num


def tower_inverse(x):
    return x.parent.inv(x)

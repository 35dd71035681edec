"""Exact base fields: the rationals and prime fields.

Rationals are ``gmpy2.mpq`` values, which behave like
:class:`fractions.Fraction` but multiply an order of magnitude faster.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

mpq = gmpy2.mpq
_MPQ = type(mpq(0))

from .errors import InputError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Fp:
    """A residue modulo a prime ``p``."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixing GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.p, self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.p, self.v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.p, o - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.p, self.v * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(self.p, -self.v)

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise ZeroDivisionError(f"0 is not invertible in GF({self.p})")
        return Fp(self.p, pow(self.v, self.p - 2, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(self.p, o).inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class RationalField:
    """The field of rationals."""

    name = "Q"
    characteristic = 0

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    def __call__(self, x):
        if isinstance(x, _MPQ):
            return x
        if isinstance(x, Fp):
            raise ValueError("cannot coerce a prime-field residue into Q")
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        if isinstance(x, str):
            return mpq(Fraction(x).numerator, Fraction(x).denominator)
        return mpq(x)

    @property
    def base(self):
        return self

    def gens(self):
        return []

    def is_zero(self, x) -> bool:
        return x == 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("division by zero in Q")
        return mpq(1) / x

    def from_scalar(self, c):
        return self(c)

    def evaluate(self, x, images, target):
        return target.from_scalar(x)

    def key(self, x):
        return (int(x.numerator), int(x.denominator))

    def size(self, x) -> int:
        return int(x.numerator).bit_length() + int(x.denominator).bit_length()

    def sample(self):
        """A small fixed sample of nonzero scalars, for random generation."""
        return [mpq(v) for v in (1, -1, 2, -2, 3)] + [mpq(1, 2), mpq(-1, 3)]

    def to_json(self, x) -> str:
        return str(x)

    def from_json(self, s):
        return self(str(s))

    def embed(self, x):
        return self.from_scalar(x)


class PrimeField:
    """The field with ``p`` elements."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = Fp(p, 0)
        self.one = Fp(p, 1)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name

    def __call__(self, x) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError(f"cannot coerce GF({x.p}) into GF({self.p})")
            return x
        if isinstance(x, (Fraction, _MPQ)):
            return Fp(self.p, int(x.numerator)) * Fp(self.p, int(x.denominator)).inverse()
        if isinstance(x, str):
            return self(Fraction(x))
        return Fp(self.p, int(x))

    @property
    def base(self):
        return self

    def gens(self):
        return []

    def is_zero(self, x) -> bool:
        return x.v == 0

    def inv(self, x):
        return x.inverse()

    def from_scalar(self, c):
        return self(c)

    def evaluate(self, x, images, target):
        return target.from_scalar(x)

    def key(self, x):
        return (x.v,)

    def size(self, x) -> int:
        return 1

    def sample(self):
        return [Fp(self.p, v) for v in range(1, self.p)]

    def to_json(self, x) -> str:
        return str(x.v)

    def from_json(self, s) -> Fp:
        return Fp(self.p, int(s))

    def embed(self, x):
        return self.from_scalar(x)


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Parse ``Q``, ``QQ``, ``GF(p)`` or ``F_p``."""
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("GF(", "F_", "F"):
        if t.startswith(prefix):
            body = t[len(prefix):].rstrip(")")
            if body.isdigit():
                return PrimeField(int(body))
    raise InputError(f"unknown base field {text!r}")

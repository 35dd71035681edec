"""Sylvester matrix rank functions as values with provenance."""

from __future__ import annotations

import random
from typing import Callable, Sequence

from . import linalg
from .errors import InputError
from .group_algebra import Matrix


def _rows(M) -> list[list]:
    if isinstance(M, Matrix):
        return [list(r) for r in M.rows]
    return [list(r) for r in M]


def _shape(rows):
    return len(rows), (len(rows[0]) if rows else 0)


class RankAnnotation(int):
    """An integer rank that is only a certified lower bound."""

    def __new__(cls, value: int, stabilized: bool, order: int):
        obj = super().__new__(cls, value)
        obj.stabilized = stabilized
        obj.order = order
        return obj

    def __repr__(self):
        flag = "stabilized" if self.stabilized else "not stabilized"
        return f">={int(self)} ({flag}, order {self.order})"


def rank_over_tower(M, ring) -> int:
    """Left row rank over an exact division ring; Mal'cev-Neumann rings give a lower bound."""
    rows = _rows(M)
    m, n = _shape(rows)
    if m == 0 or n == 0:
        return 0
    from .malcev import MNRing, mn_rank
    if isinstance(ring, MNRing):
        res = mn_rank([[_to_algebra(ring, x) for x in r] for r in rows], ring.order_N)
        if res["exact"]:
            return res["lower_bound"]
        return RankAnnotation(res["lower_bound"], res["stabilized"], res["order"])
    return linalg.rank(ring, rows)


def _to_algebra(ring, x):
    from .group_algebra import GroupAlgebraElement
    if isinstance(x, GroupAlgebraElement):
        return x
    return ring.algebra.scalar(x)


class RankFunction:
    """A rank function on ``carrier`` with a human-readable provenance chain."""

    def __init__(self, carrier, evaluator: Callable, provenance: Sequence[str], integer: bool = True):
        self.carrier = carrier
        self.evaluator = evaluator
        self.provenance = list(provenance)
        self.integer = integer

    def __call__(self, M):
        rows = _rows(M)
        m, n = _shape(rows)
        if m == 0 or n == 0:
            return 0
        return self.evaluator(rows)

    def __repr__(self):
        return "rk[" + " <- ".join(self.provenance) + "]"

    def describe(self) -> dict:
        return {"provenance": self.provenance, "integer_valued": self.integer}


def division_rank(ring, name: str | None = None) -> RankFunction:
    """The unique rank function of a division ring."""
    label = name or (repr(ring))
    return RankFunction(ring, lambda rows: rank_over_tower(rows, ring), [f"division ring {label}"])


class RingHom:
    """Entrywise homomorphism ``source -> target`` given by a callable."""

    def __init__(self, source, target, fn: Callable, name: str = "phi"):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return self.fn(x)


def evaluation_hom(source, images: Sequence, target, name: str = "phi") -> RingHom:
    """The homomorphism sending ``source.gens()`` to ``images``."""
    imgs = [target(v) if not hasattr(v, "parent") else v for v in images]
    return RingHom(source, target, lambda x: source.evaluate(x, imgs, target), name)


def map_matrix(hom, rows) -> list[list]:
    out = []
    for i, r in enumerate(rows):
        row = []
        for j, x in enumerate(r):
            try:
                row.append(hom(x))
            except (ArithmeticError, InputError, ValueError, TypeError) as exc:
                raise InputError(f"homomorphism {getattr(hom, 'name', 'phi')} failed at entry ({i}, {j}): {exc}") from exc
        out.append(row)
    return out


def pullback(rk: RankFunction, hom, source=None) -> RankFunction:
    """``phi^#(rk)(A) = rk(phi(A))``."""
    src = source if source is not None else getattr(hom, "source", None)
    name = getattr(hom, "name", "phi")
    return RankFunction(src, lambda rows: rk(map_matrix(hom, rows)), [f"pullback along {name}"] + rk.provenance,
                        rk.integer)


# ---------------------------------------------------------------- axioms


def _zero(R, m, n):
    return [[R.zero] * n for _ in range(m)]


def _block(R, A, C, B):
    """``[[A, C], [0, B]]``; ``C`` may be ``None`` for a zero block."""
    ma, na = _shape(A)
    mb, nb = _shape(B)
    if C is None:
        C = _zero(R, ma, nb)
    top = [list(A[i]) + list(C[i]) for i in range(ma)]
    bottom = [[R.zero] * na + list(B[i]) for i in range(mb)]
    return top + bottom


def matrix_sampler(ring, max_dim: int = 3, density: float = 0.6, element=None) -> Callable:
    """Random matrices with independent random shapes and sparse entries."""
    gen = element or (lambda rng: ring.random_element(rng))

    def sample(rng: random.Random, m: int | None = None, n: int | None = None):
        m = m or rng.randint(1, max_dim)
        n = n or rng.randint(1, max_dim)
        return [[gen(rng) if rng.random() < density else ring.zero for _ in range(n)] for _ in range(m)]

    return sample


def axiom_suite(rk: RankFunction, sampler: Callable, trials: int = 100, seed: int = 0) -> dict:
    """Check the four Sylvester axioms on ``trials`` random tuples."""
    R = rk.carrier
    rng = random.Random(seed)
    violations = []
    spot = {"rk(1)": rk([[R.one]]), "rk(0)": rk([[R.zero]])}
    if spot["rk(1)"] != 1:
        violations.append({"axiom": 1, "witness": "rk(1)", "value": int(spot["rk(1)"])})
    if spot["rk(0)"] != 0:
        violations.append({"axiom": 1, "witness": "rk(0)", "value": int(spot["rk(0)"])})
    counts = {1: 0, 2: 0, 3: 0, 4: 0}
    for trial in range(trials):
        m, k, n = (rng.randint(1, 3) for _ in range(3))
        Z = _zero(R, m, n)
        if rk(Z) != 0:
            violations.append({"axiom": 1, "trial": trial, "shape": [m, n]})
        counts[1] += 1
        A = sampler(rng, m, k)
        B = sampler(rng, k, n)
        ra, rb = rk(A), rk(B)
        rab = rk(linalg.mat_mul(R, A, B))
        if rab > min(ra, rb):
            violations.append({"axiom": 2, "trial": trial, "values": [int(rab), int(ra), int(rb)],
                               "A": _show(A), "B": _show(B)})
        counts[2] += 1
        P = sampler(rng)
        Q = sampler(rng)
        rp, rq = rk(P), rk(Q)
        rd = rk(_block(R, P, None, Q))
        if rd != rp + rq:
            violations.append({"axiom": 3, "trial": trial, "values": [int(rd), int(rp), int(rq)],
                               "A": _show(P), "B": _show(Q)})
        counts[3] += 1
        C = sampler(rng, len(P), len(Q[0]))
        rt = rk(_block(R, P, C, Q))
        if rt < rp + rq:
            violations.append({"axiom": 4, "trial": trial, "values": [int(rt), int(rp), int(rq)],
                               "A": _show(P), "B": _show(Q), "C": _show(C)})
        counts[4] += 1
    return {"rank_function": rk.provenance, "trials": trials, "seed": seed,
            "checks": {str(a): c for a, c in counts.items()},
            "spot_checks": {k: int(v) for k, v in spot.items()},
            "violations": violations, "passed": not violations}


def _show(rows):
    return [[str(x) for x in r] for r in rows]


def compare_on_samples(rk1: RankFunction, rk2: RankFunction, samples: Sequence) -> dict:
    """Classify ``rk1`` against ``rk2`` on the given matrices only."""
    below, above = [], []
    values = []
    for M in samples:
        a, b = rk1(M), rk2(M)
        values.append([int(a), int(b)])
        if a < b:
            below.append({"matrix": _show(_rows(M)), "values": [int(a), int(b)]})
        elif a > b:
            above.append({"matrix": _show(_rows(M)), "values": [int(a), int(b)]})
    if below and above:
        relation = "incomparable"
    elif below:
        relation = "<="
    elif above:
        relation = ">="
    else:
        relation = "="
    return {"relation": relation, "scope": "on this sample", "samples": len(samples),
            "strictly_less": below, "strictly_greater": above, "values": values,
            "left": rk1.provenance, "right": rk2.provenance}

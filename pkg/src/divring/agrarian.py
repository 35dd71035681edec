"""Betti numbers over constructed division rings, Euler and index checks, zerodivisor scans."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from . import linalg
from .cosets import SubgroupData
from .errors import InputError
from .group_algebra import ChainComplex, GroupAlgebra, Matrix, fox_complex, ga_multiply
from .groups import FreeAbelian, FreeGroup, GroupSpec, PolyZ
from .malcev import MNRing, mn_rank

SCAN_ORDER_VERSION = "ball-combinations-product/1"
EXHAUSTIVE_LIMIT = 10 ** 8


class DivisionRingModel:
    """A division ring receiving ``k[G]`` together with the entry map."""

    def __init__(self, ring, embed: Callable, description: dict, exact_zero: bool = True):
        self.ring = ring
        self.embed = embed
        self.description = description
        self.exact_zero = exact_zero


def division_ring_for(group: GroupSpec, field, order: int = 4) -> DivisionRingModel:
    """The Ore tower for poly-Z and free-abelian groups, truncated series for free groups."""
    if isinstance(group, FreeGroup):
        R = MNRing(field, group, order)
        return DivisionRingModel(R, lambda x: x, R.describe(), exact_zero=False)
    if isinstance(group, (PolyZ, FreeAbelian)):
        from .tower import PolyZTower
        T = PolyZTower(group, field)
        ring = T.top if T.spec.layers else field
        return DivisionRingModel(ring, T.embed, T.describe())
    raise InputError(f"no division ring model for {group!r}")


def _rank(model: DivisionRingModel, M: Matrix | None, rng=None):
    """``(rank, exact)`` of a differential read in the division ring."""
    if M is None or M.nrows == 0 or M.ncols == 0:
        return 0, True
    if isinstance(model.ring, MNRing):
        res = mn_rank(M.rows, model.ring.order_N)
        return res["lower_bound"], res["exact"]
    rows = [[model.embed(x) for x in r] for r in M.rows]
    return linalg.rank(model.ring, rows, rng=rng), True


@dataclass
class BettiReport:
    group: str
    tower: dict
    dims: list
    ranks: list
    betti: list
    annotations: list
    euler: int
    chi: int
    checks: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(a == "exact" for a in self.annotations)

    def to_json(self) -> dict:
        return {"group": self.group, "tower": self.tower, "dims": self.dims, "ranks": self.ranks,
                "betti": self.betti, "annotations": self.annotations, "euler": self.euler,
                "chi": self.chi, "checks": self.checks}


def betti(complex_: ChainComplex, model: DivisionRingModel, rng: random.Random | None = None,
          degrees: int | None = None) -> BettiReport:
    """``b_p = n_p - rk d_p - rk d_{p+1}`` over the model's division ring.

    Rank lower bounds (truncated series) turn the affected Betti numbers
    into upper bounds.  ``degrees`` limits the report to ``b_0..b_{degrees-1}``.
    """
    dims = complex_.dims
    n = len(dims)
    ranks, exact = [0], [True]
    for p in range(1, n):
        r, ok = _rank(model, complex_.d(p), rng)
        ranks.append(r)
        exact.append(ok)
    ranks.append(0)
    exact.append(True)
    top = n if degrees is None else min(n, degrees)
    b, notes = [], []
    for p in range(top):
        v = dims[p] - ranks[p] - ranks[p + 1]
        if v < 0:
            raise ArithmeticError(f"negative Betti number in degree {p}: the complex is not exact-checked")
        b.append(v)
        notes.append("exact" if exact[p] and exact[p + 1] else "upper bound only")
    euler = sum((-1) ** p * v for p, v in enumerate(b))
    chi = complex_.euler_characteristic()
    return BettiReport(repr(complex_.algebra.group), model.description, list(dims), ranks[1:n], b, notes,
                       euler, chi, {"b0_vanishes": b[0] == 0 if b else None})


def euler_check(report: BettiReport, dims: Sequence[int] | None = None) -> dict:
    """Alternating sum of Betti numbers against the alternating sum of cell counts."""
    dims = list(report.dims if dims is None else dims)
    chi = sum((-1) ** p * n for p, n in enumerate(dims))
    if len(report.betti) < len(dims):
        return {"status": "inconclusive", "reason": "Betti numbers not computed in every degree", "chi": chi}
    if not report.exact:
        return {"status": "inconclusive", "reason": "some Betti numbers are bounds", "chi": chi,
                "euler": report.euler}
    ok = report.euler == chi
    return {"status": "pass" if ok else "fail", "chi": chi, "euler": report.euler, "passed": ok}


def restrict_complex(complex_: ChainComplex, H: SubgroupData, field=None) -> ChainComplex:
    """The same chain complex viewed over ``k[H]``: free of rank ``index * n_p``.

    The basis of ``C_p`` over ``k[H]`` is ``t_i e_a``; ``t_i g = h t_j``
    gives the entry ``h`` in row ``(i, a)`` and column ``(j, b)``.
    """
    if H.subgroup is None:
        raise InputError("restriction needs a subgroup spec with a rewriting process")
    A = complex_.algebra
    F = field or A.field
    S = GroupAlgebra(F, H.subgroup)
    k = H.index
    T = H.transversal
    diffs = []
    for p in range(1, len(complex_.dims)):
        d = complex_.d(p)
        m, n = d.nrows, d.ncols
        rows = [[dict() for _ in range(k * n)] for _ in range(k * m)]
        for i in range(k):
            for a in range(m):
                for b in range(n):
                    for g, c in d.rows[a][b].terms.items():
                        try:
                            h, j = H.membership(T[i] * g)
                            s = H.to_subgroup(h)
                        except Exception as exc:
                            raise InputError(f"restriction failed on t_{i} * {g!r}: {exc}") from exc
                        cell = rows[i * m + a][j * n + b]
                        cell[s] = cell.get(s, F.zero) + c
        diffs.append(Matrix(S, [[S.element(cell) for cell in r] for r in rows]))
    return ChainComplex(S, [k * x for x in complex_.dims], diffs)


def scaling_check(G: GroupSpec, H: SubgroupData, field, order: int = 4, complex_G: ChainComplex | None = None,
                  complex_H: ChainComplex | None = None, degrees: int | None = None,
                  restriction: bool = True) -> dict:
    """``|G:H| * b_p(G) = b_p(H)``, with ``b_p(H)`` from its own complex and from restriction."""
    cG = complex_G or fox_complex(G, field)
    if H.subgroup is None:
        raise InputError("the subgroup needs a spec")
    cH = complex_H or fox_complex(H.subgroup, field)
    mG = division_ring_for(G, field, order)
    mH = division_ring_for(H.subgroup, field, order)
    rG = betti(cG, mG, degrees=degrees)
    rH = betti(cH, mH, degrees=degrees)
    out = {"index": H.index, "b_G": rG.betti, "b_H": rH.betti,
           "annotations": {"G": rG.annotations, "H": rH.annotations}}
    top = min(len(rG.betti), len(rH.betti))
    per = [H.index * rG.betti[p] == rH.betti[p] for p in range(top)]
    if restriction:
        cR = restrict_complex(cG, H, field)
        rR = betti(cR, mH, degrees=degrees)
        out["b_H_restricted"] = rR.betti
        out["annotations"]["restricted"] = rR.annotations
        top = min(top, len(rR.betti))
        per = [per[p] and H.index * rG.betti[p] == rR.betti[p] for p in range(top)]
    exact = rG.exact and rH.exact and (not restriction or all(a == "exact" for a in out["annotations"]["restricted"]))
    out["per_degree"] = per
    out["status"] = ("pass" if all(per) else "fail") if exact else "inconclusive"
    out["passed"] = exact and all(per)
    return out


# ---------------------------------------------------------------- zerodivisor scans


def _elements(window, coeffs, support):
    """Nonzero elements supported in ``window`` with first coefficient 1."""
    for k in range(1, support + 1):
        for supp in itertools.combinations(window, k):
            for tail in itertools.product(coeffs, repeat=k - 1):
                yield supp, (1,) + tail


def count_elements(window_size: int, ncoeffs: int, support: int) -> int:
    return sum(comb(window_size, k) * ncoeffs ** (k - 1) for k in range(1, support + 1))


def zerodivisor_scan(group: GroupSpec, field, support: int = 2, radius: int = 2, coeffs: Sequence | None = None,
                     mode: str = "exhaustive", trials: int = 10000, seed: int = 0,
                     limit: int = EXHAUSTIVE_LIMIT) -> dict:
    """Search for ``a * b = 0`` among nonzero ``a, b`` with support in the word ball of ``radius``.

    The leading coefficient (first support element in ball order) of each
    factor is normalized to 1, which loses nothing since zero products are
    invariant under scaling.  Pairs containing a monomial are skipped: a
    monomial is a unit.
    """
    A = GroupAlgebra(field, group)
    window = group.ball(radius)
    cs = [field(c) for c in coeffs] if coeffs is not None else list(field.sample())
    cs = [c for c in cs if not field.is_zero(c)]
    one = field.one
    base = {"group": repr(group), "field": repr(field), "support": support, "radius": radius,
            "window_size": len(window), "coefficients": [str(c) for c in cs], "mode": mode,
            "seed": seed, "order_version": SCAN_ORDER_VERSION}
    count = count_elements(len(window), len(cs), support)

    def build(supp, co):
        return A.element({g: (one if c == 1 else c) for g, c in zip(supp, co)})

    products = 0
    if mode == "exhaustive":
        estimate = count * count
        base["estimated_products"] = estimate
        if estimate > limit:
            base.update(status="refused", reason=f"estimated {estimate} products exceeds {limit}")
            return base
        elems = [build(s, c) for s, c in _elements(window, cs, support) if len(s) > 1]
        for x in elems:
            for y in elems:
                products += 1
                z = ga_multiply(x, y)
                if A.is_zero(z):
                    base.update(status="zero divisor found", products=products,
                                certificate={"a": x.to_json(), "b": y.to_json(), "a_repr": repr(x),
                                             "b_repr": repr(y)})
                    return base
    elif mode == "random":
        rng = random.Random(seed)
        for _ in range(trials):
            pair = []
            for _ in range(2):
                k = rng.randint(2, max(2, support))
                supp = sorted(rng.sample(window, min(k, len(window))), key=window.index)
                co = [1] + [rng.choice(cs) for _ in range(len(supp) - 1)]
                pair.append(build(supp, co))
            products += 1
            if A.is_zero(ga_multiply(*pair)):
                base.update(status="zero divisor found", products=products,
                            certificate={"a": pair[0].to_json(), "b": pair[1].to_json(),
                                         "a_repr": repr(pair[0]), "b_repr": repr(pair[1])})
                return base
    else:
        raise InputError(f"unknown scan mode {mode!r}")
    base.update(status="no zero divisors", products=products)
    return base

"""Gaussian elimination over (possibly noncommutative) division rings.

A ring here is any parent exposing ``zero``, ``one``, ``is_zero(x)`` and
``inv(x)``, with elements supporting ``+ - *``.  Matrices are lists of rows.
Row operations multiply on the left, so row spaces are left vector spaces
and ``left_kernel`` solves ``v * M = 0``.
"""

from __future__ import annotations

import random
from typing import Sequence


def _size(R, x):
    f = getattr(R, "size", None)
    return f(x) if f else 0


def _copy(rows):
    return [list(r) for r in rows]


def _choose(R, M, col, start, rng):
    cands = [i for i in range(start, len(M)) if not R.is_zero(M[i][col])]
    if not cands:
        return None
    if rng is not None:
        return rng.choice(cands)
    return min(cands, key=lambda i: (_size(R, M[i][col]), i))


def row_echelon(R, rows: Sequence[Sequence], aug: Sequence[Sequence] | None = None,
                rng: random.Random | None = None, column_order: Sequence[int] | None = None):
    """Reduce by left row operations.

    Returns ``(M, A, pivots)`` where ``M`` is in echelon form, ``A`` the
    correspondingly transformed augmentation (``None`` if not given) and
    ``pivots`` the list of ``(row, col)`` pivot positions.  Each pivot row is
    scaled to have pivot 1.  With ``rng`` the pivot row is picked at random
    among nonzero candidates, otherwise the cheapest entry wins.
    """
    M = _copy(rows)
    A = _copy(aug) if aug is not None else None
    m = len(M)
    n = len(M[0]) if M else 0
    cols = list(column_order) if column_order is not None else list(range(n))
    pivots = []
    r = 0
    for c in cols:
        if r >= m:
            break
        p = _choose(R, M, c, r, rng)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        if A is not None:
            A[r], A[p] = A[p], A[r]
        inv = R.inv(M[r][c])
        M[r] = [inv * x for x in M[r]]
        if A is not None:
            A[r] = [inv * x for x in A[r]]
        for i in range(m):
            if i == r or R.is_zero(M[i][c]):
                continue
            f = M[i][c]
            M[i] = [x - f * y for x, y in zip(M[i], M[r])]
            if A is not None:
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append((r, c))
        r += 1
    return M, A, pivots


def rank(R, rows: Sequence[Sequence], rng: random.Random | None = None) -> int:
    """Dimension of the left row space.

    With ``rng`` this runs the randomized Gauss-Jordan reduction.  Otherwise
    it does forward elimination only, pivoting on the cheapest nonzero entry
    of the whole remaining block, and never touches entries known to be zero.
    """
    if not rows or not rows[0]:
        return 0
    if rng is not None:
        return len(row_echelon(R, rows, rng=rng)[2])
    M = _copy(rows)
    zero = [[R.is_zero(x) for x in row] for row in M]
    live_rows = list(range(len(M)))
    live_cols = list(range(len(M[0])))
    r = 0
    while live_rows and live_cols:
        cands = [(_size(R, M[i][j]), i, j) for i in live_rows for j in live_cols if not zero[i][j]]
        if not cands:
            break
        _, p, c = min(cands)
        live_rows.remove(p)
        live_cols.remove(c)
        r += 1
        if not live_rows or not live_cols:
            break
        inv = R.inv(M[p][c])
        for i in live_rows:
            if zero[i][c]:
                continue
            f = M[i][c] * inv
            for j in live_cols:
                if zero[p][j]:
                    continue
                M[i][j] = M[i][j] - f * M[p][j]
                zero[i][j] = R.is_zero(M[i][j])
    return r


def column_rank(R, rows: Sequence[Sequence]) -> int:
    """Dimension of the right column space, by right column operations."""
    M = _copy(rows)
    m = len(M)
    n = len(M[0]) if M else 0
    r = 0
    for i in range(m):
        if r >= n:
            break
        cands = [j for j in range(r, n) if not R.is_zero(M[i][j])]
        if not cands:
            continue
        p = min(cands, key=lambda j: (_size(R, M[i][j]), j))
        for row in M:
            row[r], row[p] = row[p], row[r]
        inv = R.inv(M[i][r])
        for row in M:
            row[r] = row[r] * inv
        for j in range(n):
            if j == r or R.is_zero(M[i][j]):
                continue
            f = M[i][j]
            for row in M:
                row[j] = row[j] - row[r] * f
        r += 1
    return r


def left_kernel(R, rows: Sequence[Sequence]) -> list[list]:
    """Basis of ``{v : v * M = 0}``."""
    m = len(rows)
    ident = [[R.one if i == j else R.zero for j in range(m)] for i in range(m)]
    M, A, pivots = row_echelon(R, rows, ident)
    return [A[i] for i in range(len(pivots), m)]


def solve_left(R, rows: Sequence[Sequence], b: Sequence):
    """Some ``v`` with ``v * M = b``, or ``None`` if ``b`` is not in the row space."""
    m = len(rows)
    n = len(b)
    ident = [[R.one if i == j else R.zero for j in range(m)] for i in range(m)]
    M, A, pivots = row_echelon(R, rows, ident)
    residual = list(b)
    v = [R.zero] * m
    for r, c in pivots:
        f = residual[c]
        if R.is_zero(f):
            continue
        residual = [x - f * y for x, y in zip(residual, M[r])]
        v = [x + f * y for x, y in zip(v, A[r])]
    if any(not R.is_zero(x) for x in residual[:n]):
        return None
    return v


def mat_mul(R, A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [R.zero] * n
        for a, brow in zip(row, B):
            if R.is_zero(a):
                continue
            acc = [x + a * y for x, y in zip(acc, brow)]
        out.append(acc)
    return out


def vec_mat(R, v: Sequence, M: Sequence[Sequence]) -> list:
    return mat_mul(R, [list(v)], M)[0] if M else []

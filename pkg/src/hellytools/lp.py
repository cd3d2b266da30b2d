"""Exact dictionary simplex over the rationals.

Arithmetic runs on gmpy2 ``mpq``; results come back as ``Fraction``.

Solves ``max c.x  s.t.  A x <= b`` where each variable is either free or
nonnegative.  Pivoting follows Bland's rule, so the method terminates on
degenerate problems without any numerical tolerance.

Free variables are pivoted into the basis once and never leave it, which
keeps the working dictionary at ``(m - #free) x (#nonneg + #free slacks)``.
That is the cheap shape for the problems here: few variables, many rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class _Dictionary:
    # basis[r] = rows[r][0] + sum_p rows[r][p + 1] * nonbasic[p]

    def __init__(self, A, b, n, free):
        self.n = n
        self.m = len(A)
        self.free = free
        self.nonbasic = list(range(n))
        self.basis = [n + i for i in range(self.m)]
        self.rows = [[mpq(bi)] + [-mpq(a) for a in Ai] for Ai, bi in zip(A, b)]

    def is_free(self, var):
        return var < self.n and self.free[var]

    def pivot(self, r, k, objectives=()):
        prow = self.rows[r]
        inv = 1 / prow[k]
        new = [-x * inv for x in prow]
        new[k] = inv
        self.rows[r] = new
        support = [t for t, x in enumerate(new) if x and t != k]
        for q, row in enumerate(self.rows):
            if q != r:
                _eliminate(row, new, support, k, inv)
        for row in objectives:
            _eliminate(row, new, support, k, inv)
        self.basis[r], self.nonbasic[k - 1] = self.nonbasic[k - 1], self.basis[r]

    def constrained(self, r):
        return not self.is_free(self.basis[r])

    def run(self, obj):
        """Bland-rule simplex on ``obj``; returns OPTIMAL or UNBOUNDED."""
        while True:
            enter = None
            for p, var in enumerate(self.nonbasic):
                coef = obj[p + 1]
                if not coef:
                    continue
                if self.is_free(var):
                    # zero column in every constrained row: a free ray
                    return UNBOUNDED
                if coef > 0 and (enter is None or var < self.nonbasic[enter - 1]):
                    enter = p + 1
            if enter is None:
                return OPTIMAL
            leave = None
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a < 0 and self.constrained(r):
                    ratio = row[0] / -a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[r] < self.basis[leave]
                    ):
                        best, leave = ratio, r
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, enter, (obj,))

    def drop_column(self, k):
        for row in self.rows:
            del row[k]
        del self.nonbasic[k - 1]


def _eliminate(row, new, support, k, inv):
    bq = row[k]
    if not bq:
        return
    for t in support:
        row[t] += bq * new[t]
    row[k] = bq * inv


def simplex_max(
    c: Sequence, A: Sequence[Sequence], b: Sequence, free: Sequence[bool] | None = None
) -> tuple[str, Fraction | None, list[Fraction] | None]:
    """Maximize ``c.x`` subject to ``A x <= b``.

    ``free[j]`` marks variable ``j`` as unrestricted in sign; the others are
    constrained to be nonnegative.  All variables are free by default.
    Returns ``(status, value, x)``; value and x are None unless optimal.
    """
    n = len(c)
    free = [True] * n if free is None else list(free)
    D = _Dictionary(A, b, n, free)

    for j in range(n):
        if not free[j]:
            continue
        k = D.nonbasic.index(j) + 1
        for r, row in enumerate(D.rows):
            if row[k] and D.constrained(r):
                D.pivot(r, k)
                break

    # phase 1: single artificial column added to every constrained row
    worst = None
    for r, row in enumerate(D.rows):
        if D.constrained(r) and row[0] < 0 and (worst is None or row[0] < D.rows[worst][0]):
            worst = r
    if worst is not None:
        art = n + D.m
        for r, row in enumerate(D.rows):
            row.append(mpq(1) if D.constrained(r) else mpq(0))
        D.nonbasic.append(art)
        k = len(D.nonbasic)
        w = [mpq(0)] * (k + 1)
        w[k] = mpq(-1)
        D.pivot(worst, k, (w,))
        D.run(w)
        if w[0] < 0:
            return INFEASIBLE, None, None
        if art in D.basis:
            r = D.basis.index(art)
            row = D.rows[r]
            k = next((p for p in range(1, len(row)) if row[p]), None)
            if k is None:
                del D.rows[r]
                del D.basis[r]
            else:
                D.pivot(r, k)
        D.drop_column(D.nonbasic.index(art) + 1)

    obj = [mpq(0)] * (len(D.nonbasic) + 1)
    where = {var: r for r, var in enumerate(D.basis)}
    for j, cj in enumerate(c):
        if not cj:
            continue
        cj = mpq(cj)
        if j in where:
            for t, x in enumerate(D.rows[where[j]]):
                if x:
                    obj[t] += cj * x
        else:
            obj[D.nonbasic.index(j) + 1] += cj
    if D.run(obj) == UNBOUNDED:
        return UNBOUNDED, None, None

    x = [Fraction(0)] * n
    for r, var in enumerate(D.basis):
        if var < n:
            x[var] = to_fraction(D.rows[r][0])
    return OPTIMAL, to_fraction(obj[0]), x


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))

"""Exact two-phase simplex over Q, used to find rational witness points.

Only what face enumeration needs: maximize ``c.y`` over free variables ``y``
subject to ``A_ub y <= b_ub`` and ``A_eq y = b_eq``.  Bland's rule keeps the
pivoting finite without any tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = 1 / tab[r][c]
    tab[r] = [x * inv for x in tab[r]]
    for i, row in enumerate(tab):
        if i != r and row[c]:
            f = row[c]
            tab[i] = [x - f * y for x, y in zip(row, tab[r])]
    basis[r] = c


def _run(tab, basis, obj, allowed) -> bool:
    """Maximize ``obj`` (reduced-cost row, last entry = -value). False if unbounded."""
    m = len(basis)
    while True:
        enter = next((j for j in allowed if obj[j] > 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        r = best[1]
        _pivot(tab, basis, r, enter)
        f = obj[enter]
        obj[:] = [x - f * y for x, y in zip(obj, tab[r])]


def maximize(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> tuple[str, list[Fraction] | None, Fraction | None]:
    """Return ``(status, y, value)`` for the LP with free variables ``y``."""
    k = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([Fraction(x) for x in a], Fraction(b), True))
    for a, b in zip(a_eq, b_eq):
        rows.append(([Fraction(x) for x in a], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: y+ (k), y- (k), slacks, artificials (m), rhs
    n_cols = 2 * k + n_slack + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, is_ub) in enumerate(rows):
        row = [Fraction(0)] * (n_cols + 1)
        row[:k] = a
        row[k : 2 * k] = [-x for x in a]
        if is_ub:
            row[2 * k + s] = Fraction(1)
            s += 1
        row[-1] = b
        if b < 0:
            row = [-x for x in row]
        row[2 * k + n_slack + i] = Fraction(1)
        tab.append(row)
        basis.append(2 * k + n_slack + i)

    art = set(range(2 * k + n_slack, n_cols))
    # phase 1: maximize -sum(artificials)
    obj = [Fraction(0)] * (n_cols + 1)
    for row in tab:
        obj = [x + y for x, y in zip(obj, row)]
    for j in art:
        obj[j] = Fraction(0)
    _run(tab, basis, obj, [j for j in range(n_cols) if j not in art])
    if obj[-1] != 0:
        return INFEASIBLE, None, None

    # drive degenerate artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] in art:
            j = next((j for j in range(2 * k + n_slack) if tab[i][j]), None)
            if j is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, j)
        i += 1

    allowed = list(range(2 * k + n_slack))
    cost = [Fraction(x) for x in c] + [-Fraction(x) for x in c] + [Fraction(0)] * n_slack
    obj = cost + [Fraction(0)] * m + [Fraction(0)]
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            obj = [x - f * y for x, y in zip(obj, tab[i])]
    if not _run(tab, basis, obj, allowed):
        return UNBOUNDED, None, None
    z = [Fraction(0)] * n_cols
    for i, b in enumerate(basis):
        z[b] = tab[i][-1]
    y = [z[j] - z[k + j] for j in range(k)]
    value = sum((ci * yi for ci, yi in zip(c, y)), Fraction(0))
    return OPTIMAL, y, value


def strict_feasible_point(
    normals: Sequence[Sequence[Fraction]],
    offsets: Sequence[Fraction],
    signs: Sequence[int],
) -> list[Fraction] | None:
    """A rational x with ``sign(normal_i . x - offset_i) == signs[i]`` for all i.

    Strict inequalities are handled with an auxiliary margin variable t:
    maximize t subject to ``s_i (a_i x - b_i) >= t`` and ``t <= 1``; the
    sign pattern is realizable iff the optimum is positive.
    """
    n = len(normals[0]) if normals else 0
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for a, b, s in zip(normals, offsets, signs):
        if s == 0:
            a_eq.append(list(a) + [0])
            b_eq.append(b)
        else:
            a_ub.append([-s * x for x in a] + [1])
            b_ub.append(-s * b)
    a_ub.append([0] * n + [1])
    b_ub.append(1)
    status, y, value = maximize([0] * n + [1], a_ub, b_ub, a_eq, b_eq)
    if status != OPTIMAL or value <= 0:
        return None
    return y[:n]

"""Small dense linear algebra over Q(u)."""

from __future__ import annotations

from typing import List, Optional, Sequence

from .exact_arith import RatFn

Matrix = List[List[RatFn]]


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[RatFn.coerce(x) for x in r] for r in rows]


def row_echelon(rows: Sequence[Sequence]) -> Matrix:
    """Reduced row echelon form; zero rows are dropped."""
    a = _copy(rows)
    if not a:
        return []
    ncols = len(a[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(a)) if a[r][col]), None)
        if pr is None:
            continue
        a[pivot_row], a[pr] = a[pr], a[pivot_row]
        inv = a[pivot_row][col].inverse()
        a[pivot_row] = [x * inv for x in a[pivot_row]]
        for r in range(len(a)):
            if r != pivot_row and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[pivot_row])]
        pivot_row += 1
        if pivot_row == len(a):
            break
    return [r for r in a if any(r)]


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows))


def in_span(vector: Sequence, rows: Sequence[Sequence]) -> bool:
    return rank(list(rows) + [list(vector)]) == rank(rows)


def solve(columns: Sequence[Sequence], target: Sequence) -> Optional[List[RatFn]]:
    """Coefficients c with sum c_j * columns[j] == target, or None."""
    n = len(columns)
    m = len(target)
    aug = [[RatFn.coerce(columns[j][i]) for j in range(n)] + [RatFn.coerce(target[i])] for i in range(m)]
    ech = row_echelon(aug)
    sol = [RatFn() for _ in range(n)]
    for r in ech:
        lead = next(j for j, x in enumerate(r) if x)
        if lead == n:
            return None
        sol[lead] = r[n]
    return sol


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {v : rows * v = 0}."""
    ech = row_echelon(rows) if rows else []
    pivots = []
    for r in ech:
        pivots.append(next(j for j, x in enumerate(r) if x))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [RatFn() for _ in range(ncols)]
        v[f] = RatFn.const(1)
        for r, p in zip(ech, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis

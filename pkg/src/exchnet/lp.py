"""Phase-one simplex feasibility solver, exact or floating point.

Solves: does there exist x >= 0 with A x = b?  Exact Fraction pivoting with
Bland's rule (no cycling, unambiguous verdicts) when the data are rational;
a dense float variant with a pivot tolerance otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

FLOAT_EPS = 1e-9


@dataclass
class FeasibilityResult:
    feasible: bool
    x: list | None  # a basic feasible solution when feasible
    residual: object  # minimized total constraint violation
    worst_row: int | None  # row with the largest remaining violation
    pivots: int


def _phase_one(a_rows: list, b: list, exact: bool) -> FeasibilityResult:
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    eps = zero if exact else FLOAT_EPS

    # normalize b >= 0
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < zero:
            rows.append([-v for v in a_rows[i]])
            rhs.append(-b[i])
        else:
            rows.append(list(a_rows[i]))
            rhs.append(b[i])

    # tableau columns: n structural + m artificial + rhs
    width = n + m
    tab = []
    for i in range(m):
        row = rows[i] + [zero] * m + [rhs[i]]
        row[n + i] = one
        tab.append(row)
    basis = [n + i for i in range(m)]
    # phase-one objective: minimize sum of artificials; reduced-cost row.
    # Artificial columns start basic with unit cost, so their reduced cost is 0.
    obj = [zero] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] = obj[j] - tab[i][j]
    for i in range(m):
        obj[n + i] = zero

    pivots = 0
    while True:
        enter = -1
        for j in range(width):
            if obj[j] < -eps:
                enter = j  # Bland: first improving column
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if tab[i][enter] > eps:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            # unbounded phase-one cannot happen (objective bounded below by 0)
            break
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != zero:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if obj[enter] != zero:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter
        pivots += 1

    residual = -obj[width]
    feas_tol = zero if exact else FLOAT_EPS
    feasible = residual <= feas_tol
    x = None
    worst = None
    if feasible:
        x = [zero] * n
        for i, bi in enumerate(basis):
            if bi < n:
                x[bi] = tab[i][width]
    else:
        worst_val = zero
        for i, bi in enumerate(basis):
            if bi >= n and tab[i][width] > worst_val:
                worst_val = tab[i][width]
                worst = bi - n
    return FeasibilityResult(feasible, x, residual, worst, pivots)


def solve_feasibility(
    a_rows: Sequence, b: Sequence, exact: bool | None = None
) -> FeasibilityResult:
    """Feasibility of {x >= 0 : A x = b}.

    ``exact=None`` auto-selects: exact when every coefficient is an int or
    Fraction, float otherwise.
    """
    if exact is None:
        exact = all(
            isinstance(v, (int, Fraction)) for row in a_rows for v in row
        ) and all(isinstance(v, (int, Fraction)) for v in b)
    if exact:
        rows = [[Fraction(v) for v in row] for row in a_rows]
        rhs = [Fraction(v) for v in b]
    else:
        rows = [[float(v) for v in row] for row in a_rows]
        rhs = [float(v) for v in b]
    return _phase_one(rows, rhs, exact)

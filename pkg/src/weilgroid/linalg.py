"""Dense exact linear algebra over the rationals.

Small hand-rolled routines: every matrix in this package has at most a few
dozen rows, and the solver must stay exact, so Fraction Gaussian elimination
beats any float library here.  Right-hand sides are allowed to carry values
from another commutative ring (polynomials), as long as they support addition
and scaling by Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

Matrix = list[list[Fraction]]


def identity_matrix(n: int) -> Matrix:
    return [[Fraction(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("inner dimensions differ")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append(
            [sum((row[k] * b[k][j] for k in range(len(b)) if row[k]), Fraction(0)) for j in range(cols)]
        )
    return out


def mat_vec(a: Matrix, v: Sequence[Any]) -> list[Any]:
    """Matrix times vector; vector entries may live in a generic ring."""
    if a and len(a[0]) != len(v):
        raise ValueError("dimension mismatch")
    out = []
    for row in a:
        acc: Any = Fraction(0)
        for coef, entry in zip(row, v):
            if coef:
                acc = acc + coef * entry
        out.append(acc)
    return out


def rref(a: Matrix) -> tuple[Matrix, Matrix, list[int]]:
    """Reduced row echelon form with transform: returns (R, T, pivots), T*a = R."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = [list(row) for row in a]
    t = identity_matrix(rows)
    pivots: list[int] = []
    lead = 0
    for col in range(cols):
        pivot = next((i for i in range(lead, rows) if r[i][col] != 0), None)
        if pivot is None:
            continue
        r[lead], r[pivot] = r[pivot], r[lead]
        t[lead], t[pivot] = t[pivot], t[lead]
        inv = Fraction(1) / r[lead][col]
        if inv != 1:
            r[lead] = [x * inv for x in r[lead]]
            t[lead] = [x * inv for x in t[lead]]
        for i in range(rows):
            if i != lead and r[i][col]:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[lead])]
                t[i] = [x - f * y for x, y in zip(t[i], t[lead])]
        pivots.append(col)
        lead += 1
        if lead == rows:
            break
    return r, t, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[2])


def nullspace(a: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r, _, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        out.append(v)
    return out

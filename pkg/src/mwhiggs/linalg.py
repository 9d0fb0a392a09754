"""Exact linear algebra over Q used by the Lie-theoretic modules."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .field import FieldError, MatrixF

Vec = list[Fraction]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pr = m[r]
        nz = [(j, x) for j, x in enumerate(pr) if x]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                row = m[k]
                for j, x in nz:
                    row[j] -= f * x
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Basis of {x : rows @ x = 0}, each vector normalized so its free entry is 1."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def inverse(m: Sequence[Sequence[Fraction]]) -> list[Vec]:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise FieldError("singular matrix")
    return [row[n:] for row in red]


def real_coords(M: MatrixF) -> Vec:
    """Flatten a matrix to its 4*rows*cols rational coordinates."""
    out: Vec = []
    for x in M.entries:
        out.extend(x.coords)
    return out


def ldl_signs(gram: Sequence[Sequence[Fraction]]) -> list[int]:
    """Signs of the pivots of a symmetric LDL^T factorization without pivoting.

    All pivots positive (resp. negative) certifies positive (resp. negative)
    definiteness; a zero pivot is reported as 0 and stops the factorization.
    """
    n = len(gram)
    a = [list(map(Fraction, r)) for r in gram]
    signs = []
    for k in range(n):
        p = a[k][k]
        if p == 0:
            signs.append(0)
            return signs
        signs.append(1 if p > 0 else -1)
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / p
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return signs


def is_positive_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    s = ldl_signs(gram)
    return len(s) == len(gram) and all(x == 1 for x in s)


def is_negative_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    return is_positive_definite([[-x for x in r] for r in gram])

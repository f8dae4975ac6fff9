"""Dense linear algebra over a :class:`~scatterforge.field.GF` level.

Rows are lists of codes.  Used both over F_q (expanded coordinates) and over
F_{q^m} (projective subspaces, generator matrices).
"""

from __future__ import annotations

from typing import Sequence

from .field import GF

Matrix = list[list[int]]


def rref(F: GF, rows: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        if inv != 1:
            M[r] = [F.mul(inv, x) for x in M[r]]
        row = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = F.neg(M[i][c])
                Mi = M[i]
                M[i] = [F.add(a, F.mul(f, b)) if b else a for a, b in zip(Mi, row)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F: GF, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(F, rows)[1])


def nullspace(F: GF, rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of {y : M y^T = 0} for the matrix with the given rows."""
    if ncols is None:
        ncols = len(rows[0])
    R, pivots = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        y = [0] * ncols
        y[f] = 1
        for i, pc in enumerate(pivots):
            y[pc] = F.neg(R[i][f])
        basis.append(y)
    return basis


def orthogonal_complement(F: GF, rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of the complement of the row space under the standard dot product."""
    return nullspace(F, rows, ncols) if rows else [[int(i == j) for j in range(ncols)] for i in range(ncols)]


def matmul(F: GF, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                if Bt[j]:
                    row[j] = F.add(row[j], F.mul(a, Bt[j]))
    return out


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(F: GF, A: Sequence[Sequence[int]]) -> int:
    M = [list(r) for r in A]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.neg(F.mul(M[i][c], inv))
                M[i] = [F.add(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
    return d


def entrywise(A: Sequence[Sequence[int]], fn) -> Matrix:
    return [[fn(x) for x in row] for row in A]


def same_row_space(F: GF, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    return rref(F, A)[0] == rref(F, B)[0]


def to_digits(a: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        a, d = divmod(a, base)
        out.append(d)
    return out


def from_digits(digits: Sequence[int], base: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * base + d
    return code

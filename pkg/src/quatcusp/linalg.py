"""Exact linear algebra over Q and Z on plain nested lists."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def identity(n: int, one=1, zero=0) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in A]


def vecmat(v: Sequence, A: Sequence[Sequence]) -> list:
    return [sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0]))]


def solve_field(A: Sequence[Sequence], rhs: Sequence, zero, one) -> list | None:
    """Solve A x = rhs over any exact field; None when singular.

    Entries need +, -, *, / and truth testing; ``zero``/``one`` seed the result.
    """
    n = len(A)
    M = [list(row) + [rhs[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = one / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def inverse_rational(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def rank_rational(A: Sequence[Sequence]) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    rank = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, len(M)):
            if M[r][col]:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def _echelon(rows: list[list[int]], ncols: int) -> int:
    """Integer row echelon form on the first ``ncols`` columns, in place.

    Whole rows are transformed (so augmented columns follow along); pivots
    end up positive with entries above them reduced into [0, pivot).
    Returns the rank of the leading block.
    """
    r = 0
    m = len(rows)
    pivots = []
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, m) if rows[i][col]]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[best] = rows[best], rows[r]
            p = rows[r][col]
            done = True
            for i in range(r + 1, m):
                if rows[i][col]:
                    f = rows[i][col] // p
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if r < m and rows[r][col]:
            if rows[r][col] < 0:
                rows[r] = [-x for x in rows[r]]
            p = rows[r][col]
            for i in range(r):
                f = rows[i][col] // p
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
            if r == m:
                break
    return r


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form; zero rows dropped."""
    work = [list(map(int, row)) for row in rows]
    if not work:
        return []
    rank = _echelon(work, len(work[0]))
    return work[:rank]


def integer_kernel(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {c in Z^m : c A = 0} for an integer m x k matrix A."""
    m = len(A)
    k = len(A[0]) if m else 0
    aug = [list(map(int, A[i])) + [int(i == j) for j in range(m)] for i in range(m)]
    rank = _echelon(aug, k)
    return hnf([row[k:] for row in aug[rank:]]) if rank < m else []


def det_int(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def charpoly_int(A: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - A), leading first (Faddeev-LeVerrier)."""
    n = len(A)
    A = [[Fraction(x) for x in row] for row in A]
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        M = matmul(A, M)
        for i in range(n):
            M[i][i] += coeffs[-1]
        AM = matmul(A, M)
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial")
        out.append(int(c))
    return out


def matpow_int(A: Sequence[Sequence[int]], e: int) -> list[list[int]]:
    n = len(A)
    if e < 0:
        A = inverse_int(A)
        e = -e
    result = identity(n)
    base = [list(row) for row in A]
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def inverse_int(A: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = inverse_rational(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not invertible over Z")
        out.append([int(x) for x in row])
    return out


def poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out

"""Exact integer matrix routines used for the section determinant tests.

Matrices are lists of rows of Python ints. Nothing here touches floats.
"""

from __future__ import annotations

from fractions import Fraction


class SingularMatrixError(ArithmeticError):
    """Raised when an inverse is requested for a non-invertible matrix."""

    def __init__(self, det, message=None):
        self.det = det
        super().__init__(message or f"matrix is not invertible (det {det})")


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def bareiss_det(mat):
    """Determinant over the integers by fraction-free elimination.

    The empty matrix has determinant 1.

    >>> bareiss_det([[2, 1], [1, 1]])
    1
    >>> bareiss_det([[0, 1], [1, 0]])
    -1
    """
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_mod(mat, p):
    """Determinant modulo a prime ``p`` by Gaussian elimination over GF(p)."""
    n = len(mat)
    if n == 0:
        return 1 % p
    m = [[x % p for x in row] for row in mat]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        pivot = m[k][k]
        det = det * pivot % p
        inv = pow(pivot, -1, p)
        for i in range(k + 1, n):
            f = m[i][k] * inv % p
            if f:
                row_i, row_k = m[i], m[k]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det % p


def integer_inverse(mat):
    """Inverse of a unimodular integer matrix, as an integer matrix.

    Raises SingularMatrixError unless det(mat) is +1 or -1.
    """
    n = len(mat)
    det = bareiss_det(mat)
    if det not in (1, -1):
        raise SingularMatrixError(det)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for k in range(n):
        piv = next(i for i in range(k, n) if aug[i][k] != 0)
        aug[k], aug[piv] = aug[piv], aug[k]
        pivot = aug[k][k]
        aug[k] = [x / pivot for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    out = []
    for row in aug:
        vals = row[n:]
        assert all(v.denominator == 1 for v in vals)
        out.append([int(v) for v in vals])
    return out


def inverse_mod_prime_power(mat, p, modulus):
    """Inverse of ``mat`` modulo ``modulus`` (a power of the prime ``p``).

    Pivots are chosen among entries that are units mod p, so this works over
    Z/p^k even though it is not a field. Raises SingularMatrixError when the
    determinant vanishes mod p.
    """
    n = len(mat)
    d = det_mod(mat, p)
    if d == 0:
        raise SingularMatrixError(bareiss_det(mat) % modulus)
    aug = [[x % modulus for x in row] + [int(i == j) for j in range(n)]
           for i, row in enumerate(mat)]
    for k in range(n):
        piv = next(i for i in range(k, n) if aug[i][k] % p)
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = pow(aug[k][k], -1, modulus)
        aug[k] = [x * inv % modulus for x in aug[k]]
        for i in range(n):
            f = aug[i][k]
            if i != k and f:
                row_k = aug[k]
                aug[i] = [(x - f * y) % modulus for x, y in zip(aug[i], row_k)]
    return [row[n:] for row in aug]

"""Exact linear algebra modulo a prime on integer numpy arrays.

Used for the prime-field view of rings and operators (dimension m*p^n
over GF(p)), where vectorized row reduction keeps the exhaustive
oracles fast.  All arrays hold small nonnegative ints; arithmetic is
integer arithmetic followed by % p, so results are exact.
"""

from __future__ import annotations

import numpy as np


def as_array(rows, p: int) -> np.ndarray:
    return np.atleast_2d(np.asarray(rows, dtype=np.int64)) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p, plus the pivot column list."""
    m = a.copy() % p
    n_rows, n_cols = m.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        pivot = None
        for i in range(r, n_rows):
            if m[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        for i in range(n_rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis of the row space (zero rows dropped)."""
    m, pivots = rref(a, p)
    return m[: len(pivots)]


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of {v : a @ v = 0 mod p}."""
    m, pivots = rref(a, p)
    n_cols = a.shape[1]
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-int(m[r, fc])) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """A particular solution of a @ x = b mod p, or None if inconsistent.

    Free variables are set to zero.
    """
    aug = np.hstack([a % p, (np.asarray(b, dtype=np.int64) % p).reshape(-1, 1)])
    m, pivots = rref(aug, p)
    n_cols = a.shape[1]
    if n_cols in pivots:
        return None
    x = np.zeros(n_cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = m[r, n_cols]
    return x


def in_rowspace(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.size == 0:
        return not np.any(v % p)
    stacked = np.vstack([basis, v])
    return rank(stacked, p) == rank(basis, p)


def same_rowspace(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ra, rb = rank(a, p), rank(b, p)
    if ra != rb:
        return False
    return rank(np.vstack([a, b]), p) == ra

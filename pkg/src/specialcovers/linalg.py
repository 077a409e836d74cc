"""Exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Everything here
is plain Gaussian elimination; sizes stay small enough (a few thousand rows
at the very worst) that this is all we need.
"""

from __future__ import annotations

import numpy as np


def _as_matrix(mat, p: int) -> np.ndarray:
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("matrix expected")
    return a


def rref(mat, p: int):
    """Reduced row echelon form mod p; returns (matrix, pivot column list)."""
    a = _as_matrix(mat, p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        hit = np.nonzero(a[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            a[hit] = (a[hit] - np.outer(a[hit, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_basis(mat, p: int) -> np.ndarray:
    """Basis of the right kernel of `mat` mod p, one vector per row."""
    a = _as_matrix(mat, p)
    _, cols = a.shape
    red, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, c]) % p
    return basis


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def det(mat, p: int) -> int:
    """Determinant mod p by fraction-free elimination."""
    a = _as_matrix(mat, p).copy()
    n, m = a.shape
    if n != m:
        raise ValueError("square matrix expected")
    d = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + nz[0]
        if i != c:
            a[[c, i]] = a[[i, c]]
            d = (-d) % p
        d = (d * int(a[c, c])) % p
        inv = pow(int(a[c, c]), p - 2, p)
        a[c] = (a[c] * inv) % p
        below = np.arange(c + 1, n)
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[c])) % p
    return d % p


def matmul(a, b, p: int) -> np.ndarray:
    """Matrix product mod p (int64 safe for the sizes used here)."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    # guard against int64 overflow on long inner dimensions
    inner = a.shape[-1]
    if inner * (p - 1) * (p - 1) < 2**62:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, 2**62 // ((p - 1) * (p - 1)))
    for lo in range(0, inner, step):
        out = (out + a[:, lo:lo + step] @ b[lo:lo + step, :]) % p
    return out


def solve(mat, rhs, p: int):
    """One solution of mat @ x = rhs mod p, or None if inconsistent."""
    a = _as_matrix(mat, p)
    b = np.array(rhs, dtype=np.int64).reshape(-1) % p
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, pivots = rref(aug, p)
    if aug.shape[1] - 1 in pivots:
        return None
    x = np.zeros(a.shape[1], dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, -1]
    return x

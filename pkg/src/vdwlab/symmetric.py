"""Coefficient tuples for symmetric matrices.

A symmetric n x n matrix is encoded as the n(n+1)/2 tuple of its upper
coefficients (i <= j, lexicographic).  The map to matrices halves the
off-diagonal entries, so that t^T sym_matrix(x) t expands to the plain
polynomial sum_{i<=j} x_ij t_i t_j.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "tuple_len",
    "pair_index",
    "index_pairs",
    "sym_matrix",
    "sym_tuple",
    "random_sym_tuple",
]


def tuple_len(n: int) -> int:
    return n * (n + 1) // 2


def index_pairs(n: int) -> list[tuple[int, int]]:
    """Lexicographic (i, j) with i <= j — the coordinate order of tuples."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def pair_index(i: int, j: int, n: int) -> int:
    """Position of coefficient (i, j), i <= j, inside the flat tuple."""
    if not 0 <= i <= j < n:
        raise ValueError("need 0 <= i <= j < n")
    return i * n - i * (i - 1) // 2 + (j - i)


def sym_matrix(x: np.ndarray, n: int | None = None) -> np.ndarray:
    """Tuple -> symmetric matrix: diagonal kept, off-diagonal halved."""
    x = np.asarray(x, dtype=float)
    if n is None:
        n = int(round((np.sqrt(8 * x.size + 1) - 1) / 2))
    if x.size != tuple_len(n):
        raise ValueError(f"tuple length {x.size} does not match dimension {n}")
    m = np.zeros((n, n))
    k = 0
    for i in range(n):
        m[i, i] = x[k]
        k += 1
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = 0.5 * x[k]
            k += 1
    return m


def sym_tuple(m: np.ndarray) -> np.ndarray:
    """Symmetric matrix -> tuple: diagonal kept, off-diagonal doubled."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix must be square")
    out = np.empty(tuple_len(n))
    k = 0
    for i in range(n):
        out[k] = m[i, i]
        k += 1
        for j in range(i + 1, n):
            out[k] = 2.0 * m[i, j]
            k += 1
    return out


def random_sym_tuple(n: int, bound: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform tuple in the box [-bound, bound]^{n(n+1)/2}."""
    return rng.uniform(-bound, bound, size=tuple_len(n))

"""Small helpers for dense symmetric / Hermitian matrices."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2


def herm(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def eig_extent(M: np.ndarray) -> tuple[float, float]:
    """(lambda_min, lambda_max) of a symmetric/Hermitian matrix."""
    w = np.linalg.eigvalsh(M)
    return float(w[0]), float(w[-1])


def is_psd(M: np.ndarray, rel_tol: float = 1e-9) -> bool:
    lo, hi = eig_extent(M)
    return lo >= -rel_tol * max(hi, 1e-12)


def numerical_rank(M: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Number of eigenvalues above rel_tol times the largest magnitude."""
    w = np.abs(np.linalg.eigvalsh(M if np.allclose(M, M.conj().T) else herm(M)))
    top = float(np.max(w)) if w.size else 0.0
    if top == 0.0:
        return 0
    return int(np.sum(w > rel_tol * top))


def realify(A: np.ndarray) -> np.ndarray:
    """Real symmetric image [[Re, -Im], [Im, Re]] of a Hermitian matrix.

    Ranks double: rank_R(realify(A)) = 2 rank_C(A).
    """
    re, im = np.real(A), np.imag(A)
    return np.block([[re, -im], [im, re]])


def unrealify(M: np.ndarray) -> np.ndarray:
    """Inverse of realify for matrices of the blocked Hermitian shape."""
    n = M.shape[0] // 2
    re = (M[:n, :n] + M[n:, n:]) / 2
    im = (M[n:, :n] - M[:n, n:]) / 2
    return re + 1j * im


def exact_to_float(A: list[list[Fraction]]) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in A], dtype=float)


def float_to_exact(A: np.ndarray, max_denominator: int = 10**6) -> list[list[Fraction]]:
    n = A.shape[0]
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q = Fraction(float(A[i, j])).limit_denominator(max_denominator)
            out[i][j] = q
            out[j][i] = q
    return out

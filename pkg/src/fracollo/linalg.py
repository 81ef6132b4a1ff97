"""Dense least squares and condition numbers.

Matrices are plain 2-D float ``numpy`` arrays; only elementwise and
vector primitives from numpy are used. The factorizations themselves
(Householder QR, one-sided Jacobi SVD) are implemented here.
"""

from __future__ import annotations

import math

import numpy as np


class RankDeficientError(np.linalg.LinAlgError):
    """The matrix does not have full column rank to working tolerance."""


class SingularMatrixError(np.linalg.LinAlgError):
    """Smallest singular value is zero to working tolerance."""


def _as_matrix(A) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def householder_qr(A) -> tuple[list[np.ndarray], np.ndarray]:
    """Householder triangularization of a tall matrix.

    Returns:
        The unit reflector vectors (``H_k = I - 2 v v^T`` acting on rows
        ``k:``) and the ``cols x cols`` upper-triangular factor ``R``.
    """
    R = _as_matrix(A)
    m, n = R.shape
    if m < n:
        raise ValueError(f"need rows >= cols, got {m}x{n}")
    reflectors = []
    for k in range(n):
        x = R[k:, k]
        norm = np.linalg.norm(x)
        v = x.copy()
        if norm == 0.0:
            v[:] = 0.0
        else:
            v[0] += math.copysign(norm, x[0])
            v /= np.linalg.norm(v)
            R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        reflectors.append(v)
    return reflectors, np.triu(R[:n, :])


def _apply_qt(reflectors: list[np.ndarray], b: np.ndarray) -> np.ndarray:
    b = b.copy()
    for k, v in enumerate(reflectors):
        b[k:] -= 2.0 * v * (v @ b[k:])
    return b


def _back_substitute(R: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = R.shape[0]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def least_squares(A, b) -> np.ndarray:
    """Minimizer of ``||A x - b||_2`` through Householder QR.

    Raises:
        RankDeficientError: if some ``|R_ii| < 1e-12 * max_j |R_jj|``.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float).ravel()
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match {A.shape[0]} rows")
    reflectors, R = householder_qr(A)
    diag = np.abs(np.diag(R))
    if diag.max() == 0.0 or np.any(diag < 1e-12 * diag.max()):
        raise RankDeficientError(
            f"matrix is rank deficient: min |R_ii| = {diag.min():.3e}, max = {diag.max():.3e}"
        )
    y = _apply_qt(reflectors, b)
    return _back_substitute(R, y[: A.shape[1]])


def _round_robin(n: int) -> list[list[tuple[int, int]]]:
    """Rounds of disjoint column pairs covering every pair exactly once."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for k in range(size // 2):
            i, j = players[k], players[size - 1 - k]
            if i >= 0 and j >= 0:
                pairs.append((min(i, j), max(i, j)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def singular_values(A, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Singular values, descending, by one-sided (Hestenes) Jacobi.

    Column pairs are orthogonalized in round-robin order, each round
    rotating disjoint pairs at once. Sweeps stop when every pair satisfies
    ``|a_i . a_j| <= tol * |a_i| |a_j|`` and the Gram off-diagonal norm is
    at most ``tol * ||A||_F**2``.
    """
    U = _as_matrix(A)
    if U.shape[0] < U.shape[1]:
        U = U.T.copy()
    n = U.shape[1]
    fro2 = float(np.sum(U * U))
    if fro2 == 0.0:
        return np.zeros(n)
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off2 = 0.0
        worst = 0.0
        for pairs in rounds:
            if not pairs:
                continue
            i = np.array([p[0] for p in pairs])
            j = np.array([p[1] for p in pairs])
            ai, aj = U[:, i], U[:, j]
            alpha = np.sum(ai * ai, axis=0)
            beta = np.sum(aj * aj, axis=0)
            gam = np.sum(ai * aj, axis=0)
            off2 += float(np.sum(gam * gam))
            scale = np.sqrt(alpha * beta)
            rel = np.divide(np.abs(gam), scale, out=np.zeros_like(gam), where=scale > 0)
            worst = max(worst, float(rel.max()))
            active = rel > tol
            if not np.any(active):
                continue
            zeta = np.where(active, (beta - alpha) / np.where(active, 2.0 * gam, 1.0), 0.0)
            t = np.where(
                active, np.copysign(1.0, zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta)), 0.0
            )
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            U[:, i] = c * ai - s * aj
            U[:, j] = s * ai + c * aj
        if worst <= tol and math.sqrt(off2) <= tol * fro2:
            break
    return np.sort(np.linalg.norm(U, axis=0))[::-1]


def condition_number(A) -> float:
    """Spectral condition number ``sigma_max / sigma_min``.

    Raises:
        SingularMatrixError: if ``sigma_min`` vanishes to working tolerance,
            i.e. the condition number is infinite.
    """
    A = _as_matrix(A)
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"need rows >= cols, got {A.shape[0]}x{A.shape[1]}")
    sv = singular_values(A)
    smax, smin = sv[0], sv[-1]
    if smax == 0.0 or smin <= np.finfo(float).eps * max(A.shape) * smax:
        raise SingularMatrixError("smallest singular value is zero: condition number is infinite")
    return float(smax / smin)


def matrix_rank(A, rtol: float = 1e-10) -> int:
    """Numerical rank: count of singular values above ``rtol * sigma_max``."""
    sv = singular_values(A)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))

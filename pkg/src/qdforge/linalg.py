"""Symmetric eigenvalues by cyclic Jacobi rotations.

Rotations are applied in round-robin (tournament) order: each round pairs
every index with exactly one partner, the pairs are disjoint, and so a whole
round of rotations can be applied at once with array indexing. One sweep is
``n - 1`` rounds and touches every off-diagonal pair once.

Iteration stops when the off-diagonal Frobenius norm falls below
``rtol * max(|trace|, ||A||_F)``. For the positive semi-definite Gram
matrices this is used on, that scale is simply the trace.
"""
from __future__ import annotations

import numpy as np


def round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint (p, q) index pairs for each round of a sweep, with p < q."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def off_diagonal_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigenvalues(matrix, rtol: float = 1e-12, max_sweeps: int = 100):
    """Eigenvalues of a real symmetric matrix, sorted in descending order.

    Returns ``(eigenvalues, sweeps)``.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy(), 0
    scale = max(abs(float(np.trace(a))), float(np.sqrt(np.sum(a * a))))
    target = rtol * scale
    schedule = round_robin(n)

    sweeps = 0
    while off_diagonal_norm(a) > target and sweeps < max_sweeps:
        for p, q in schedule:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore", divide="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # columns then rows: A <- J^T A J
            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * row_p - s[:, None] * row_q
            a[q, :] = s[:, None] * row_p + c[:, None] * row_q
            a[p, q] = 0.0
            a[q, p] = 0.0
        sweeps += 1
    return np.sort(np.diag(a))[::-1].copy(), sweeps

"""Vectorized pure-numpy greedy support scan.

Shares the exact selection rule with the numba kernel: at each step the
candidate score is residual_reduction/(2*noise_var) + delta_prior, ineligible
(numerically dependent) columns score -inf, and ties resolve to the lowest
index. A running copy of the dictionary is orthogonalized against each chosen
direction (modified Gram-Schmidt), so one step costs O(M*N).
"""

from __future__ import annotations

import numpy as np

_DEP_TOL = 1e-12


def greedy_chain(
    psi: np.ndarray,
    x: np.ndarray,
    delta: np.ndarray,
    base_prior: float,
    noise_var: float,
    t_max: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    """Greedy chain S_1 c S_2 c ... maximizing the support posterior metric.

    Returns (support, nu, Q, R, steps): selected indices in order, the metric
    value after each extension, and the thin QR factors of psi[:, support].
    """
    m, n = psi.shape
    proj = psi.astype(np.complex128, copy=True)
    colsq = np.einsum("ij,ij->j", proj.conj(), proj).real.copy()
    dep_floor = _DEP_TOL * np.where(colsq > 0.0, colsq, 1.0)
    r = x.astype(np.complex128, copy=True)
    res_sq = float(np.vdot(r, r).real)
    inv2s = 1.0 / (2.0 * noise_var)

    support = np.full(t_max, -1, dtype=np.int64)
    nu = np.zeros(t_max)
    q_mat = np.zeros((m, t_max), dtype=np.complex128)
    r_mat = np.zeros((t_max, t_max), dtype=np.complex128)
    chosen = np.zeros(n, dtype=bool)
    prior = base_prior
    steps = 0

    for t in range(t_max):
        inner = proj.conj().T @ r
        red = np.abs(inner) ** 2 / np.where(colsq > 0.0, colsq, 1.0)
        eligible = (colsq > dep_floor) & ~chosen
        if not eligible.any():
            break
        score = np.where(eligible, red * inv2s + delta, -np.inf)
        j = int(np.argmax(score))

        beta = np.sqrt(colsq[j])
        q = proj[:, j] / beta
        r_mat[:t, t] = q_mat[:, :t].conj().T @ psi[:, j]
        r_mat[t, t] = beta
        q_mat[:, t] = q
        r = r - q * np.vdot(q, r)
        res_sq = max(res_sq - float(red[j]), 0.0)
        prior += float(delta[j])
        nu[t] = -res_sq * inv2s + prior
        support[t] = j
        chosen[j] = True
        steps = t + 1

        coef = q.conj() @ proj
        proj -= np.outer(q, coef)
        colsq = np.maximum(colsq - np.abs(coef) ** 2, 0.0)

    return support, nu, q_mat, r_mat, steps


def mmv_greedy_chain(
    psis: np.ndarray,
    xs: np.ndarray,
    delta: np.ndarray,
    base_prior: float,
    noise_var: float,
    t_max: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    """Joint-support variant: per-antenna likelihood terms share one prior.

    psis has shape (T, M, N), xs shape (T, M). A candidate is eligible only
    if its column is numerically independent in every antenna (each antenna
    must support its own BLUE on the common support).
    """
    n_ant, m, n = psis.shape
    proj = psis.astype(np.complex128, copy=True)
    colsq = np.einsum("tij,tij->tj", proj.conj(), proj).real.copy()
    dep_floor = _DEP_TOL * np.where(colsq > 0.0, colsq, 1.0)
    r = xs.astype(np.complex128, copy=True)
    res_sq = np.einsum("ti,ti->t", r.conj(), r).real.copy()
    inv2s = 1.0 / (2.0 * noise_var)

    support = np.full(t_max, -1, dtype=np.int64)
    nu = np.zeros(t_max)
    q_mat = np.zeros((n_ant, m, t_max), dtype=np.complex128)
    r_mat = np.zeros((n_ant, t_max, t_max), dtype=np.complex128)
    chosen = np.zeros(n, dtype=bool)
    prior = base_prior
    steps = 0

    for t in range(t_max):
        inner = np.einsum("tij,ti->tj", proj.conj(), r)
        red = np.abs(inner) ** 2 / np.where(colsq > 0.0, colsq, 1.0)
        eligible = (colsq > dep_floor).all(axis=0) & ~chosen
        if not eligible.any():
            break
        score = np.where(eligible, red.sum(axis=0) * inv2s + delta, -np.inf)
        j = int(np.argmax(score))

        for a in range(n_ant):
            beta = np.sqrt(colsq[a, j])
            q = proj[a, :, j] / beta
            r_mat[a, :t, t] = q_mat[a, :, :t].conj().T @ psis[a, :, j]
            r_mat[a, t, t] = beta
            q_mat[a, :, t] = q
            r[a] -= q * np.vdot(q, r[a])
            res_sq[a] = max(res_sq[a] - float(red[a, j]), 0.0)
            coef = q.conj() @ proj[a]
            proj[a] -= np.outer(q, coef)
            colsq[a] = np.maximum(colsq[a] - np.abs(coef) ** 2, 0.0)

        prior += float(delta[j])
        nu[t] = -float(res_sq.sum()) * inv2s + prior
        support[t] = j
        chosen[j] = True
        steps = t + 1

    return support, nu, q_mat, r_mat, steps

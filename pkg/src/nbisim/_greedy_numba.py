"""Numba @njit greedy support scan; contract identical to _greedy_numpy.

Explicit loops keep the per-step cost at O(M*(N - t)) with no temporary
allocations, which is what makes the O(|T| s N^2) total hold in practice.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_DEP_TOL = 1e-12


@njit(cache=True)
def greedy_chain(psi, x, delta, base_prior, noise_var, t_max):
    m, n = psi.shape
    proj = psi.copy()
    colsq = np.empty(n)
    dep_floor = np.empty(n)
    for j in range(n):
        s = 0.0
        for i in range(m):
            v = proj[i, j]
            s += v.real * v.real + v.imag * v.imag
        colsq[j] = s
        dep_floor[j] = _DEP_TOL * (s if s > 0.0 else 1.0)

    r = x.copy()
    res_sq = 0.0
    for i in range(m):
        res_sq += x[i].real * x[i].real + x[i].imag * x[i].imag
    inv2s = 1.0 / (2.0 * noise_var)

    support = np.full(t_max, -1, dtype=np.int64)
    nu = np.zeros(t_max)
    q_mat = np.zeros((m, t_max), dtype=np.complex128)
    r_mat = np.zeros((t_max, t_max), dtype=np.complex128)
    chosen = np.zeros(n, dtype=np.bool_)
    prior = base_prior
    steps = 0

    for t in range(t_max):
        best_j = -1
        best_score = -np.inf
        best_red = 0.0
        for j in range(n):
            if chosen[j] or colsq[j] <= dep_floor[j]:
                continue
            ip = 0.0 + 0.0j
            for i in range(m):
                ip += np.conj(proj[i, j]) * r[i]
            red = (ip.real * ip.real + ip.imag * ip.imag) / colsq[j]
            score = red * inv2s + delta[j]
            if score > best_score:
                best_score = score
                best_j = j
                best_red = red
        if best_j < 0:
            break

        beta = np.sqrt(colsq[best_j])
        for tt in range(t):
            acc = 0.0 + 0.0j
            for i in range(m):
                acc += np.conj(q_mat[i, tt]) * psi[i, best_j]
            r_mat[tt, t] = acc
        r_mat[t, t] = beta
        qr = 0.0 + 0.0j
        for i in range(m):
            q_mat[i, t] = proj[i, best_j] / beta
            qr += np.conj(q_mat[i, t]) * r[i]
        for i in range(m):
            r[i] -= q_mat[i, t] * qr
        res_sq -= best_red
        if res_sq < 0.0:
            res_sq = 0.0
        prior += delta[best_j]
        nu[t] = -res_sq * inv2s + prior
        support[t] = best_j
        chosen[best_j] = True
        steps = t + 1

        for j in range(n):
            if chosen[j]:
                continue
            c = 0.0 + 0.0j
            for i in range(m):
                c += np.conj(q_mat[i, t]) * proj[i, j]
            for i in range(m):
                proj[i, j] -= q_mat[i, t] * c
            colsq[j] -= c.real * c.real + c.imag * c.imag
            if colsq[j] < 0.0:
                colsq[j] = 0.0

    return support, nu, q_mat, r_mat, steps


@njit(cache=True)
def mmv_greedy_chain(psis, xs, delta, base_prior, noise_var, t_max):
    n_ant, m, n = psis.shape
    proj = psis.copy()
    colsq = np.empty((n_ant, n))
    dep_floor = np.empty((n_ant, n))
    for a in range(n_ant):
        for j in range(n):
            s = 0.0
            for i in range(m):
                v = proj[a, i, j]
                s += v.real * v.real + v.imag * v.imag
            colsq[a, j] = s
            dep_floor[a, j] = _DEP_TOL * (s if s > 0.0 else 1.0)

    r = xs.copy()
    res_sq = np.zeros(n_ant)
    for a in range(n_ant):
        for i in range(m):
            res_sq[a] += xs[a, i].real * xs[a, i].real + xs[a, i].imag * xs[a, i].imag
    inv2s = 1.0 / (2.0 * noise_var)

    support = np.full(t_max, -1, dtype=np.int64)
    nu = np.zeros(t_max)
    q_mat = np.zeros((n_ant, m, t_max), dtype=np.complex128)
    r_mat = np.zeros((n_ant, t_max, t_max), dtype=np.complex128)
    chosen = np.zeros(n, dtype=np.bool_)
    prior = base_prior
    steps = 0

    for t in range(t_max):
        best_j = -1
        best_score = -np.inf
        for j in range(n):
            if chosen[j]:
                continue
            ok = True
            for a in range(n_ant):
                if colsq[a, j] <= dep_floor[a, j]:
                    ok = False
                    break
            if not ok:
                continue
            total_red = 0.0
            for a in range(n_ant):
                ip = 0.0 + 0.0j
                for i in range(m):
                    ip += np.conj(proj[a, i, j]) * r[a, i]
                total_red += (ip.real * ip.real + ip.imag * ip.imag) / colsq[a, j]
            score = total_red * inv2s + delta[j]
            if score > best_score:
                best_score = score
                best_j = j
        if best_j < 0:
            break

        for a in range(n_ant):
            ip = 0.0 + 0.0j
            for i in range(m):
                ip += np.conj(proj[a, i, best_j]) * r[a, i]
            red = (ip.real * ip.real + ip.imag * ip.imag) / colsq[a, best_j]
            beta = np.sqrt(colsq[a, best_j])
            for tt in range(t):
                acc = 0.0 + 0.0j
                for i in range(m):
                    acc += np.conj(q_mat[a, i, tt]) * psis[a, i, best_j]
                r_mat[a, tt, t] = acc
            r_mat[a, t, t] = beta
            qr = 0.0 + 0.0j
            for i in range(m):
                q_mat[a, i, t] = proj[a, i, best_j] / beta
                qr += np.conj(q_mat[a, i, t]) * r[a, i]
            for i in range(m):
                r[a, i] -= q_mat[a, i, t] * qr
            res_sq[a] -= red
            if res_sq[a] < 0.0:
                res_sq[a] = 0.0
            for j in range(n):
                if chosen[j] or j == best_j:
                    continue
                c = 0.0 + 0.0j
                for i in range(m):
                    c += np.conj(q_mat[a, i, t]) * proj[a, i, j]
                for i in range(m):
                    proj[a, i, j] -= q_mat[a, i, t] * c
                colsq[a, j] -= c.real * c.real + c.imag * c.imag
                if colsq[a, j] < 0.0:
                    colsq[a, j] = 0.0

        prior += delta[best_j]
        total = 0.0
        for a in range(n_ant):
            total += res_sq[a]
        nu[t] = -total * inv2s + prior
        support[t] = best_j
        chosen[best_j] = True
        steps = t + 1

    return support, nu, q_mat, r_mat, steps

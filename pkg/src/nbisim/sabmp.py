"""Support-agnostic Bayesian matching pursuit.

Model: x = Psi i + z with z ~ CN(0, noise_var I) and i sparse under an
independent Bernoulli prior with activation probabilities lambda. The
support-selection metric is

    nu(S) = -||P_S_perp x||^2 / (2 noise_var)
            + sum_{i in S} ln lambda_i + sum_{j not in S} ln(1 - lambda_j)

maximized greedily over single-index extensions, producing a nested chain
S_1 c S_2 c ... c S_Tmax. Each support carries a BLUE amplitude estimate;
the returned point estimate is the posterior-weighted (softmax over nu)
combination of the per-support BLUEs, and the error covariance accumulates
noise_var * (Psi_S^H Psi_S)^-1 with the same weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .backend import get_kernels


class DegenerateSupportError(ValueError):
    """Raised when a requested support yields an ill-conditioned subdictionary."""


@dataclass(frozen=True)
class SabmpParams:
    """Solver hyperparameters; all caller-supplied.

    lam: per-index activation probability (scalar broadcasts).
    noise_var: Gaussian noise variance (> 0).
    t_max: chain length; default ceil(N*mean(lam) + 2*sqrt(N*mean(lam)*(1-mean(lam))))
           clamped to [1, M-1].
    """

    lam: float | np.ndarray
    noise_var: float
    t_max: int | None = None
    normalize_posteriors: bool = True

    def lam_vector(self, n: int) -> np.ndarray:
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim == 0:
            lam = np.full(n, float(lam))
        if lam.size != n:
            raise ValueError(f"lambda length {lam.size} != unknown dimension {n}")
        if np.any(lam <= 0.0) or np.any(lam >= 1.0):
            raise ValueError("activation probabilities must lie strictly in (0, 1)")
        return lam

    def effective_t_max(self, n: int, m: int) -> int:
        if self.noise_var <= 0.0:
            raise ValueError("noise_var must be > 0")
        if self.t_max is not None:
            if self.t_max < 1:
                raise ValueError("t_max must be >= 1")
            if self.t_max > m:
                raise ValueError(f"t_max={self.t_max} exceeds measurement count {m}")
            return int(self.t_max)
        lam_bar = float(np.mean(self.lam_vector(n)))
        return default_t_max(lam_bar, n, m)


def default_t_max(lam_bar: float, n: int, m: int) -> int:
    """Expected support size plus two-sigma headroom, clamped to [1, M-1]."""
    mean = n * lam_bar
    t = int(np.ceil(mean + 2.0 * np.sqrt(mean * (1.0 - lam_bar))))
    return max(1, min(t, m - 1 if m > 1 else 1))


@dataclass(frozen=True)
class DominantSupport:
    """One entry of the dominant-support list S_d."""

    indices: np.ndarray
    nu: float
    weight: float
    blue: np.ndarray


@dataclass(frozen=True)
class CompactCovariance:
    """Error covariance stored on its supported block."""

    indices: np.ndarray
    block: np.ndarray
    n: int

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.complex128)
        out[np.ix_(self.indices, self.indices)] = self.block
        return out


@dataclass(frozen=True)
class SparseEstimate:
    """AMMSE estimate with its dominant-support decomposition."""

    ammse: np.ndarray
    supports: list[DominantSupport]
    error_cov: CompactCovariance
    _chain_r: np.ndarray | None = field(default=None, repr=False)


def _prior_terms(lam: np.ndarray) -> tuple[np.ndarray, float]:
    """(delta_j, base): nu prior = base + sum_{j in S} delta_j."""
    delta = np.log(lam) - np.log1p(-lam)
    base = float(np.log1p(-lam).sum())
    return delta, base


def nu_metric(
    support: np.ndarray | list[int],
    x: np.ndarray,
    psi: np.ndarray,
    params: SabmpParams,
) -> float:
    """Direct (non-incremental) evaluation of the selection metric."""
    if params.noise_var <= 0.0:
        raise ValueError("noise_var must be > 0")
    x = np.asarray(x, dtype=np.complex128)
    m, n = psi.shape
    lam = params.lam_vector(n)
    delta, base = _prior_terms(lam)
    idx = np.asarray(support, dtype=np.int64)
    if idx.size == 0:
        res_sq = float(np.vdot(x, x).real)
        return -res_sq / (2.0 * params.noise_var) + base
    if idx.size > m:
        raise DegenerateSupportError(f"|S|={idx.size} exceeds measurement count {m}")
    sub = psi[:, idx]
    q, r = np.linalg.qr(sub)
    diag = np.abs(np.diag(r))
    if np.any(diag < 1e-12 * max(1.0, diag.max(initial=0.0))):
        raise DegenerateSupportError("rank-deficient subdictionary for support")
    resid = x - q @ (q.conj().T @ x)
    res_sq = float(np.vdot(resid, resid).real)
    return -res_sq / (2.0 * params.noise_var) + base + float(delta[idx].sum())


def blue_estimate(
    support: np.ndarray | list[int], x: np.ndarray, psi: np.ndarray
) -> np.ndarray:
    """Least-squares amplitudes on a support; degenerate above cond 1e12."""
    idx = np.asarray(support, dtype=np.int64)
    sub = psi[:, idx]
    if idx.size > psi.shape[0]:
        raise DegenerateSupportError("support larger than measurement count")
    if idx.size and np.linalg.cond(sub) > 1e12:
        raise DegenerateSupportError("subdictionary condition number above 1e12")
    coef, *_ = np.linalg.lstsq(sub, np.asarray(x, dtype=np.complex128), rcond=None)
    return coef


def _weights(nus: np.ndarray, normalize: bool) -> np.ndarray:
    w = np.exp(nus - nus.max())
    if normalize:
        w = w / w.sum()
    return w


def _estimate_from_chain(
    x: np.ndarray,
    psi: np.ndarray,
    support: np.ndarray,
    nus: np.ndarray,
    q_mat: np.ndarray,
    r_mat: np.ndarray,
    steps: int,
    params: SabmpParams,
) -> SparseEstimate:
    n = psi.shape[1]
    qhx = q_mat[:, :steps].conj().T @ x
    r = r_mat[:steps, :steps]
    # Gram_i = R[:i,:i]^H R[:i,:i] and triangular inverses nest, so one
    # inversion yields every nested BLUE and covariance block.
    r_inv = solve_triangular(r, np.eye(steps, dtype=np.complex128), check_finite=False)
    weights = _weights(nus[:steps], params.normalize_posteriors)
    supports: list[DominantSupport] = []
    ammse = np.zeros(n, dtype=np.complex128)
    block = np.zeros((steps, steps), dtype=np.complex128)
    for i in range(1, steps + 1):
        lead = r_inv[:i, :i]
        blue = lead @ qhx[:i]
        entry = DominantSupport(
            indices=support[:i].copy(),
            nu=float(nus[i - 1]),
            weight=float(weights[i - 1]),
            blue=blue,
        )
        supports.append(entry)
        ammse[entry.indices] += entry.weight * blue
        block[:i, :i] += entry.weight * (lead @ lead.conj().T)
    cov = CompactCovariance(
        indices=support[:steps].copy(), block=params.noise_var * block, n=n
    )
    return SparseEstimate(ammse=ammse, supports=supports, error_cov=cov, _chain_r=r)


def greedy_search(
    x: np.ndarray,
    psi: np.ndarray,
    params: SabmpParams,
    backend: str | None = None,
) -> SparseEstimate:
    """Run the greedy dominant-support search on one measurement vector."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    x = np.ascontiguousarray(x, dtype=np.complex128)
    m, n = psi.shape
    if x.size != m:
        raise ValueError("measurement/dictionary row mismatch")
    lam = params.lam_vector(n)
    t_max = params.effective_t_max(n, m)
    delta, base = _prior_terms(lam)
    kernels = get_kernels(backend)
    support, nus, q_mat, r_mat, steps = kernels.greedy_chain(
        psi, x, delta, base, float(params.noise_var), t_max
    )
    if steps == 0:
        raise DegenerateSupportError("no usable dictionary column (all zero?)")
    return _estimate_from_chain(x, psi, support, nus, q_mat, r_mat, steps, params)


def ammse_combine(supports: list[DominantSupport], n: int) -> np.ndarray:
    """Posterior-weighted combination of embedded BLUE vectors."""
    if not supports:
        raise ValueError("empty dominant-support list")
    out = np.zeros(n, dtype=np.complex128)
    for s in supports:
        out[s.indices] += s.weight * s.blue
    return out


def error_covariance(
    supports: list[DominantSupport], psi: np.ndarray, noise_var: float
) -> CompactCovariance:
    """R = noise_var * sum_S weight(S) (Psi_S^H Psi_S)^-1, embedded on S.

    Supports in a greedy chain are nested, so the union block is the last
    support's index set.
    """
    if not supports:
        raise ValueError("empty dominant-support list")
    n = psi.shape[1]
    union = supports[-1].indices
    pos = {int(j): k for k, j in enumerate(union)}
    block = np.zeros((union.size, union.size), dtype=np.complex128)
    for s in supports:
        sub = psi[:, s.indices]
        gram_inv = np.linalg.inv(sub.conj().T @ sub)
        sel = np.array([pos[int(j)] for j in s.indices])
        block[np.ix_(sel, sel)] += s.weight * gram_inv
    return CompactCovariance(indices=union.copy(), block=noise_var * block, n=n)


def mmv_greedy_search(
    systems: list[tuple[np.ndarray, np.ndarray]],
    params: SabmpParams,
    backend: str | None = None,
) -> list[SparseEstimate]:
    """Joint-support greedy search over multiple measurement vectors.

    systems is a list of (x_t, Psi_t) sharing the unknown dimension. The
    common chain maximizes the summed per-antenna likelihood terms plus one
    shared prior; BLUE amplitudes are computed per antenna on the shared
    supports. T=1 reduces exactly to greedy_search.
    """
    if not systems:
        raise ValueError("no measurement systems given")
    shapes = {p.shape for _, p in systems}
    if len({s[1] for s in shapes}) != 1:
        raise ValueError("all systems must share the unknown dimension")
    if len(shapes) != 1:
        raise ValueError("all systems must share the measurement count")
    xs = np.ascontiguousarray(
        np.stack([np.asarray(x, dtype=np.complex128) for x, _ in systems])
    )
    psis = np.ascontiguousarray(
        np.stack([np.asarray(p, dtype=np.complex128) for _, p in systems])
    )
    n_ant, m, n = psis.shape
    lam = params.lam_vector(n)
    t_max = params.effective_t_max(n, m)
    delta, base = _prior_terms(lam)
    kernels = get_kernels(backend)
    support, nus, q_mats, r_mats, steps = kernels.mmv_greedy_chain(
        psis, xs, delta, base, float(params.noise_var), t_max
    )
    if steps == 0:
        raise DegenerateSupportError("no usable dictionary column (all zero?)")
    return [
        _estimate_from_chain(
            xs[a], psis[a], support, nus, q_mats[a], r_mats[a], steps, params
        )
        for a in range(n_ant)
    ]

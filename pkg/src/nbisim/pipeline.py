"""Reserved-tone NBI estimation, subtraction, and data-aided refinement.

Stage 1 treats the equalized values on data-free (reserved) carriers as
compressed measurements of the narrowband interferer and solves for its
sparse-domain coefficients. Stage 2 promotes the most reliable data
carriers to extra measurements by subtracting their hard decisions. A ZF
noise-cancellation variant reuses the same machinery with the comb noise
as the unknown, and an MRC combiner covers the multi-antenna receive path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .sabmp import CompactCovariance, SabmpParams, SparseEstimate, greedy_search
from .scfdma import (
    ChannelRealization,
    EqualizerMatrix,
    SystemConfig,
    build_equalizer,
    hard_decision,
    user_comb,
)
from .sparsify import Sparsifier

RELIABILITY_VAR_FLOOR = 1e-12
RELIABILITY_LOG_CAP = 1e3


@dataclass(frozen=True)
class ToneSets:
    """Reserved (data-free) and reliable (decision-aided) carrier indices."""

    reserved: np.ndarray
    reliable: np.ndarray

    def __post_init__(self):
        res = np.asarray(self.reserved, dtype=np.int64)
        rel = np.asarray(self.reliable, dtype=np.int64)
        if res.size != np.unique(res).size or rel.size != np.unique(rel).size:
            raise ValueError("tone sets must not contain duplicates")
        if np.intersect1d(res, rel).size:
            raise ValueError("reserved and reliable tone sets overlap")
        object.__setattr__(self, "reserved", res)
        object.__setattr__(self, "reliable", rel)


@dataclass(frozen=True)
class SensingSystem:
    """Linear model x' = Psi s + distortion on the measured carriers.

    psi_full carries all P output rows of the same operator (equalizer
    composed with the sparsifier inverse) so solved coefficients can be
    subtracted from the full equalized vector and mapped to per-carrier
    variances. column_map records which unknown-domain columns survived
    zero-column elimination.
    """

    measurements: np.ndarray
    psi: np.ndarray
    psi_full: np.ndarray
    column_map: np.ndarray
    sparsifier: Sparsifier
    n_reserved: int

    def __post_init__(self):
        if self.measurements.shape[0] != self.psi.shape[0]:
            raise ValueError("measurement/sensing row count mismatch")
        if self.psi.shape[1] != self.column_map.size:
            raise ValueError("column_map does not cover the sensing columns")
        if np.unique(self.column_map).size != self.column_map.size:
            raise ValueError("column_map must be injective")


def choose_reserved(p: int, count: int, seed) -> np.ndarray:
    """Uniform data-free tone subset, fixed per run and receiver-known."""
    if not 0 < count < p:
        raise ValueError(f"reserved count must lie in (0, {p})")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(p, size=count, replace=False)).astype(np.int64)


def _sensing_operator(
    equalizer: EqualizerMatrix, sparsifier: Sparsifier
) -> tuple[np.ndarray, np.ndarray]:
    """(psi_full, column_map): P x K operator from sparse NBI coefficients

    to their contribution on the equalized data estimate. The equalizer is
    zero off the user's comb, so with no sparsifier those N - P columns are
    dropped; dense sparsifier inverses keep all N columns.
    """
    n = equalizer.matrix.shape[1]
    if sparsifier.n != n:
        raise ValueError(f"sparsifier size {sparsifier.n} != band size {n}")
    core = equalizer.matrix[:, equalizer.comb]
    if sparsifier.kind == "none":
        return core.copy(), equalizer.comb.astype(np.int64)
    hinv = sparsifier.inverse_matrix()
    return core @ hinv[equalizer.comb, :], np.arange(n, dtype=np.int64)


def build_reserved_system(
    x_hat: np.ndarray,
    equalizer: EqualizerMatrix,
    reserved: np.ndarray,
    sparsifier: Sparsifier,
) -> SensingSystem:
    """Stage-1 system: measurements are the equalized reserved carriers."""
    x_hat = np.asarray(x_hat, dtype=np.complex128)
    p = equalizer.matrix.shape[0]
    if x_hat.size != p:
        raise ValueError(f"expected {p} equalized values, got {x_hat.size}")
    reserved = np.asarray(reserved, dtype=np.int64)
    if reserved.size and (reserved.min() < 0 or reserved.max() >= p):
        raise ValueError("reserved index outside the data block")
    psi_full, column_map = _sensing_operator(equalizer, sparsifier)
    return SensingSystem(
        measurements=x_hat[reserved],
        psi=psi_full[reserved],
        psi_full=psi_full,
        column_map=column_map,
        sparsifier=sparsifier,
        n_reserved=int(reserved.size),
    )


def recover_and_subtract(
    system: SensingSystem,
    params: SabmpParams,
    x_hat: np.ndarray,
    backend: str | None = None,
) -> tuple[np.ndarray, SparseEstimate]:
    """Solve the sensing system and remove the estimate's contribution."""
    estimate = greedy_search(system.measurements, system.psi, params, backend=backend)
    cleaned = np.asarray(x_hat, dtype=np.complex128) - system.psi_full @ estimate.ammse
    return cleaned, estimate


def nbi_frequency_estimate(
    system: SensingSystem, estimate: SparseEstimate
) -> np.ndarray:
    """Map a solved coefficient vector back to the length-N frequency domain."""
    n = system.sparsifier.n
    if system.sparsifier.kind == "none":
        out = np.zeros(n, dtype=np.complex128)
        out[system.column_map] = estimate.ammse
        return out
    return system.sparsifier.inverse(estimate.ammse)


def residual_variances(
    cov: CompactCovariance, system: SensingSystem
) -> np.ndarray:
    """Per-carrier variance of the residual NBI after subtraction.

    Conjugates the solver-domain error covariance through the sensing
    operator: diag(G B G^H) with G the psi_full columns on the covariance
    support.
    """
    g = system.psi_full[:, cov.indices]
    var = np.einsum("ij,jk,ik->i", g, cov.block, g.conj()).real
    return np.maximum(var, 0.0)


def reliability_metric(
    values: np.ndarray | complex,
    sigma_d_sq: np.ndarray | float,
    constellation: np.ndarray,
) -> np.ndarray | float:
    """Gaussian posterior ratio: pdf at the nearest constellation point over

    the summed pdfs at all wrong points. Flat-noise limit is 1/(Q-1).
    """
    v = np.asarray(values, dtype=np.complex128)
    scalar = v.ndim == 0
    v = np.atleast_1d(v)
    sig = np.maximum(
        np.broadcast_to(np.asarray(sigma_d_sq, dtype=float), v.shape),
        RELIABILITY_VAR_FLOOR,
    )
    c = np.asarray(constellation, dtype=np.complex128)
    d2 = np.abs(v[:, None] - c[None, :]) ** 2
    rows = np.arange(v.size)
    nearest = np.argmin(d2, axis=1)
    log_num = -d2[rows, nearest] / sig
    exponents = -d2 / sig[:, None]
    exponents[rows, nearest] = -np.inf
    # exp(700) is near the float64 ceiling; exact hits saturate there
    log_ratio = np.minimum(log_num - logsumexp(exponents, axis=1), 700.0)
    out = np.exp(log_ratio)
    return float(out[0]) if scalar else out


def distance_reliability(
    values: np.ndarray | complex, constellation: np.ndarray
) -> np.ndarray | float:
    """-log of nearest over next-nearest distance, capped on exact hits."""
    v = np.asarray(values, dtype=np.complex128)
    scalar = v.ndim == 0
    v = np.atleast_1d(v)
    d = np.abs(v[:, None] - np.asarray(constellation)[None, :])
    two = np.partition(d, 1, axis=1)
    d0, d1 = two[:, 0], two[:, 1]
    out = np.full(v.size, RELIABILITY_LOG_CAP)
    ok = d0 > 0.0
    out[ok] = np.minimum(-np.log(d0[ok] / d1[ok]), RELIABILITY_LOG_CAP)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class ReliabilityTable:
    """Per-carrier reliability, residual variance, and the chosen set R."""

    reliability: np.ndarray
    sigma_d_sq: np.ndarray
    reliable: np.ndarray


def select_reliable(
    reliability: np.ndarray, reserved: np.ndarray, count: int
) -> np.ndarray:
    """Top-count carriers by reliability, reserved excluded, ties to the

    lowest index.
    """
    reliability = np.asarray(reliability, dtype=float)
    p = reliability.size
    order = np.lexsort((np.arange(p), -reliability))
    order = order[~np.isin(order, reserved)]
    if count > order.size:
        raise ValueError(f"cannot pick {count} of {order.size} data carriers")
    return order[:count].astype(np.int64)


def rank_carriers(
    cleaned: np.ndarray,
    sigma_d_sq: np.ndarray,
    constellation: np.ndarray,
    reserved: np.ndarray,
    count: int,
    metric: str = "probabilistic",
) -> ReliabilityTable:
    """Score every carrier and pick the reliable set for stage 2."""
    if metric == "probabilistic":
        rel = reliability_metric(cleaned, sigma_d_sq, constellation)
    elif metric == "distance":
        rel = distance_reliability(cleaned, constellation)
    else:
        raise ValueError(f"unknown reliability metric {metric!r}")
    chosen = select_reliable(rel, reserved, count)
    return ReliabilityTable(
        reliability=np.asarray(rel, dtype=float),
        sigma_d_sq=np.asarray(sigma_d_sq, dtype=float),
        reliable=chosen,
    )


def build_augmented_system(
    x_hat: np.ndarray,
    cleaned: np.ndarray,
    equalizer: EqualizerMatrix,
    tones: ToneSets,
    sparsifier: Sparsifier,
    config: SystemConfig,
) -> SensingSystem:
    """Stack decision-aided rows under the stage-1 reserved rows.

    Reliable-carrier measurements subtract the hard decision of the stage-1
    cleaned value from the ORIGINAL equalized value, so both row blocks
    share the same unknown. R = empty reproduces stage 1 exactly.
    """
    if tones.reliable.size == 0:
        return build_reserved_system(x_hat, equalizer, tones.reserved, sparsifier)
    x_hat = np.asarray(x_hat, dtype=np.complex128)
    cleaned = np.asarray(cleaned, dtype=np.complex128)
    p = equalizer.matrix.shape[0]
    if x_hat.size != p or cleaned.size != p:
        raise ValueError(f"expected {p} equalized values")
    decided = hard_decision(
        cleaned[tones.reliable], config.qam_order, config.symbol_var
    )
    psi_full, column_map = _sensing_operator(equalizer, sparsifier)
    rows = np.concatenate([tones.reserved, tones.reliable])
    measurements = np.concatenate(
        [x_hat[tones.reserved], x_hat[tones.reliable] - decided]
    )
    return SensingSystem(
        measurements=measurements,
        psi=psi_full[rows],
        psi_full=psi_full,
        column_map=column_map,
        sparsifier=sparsifier,
        n_reserved=int(tones.reserved.size),
    )


def measurement_noise_variance(
    equalizer: EqualizerMatrix,
    channel: ChannelRealization,
    config: SystemConfig,
    reserved: np.ndarray,
) -> float:
    """Mean distortion power on the reserved rows: equalized thermal noise

    plus, for a non-inverting equalizer, circular leakage of the data
    symbols onto the data-free positions.
    """
    p = config.per_user
    comb = equalizer.comb
    gains = equalizer.matrix[0, comb] * np.sqrt(p)
    noise_part = config.noise_var * float(np.mean(np.abs(gains) ** 2))
    gl = gains * channel.freq_response[comb]
    c = np.fft.ifft(gl)
    data = np.setdiff1d(np.arange(p), np.asarray(reserved, dtype=np.int64))
    if data.size == 0 or np.asarray(reserved).size == 0:
        return noise_part
    shifts = (np.asarray(reserved, dtype=np.int64)[:, None] - data[None, :]) % p
    leak = float(np.mean(np.sum(np.abs(c[shifts]) ** 2, axis=1)))
    return noise_part + config.symbol_var * leak


def zf_noise_cancellation(
    x_hat: np.ndarray,
    channel: ChannelRealization,
    reserved: np.ndarray,
    params: SabmpParams,
    config: SystemConfig,
    user: int = 0,
    backend: str | None = None,
) -> tuple[np.ndarray, SparseEstimate | None]:
    """Estimate the few noise bins that ZF amplified on weak channels and

    subtract them. Reserved rows of a ZF-equalized frame contain pure
    equalized noise, so the stage-1 system doubles as a noise sensor. A
    noise-free configuration has nothing to cancel and passes through.
    """
    if config.noise_var == 0.0:
        return np.asarray(x_hat, dtype=np.complex128).copy(), None
    equalizer = build_equalizer("zf", channel, config, u=user)
    system = build_reserved_system(
        x_hat, equalizer, reserved, Sparsifier.create("none", config.n_subcarriers)
    )
    return recover_and_subtract(system, params, x_hat, backend=backend)


def mrc_combine(
    ys: list[np.ndarray],
    channels: list[ChannelRealization],
    config: SystemConfig,
    user: int = 0,
) -> np.ndarray:
    """Maximal-ratio combine per comb bin, then de-precode.

    A single antenna reduces to ZF equalization.
    """
    if not ys:
        raise ValueError("no antenna data to combine")
    if len(ys) != len(channels):
        raise ValueError("antenna data/channel count mismatch")
    comb = user_comb(user, config)
    num = np.zeros(comb.size, dtype=np.complex128)
    den = np.zeros(comb.size, dtype=float)
    for y, ch in zip(ys, channels):
        y = np.asarray(y, dtype=np.complex128)
        if y.size != config.n_subcarriers:
            raise ValueError(f"expected length {config.n_subcarriers} input")
        lam = ch.freq_response[comb]
        num += lam.conj() * y[comb]
        den += np.abs(lam) ** 2
    dead = np.nonzero(den == 0.0)[0]
    if dead.size:
        raise ValueError(
            f"every antenna channel is zero at bin {comb[dead[0]]}"
        )
    return np.fft.ifft(num / den, norm="ortho")

"""SC-FDMA link model: QAM mapping, interleaved subcarrier assignment,
frequency-selective channel, and ZF/MMSE frequency-domain equalizers.

The transmit chain per user is x_u -> F_P x_u (DFT precoding) -> M_u (comb
mapping onto N subcarriers). The received frequency-domain vector is

    Y = sum_u Lambda_u M_u F_P x_u + I + Z

with Lambda_u the diagonalized circulant channel, I narrowband interference
and Z white Gaussian noise. The equalizer matrix E_u maps Y back to a P-point
data estimate and doubles as the sensing operator for sparse NBI recovery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and power levels of the SC-FDMA link."""

    n_subcarriers: int
    n_users: int
    qam_order: int = 16
    channel_len: int | None = None
    noise_var: float = 0.0
    symbol_var: float = 1.0

    def __post_init__(self) -> None:
        n, u = self.n_subcarriers, self.n_users
        if n < 1 or u < 1:
            raise ValueError("n_subcarriers and n_users must be positive")
        if n % u != 0:
            raise ValueError(f"n_users={u} must divide n_subcarriers={n}")
        q = self.qam_order
        root = int(round(q ** 0.5))
        if q < 4 or root * root != q:
            raise ValueError(f"qam_order={q} must be a perfect square >= 4")
        if self.channel_len is None:
            object.__setattr__(self, "channel_len", max(1, n // 4))
        if not 1 <= self.channel_len <= n:
            raise ValueError(f"channel_len={self.channel_len} out of range [1, {n}]")
        if self.noise_var < 0:
            raise ValueError("noise_var must be >= 0")
        if self.symbol_var <= 0:
            raise ValueError("symbol_var must be > 0")

    @property
    def per_user(self) -> int:
        return self.n_subcarriers // self.n_users

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.qam_order))


def ebn0_to_noise_var(ebn0_db: float, config: SystemConfig) -> float:
    """Noise variance for a target Eb/N0, accounting for the N-point IDFT
    normalization: noise_var = symbol_var*P/(N*log2(Q)*Eb/N0)."""
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    n, p = config.n_subcarriers, config.per_user
    return config.symbol_var * p / (n * config.bits_per_symbol * ebn0)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix with entries n**-0.5 * exp(-2j*pi*k*l/n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


# ---------------------------------------------------------------------------
# QAM


def _gray_decode_loop(g: np.ndarray) -> np.ndarray:
    idx = g.copy()
    shift = g.copy() >> 1
    while shift.any():
        idx ^= shift
        shift >>= 1
    return idx


def _index_to_gray(idx: np.ndarray) -> np.ndarray:
    return idx ^ (idx >> 1)


def qam_constellation(q: int, symbol_var: float = 1.0) -> np.ndarray:
    """Gray-coded square QAM alphabet A_0..A_{Q-1}, average power symbol_var.

    The symbol for bit word b is indexed by the Gray decode of the first
    half of b on the I axis and the second half on the Q axis.
    """
    root = int(round(q ** 0.5))
    if root * root != q or q < 4:
        raise ValueError(f"Q={q} must be a perfect square >= 4")
    bits_axis = int(np.log2(root))
    scale = np.sqrt(symbol_var * 3.0 / (2.0 * (q - 1)))
    words = np.arange(q)
    gi = _gray_decode_loop(words >> bits_axis)
    gq = _gray_decode_loop(words & (root - 1))
    re = (root - 1) - 2 * gi
    im = (root - 1) - 2 * gq
    return scale * (re + 1j * im)


def modulate(bits: np.ndarray, q: int, symbol_var: float = 1.0) -> np.ndarray:
    """Map a bit vector to QAM symbols (len(bits) must divide by log2(Q))."""
    bits = np.asarray(bits, dtype=np.int64)
    bps = int(np.log2(q))
    if bits.size % bps != 0:
        raise ValueError(f"bit count {bits.size} not divisible by log2(Q)={bps}")
    words = bits.reshape(-1, bps)
    weights = 1 << np.arange(bps - 1, -1, -1)
    return qam_constellation(q, symbol_var)[words @ weights]


def demodulate_hard(
    symbols: np.ndarray, q: int, symbol_var: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-point hard decision; returns (decided symbols, bits).

    Per-axis slicing is exact nearest-point detection on a square grid.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    root = int(round(q ** 0.5))
    bits_axis = int(np.log2(root))
    scale = np.sqrt(symbol_var * 3.0 / (2.0 * (q - 1)))

    def axis_index(vals: np.ndarray) -> np.ndarray:
        lvl = np.rint(((root - 1) - vals / scale) / 2.0).astype(np.int64)
        return np.clip(lvl, 0, root - 1)

    gi = axis_index(symbols.real)
    gq = axis_index(symbols.imag)
    points = scale * (((root - 1) - 2 * gi) + 1j * ((root - 1) - 2 * gq))
    words = (_index_to_gray(gi) << bits_axis) | _index_to_gray(gq)
    shifts = np.arange(bits_axis * 2 - 1, -1, -1)
    bits = (words[:, None] >> shifts[None, :]) & 1
    return points, bits.reshape(-1)


def hard_decision(symbols: np.ndarray, q: int, symbol_var: float = 1.0) -> np.ndarray:
    """Round to the nearest constellation point (decision symbols only)."""
    return demodulate_hard(symbols, q, symbol_var)[0]


# ---------------------------------------------------------------------------
# Subcarrier mapping


def user_comb(u: int, config: SystemConfig) -> np.ndarray:
    """Comb indices u + U*l (l = 0..P-1) owned by user u (0-based users)."""
    if not 0 <= u < config.n_users:
        raise ValueError(f"user index {u} out of range [0, {config.n_users})")
    return u + config.n_users * np.arange(config.per_user)


def map_user(u: int, precoded: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Place a P-point precoded vector on user u's interleaved comb."""
    precoded = np.asarray(precoded, dtype=np.complex128)
    if precoded.size != config.per_user:
        raise ValueError(
            f"expected {config.per_user} precoded values, got {precoded.size}"
        )
    out = np.zeros(config.n_subcarriers, dtype=np.complex128)
    out[user_comb(u, config)] = precoded
    return out


def mapping_matrix(u: int, config: SystemConfig) -> np.ndarray:
    """The N x P binary mapping matrix M_u (columns = comb unit vectors)."""
    m = np.zeros((config.n_subcarriers, config.per_user))
    m[user_comb(u, config), np.arange(config.per_user)] = 1.0
    return m


# ---------------------------------------------------------------------------
# Channel


@dataclass(frozen=True)
class ChannelRealization:
    """Taps of one user's channel and their N-point frequency response."""

    taps: np.ndarray
    freq_response: np.ndarray

    @classmethod
    def from_taps(cls, taps: np.ndarray, n: int) -> "ChannelRealization":
        taps = np.asarray(taps, dtype=np.complex128)
        if taps.size > n:
            raise ValueError("more taps than subcarriers")
        return cls(taps=taps, freq_response=np.fft.fft(taps, n))


def draw_channel(config: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """i.i.d. CN(0, 1/Nc) taps: uniform power-delay profile, unit energy."""
    nc = config.channel_len
    taps = (rng.standard_normal(nc) + 1j * rng.standard_normal(nc)) / np.sqrt(2 * nc)
    return ChannelRealization.from_taps(taps, config.n_subcarriers)


@dataclass(frozen=True)
class QamFrame:
    """One user's bits, QAM symbols and comb-mapped frequency vector."""

    user: int
    bits: np.ndarray
    symbols: np.ndarray
    mapped: np.ndarray


def make_frame(
    u: int,
    config: SystemConfig,
    rng: np.random.Generator,
    reserved: np.ndarray | None = None,
) -> QamFrame:
    """Draw random data for user u; reserved positions carry zeros (no data)."""
    p, bps = config.per_user, config.bits_per_symbol
    bits = rng.integers(0, 2, size=p * bps)
    symbols = modulate(bits, config.qam_order, config.symbol_var)
    if reserved is not None and len(reserved) > 0:
        symbols[reserved] = 0.0
        bits = bits.reshape(p, bps)
        bits[reserved] = 0
        bits = bits.reshape(-1)
    fp = dft_matrix(p)
    return QamFrame(user=u, bits=bits, symbols=symbols, mapped=map_user(u, fp @ symbols, config))


def transmit_receive(
    frames: list[QamFrame],
    channels: list[ChannelRealization],
    config: SystemConfig,
    nbi: np.ndarray | None = None,
    noise_rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Frequency-domain received vector Y = sum_u Lambda_u X_u + I + Z."""
    if len(frames) != len(channels):
        raise ValueError("one channel per frame required")
    n = config.n_subcarriers
    y = np.zeros(n, dtype=np.complex128)
    for frame, chan in zip(frames, channels):
        if frame.mapped.size != n or chan.freq_response.size != n:
            raise ValueError("frame/channel dimension mismatch with config")
        y += chan.freq_response * frame.mapped
    if nbi is not None:
        if nbi.size != n:
            raise ValueError("nbi dimension mismatch")
        y = y + nbi
    if noise_rng is not None and config.noise_var > 0:
        z = noise_rng.standard_normal(n) + 1j * noise_rng.standard_normal(n)
        y = y + np.sqrt(config.noise_var / 2.0) * z
    return y


# ---------------------------------------------------------------------------
# Equalizers


@dataclass(frozen=True)
class EqualizerMatrix:
    """P x N linear estimator of one user's data from Y.

    Columns are nonzero only on the user's comb, which later lets the NBI
    sensing system drop the zero columns.
    """

    kind: str
    user: int
    matrix: np.ndarray
    comb: np.ndarray = field(repr=False)


def build_equalizer(
    kind: str,
    channel: ChannelRealization,
    config: SystemConfig,
    u: int = 0,
) -> EqualizerMatrix:
    """ZF: E_u = F_P^H M_u^H Lambda_u^-1. MMSE: the linear-MMSE closed form
    with A = M_u^H Lambda_u M_u F_P, which is diagonal on the comb.
    """
    comb = user_comb(u, config)
    lam = channel.freq_response[comb]
    p = config.per_user
    fp_h = dft_matrix(p).conj().T
    if kind == "zf":
        zero = np.nonzero(np.abs(lam) == 0.0)[0]
        if zero.size:
            raise ValueError(f"ZF undefined: channel is exactly zero at bin {comb[zero[0]]}")
        gains = 1.0 / lam
    elif kind == "mmse":
        sx, sz = config.symbol_var, config.noise_var
        gains = sx * lam.conj() / (sx * np.abs(lam) ** 2 + sz)
    else:
        raise ValueError(f"unknown equalizer kind {kind!r}")
    e = np.zeros((p, config.n_subcarriers), dtype=np.complex128)
    e[:, comb] = fp_h * gains[None, :]
    return EqualizerMatrix(kind=kind, user=u, matrix=e, comb=comb)


def equalize(eq: EqualizerMatrix, y: np.ndarray) -> np.ndarray:
    """Apply E_u to a received frequency-domain vector."""
    y = np.asarray(y, dtype=np.complex128)
    if y.size != eq.matrix.shape[1]:
        raise ValueError(
            f"expected length {eq.matrix.shape[1]} input, got {y.size}"
        )
    return eq.matrix @ y

"""Narrowband interference model and the Gini sparsity measure.

An NBI source is a complex exponential at a real-valued normalized frequency
f in [0, N) cycles per frame. On-grid sources (integer f) occupy a single DFT
bin; fractional offsets smear the energy across all bins with a Dirichlet
tail, which is what makes plain frequency-domain recovery hard.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class NbiSource:
    """One interferer: normalized frequency (cycles/frame) and amplitude."""

    frequency: float
    amplitude: complex

    def __post_init__(self) -> None:
        if not np.isfinite(self.frequency):
            raise ValueError("frequency must be finite")

    @property
    def on_grid(self) -> bool:
        return float(self.frequency) == int(self.frequency)


@dataclass(frozen=True)
class NbiScenario:
    """Ensemble description: how many sources, how strong, and where."""

    max_sources: int = 4
    sir_db: float = -10.0
    offset_mode: str = "independent_offsets"
    per_symbol_refresh: bool = True

    def __post_init__(self) -> None:
        if self.max_sources < 0:
            raise ValueError("max_sources must be >= 0")
        if self.offset_mode not in ("on_grid", "independent_offsets"):
            raise ValueError(f"unknown offset_mode {self.offset_mode!r}")

    @property
    def mean_active(self) -> float:
        """E[active count] under the uniform {1..max_sources} draw."""
        return (1 + self.max_sources) / 2.0 if self.max_sources else 0.0


def synthesize_nbi(sources: list[NbiSource], n: int) -> np.ndarray:
    """Frequency-domain NBI vector: each source contributes the N-point DFT
    of the unit-norm exponential n**-0.5 * exp(2j*pi*f*t/n), scaled by its
    amplitude. For integer f this is exactly amplitude * e_f.
    """
    out = np.zeros(n, dtype=np.complex128)
    if not sources:
        return out
    t = np.arange(n)
    wave = np.zeros(n, dtype=np.complex128)
    for src in sources:
        if not 0 <= src.frequency < n:
            raise ValueError(f"frequency {src.frequency} outside [0, {n})")
        wave += src.amplitude * np.exp(2j * np.pi * src.frequency * t / n) / np.sqrt(n)
    return np.fft.fft(wave, norm="ortho")


def nbi_power(sources: list[NbiSource], n: int) -> float:
    return float(np.sum(np.abs(synthesize_nbi(sources, n)) ** 2))


def calibrate_sir(
    sources: list[NbiSource], data_power: float, sir_db: float, n: int
) -> list[NbiSource]:
    """Scale all amplitudes by a common factor so that total NBI power over
    total received data power is exactly 10**(-sir_db/10)."""
    if not sources:
        raise ValueError("cannot calibrate an empty source list")
    if data_power <= 0:
        raise ValueError("data_power must be > 0")
    target = data_power * 10.0 ** (-sir_db / 10.0)
    current = nbi_power(sources, n)
    if current == 0.0:
        raise ValueError("sources carry zero power")
    g = np.sqrt(target / current)
    return [replace(s, amplitude=s.amplitude * g) for s in sources]


def draw_sources(
    scenario: NbiScenario, n: int, rng: np.random.Generator, count: int | None = None
) -> list[NbiSource]:
    """Draw one symbol's interferers: active count uniform on {1..max},
    integer bins uniform over the band, offsets uniform on [-1/2, 1/2]
    (independent per source) in offset mode, amplitudes CN(0, 1).

    Pass ``count`` to pin the number of sources instead of drawing it."""
    if count is None:
        if scenario.max_sources == 0:
            return []
        count = int(rng.integers(1, scenario.max_sources + 1))
    elif count <= 0:
        raise ValueError("count must be positive")
    grid = rng.integers(0, n, size=count).astype(float)
    if scenario.offset_mode == "independent_offsets":
        grid = grid + rng.uniform(-0.5, 0.5, size=count)
        grid = np.mod(grid, n)
    amps = (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / np.sqrt(2)
    return [NbiSource(float(f), complex(a)) for f, a in zip(grid, amps)]


def gini_index(v: np.ndarray) -> float:
    """Gini sparsity of a vector: 0 for equal magnitudes, 1 - 1/N for a
    single spike; invariant to scaling and permutation.

    With magnitudes sorted ascending a_0 <= ... <= a_{N-1}:

        GI = 1 - 2 * sum_k (a_k / ||a||_1) * ((N - k - 1/2) / N)
    """
    v = np.asarray(v)
    if v.size == 0 or not np.any(v):
        raise ValueError("gini_index undefined for a zero vector")
    a = np.sort(np.abs(v))
    n = a.size
    k = np.arange(n)
    return float(1.0 - 2.0 * np.sum((a / a.sum()) * ((n - k - 0.5) / n)))

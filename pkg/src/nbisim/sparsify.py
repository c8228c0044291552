"""Sparsifying transforms for spread NBI: time-domain windowing and the
orthonormal Haar basis.

Both act on frequency-domain vectors. The window operator is
H_win = F diag(w) F^H (multiply the time signal by w, return to frequency);
the Haar operator is a real orthonormal wavelet basis applied along the
frequency axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scfdma import dft_matrix


def haar_matrix(n: int) -> np.ndarray:
    """Orthonormal Haar basis (rows), standard dyadic construction.

    H_1 = [1];  H_2k = [H_k kron (1, 1); I_k kron (1, -1)] / sqrt(2)
    """
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"Haar basis needs a power-of-two size, got {n}")
    h = np.array([[1.0]])
    while h.shape[0] < n:
        k = h.shape[0]
        h = np.vstack(
            [np.kron(h, [1.0, 1.0]), np.kron(np.eye(k), [1.0, -1.0])]
        ) / np.sqrt(2.0)
    return h


def hamming_window(n: int) -> np.ndarray:
    """Periodic Hamming samples 0.54 - 0.46*cos(2*pi*t/N); minimum 0.08."""
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * np.arange(n) / n)


def window_operator(n: int, window_kind: str = "hamming") -> np.ndarray:
    """H_win = F diag(w) F^H. Requires every window sample nonzero so the
    inverse diag(1/w) exists."""
    if window_kind == "hamming":
        w = hamming_window(n)
    elif window_kind == "rectangular":
        w = np.ones(n)
    else:
        raise ValueError(f"unknown window {window_kind!r}")
    if np.any(w == 0.0):
        raise ValueError("window has zero samples; operator not invertible")
    f = dft_matrix(n)
    return f @ (w[:, None] * f.conj().T)


@dataclass(frozen=True)
class Sparsifier:
    """A frequency-domain change of unknowns c = forward(I').

    kind 'none' is the identity; 'window' uses H_win (inverse via 1/w);
    'haar' is unitary, inverse = transpose.
    """

    kind: str
    n: int
    window_kind: str = "hamming"
    _haar: np.ndarray | None = field(default=None, repr=False)
    _window: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def create(cls, kind: str, n: int, window_kind: str = "hamming") -> "Sparsifier":
        if kind == "none":
            return cls("none", n)
        if kind == "haar":
            return cls("haar", n, _haar=haar_matrix(n))
        if kind == "window":
            if window_kind == "hamming":
                w = hamming_window(n)
            elif window_kind == "rectangular":
                w = np.ones(n)
            else:
                raise ValueError(f"unknown window {window_kind!r}")
            if np.any(w == 0.0):
                raise ValueError("window has zero samples")
            return cls("window", n, window_kind, _window=w)
        raise ValueError(f"unknown sparsifier kind {kind!r}")

    def forward(self, v: np.ndarray) -> np.ndarray:
        """Map a frequency-domain vector into the solve domain."""
        if self.kind == "none":
            return np.asarray(v, dtype=np.complex128)
        if self.kind == "haar":
            return self._haar @ v
        t = np.fft.ifft(v, norm="ortho")
        return np.fft.fft(self._window * t, norm="ortho")

    def inverse(self, c: np.ndarray) -> np.ndarray:
        """Map solve-domain coefficients back to the frequency domain."""
        if self.kind == "none":
            return np.asarray(c, dtype=np.complex128)
        if self.kind == "haar":
            return self._haar.T @ c
        t = np.fft.ifft(c, norm="ortho")
        return np.fft.fft(t / self._window, norm="ortho")

    def inverse_matrix(self) -> np.ndarray:
        """Dense inverse operator (used to build sensing matrices)."""
        if self.kind == "none":
            return np.eye(self.n, dtype=np.complex128)
        if self.kind == "haar":
            return self._haar.T.astype(np.complex128)
        f = dft_matrix(self.n)
        return f @ ((1.0 / self._window)[:, None] * f.conj().T)

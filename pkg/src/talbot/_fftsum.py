"""Exact grid evaluation of sparse trigonometric sums, shared internals.

A sum S(z) = sum_n b_n e^(i f_n z) with integer frequencies f_n, sampled at
z_j = 2*pi*j/G, depends on f_n only through f_n mod G; folding coefficients
into a length-G spectrum and applying one inverse FFT therefore yields the
*exact* values {S(z_j)} (up to FFT rounding) even when G is far below the
Nyquist rate of the largest frequency.  Off-grid values for refinement are
evaluated directly against an anchor grid point so no large products enter
a double before reduction.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def next_pow2(n: int) -> int:
    return 1 << max(0, (int(n) - 1).bit_length())


def tree_sum(values: np.ndarray) -> complex:
    """Sum by a fixed-shape pairwise tree: bit-identical for identical
    inputs regardless of chunking or worker count."""
    v = np.asarray(values, dtype=np.complex128)
    if v.size == 0:
        return 0j
    L = next_pow2(v.size)
    if L != v.size:
        v = np.concatenate([v, np.zeros(L - v.size, dtype=np.complex128)])
    while v.size > 1:
        v = v[0::2] + v[1::2]
    return complex(v[0])


def fold_frequencies(freqs: Sequence[int], G: int) -> np.ndarray:
    """f mod G as int64, computed in unbounded integers first."""
    return np.array([f % G for f in freqs], dtype=np.int64)


def grid_values(freqs: Sequence[int], coeffs: np.ndarray, G: int) -> np.ndarray:
    """S(2*pi*j/G) for j = 0..G-1, exactly (single inverse FFT)."""
    if G < 1:
        raise ValueError("grid size must be positive")
    spectrum = np.zeros(G, dtype=np.complex128)
    np.add.at(spectrum, fold_frequencies(freqs, G), np.asarray(coeffs, dtype=np.complex128))
    return np.fft.ifft(spectrum) * G


class AnchoredEvaluator:
    """Evaluate S at z = (2*pi/G)*(j + delta) for integer j and |delta| <= 1.

    The anchor phase (f*j mod G)/G is exact integer arithmetic; the offset
    phase f*delta/G stays below ~2^14 turns for desk-scale frequencies, so
    double precision holds it to ~1e-11 of a turn.
    """

    def __init__(self, freqs: Sequence[int], coeffs: np.ndarray, G: int):
        self.G = G
        self.fmod = fold_frequencies(freqs, G)
        self.ffloat = np.array([float(f) for f in freqs])
        if np.any(np.abs(self.ffloat) >= 2.0**53):
            raise ValueError("frequencies too large for refinement offsets")
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)

    def __call__(self, j: int, delta: float) -> complex:
        base = (self.fmod * (j % self.G)) % self.G
        phases = (2.0 * np.pi / self.G) * base + (2.0 * np.pi / self.G) * delta * self.ffloat
        return complex(np.sum(self.coeffs * np.exp(1j * phases)))

    def abs_at(self, j: int, delta: float) -> float:
        return abs(self(j, delta))


def local_maxima(absvals: np.ndarray, top: int) -> list[int]:
    """Indices of the ``top`` largest circular local maxima of |S| on the
    grid (falling back to the plain largest values if the signal is flat)."""
    left = np.roll(absvals, 1)
    right = np.roll(absvals, -1)
    peaks = np.flatnonzero((absvals >= left) & (absvals > right))
    if peaks.size == 0:
        peaks = np.argsort(absvals)[::-1][:top]
    order = peaks[np.argsort(absvals[peaks])[::-1]]
    return [int(i) for i in order[:top]]


def golden_section_peak(f: Callable[[float], float], lo: float, hi: float, iters: int = 30) -> tuple[float, float]:
    """Maximise f on [lo, hi] by golden-section; returns (argmax, max)."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def refine_supremum(freqs: Sequence[int], coeffs: np.ndarray, G: int, absvals: np.ndarray,
                    top: int = 10, iters: int = 30) -> float:
    """Golden-section refinement of the grid supremum around the top grid
    peaks (one grid cell to each side).  Never below the grid sup."""
    ev = AnchoredEvaluator(freqs, coeffs, G)
    best = float(np.max(absvals))
    for j in local_maxima(absvals, top):
        _, val = golden_section_peak(lambda d: ev.abs_at(j, d), -1.0, 1.0, iters)
        if val > best:
            best = val
    return best

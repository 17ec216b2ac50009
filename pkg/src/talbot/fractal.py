"""Regularity and dimension estimators for sampled graphs.

Box-counting dimension via column oscillation counts, Hölder exponents via
the grid modulus of continuity, dyadic-block (Littlewood-Paley) Besov
profiles via FFT masks, and the exact exponent formulas that turn
(r, gamma, q) data into dimension bounds.  The Weierstrass family W(x) = sum 2^{-j gamma} cos(2^j x)
serves as the calibration oracle: its graph has box dimension 2 - gamma,
Hölder exponent gamma, and one Fourier mode per dyadic block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import linregress

from .expsum import ExponentFit

MIN_SAMPLES = 1 << 12


def _as_real_samples(samples) -> np.ndarray:
    arr = samples.samples if hasattr(samples, "samples") else samples
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag)) > 1e-9 * max(1.0, np.max(np.abs(arr.real))):
            raise ValueError("samples are complex; pass .real or .imag explicitly")
        arr = arr.real
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < MIN_SAMPLES or len(arr) & (len(arr) - 1):
        raise ValueError(f"need a 1-d power-of-two sample array of length >= {MIN_SAMPLES}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    return arr


def _fit_loglog(log2_x: np.ndarray, log2_y: np.ndarray, scales: Sequence[int]) -> ExponentFit:
    res = linregress(log2_x, log2_y)
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return ExponentFit(slope=float(res.slope), intercept=float(res.intercept),
                       stderr=stderr, r_squared=float(res.rvalue) ** 2,
                       scales=tuple(int(s) for s in scales))


def _column_oscillations(ys: np.ndarray, k: int) -> np.ndarray:
    """Max - min of ys over 2^k equal closed columns.

    Each column includes the first sample of the next one (circularly):
    boxes are closed in x, so a jump landing exactly on a dyadic boundary
    still registers in the column to its left."""
    cols = ys.reshape(1 << k, -1)
    nxt = np.roll(ys[:: ys.shape[0] >> k], -1)
    return (np.maximum(cols.max(axis=1), nxt)
            - np.minimum(cols.min(axis=1), nxt))


# ---------------------------------------------------------------------------
# box counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxCountResult:
    """Column-counting cover sizes of the rescaled graph.

    eps_list is decreasing; counts[i] boxes of side eps_list[i] cover the
    graph in [0,1]^2.  ``fit`` is over the central window (two largest and
    two smallest eps dropped); ``fit_window`` recomputes with another drop.
    """

    eps_list: tuple[float, ...]
    counts: tuple[int, ...]
    fit: ExponentFit
    degenerate: bool

    @property
    def dimension(self) -> float:
        return self.fit.slope

    def fit_window(self, drop_large: int, drop_small: int) -> ExponentFit:
        """Refit over another central window, same floor removal as ``fit``."""
        if self.degenerate:
            return self.fit
        lo, hi = drop_large, len(self.eps_list) - drop_small
        if hi - lo < 4:
            raise ValueError("window too small for a fit")
        ks = [int(round(-math.log2(e))) for e in self.eps_list[lo:hi]]
        excess = [max(c - (1 << k), 1) for c, k in zip(self.counts[lo:hi], ks)]
        return _fit_loglog(np.array(ks, dtype=np.float64),
                           np.log2(np.array(excess, dtype=np.float64)),
                           [1 << k for k in ks])


def box_dimension(samples, k_min: int = 2, k_max: int | None = None,
                  drop: tuple[int, int] = (2, 2)) -> BoxCountResult:
    """Upper box-counting dimension of the graph of the sampled function.

    The graph is rescaled to [0,1]^2; for each dyadic eps = 2^-k the cover
    size is sum over columns of (ceil(osc/eps) + 1), exact for grid graphs.
    The dimension is the slope of log2 N(eps) against k over the central
    window, with the trivial one-box-per-column floor removed before
    fitting (the floor adds a spurious +2^k term that flattens the slope,
    and the calibration family recovers its known dimension only without
    it).  A constant input is flagged degenerate (dimension 1)."""
    ys = _as_real_samples(samples)
    L = int(math.log2(len(ys)))
    if k_max is None:
        k_max = L - 6
    if not 0 < k_min < k_max <= L - 1:
        raise ValueError(f"need 0 < k_min < k_max <= {L - 1}")

    span = float(ys.max() - ys.min())
    degenerate = span == 0.0
    if not degenerate:
        ys = (ys - ys.min()) / span

    ks = list(range(k_min, k_max + 1))
    counts, excess = [], []
    for k in ks:
        osc = _column_oscillations(ys, k)
        over = int(np.sum(np.ceil(osc * (1 << k) - 1e-9)))
        excess.append(max(over, 1))
        counts.append(over + (1 << k))
    eps_list = tuple(0.5 ** k for k in ks)

    if degenerate:
        fit = ExponentFit(slope=1.0, intercept=0.0, stderr=0.0, r_squared=1.0,
                          scales=tuple(1 << k for k in ks))
        return BoxCountResult(eps_list=eps_list, counts=tuple(counts), fit=fit,
                              degenerate=True)

    lo, hi = drop
    sel = slice(lo, len(ks) - hi)
    fit = _fit_loglog(np.array(ks[sel], dtype=np.float64),
                      np.log2(np.array(excess[sel], dtype=np.float64)),
                      [1 << k for k in ks[sel]])
    return BoxCountResult(eps_list=eps_list, counts=tuple(counts), fit=fit,
                          degenerate=degenerate)


# ---------------------------------------------------------------------------
# Hölder exponent
# ---------------------------------------------------------------------------

def holder_exponent(samples, lag_min: int = 32, lag_max: int = 1024) -> ExponentFit:
    """Hölder exponent from the grid modulus of continuity.

    H(h) = max_x |f(x + h) - f(x)| over circular dyadic lags of h samples,
    fitted as H(h) ~ h^gamma from ``lag_min`` to ``lag_max``.  Fine lags see
    the local increments directly, so the slope tracks gamma for C^gamma
    graphs (~0 across a jump, ~1 for C^1); wide lags saturate at the global
    oscillation and are excluded by default."""
    ys = _as_real_samples(samples)
    if (lag_min & (lag_min - 1)) or (lag_max & (lag_max - 1)):
        raise ValueError("lags must be powers of two")
    if not 1 <= lag_min < lag_max <= len(ys) // 4:
        raise ValueError("need 1 <= lag_min < lag_max <= len/4")
    lags = [lag_min << i for i in range(int(math.log2(lag_max // lag_min)) + 1)]
    hs = [float(np.abs(np.roll(ys, -w) - ys).max()) for w in lags]
    if max(hs) == 0.0:
        return ExponentFit(slope=0.0, intercept=0.0, stderr=0.0, r_squared=0.0,
                           scales=tuple(lags))
    keep = [i for i, h in enumerate(hs) if h > 0.0]
    return _fit_loglog(np.log2(np.array([lags[i] for i in keep], dtype=np.float64)),
                       np.log2(np.array([hs[i] for i in keep])),
                       [lags[i] for i in keep])


# ---------------------------------------------------------------------------
# Besov (dyadic block) profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesovProfile:
    """Dyadic-block norms ||P_N f||_p and their decay exponents.

    gamma_p is minus the fitted slope of log2 ||P_N f||_p against log2 N,
    i.e. ||P_N f||_p ~ N^{-gamma_p}; None when too few blocks carry mass."""

    Ns: tuple[int, ...]
    norms: dict
    fits: dict

    def gamma(self, p) -> float | None:
        fit = self.fits.get(p)
        return None if fit is None else -fit.slope


def besov_profile(samples, ps: Sequence = (1, 2, math.inf),
                  fit_min_block: int = 4) -> BesovProfile:
    """Hard-cutoff Littlewood-Paley block norms of the sampled function.

    P_N keeps frequencies N <= |n| < 2N of the sample DFT; block norms use
    the normalised grid measure, so ||.||_1 <= ||.||_2 <= ||.||_inf per
    block.  Hard cutoffs (not smooth ones) are the operative surrogate here;
    fits use blocks from ``fit_min_block`` up to len/8 whose norm exceeds
    1e-13."""
    arr = samples.samples if hasattr(samples, "samples") else samples
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 1 or len(arr) < MIN_SAMPLES or len(arr) & (len(arr) - 1):
        raise ValueError(f"need a 1-d power-of-two sample array of length >= {MIN_SAMPLES}")
    L = len(arr)
    spec = np.fft.fft(arr) / L
    absfreq = np.abs(np.fft.fftfreq(L) * L)

    Ns, by_p = [], {p: [] for p in ps}
    N = 1
    while 2 * N <= L // 8:
        mask = (absfreq >= N) & (absfreq < 2 * N)
        block = np.fft.ifft(np.where(mask, spec, 0.0)) * L
        a = np.abs(block)
        for p in ps:
            if p == 1:
                by_p[p].append(float(np.mean(a)))
            elif p == 2:
                by_p[p].append(float(np.sqrt(np.mean(a ** 2))))
            elif p in (math.inf, "inf"):
                by_p[p].append(float(np.max(a)))
            else:
                by_p[p].append(float(np.mean(a ** p) ** (1.0 / p)))
        Ns.append(N)
        N *= 2

    fits = {}
    for p in ps:
        vals = np.array(by_p[p])
        keep = [i for i, Nv in enumerate(Ns) if Nv >= fit_min_block and vals[i] > 1e-13]
        if len(keep) < 4:
            fits[p] = None
            continue
        xs = np.log2(np.array([Ns[i] for i in keep], dtype=np.float64))
        fits[p] = _fit_loglog(xs, np.log2(vals[keep]), [Ns[i] for i in keep])
    return BesovProfile(Ns=tuple(Ns), norms={p: tuple(v) for p, v in by_p.items()},
                        fits=fits)


# ---------------------------------------------------------------------------
# exponent formulas
# ---------------------------------------------------------------------------

def _maybe_fraction(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


def dimension_lower_bound(r, gamma, q):
    """D >= 2 - (2r - gamma q')/(2 - q') with q' = q/(q-1), from an L^q
    block-norm growth exponent r and a Hölder exponent gamma.  Exact when
    the inputs are rational; q = inf gives the no-gain floor 2 - 2r + gamma."""
    if q != math.inf and not q > 2:
        raise ValueError("q must exceed 2 (or be inf)")
    if not 0 <= float(gamma) <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    if float(r) < 0:
        raise ValueError("r must be nonnegative")
    rq, gq = _maybe_fraction(r), _maybe_fraction(gamma)
    if q == math.inf:
        if rq is not None and gq is not None:
            return 2 - 2 * rq + gq
        return 2.0 - 2.0 * float(r) + float(gamma)
    qq = _maybe_fraction(q)
    if rq is not None and gq is not None and qq is not None:
        qp = qq / (qq - 1)
        return 2 - (2 * rq - gq * qp) / (2 - qp)
    qp = float(q) / (float(q) - 1.0)
    return 2.0 - (2.0 * float(r) - float(gamma) * qp) / (2.0 - qp)


def dimension_upper_bound(gamma):
    """D <= 2 - gamma for a C^gamma graph, 0 < gamma <= 1; exact on rationals."""
    if not 0 < float(gamma) <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    g = _maybe_fraction(gamma)
    return 2 - g if g is not None else 2.0 - float(gamma)


# ---------------------------------------------------------------------------
# calibration oracle
# ---------------------------------------------------------------------------

def weierstrass(gamma: float, J: int = 16, length: int = 1 << 18) -> np.ndarray:
    """Samples of W(x) = sum_{j=0}^{J} 2^{-j gamma} cos(2^j x) on a uniform
    power-of-two grid over one period.  Frequencies are reduced modulo the
    grid length in integers, so every cosine argument is evaluated exactly."""
    if length & (length - 1) or length < 2:
        raise ValueError("length must be a power of two")
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    m = np.arange(length, dtype=np.int64)
    out = np.zeros(length, dtype=np.float64)
    for j in range(J + 1):
        r = (m << j) & (length - 1) if (1 << j) < length else (m * (1 << j)) % length
        out += 2.0 ** (-j * gamma) * np.cos(2.0 * np.pi * r / length)
    return out

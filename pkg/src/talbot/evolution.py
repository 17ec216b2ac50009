"""Truncated dispersive evolutions, slice samplers, and rational-time
quantization.

The evolved field is the symmetric partial sum

    q(t, x) = sum_{|n| <= M} g_hat(n) e^{i t omega(n)} e^{i n x},

sampled along one-dimensional slices of space-time: horizontal (fixed t),
vertical (fixed x), or oblique lines of rational slope.  At rational
theta = t/2pi = a/q with a polynomial integer frequency map, the evolution
collapses to a finite combination of translates of the datum whose
coefficients are complete residue sums; ``quantize_reconstruct`` builds that
combination exactly and ``quantize_verify`` compares it against the
truncated series away from the jumps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from ._fftsum import grid_values
from .dispersion import (DispersionRelation, IntPolynomial, TimePoint,
                         linear_frac_array, parse_relation, parse_theta,
                         theta_omega_frac_array)
from .fixedpoint import FixedReal
from .initial_data import StepFunction, parse_position

MAX_TRUNCATION = 1 << 18
MAX_DIRECT_WORK = 1 << 26
MAX_QUANTIZE_DENOM = 1 << 12
OFF_JUMP_RADIUS = Fraction(1, 64)  # turns; 2*pi/64 in radians


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SliceSpec:
    """A one-dimensional sample line in space-time.

    horizontal: x in [0, 2pi) at fixed time ``t``.
    vertical:   t/2pi in [t0, t1) at fixed position ``x0`` (turns).
    oblique:    f(x) = q(c - (k/ell) x, x) for x in [0, 2pi ell), i.e. the
                restriction to the rational-slope line through t = c at
                x = 0; gcd(k, ell) = 1.
    """

    kind: str
    t: TimePoint | None = None
    x0: object | None = None
    t0: TimePoint | None = None
    t1: TimePoint | None = None
    c: TimePoint | None = None
    k: int = 1
    ell: int = 1

    def __post_init__(self) -> None:
        if self.kind == "horizontal":
            if self.t is None:
                raise ValueError("horizontal slice needs a time")
        elif self.kind == "vertical":
            if self.x0 is None or self.t0 is None or self.t1 is None:
                raise ValueError("vertical slice needs x0 and a time range")
        elif self.kind == "oblique":
            if self.c is None:
                raise ValueError("oblique slice needs an intercept time c")
            if self.k < 1 or self.ell < 1 or gcd(self.k, self.ell) != 1:
                raise ValueError("oblique slope k/ell needs coprime positive integers")
        else:
            raise ValueError(f"unknown slice kind {self.kind!r}")

    @classmethod
    def horizontal(cls, t) -> "SliceSpec":
        return cls(kind="horizontal", t=TimePoint.from_theta(t))

    @classmethod
    def vertical(cls, x0, t0, t1) -> "SliceSpec":
        return cls(kind="vertical", x0=x0,
                   t0=TimePoint.from_theta(t0), t1=TimePoint.from_theta(t1))

    @classmethod
    def oblique(cls, c, k: int = 1, ell: int = 1) -> "SliceSpec":
        return cls(kind="oblique", c=TimePoint.from_theta(c), k=int(k), ell=int(ell))

    def describe(self) -> str:
        if self.kind == "horizontal":
            return f"horiz:{self.t.describe()}"
        if self.kind == "vertical":
            return f"vert:x0={self.x0}:{self.t0.describe()},{self.t1.describe()}"
        return f"obliq:{self.c.describe()}:{self.k}/{self.ell}"


def parse_slice(spec: str) -> SliceSpec:
    """Grammar: "horiz:<theta>", "vert:<x0>:<t0>,<t1>", "obliq:<c>:<k>/<ell>"
    where <theta>/<t0>/<t1>/<c> follow the turns grammar (rat:a/q, kl:name,
    rand:seed, or a decimal literal) and <x0> is a position (pi-forms or a
    radian literal)."""
    head, _, rest = spec.partition(":")
    if head == "horiz":
        return SliceSpec.horizontal(parse_theta(rest))
    if head == "vert":
        x0_text, _, trange = rest.partition(":")
        lo, _, hi = trange.partition(",")
        if not (x0_text and lo and hi):
            raise ValueError(f"bad vertical slice {spec!r}")
        return SliceSpec.vertical(parse_position(x0_text), parse_theta(lo), parse_theta(hi))
    if head == "obliq":
        c_text, _, slope = rest.rpartition(":")
        k_text, _, ell_text = slope.partition("/")
        if not (c_text and k_text and ell_text):
            raise ValueError(f"bad oblique slice {spec!r}")
        return SliceSpec.oblique(parse_theta(c_text), int(k_text), int(ell_text))
    raise ValueError(f"unknown slice kind in {spec!r}")


# ---------------------------------------------------------------------------
# sample grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleGrid:
    """Uniform complex samples along one slice, with provenance."""

    samples: np.ndarray
    period: float
    truncation: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not _is_pow2(len(self.samples)):
            raise ValueError("sample count must be a power of two")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def spacing(self) -> float:
        return self.period / len(self.samples)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.spacing


def _datum_coefficients(g, M: int) -> np.ndarray:
    """Centered coefficient array [g_hat(-M), ..., g_hat(M)]."""
    if hasattr(g, "coefficients_array"):
        return g.coefficients_array(M)
    arr = np.asarray(g, dtype=np.complex128)
    if arr.shape != (2 * M + 1,):
        raise ValueError(f"datum array must have shape (2M+1,) = ({2 * M + 1},)")
    return arr


def evolve_slice(rel: DispersionRelation | str, g, slc: SliceSpec,
                 M: int = 1 << 14, length: int = 1 << 12) -> SampleGrid:
    """Sample the truncated evolution of datum ``g`` along a slice.

    Phases are reduced in exact fixed-point turns before any floating
    evaluation.  Horizontal and (integer-frequency) oblique slices are
    band-folded and evaluated by a single FFT, which is exact at grid
    points; vertical slices are accumulated mode by mode."""
    rel = parse_relation(rel) if isinstance(rel, str) else rel
    if not 1 <= M <= MAX_TRUNCATION:
        raise ValueError(f"truncation must be in [1, {MAX_TRUNCATION}], got {M}")
    if not _is_pow2(length):
        raise ValueError(f"grid size must be a power of two, got {length}")

    ns = list(range(-M, M + 1))
    coeffs = _datum_coefficients(g, M)
    provenance = {
        "relation": rel.spec,
        "datum": repr(g) if isinstance(g, StepFunction) else "coefficient-array",
        "slice": slc.describe(),
        "truncation": str(M),
    }

    if slc.kind == "horizontal":
        fr = theta_omega_frac_array(rel, slc.t.theta, ns)
        vals = grid_values(ns, coeffs * np.exp(2j * np.pi * fr), length)
        return SampleGrid(vals, 2.0 * math.pi, M, provenance)

    if slc.kind == "oblique":
        if not rel.integer_valued:
            raise ValueError("oblique slices need an integer-valued dispersion relation")
        fr = theta_omega_frac_array(rel, slc.c.theta, ns)
        freqs = [slc.ell * n - slc.k * rel.omega_int(n) for n in ns]
        vals = grid_values(freqs, coeffs * np.exp(2j * np.pi * fr), length)
        return SampleGrid(vals, 2.0 * math.pi * slc.ell, M, provenance)

    # vertical: per-mode linear phase in the step index
    if (2 * M + 1) * length > MAX_DIRECT_WORK:
        raise ValueError("vertical slice too large: reduce truncation or grid")
    th0, th1 = slc.t0.theta, slc.t1.theta
    if isinstance(th0, Fraction) and isinstance(th1, Fraction):
        dth = (th1 - th0) / length
    else:
        f0 = th0 if isinstance(th0, FixedReal) else FixedReal.from_fraction(th0)
        f1 = th1 if isinstance(th1, FixedReal) else FixedReal.from_fraction(th1)
        dth = (f1 - f0) / length
    base = theta_omega_frac_array(rel, th0, ns) + linear_frac_array(slc.x0, ns)
    mu = theta_omega_frac_array(rel, dth, ns)
    amp = coeffs
    j = np.arange(length, dtype=np.float64)
    vals = np.zeros(length, dtype=np.complex128)
    chunk = max(1, MAX_DIRECT_WORK // (16 * length))
    for s in range(0, len(ns), chunk):
        ph = base[s:s + chunk, None] + np.outer(mu[s:s + chunk], j)
        vals += amp[s:s + chunk] @ np.exp(2j * np.pi * ph)
    t0f = slc.t0.theta_float
    t1f = slc.t1.theta_float
    period = 2.0 * math.pi * (t1f - t0f)
    return SampleGrid(vals, period, M, provenance)


# ---------------------------------------------------------------------------
# quantization at rational times
# ---------------------------------------------------------------------------

def quantize_coefficients(rel: DispersionRelation, a: int, q: int) -> np.ndarray:
    """The translate weights c_m, m = 0..q-1, at theta = a/q:

        c_m = (1/q) sum_{j mod q} e((a omega(j) + j m) / q)

    i.e. the inverse DFT of the unimodular multiplier sequence
    e(a omega(j) / q); all residue arithmetic is exact."""
    if not isinstance(rel, IntPolynomial):
        raise ValueError("quantization needs an integer-coefficient polynomial relation")
    if q < 1 or q > MAX_QUANTIZE_DENOM:
        raise ValueError(f"q must be in [1, {MAX_QUANTIZE_DENOM}], got {q}")
    if gcd(a, q) != 1:
        raise ValueError(f"a/q must be reduced, got {a}/{q}")
    ms = np.arange(q, dtype=np.int64)
    total = np.zeros(q, dtype=np.complex128)
    for j in range(q):
        res = (a * rel.omega_int(j) + j * ms) % q
        total += np.exp(2j * np.pi * res / q)
    return total / q


def quantize_reconstruct(rel: DispersionRelation, g: StepFunction, a: int, q: int) -> StepFunction:
    """The evolution of a step datum at theta = a/q as an exact step function:
    sum_m c_m g(x - 2 pi m / q), on the refined breakpoint set
    {b_i + m/q mod 1}."""
    c = quantize_coefficients(rel, a, q)
    breaks: set[Fraction] = set()
    for b in g.breakpoints:
        for m in range(q):
            v = b + Fraction(m, q)
            breaks.add(v - (v >= 1))
    refined = sorted(breaks)
    values = []
    for i, left in enumerate(refined):
        right = refined[i + 1] if i + 1 < len(refined) else refined[0] + 1
        rep = (left + right) / 2
        rep -= rep >= 1
        val = 0j
        for m in range(q):
            u = rep - Fraction(m, q)
            u -= math.floor(u)
            val += complex(c[m]) * complex(g.value_at_turns(u))
        values.append(val)
    return StepFunction(refined, values)


@dataclass(frozen=True)
class QuantizeCheck:
    """Truncated series vs. exact reconstruction, off the jumps."""

    deviation: float
    compared: int
    excluded: int
    coefficients: np.ndarray
    reconstruction: StepFunction


def quantize_verify(rel: DispersionRelation, g: StepFunction, a: int, q: int,
                    M: int = 1 << 12, length: int = 1 << 13) -> QuantizeCheck:
    """Maximum deviation between the truncated evolution at theta = a/q and
    the exact translate reconstruction, over grid points at torus distance
    >= 1/64 of a turn from every reconstructed jump."""
    recon = quantize_reconstruct(rel, g, a, q)
    series = evolve_slice(rel, g, SliceSpec.horizontal(TimePoint.rational(a, q)),
                          M=M, length=length)
    ts = np.arange(length, dtype=np.float64) / length
    dist = np.full(length, np.inf)
    for b in recon.breakpoints:
        d = np.abs(ts - float(b))
        np.minimum(dist, np.minimum(d, 1.0 - d), out=dist)
    mask = dist >= float(OFF_JUMP_RADIUS) - 1e-12
    exact = np.array([complex(recon.value_at_turns(Fraction(jj, length)))
                      for jj in range(length)])
    deviation = float(np.max(np.abs(series.samples[mask] - exact[mask])))
    return QuantizeCheck(deviation=deviation, compared=int(np.sum(mask)),
                         excluded=int(length - np.sum(mask)),
                         coefficients=quantize_coefficients(rel, a, q),
                         reconstruction=recon)

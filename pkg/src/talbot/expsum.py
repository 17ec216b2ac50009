"""Dyadic-block exponential sums and their growth exponents.

The central objects are sums S(z) = sum_{n in block} w(n) a_n e^{i h(n) z}
over a dyadic frequency block, where the modulation a_n = e(theta*omega(n))
is carried in exact fixed-point turns.  The module provides:

* ``block_sum``       -- one sum evaluated at a single point, exactly phased;
* ``sup_norm_sweep``  -- sup/L^2/L^4 norms across dyadic scales with
                         golden-section refinement and exponent fits;
* ``lp_norm``         -- single-block L^p quadrature on an alias-free grid;
* ``l4_quadruple_oracle``     -- exact combinatorial count behind L^4 norms;
* ``airy_l4_identity_check``  -- quadrature vs. the cubic resonance identity;
* ``bprocess_dual_compare``   -- a stationary-phase dual sum against the
                                 direct sum, with an error budget.

Everything here is deterministic: fixed-shape tree reductions, fixed merge
order across worker threads.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import linregress

from ._fftsum import (AnchoredEvaluator, grid_values, next_pow2, refine_supremum,
                      tree_sum)
from .dispersion import (DispersionRelation, IntPolynomial, TimePoint,
                         linear_frac_array, parse_relation,
                         theta_omega_frac_array)
from .diophantine import ctr_constant
from .fixedpoint import FRAC_BITS, ONE, FixedReal

MAX_BLOCK = 1 << 20
MAX_GRID = 1 << 20
TWO_PI = 2.0 * math.pi

_IDENTITY = IntPolynomial((1, 0))  # omega(n) = n, used to phase plain integers


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TALBOT_THREADS", "1")))
    except ValueError:
        return 1


def _is_dyadic(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# block specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockSpec:
    """A dyadic block of modes: |n| in [N, 2N), one sign or both.

    weight "unit" gives w(n) = 1; "reciprocal" gives w(n) = 1/|n|.
    """

    relation: DispersionRelation
    N: int
    sign: str = "+"
    weight: str = "unit"

    def __post_init__(self) -> None:
        if not _is_dyadic(self.N) or self.N > MAX_BLOCK:
            raise ValueError(f"block size must be a power of two <= {MAX_BLOCK}, got {self.N}")
        if self.sign not in ("+", "-", "both"):
            raise ValueError(f"sign must be '+', '-' or 'both', got {self.sign!r}")
        if self.weight not in ("unit", "reciprocal"):
            raise ValueError(f"weight must be 'unit' or 'reciprocal', got {self.weight!r}")

    def modes(self) -> list[int]:
        pos = list(range(self.N, 2 * self.N))
        neg = list(range(-2 * self.N + 1, -self.N + 1))
        if self.sign == "+":
            return pos
        if self.sign == "-":
            return neg
        return neg + pos

    def weights(self, ns: Sequence[int]) -> np.ndarray:
        if self.weight == "unit":
            return np.ones(len(ns))
        return 1.0 / np.abs(np.array(ns, dtype=np.float64))


def _modulated_coefficients(spec: BlockSpec, theta, ns: Sequence[int]) -> np.ndarray:
    """w(n) * e(theta * omega(n)) for the block modes."""
    fr = theta_omega_frac_array(spec.relation, theta, ns)
    return spec.weights(ns) * np.exp(2j * np.pi * fr)


def _as_theta(at) -> tuple[object, str]:
    """Accept a TimePoint or a raw Fraction/FixedReal/float as the turns
    parameter; return (theta, label)."""
    if isinstance(at, TimePoint):
        return at.theta, at.describe()
    tp = TimePoint.from_theta(at)
    return tp.theta, tp.describe()


# ---------------------------------------------------------------------------
# single-point sums
# ---------------------------------------------------------------------------

_x_turn_fracs = linear_frac_array


def block_sum(spec: BlockSpec, t, x=0) -> complex:
    """sum_n w(n) e(theta*omega(n) + x*n) over the block, phased exactly in
    192-bit turns and reduced by a fixed-shape tree.

    ``t`` is a TimePoint (or raw turns value); ``x`` is a position in turns
    (x = 1 is a full period)."""
    theta, _ = _as_theta(t)
    ns = spec.modes()
    coeffs = _modulated_coefficients(spec, theta, ns)
    xfr = _x_turn_fracs(x, ns)
    return tree_sum(coeffs * np.exp(2j * np.pi * xfr))


# ---------------------------------------------------------------------------
# exponent fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of log2(value) against log2(scale)."""

    slope: float
    intercept: float
    stderr: float
    r_squared: float
    scales: tuple[int, ...]

    def payload(self) -> dict:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "r2": self.r_squared,
            "scales": list(self.scales),
        }


def fit_exponent(scales: Sequence[int], values: Sequence[float]) -> ExponentFit:
    """Fit values ~ C * scale^slope through log-log least squares."""
    if len(scales) != len(values):
        raise ValueError("scales and values must have equal length")
    if len(scales) < 4:
        raise ValueError("an exponent fit needs at least four scales")
    if len(set(scales)) < 2:
        raise ValueError("degenerate fit: all scales identical")
    vals = [float(v) for v in values]
    if any(v <= 0.0 for v in vals):
        raise ValueError("exponent fits need strictly positive values")
    xs = np.log2(np.array([float(s) for s in scales]))
    ys = np.log2(np.array(vals))
    res = linregress(xs, ys)
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return ExponentFit(slope=float(res.slope), intercept=float(res.intercept),
                       stderr=stderr, r_squared=float(res.rvalue) ** 2,
                       scales=tuple(int(s) for s in scales))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    N: int
    sup_abs: float
    l2: float
    l4: float
    grid: int
    refined: bool


@dataclass
class SweepResult:
    relation: str
    at: str
    rows: list[SweepRow]
    warnings: list[str] = field(default_factory=list)

    def scales(self) -> list[int]:
        return [row.N for row in self.rows]

    def sup_fit(self) -> ExponentFit:
        return fit_exponent(self.scales(), [row.sup_abs for row in self.rows])

    def l2_fit(self) -> ExponentFit:
        return fit_exponent(self.scales(), [row.l2 for row in self.rows])

    def l4_fit(self) -> ExponentFit:
        return fit_exponent(self.scales(), [row.l4 for row in self.rows])

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream)
        writer.writerow(["N", "sup_abs", "l2", "l4", "grid", "refined"])
        for row in self.rows:
            writer.writerow([row.N, repr(row.sup_abs), repr(row.l2), repr(row.l4),
                             row.grid, int(row.refined)])

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def fit_payload(self) -> dict:
        out = {"relation": self.relation, "at": self.at,
               "sup": self.sup_fit().payload()}
        try:
            out["l2"] = self.l2_fit().payload()
            out["l4"] = self.l4_fit().payload()
        except ValueError:
            pass
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def _oblique_params(at) -> tuple[object, int, int] | None:
    """Detect an oblique slice descriptor: needs kind == 'oblique' plus
    integer direction pair (k, ell) and an intercept TimePoint ``c``."""
    if getattr(at, "kind", None) == "oblique":
        return at.c, int(at.k), int(at.ell)
    return None


def _cell_frequencies(spec: BlockSpec, at, ns: Sequence[int]) -> tuple[list[int], object]:
    """Frequencies seen along the sample line, plus the turns parameter that
    modulates the coefficients.

    Horizontal (fixed time): frequency n, modulation theta*omega(n).
    Oblique (x, t) = (ell z, c - k z): frequency ell*n - k*omega(n),
    modulation c*omega(n); omega must be integer-valued."""
    ob = _oblique_params(at)
    if ob is None:
        theta, _ = _as_theta(at)
        return list(ns), theta
    c, k, ell = ob
    if not spec.relation.integer_valued:
        raise ValueError("oblique sweeps need an integer-valued dispersion relation")
    theta, _ = _as_theta(c)
    freqs = [ell * n - k * spec.relation.omega_int(n) for n in ns]
    return freqs, theta


def _at_label(at) -> str:
    ob = _oblique_params(at)
    if ob is None:
        _, label = _as_theta(at)
        return label
    c, k, ell = ob
    _, clabel = _as_theta(c)
    return f"oblique(k={k}, ell={ell}, c={clabel})"


def _sweep_cell(relation: DispersionRelation, at, N: int, grid: int | None,
                refine: bool, top: int, iters: int, weight: str, sign: str) -> tuple[SweepRow, list[str]]:
    spec = BlockSpec(relation, N, sign=sign, weight=weight)
    ns = spec.modes()
    freqs, theta = _cell_frequencies(spec, at, ns)
    coeffs = _modulated_coefficients(spec, theta, ns)

    G = next_pow2(16 * N) if grid is None else int(grid)
    G = min(G, MAX_GRID)
    warnings: list[str] = []
    if G < 16 * N:
        warnings.append(f"N={N}: grid {G} below 16*N={16 * N}; supremum may be under-resolved")

    vals = grid_values(freqs, coeffs, G)
    absvals = np.abs(vals)
    sup = float(np.max(absvals))
    l2 = float(np.sqrt(np.mean(absvals ** 2)))
    l4 = float(np.mean(absvals ** 4) ** 0.25)
    if refine:
        sup = refine_supremum(freqs, coeffs, G, absvals, top=top, iters=iters)
    return SweepRow(N=N, sup_abs=sup, l2=l2, l4=l4, grid=G, refined=refine), warnings


def sup_norm_sweep(relation: DispersionRelation | str, at, scales: Iterable[int], *,
                   grid: int | None = None, refine: bool = True, top: int = 10,
                   iters: int = 30, weight: str = "unit", sign: str = "+",
                   threads: int | None = None) -> SweepResult:
    """Sup/L^2/L^4 norms of the block sums across dyadic scales.

    ``at`` is either a TimePoint (restriction to a fixed time) or an oblique
    slice descriptor with fields kind='oblique', c (TimePoint), k, ell.
    Grid defaults to 16*N capped at 2^20; the supremum is refined by
    golden-section search around the top grid peaks.  Scales are processed
    in the given order and merged deterministically, whatever the thread
    count."""
    rel = parse_relation(relation) if isinstance(relation, str) else relation
    scale_list = [int(N) for N in scales]
    workers = _default_threads() if threads is None else max(1, int(threads))

    def job(N: int) -> tuple[SweepRow, list[str]]:
        return _sweep_cell(rel, at, N, grid, refine, top, iters, weight, sign)

    if workers == 1 or len(scale_list) <= 1:
        outcomes = [job(N) for N in scale_list]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(job, scale_list))

    rows = [row for row, _ in outcomes]
    warnings = [w for _, ws in outcomes for w in ws]
    return SweepResult(relation=rel.spec, at=_at_label(at), rows=rows, warnings=warnings)


# ---------------------------------------------------------------------------
# L^p norms
# ---------------------------------------------------------------------------

def lp_norm(spec: BlockSpec, t, p, grid: int | None = None) -> float:
    """L^p norm (normalised by the period) of the block sum at time ``t``.

    p in {2, 4, inf}.  Quadrature on ``grid`` points; with the default grid
    of 16*N (power of two) the p = 2 and p = 4 quadratures are alias-free,
    hence exact up to FFT rounding.  p = inf adds golden-section refinement."""
    theta, _ = _as_theta(t)
    ns = spec.modes()
    coeffs = _modulated_coefficients(spec, theta, ns)
    G = next_pow2(16 * spec.N) if grid is None else int(grid)
    vals = grid_values(list(ns), coeffs, G)
    absvals = np.abs(vals)
    if p == 2:
        return float(np.sqrt(np.mean(absvals ** 2)))
    if p == 4:
        return float(np.mean(absvals ** 4) ** 0.25)
    if p in (math.inf, "inf", "sup"):
        return refine_supremum(list(ns), coeffs, G, absvals)
    raise ValueError(f"p must be 2, 4 or inf, got {p!r}")


# ---------------------------------------------------------------------------
# quadruple-counting oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadrupleCount:
    """Exact count of resonant quadruples in a block.

    ``count`` is the number of (n1, n2, n3, n4) in the block with
    h(n1) + h(n3) = h(n2) + h(n4); ``resonances`` lists the nontrivial ones
    (those with {n1, n3} != {n2, n4} as multisets), truncated to the cap."""

    count: int
    resonances: tuple[tuple[int, int, int, int], ...]
    truncated: bool
    K: int
    h: str


def l4_quadruple_oracle(h: DispersionRelation | str, K: int,
                        max_resonances: int = 1000) -> QuadrupleCount:
    """Count solutions of h(n1) + h(n3) = h(n2) + h(n4) with all n_i in
    [K, 2K), by a hashed three-index enumeration (O(K^3) time)."""
    rel = parse_relation(h) if isinstance(h, str) else h
    if not rel.integer_valued:
        raise ValueError("the quadruple oracle needs an integer-valued frequency map")
    if not _is_dyadic(K) or K > 128:
        raise ValueError(f"K must be a power of two <= 128, got {K}")
    ns = list(range(K, 2 * K))
    hv_py = [rel.omega_int(n) for n in ns]
    if max(abs(v) for v in hv_py) >= 1 << 61:
        raise ValueError("frequency values too large for exact int64 arithmetic")
    hv = np.array(hv_py, dtype=np.int64)

    by_value: dict[int, list[int]] = {}
    for n, v in zip(ns, hv_py):
        by_value.setdefault(v, []).append(n)

    # target[i, j, k] = h(n_i) - h(n_j) + h(n_k) must equal some h(n4)
    target = hv[:, None, None] - hv[None, :, None] + hv[None, None, :]
    uniq = np.array(sorted(by_value), dtype=np.int64)
    counts = np.array([len(by_value[v]) for v in uniq.tolist()], dtype=np.int64)
    pos = np.searchsorted(uniq, target)
    pos_c = np.minimum(pos, len(uniq) - 1)
    hit = uniq[pos_c] == target
    count = int(np.sum(np.where(hit, counts[pos_c], 0)))

    resonances: list[tuple[int, int, int, int]] = []
    truncated = False
    for i, j, k in np.argwhere(hit):
        n1, n2, n3 = ns[i], ns[j], ns[k]
        for n4 in by_value[int(target[i, j, k])]:
            if sorted((n1, n3)) != sorted((n2, n4)):
                if len(resonances) >= max_resonances:
                    truncated = True
                    break
                resonances.append((n1, n2, n3, n4))
        if truncated:
            break
    return QuadrupleCount(count=count, resonances=tuple(resonances),
                          truncated=truncated, K=K, h=rel.spec)


# ---------------------------------------------------------------------------
# cubic resonance identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    quadrature: float
    resonance_sum: complex
    relative_error: float
    N: int
    grid: int


def airy_l4_identity_check(t, N: int, grid: int | None = None) -> IdentityCheck:
    """Check the exact L^4 identity for the cubic relation omega(n) = n^3.

    For S(x) = sum_{n in [N,2N)} e(theta n^3) e^{inx}, the normalised
    quadrature (1/2pi) * int |S|^4 equals the constrained triple sum
    sum e(3 theta (n1-n2)(n2-n3)(n1+n3)) over n1, n2, n3 in the block with
    n1 - n2 + n3 also in the block.  Returns both sides and the relative
    error; phases on both sides are exact 192-bit turns."""
    if not _is_dyadic(N) or N > 1 << 7:
        raise ValueError(f"N must be a power of two <= {1 << 7}, got {N}")
    theta, _ = _as_theta(t)
    ns = list(range(N, 2 * N))
    rel = parse_relation("poly:1,0,0,0")
    coeffs = np.exp(2j * np.pi * theta_omega_frac_array(rel, theta, ns))

    G = next_pow2(32 * N) if grid is None else int(grid)
    if G <= 16 * N:
        raise ValueError("the quartic quadrature needs grid > 16*N")
    vals = grid_values(ns, coeffs, G)
    quadrature = float(np.mean(np.abs(vals) ** 4))

    arr = np.array(ns, dtype=np.int64)
    n1 = arr[:, None, None]
    n2 = arr[None, :, None]
    n3 = arr[None, None, :]
    n4 = n1 - n2 + n3
    mask = (n4 >= N) & (n4 < 2 * N)
    w = ((n1 - n2) * (n2 - n3) * (n1 + n3))[mask]
    uw, cnt = np.unique(w, return_counts=True)
    # e(3 theta w): phase the integers 3*w with the same exact machinery
    fr = theta_omega_frac_array(IntPolynomial((3, 0)), theta, [int(v) for v in uw])
    resonance = complex(np.sum(cnt * np.exp(2j * np.pi * fr)))
    rel_err = abs(quadrature - resonance) / quadrature
    return IdentityCheck(quadrature=quadrature, resonance_sum=resonance,
                         relative_error=rel_err, N=N, grid=G)


# ---------------------------------------------------------------------------
# stationary-phase dual sum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BProcessComparison:
    """Direct block sum vs. its stationary-phase dual.

    direct  = sum_{N <= n < 2N} e(t n^alpha + x n)
    dual    = sum_m f''(x_m)^{-1/2} e(-c_{t,r} (m-x)^r + 1/8)
    where f(u) = t u^alpha + x u, alpha = r/(r-1), and x_m is the stationary
    point f'(x_m) = m.  ``budget_scale`` is sqrt(N) + N^{1-alpha/2}; the
    discrepancy should stay below (constant) * budget_scale."""

    direct: complex
    dual: complex
    discrepancy: float
    dual_terms: int
    out_of_range: int
    N: int
    r: int
    budget_scale: float

    def within_budget(self, constant: float) -> bool:
        return self.discrepancy <= constant * self.budget_scale


def _fx(x) -> FixedReal:
    return x if isinstance(x, FixedReal) else FixedReal.convert(x)


def bprocess_dual_compare(r: int, t, x, N: int) -> BProcessComparison:
    """Compare the direct sum over [N, 2N) with its stationary-phase dual.

    r in {3, 4, 5} fixes alpha = r/(r-1); t > 0 and x are in turns units,
    i.e. the summand is e(t n^alpha + x n) with e(y) = exp(2 pi i y).  All
    phases -- t n^alpha on the direct side, c_{t,r} (m-x)^r on the dual
    side -- are evaluated in 192-bit fixed point."""
    if r not in (3, 4, 5):
        raise ValueError(f"r must be 3, 4 or 5, got {r}")
    if not _is_dyadic(N) or N > 1 << 16:
        raise ValueError(f"N must be a power of two <= {1 << 16}, got {N}")
    alpha = Fraction(r, r - 1)
    tf = _fx(t)
    if not tf > FixedReal.from_int(0):
        raise ValueError("the dual sum needs t > 0")
    xf = _fx(x)

    from .dispersion import FractionalPower
    rel = FractionalPower(alpha)
    ns = list(range(N, 2 * N))
    tfr = theta_omega_frac_array(rel, tf, ns)
    xfr = _x_turn_fracs(xf, ns)
    direct = tree_sum(np.exp(2j * np.pi * (tfr + xfr)))

    # dual range: f'(u) = t*alpha*u^(alpha-1) + x over u in [N, 2N-1]
    t_float, x_float = float(tf), float(xf)
    af = float(alpha)
    fp = lambda u: t_float * af * u ** (af - 1.0) + x_float
    m_lo = math.floor(fp(N)) - 1
    m_hi = math.ceil(fp(2 * N - 1)) + 1

    c = ctr_constant(tf, r)
    ta = tf * r / (r - 1)  # t * alpha in fixed point
    lo_f, hi_f = FixedReal.from_int(N), FixedReal.from_int(2 * N - 1)
    amp_const = (t_float * af * (af - 1.0)) ** -0.5

    terms: list[complex] = []
    out_of_range = 0
    for m in range(m_lo, m_hi + 1):
        num = FixedReal.from_int(m) - xf
        if not num > FixedReal.from_int(0):
            out_of_range += 1
            continue
        xm = (num / ta) ** (r - 1)  # stationary point of f(u) - m u
        if not (lo_f <= xm <= hi_f):
            out_of_range += 1
            continue
        amp = amp_const * float(xm) ** ((2.0 - af) / 2.0)
        phase_val = c * num ** r  # c_{t,r} (m - x)^r, exact to ~r ulps
        turns = ((-phase_val.m) % ONE) / ONE + 0.125
        terms.append(amp * np.exp(2j * np.pi * turns))

    dual = tree_sum(np.array(terms, dtype=np.complex128))
    return BProcessComparison(
        direct=direct, dual=dual, discrepancy=abs(direct - dual),
        dual_terms=len(terms), out_of_range=out_of_range, N=N, r=r,
        budget_scale=math.sqrt(N) + float(N) ** (1.0 - af / 2.0),
    )

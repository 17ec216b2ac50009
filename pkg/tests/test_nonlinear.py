"""Wick-ordered NLS and KdV solvers: exactness, invariants, and residuals."""
import math
from fractions import Fraction

import numpy as np
import pytest

from talbot import (BlowUpError, SpectralField, StepFunction, kdv_solve,
                    linear_flow_modes, nls_wick_solve, smoothing_residual,
                    wick_constant, write_snapshot_csv)


def mode_array(M: int, **modes: complex) -> np.ndarray:
    c = np.zeros(2 * M + 1, dtype=complex)
    for key, val in modes.items():
        c[M + int(key.lstrip("n_").replace("m", "-"))] = val
    return c


def cosine_datum(M: int, amplitude: float = 1.0) -> np.ndarray:
    c = np.zeros(2 * M + 1, dtype=complex)
    c[M + 1] = amplitude / 2.0
    c[M - 1] = amplitude / 2.0
    return c


# -- Wick constant -------------------------------------------------------------------

def test_wick_constant_of_step_datum():
    g = StepFunction.indicator(Fraction(0), Fraction(1, 2))
    assert wick_constant(g) == pytest.approx(1.0, abs=1e-14)


def test_wick_constant_of_mode_array():
    c = mode_array(4, n_0=0.5)
    assert wick_constant(c) == pytest.approx(0.5, abs=1e-14)
    assert wick_constant(StepFunction.constant(2.0), M=4) == pytest.approx(8.0)


def test_wick_constant_validation():
    with pytest.raises(ValueError):
        wick_constant(np.zeros(4, dtype=complex))  # even length


# -- exact special solutions -----------------------------------------------------------

@pytest.mark.parametrize("sign", [1, -1])
def test_constant_datum_is_a_pure_rotation(sign):
    # iu_t +/- (|u|^2 - P)u = 0 with u = A: P = 2A^2, so u(t) = A e^{-/+ i A^2 t}
    A, M, t_max = 0.5, 4, 0.1
    traj = nls_wick_solve(mode_array(M, n_0=A), sign=sign, M=M, dt=1e-3,
                          t_max=t_max)
    expected = A * np.exp(-1j * sign * A * A * t_max)
    final = traj.final.modes
    assert complex(final[M]) == pytest.approx(expected, abs=1e-12)
    assert float(np.max(np.abs(np.delete(final, M)))) < 1e-14
    assert traj.l2_drift < 1e-13
    assert traj.wick == pytest.approx(2.0 * A * A, abs=1e-14)


def test_zero_datum_stays_zero():
    M = 8
    traj = nls_wick_solve(np.zeros(2 * M + 1, dtype=complex), M=M, dt=1e-3,
                          t_max=0.05)
    assert float(np.max(np.abs(traj.final.modes))) == 0.0
    assert traj.l2_drift == 0.0


def test_gauge_phase_equivariance():
    # |u|^2 is phase-blind, so g -> e^{i phi} g maps the solution the same way
    M, phi = 16, 0.7
    g = mode_array(M, n_0=1.0, n_1=0.5)
    base = nls_wick_solve(g, M=M, dt=1e-3, t_max=0.05).final.modes
    rotated = nls_wick_solve(g * np.exp(1j * phi), M=M, dt=1e-3,
                             t_max=0.05).final.modes
    np.testing.assert_allclose(rotated, base * np.exp(1j * phi), atol=1e-12)


# -- convergence orders ----------------------------------------------------------------

def test_nls_strang_splitting_is_second_order():
    M = 16
    g = mode_array(M, n_0=1.0, n_1=0.5)
    finals = {dt: nls_wick_solve(g, M=M, dt=dt, t_max=0.1).final.modes
              for dt in (2e-4, 1e-4, 5e-5)}
    d1 = np.linalg.norm(finals[2e-4] - finals[1e-4])
    d2 = np.linalg.norm(finals[1e-4] - finals[5e-5])
    assert 3.7 <= d1 / d2 <= 4.3


def test_kdv_integrating_factor_rk4_is_fourth_order():
    M = 32
    g = cosine_datum(M, 2.0)
    finals = {dt: kdv_solve(g, M=M, dt=dt, t_max=0.2).final.modes
              for dt in (4e-4, 2e-4, 1e-4)}
    e1 = np.linalg.norm(finals[4e-4] - finals[2e-4])
    e2 = np.linalg.norm(finals[2e-4] - finals[1e-4])
    assert 12.0 <= e1 / e2 <= 20.0


# -- conserved quantities ---------------------------------------------------------------

def test_kdv_conserves_mass_and_l2():
    traj = kdv_solve(cosine_datum(1 << 8), M=1 << 8, dt=2e-4, t_max=0.2)
    assert traj.mean_drift == 0.0
    assert traj.l2_drift < 1e-12
    assert traj.warnings == ()


def test_kdv_solution_stays_real():
    traj = kdv_solve(cosine_datum(32, 1.5), M=32, dt=2e-4, t_max=0.1)
    c = traj.final.modes
    np.testing.assert_allclose(c, np.conj(c[::-1]), atol=1e-14)
    assert abs(c[32]) == 0.0


# -- guards and validation ---------------------------------------------------------------

def test_nls_blowup_guard():
    with pytest.raises(BlowUpError) as info:
        nls_wick_solve(cosine_datum(8, 1200.0), M=8, dt=1e-3, t_max=0.01)
    assert info.value.kind == "nls"
    assert info.value.step == 1
    assert info.value.linf > 1e3


def test_kdv_blowup_guard():
    with pytest.raises(BlowUpError) as info:
        kdv_solve(cosine_datum(8, 1200.0), M=8, dt=1e-3, t_max=0.01)
    assert info.value.kind == "kdv"


def test_kdv_rejects_complex_datum():
    M = 8
    with pytest.raises(ValueError):
        kdv_solve(mode_array(M, n_1=1.0), M=M, dt=1e-3, t_max=0.01)


def test_kdv_rejects_nonzero_mean():
    M = 8
    with pytest.raises(ValueError):
        kdv_solve(mode_array(M, n_0=0.3), M=M, dt=1e-3, t_max=0.01)


def test_solver_parameter_validation():
    M = 8
    g = mode_array(M, n_0=0.1)
    with pytest.raises(ValueError):
        nls_wick_solve(g, sign=0, M=M, dt=1e-3, t_max=0.01)
    with pytest.raises(ValueError):
        nls_wick_solve(g, M=M, dt=5e-3, t_max=0.01)  # dt too large
    with pytest.raises(ValueError):
        nls_wick_solve(g, M=M, dt=1e-3, t_max=-1.0)
    with pytest.raises(ValueError):
        nls_wick_solve(g, M=M, dt=1e-3, t_max=0.0105)  # not a step multiple
    with pytest.raises(ValueError):
        nls_wick_solve(np.zeros(2 * 4096 + 1, dtype=complex), M=4096,
                       dt=1e-3, t_max=0.01)  # too many modes


def test_snapshot_validation():
    M = 8
    g = mode_array(M, n_0=0.1)
    with pytest.raises(ValueError):
        nls_wick_solve(g, M=M, dt=1e-3, t_max=0.01, snapshot_times=(0.5,))
    with pytest.raises(ValueError):
        nls_wick_solve(g, M=M, dt=1e-3, t_max=0.01, snapshot_times=(-0.001,))


# -- snapshots and manifests ---------------------------------------------------------------

def test_snapshot_times_and_exact_time():
    M = 8
    traj = nls_wick_solve(mode_array(M, n_0=0.5), M=M, dt=1e-3, t_max=0.05,
                          snapshot_times=(0.0, 0.025))
    assert traj.times == (0.0, 0.025, 0.05)
    assert traj.final is traj.fields[-1]
    assert traj.fields[0].step == 0
    exact = traj.exact_time(-1)
    assert isinstance(exact, Fraction)
    assert exact == 50 * Fraction(1e-3)
    assert float(exact) == pytest.approx(0.05, abs=1e-12)


def test_run_manifest_fields():
    M = 8
    traj = kdv_solve(cosine_datum(M, 0.5), M=M, dt=1e-3, t_max=0.01)
    man = traj.run_manifest()
    for key in ("kind", "relation", "M", "dt", "grid", "snapshots",
                "l2_drift", "mean_drift", "warnings"):
        assert key in man
    assert man["kind"] == "kdv"
    assert man["M"] == M


# -- linear flow and residual -----------------------------------------------------------

def test_residual_vanishes_at_time_zero():
    M = 8
    g = mode_array(M, n_0=1.0, n_1=0.5)
    traj = nls_wick_solve(g, M=M, dt=1e-3, t_max=0.0)
    np.testing.assert_allclose(linear_flow_modes(traj), g, atol=1e-15)
    res = smoothing_residual(traj, length=64)
    assert float(np.max(np.abs(res.samples))) == 0.0


def test_linear_flow_uses_exact_phases():
    # a one-mode datum evolves as a pure linear phase, so the residual is
    # the (tiny) Wick rotation mismatch only
    M = 8
    g = mode_array(M, n_1=0.1)
    traj = nls_wick_solve(g, M=M, dt=1e-3, t_max=0.1)
    flow = linear_flow_modes(traj)
    # the solver applies e^{-in^2 t} and the constant rotation e^{+i P t}
    # (|u|^2 = P/2 is constant for one mode, so |u|^2 - P = -P/2 ... )
    assert abs(abs(complex(flow[M + 1])) - 0.1) < 1e-14
    res = smoothing_residual(traj, length=64)
    assert res.provenance["kind"] == "nls-residual"


def test_residual_length_validation():
    M = 8
    traj = nls_wick_solve(mode_array(M, n_0=0.5), M=M, dt=1e-3, t_max=0.0)
    with pytest.raises(ValueError):
        smoothing_residual(traj, length=8)  # below 2M+1
    with pytest.raises(ValueError):
        smoothing_residual(traj, length=100)


def test_kdv_residual_is_real():
    M = 16
    traj = kdv_solve(cosine_datum(M, 1.0), M=M, dt=1e-3, t_max=0.05)
    res = smoothing_residual(traj, length=256)
    assert res.samples.dtype == np.float64


# -- spectral fields and CSV dumps ---------------------------------------------------------

def test_spectral_field_values():
    field = SpectralField(modes=mode_array(4, n_0=2.0), step=0, time=0.0)
    np.testing.assert_allclose(field.values(16), np.full(16, 2.0 + 0j), atol=1e-14)
    with pytest.raises(ValueError):
        field.values(4)  # below 2M+1
    with pytest.raises(ValueError):
        field.values(100)


def test_write_snapshot_csv(tmp_path):
    field = SpectralField(modes=mode_array(4, n_0=1.5), step=0, time=0.0)
    path = tmp_path / "snap.csv"
    write_snapshot_csv(field, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 1 + 16
    x, re, im = lines[1].split(",")
    assert float(x) == 0.0
    assert float(re) == pytest.approx(1.5)
    assert float(im) == pytest.approx(0.0)


def test_write_snapshot_csv_of_residual(tmp_path):
    M = 8
    traj = nls_wick_solve(mode_array(M, n_0=0.5), M=M, dt=1e-3, t_max=0.01)
    res = smoothing_residual(traj, length=32)
    path = tmp_path / "res.csv"
    write_snapshot_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 1 + 32

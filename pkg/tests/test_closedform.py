"""Closed-form phase integral, dressed solution, elliptic phase, limits."""

import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from dressedatom import (AtomConfig, BranchMode, ConstantDrive, CosineDrive,
                         Regime, RwaPairDrive, dressed_solution,
                         elliptic_phase, limit_form, phase_integral,
                         psi0_gamma_zero_integrand)
from dressedatom.closedform import (PhaseIntegrand, connection_phase_quadrature,
                                    dressed_series, phase_series)
from dressedatom.errors import DomainError, RegimeMismatch
from dressedatom.frames import connection_dtheta, rabi_frequency
from dressedatom.scenario import dominant_frequency

SMOOTH = BranchMode.SMOOTH_CONTINUATION
POSITIVE = BranchMode.POSITIVE_ROOT


def cfg_wt(wt, j0=1.0, omega=1.0):
    return AtomConfig.from_detuning(wt, j0, omega_drive=omega)


def riemann_phase(cfg, drive, t, branch, n=10_000_000):
    """Brute-force midpoint-rule oracle for both parts of Z(t).

    Cells are aligned to the coupling zeros, where the connection integrand
    has a jump (the |J| kink); a cell straddling the jump would cost ~dt/2
    of spurious error on the imaginary part.
    """
    edges = [0.0] + [float(z) for z in drive.coupling_zero_times(0.0, t)] + [t]
    re = im = 0.0
    chunk = 1_000_000
    for a, b in zip(edges[:-1], edges[1:]):
        seg = b - a
        m_total = max(1, int(round(n * seg / t)))
        dt = seg / m_total
        done = 0
        while done < m_total:
            m = min(chunk, m_total - done)
            ts = a + (done + np.arange(m) + 0.5) * dt
            re += float(np.sum(rabi_frequency(cfg, drive, ts, branch))) * dt
            im += float(np.sum(connection_dtheta(cfg, drive, ts, branch))) * dt
            done += m
    return complex(re, im)


# ------------------------------------------------------------ phase integral

def test_phase_rwa_345():
    cfg = cfg_wt(0.6, j0=0.8, omega=1.0)
    z = phase_integral(cfg, RwaPairDrive(0.8, 1.0), 2.0, SMOOTH)
    assert z.real == pytest.approx(2.0, abs=1e-12)
    assert z.imag == pytest.approx(0.0, abs=1e-14)


def test_phase_resonant_cosine_antiderivative():
    cfg = cfg_wt(0.0, j0=1.3, omega=0.9)
    drv = CosineDrive(1.3, 0.9)
    for t in (0.5, 2.0, 5.5, 9.0):
        z = phase_integral(cfg, drv, t, SMOOTH)
        assert z.real == pytest.approx((1.3 / 0.9) * math.sin(0.9 * t), abs=1e-10)
        assert z.imag == pytest.approx(0.0, abs=1e-12)


def test_phase_against_dense_riemann_oracle():
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    z = phase_integral(cfg, drv, 3.0, SMOOTH)
    ref = riemann_phase(cfg, drv, 3.0, SMOOTH)
    assert abs(z.real - ref.real) <= 1e-8
    assert abs(z.imag - ref.imag) <= 1e-8


@pytest.mark.parametrize("wt", [0.5, 1.7, -0.4])
def test_imaginary_shortcut_matches_quadrature(wt):
    cfg = cfg_wt(wt, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    for t in (0.7, 2.0, 4.9):
        z = phase_integral(cfg, drv, t, SMOOTH)
        ref = connection_phase_quadrature(cfg, drv, t, SMOOTH)
        assert abs(z.imag - ref) <= 1e-9


def test_phase_series_matches_pointwise():
    cfg = cfg_wt(0.8, j0=1.2, omega=1.4)
    drv = CosineDrive(1.2, 1.4)
    ts = np.linspace(0.0, 6.0, 25)
    zs = phase_series(cfg, drv, ts, SMOOTH)
    for i in (3, 11, 24):
        z = phase_integral(cfg, drv, float(ts[i]), SMOOTH)
        assert abs(zs[i] - z) <= 1e-9


def test_phase_quadrature_failure_on_tiny_budget():
    from dressedatom import Tolerances
    from dressedatom.errors import QuadratureFailure
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    tols = Tolerances(quad_limit=8)
    with pytest.raises(QuadratureFailure):
        phase_integral(cfg, drv, 2000.0, SMOOTH, tol=1e-12, tols=tols)


def test_phase_integrand_consistency():
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    pi_ = PhaseIntegrand.at(cfg, drv, 0.8, SMOOTH)
    assert pi_.omega_r == pytest.approx(float(rabi_frequency(cfg, drv, 0.8, SMOOTH)))
    assert pi_.dtheta_dt == pytest.approx(float(connection_dtheta(cfg, drv, 0.8)))


# ----------------------------------------------------------- dressed solution

def test_boundary_condition_every_drive():
    drvs = [CosineDrive(1.0, 1.0), RwaPairDrive(0.7, 1.3), ConstantDrive(0.5, 0.2)]
    for wt in (0.0, 0.6):
        for drv in drvs:
            cfg = cfg_wt(wt, j0=getattr(drv, "j0", 1.0),
                         omega=getattr(drv, "omega", 1.0))
            sol = dressed_solution(cfg, drv, 0.0, SMOOTH)
            assert sol.psi0 == 0.0
            assert sol.psi1 == 1.0


def test_rwa_quarter_period():
    cfg = cfg_wt(0.0, j0=1.0, omega=1.0)
    sol = dressed_solution(cfg, RwaPairDrive(1.0, 1.0), math.pi / 2, SMOOTH)
    assert abs(sol.psi0) == pytest.approx(1.0, abs=1e-12)
    assert abs(sol.psi1) <= 1e-12


def test_rwa_reduction_no_error_growth():
    cfg = cfg_wt(0.6, j0=0.8, omega=1.0)
    drv = RwaPairDrive(0.8, 1.0)
    ts = np.linspace(0.0, 60.0, 301)
    out = dressed_series(cfg, drv, ts, SMOOTH)
    # hypot(cos, sin) is 1 only to the last ulp, so allow machine noise
    assert np.max(np.abs(out["phase"].imag)) <= 1e-14
    assert np.max(np.abs(out["p0_raw"] - np.sin(1.0 * ts) ** 2)) <= 1e-10


def test_p0_matches_riemann_oracle():
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    sol = dressed_solution(cfg, drv, 2.0, SMOOTH)
    zref = riemann_phase(cfg, drv, 2.0, SMOOTH, n=2_000_000)
    assert abs(sol.p0_raw - abs(cmath.sin(zref)) ** 2) <= 1e-7


def test_dressed_pair_consistency():
    cfg = cfg_wt(0.7, j0=1.1, omega=1.2)
    sol = dressed_solution(cfg, CosineDrive(1.1, 1.2), 2.3, SMOOTH)
    z = sol.phase
    assert sol.psi_plus == pytest.approx(cmath.exp(-1j * z), rel=1e-14)
    assert sol.psi_minus == pytest.approx(cmath.exp(1j * z), rel=1e-14)
    assert sol.psi0 == pytest.approx((sol.psi_plus - sol.psi_minus) / 2j, rel=1e-14)
    assert sol.psi1 == pytest.approx((sol.psi_plus + sol.psi_minus) / 2, rel=1e-14)
    assert sol.p0_norm == pytest.approx(sol.p0_raw / (sol.p0_raw + sol.p1_raw))


def test_pythagorean_closure():
    rng = np.random.default_rng(11)
    for _ in range(25):
        wt = rng.uniform(-1.5, 1.5)
        j0 = rng.uniform(0.2, 2.0)
        cfg = cfg_wt(wt, j0=j0, omega=1.1)
        sol = dressed_solution(cfg, CosineDrive(j0, 1.1), rng.uniform(0.1, 8), SMOOTH)
        lhs = abs(sol.psi0) ** 2 + abs(sol.psi1) ** 2
        assert abs(lhs - math.cosh(2.0 * sol.phase.imag)) <= 1e-12
        assert lhs >= 1.0 - 1e-12
        assert 0.0 <= sol.p0_norm <= 1.0


# ------------------------------------------------- literal printed integrand

def test_literal_integrand_resonance():
    cfg = cfg_wt(0.0, j0=1.2, omega=1.0)
    drv = CosineDrive(1.2, 1.0)
    for t in (0.4, 2.8):
        val = psi0_gamma_zero_integrand(cfg, drv, t)
        assert val.imag == 0.0
        assert val.real == pytest.approx(1.2 * abs(math.cos(t)), rel=1e-12)


def test_literal_integrand_at_coupling_zero():
    # cos(W t) = 0 with nonzero detuning: real part |wt|, imaginary part
    # -+ j0 W / (2 wt) evaluated literally
    wt, j0, omega = 0.8, 1.1, 1.0
    cfg = cfg_wt(wt, j0=j0, omega=omega)
    drv = CosineDrive(j0, omega)
    t = math.pi / 2
    val = psi0_gamma_zero_integrand(cfg, drv, t)
    assert val.real == pytest.approx(abs(wt), rel=1e-9)
    assert val.imag == pytest.approx(-j0 * omega * math.sin(omega * t) / (2 * wt),
                                     rel=1e-9)


def test_literal_integrand_imag_matches_connection():
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    val = psi0_gamma_zero_integrand(cfg, drv, 0.3)
    dth = float(connection_dtheta(cfg, drv, 0.3))
    assert abs(val.imag - dth) <= 1e-9
    # where the cosine is negative the literal form loses the envelope sign
    t2 = 2.0
    val2 = psi0_gamma_zero_integrand(cfg, drv, t2)
    dth2 = float(connection_dtheta(cfg, drv, t2))
    assert abs(val2.imag + dth2) <= 1e-9


def test_literal_integrand_wrong_drive():
    cfg = cfg_wt(0.5)
    with pytest.raises(DomainError):
        psi0_gamma_zero_integrand(cfg, RwaPairDrive(1.0, 1.0), 0.3)


def test_literal_integrand_degenerate_at_radicand_zero():
    from dressedatom.errors import DegenerateFrameError
    cfg = cfg_wt(0.0, j0=1.0, omega=1.0)
    with pytest.raises(DegenerateFrameError):
        psi0_gamma_zero_integrand(cfg, CosineDrive(1.0, 1.0), math.pi / 2)


# ------------------------------------------------------------ elliptic phase

def test_elliptic_phase_resonance_first_quadrant():
    cfg = cfg_wt(0.0, j0=1.4, omega=1.0)
    drv = CosineDrive(1.4, 1.0)
    for t in (0.2, 0.8, 1.4):
        assert elliptic_phase(cfg, drv, t) == pytest.approx(
            1.4 * math.sin(t), abs=1e-12)


def test_elliptic_phase_zero_coupling():
    cfg = cfg_wt(0.7, j0=0.0, omega=1.0)
    drv = CosineDrive(0.0, 1.0)
    assert elliptic_phase(cfg, drv, 3.0) == pytest.approx(0.7 * 3.0, rel=1e-12)


def test_elliptic_phase_resonance_multi_quadrant():
    # unit modulus across many quadrants: E(W t, 1) folds through 2E(1) = 2
    cfg = cfg_wt(0.0, j0=1.3, omega=1.0)
    drv = CosineDrive(1.3, 1.0)
    for t in (2.0, 7.0, 11.5):
        ref = quad(lambda s: abs(1.3 * math.cos(s)), 0, t,
                   points=list(drv.coupling_zero_times(0, t)), limit=300)[0]
        assert elliptic_phase(cfg, drv, t) == pytest.approx(ref, abs=1e-12)


def test_elliptic_phase_quadrature():
    wt, j0, omega = 0.5, 1.0, 1.0
    cfg = cfg_wt(wt, j0=j0, omega=omega)
    drv = CosineDrive(j0, omega)
    ref = quad(lambda s: math.hypot(wt, j0 * math.cos(omega * s)), 0, 2.0,
               points=list(drv.coupling_zero_times(0, 2.0)), limit=200,
               epsabs=1e-13)[0]
    assert abs(elliptic_phase(cfg, drv, 2.0) - ref) <= 1e-9


def test_elliptic_equivalence_with_positive_root_phase():
    for wt in (0.3, 1.2):
        for j0 in (0.5, 2.0):
            cfg = cfg_wt(wt, j0=j0, omega=1.3)
            drv = CosineDrive(j0, 1.3)
            for t in (0.9, 3.3, 6.1):
                z = phase_integral(cfg, drv, t, POSITIVE)
                assert abs(elliptic_phase(cfg, drv, t) - z.real) <= 1e-9


def test_elliptic_phase_domain():
    cfg = cfg_wt(0.5)
    with pytest.raises(DomainError):
        elliptic_phase(cfg, RwaPairDrive(1.0, 1.0), 1.0)
    with pytest.raises(DomainError):
        elliptic_phase(cfg, CosineDrive(1.0, 1.0), 1.0, branch=SMOOTH)


# ---------------------------------------------------------------- limit forms

def test_limit_resonant_zero_at_full_period():
    cfg = cfg_wt(0.0, j0=1.0, omega=1.0)
    got = limit_form(cfg, CosineDrive(1.0, 1.0), Regime.RESONANT, math.pi)
    assert got == pytest.approx(0.0, abs=1e-15)  # sin(pi) at machine precision


def test_limit_far_detuned_quarter_period():
    cfg = cfg_wt(50.0, j0=0.1, omega=1.0)
    got = limit_form(cfg, CosineDrive(0.1, 1.0), Regime.FAR_DETUNED, math.pi / 100)
    assert got == pytest.approx(1.0)


def test_limit_resonant_against_full_solution():
    cfg = cfg_wt(0.001, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    lf = limit_form(cfg, drv, Regime.RESONANT, 1.2)
    sol = dressed_solution(cfg, drv, 1.2, SMOOTH)
    assert abs(lf ** 2 - sol.p0_raw) <= 1e-4


def test_limit_regime_mismatch():
    cfg = cfg_wt(0.5, j0=1.0)
    with pytest.raises(RegimeMismatch):
        limit_form(cfg, CosineDrive(1.0, 1.0), Regime.RESONANT, 1.0)
    with pytest.raises(RegimeMismatch):
        limit_form(cfg, CosineDrive(1.0, 1.0), Regime.FAR_DETUNED, 1.0)


# -------------------------------------------------------------- periodicity

def test_abs_rabi_fft_peak_at_twice_drive():
    cfg = cfg_wt(0.5, j0=1.0, omega=1.0)
    drv = CosineDrive(1.0, 1.0)
    n = 2048
    span = 8 * math.pi  # exactly 8 periods of |omega_r|
    ts = np.linspace(0.0, span, n, endpoint=False)
    wr = np.abs(rabi_frequency(cfg, drv, ts, POSITIVE))
    assert dominant_frequency(ts, wr) == pytest.approx(2.0, abs=1e-9)

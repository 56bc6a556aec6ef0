"""Acceptance criteria, runnable as a suite (CLI ``accept``) or via pytest.

Each criterion is a function returning a CriterionResult; ``run_all``
executes them in order and reports one pass/fail line per criterion.  All
tolerances are pinned here, not configurable: they are the exit gate.

Criterion 11 is recorded, not thresholded: whether the integrating-factor
solution is exact off resonance is precisely what the comparison measures,
so the suite reports the gap instead of presuming it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .closedform import (dressed_series, elliptic_phase, phase_series,
                         resonant_amplitude)
from .config import AtomConfig, BranchMode, Tolerances
from .drives import ConstantDrive, CosineDrive, RwaPairDrive
from .elliptic import EllipticArg, ellip_e_incomplete
from .errors import DressedAtomError
from .frames import (connection_dtheta, detuning, identity_residuals,
                     mixing_angle_series, rabi_frequency)
from .oracle import (current_dynamics_check, enforced_step_bound,
                     initial_state_for_psi_frame, propagate)
from .scenario import dominant_frequency

_TOLS = Tolerances()
_SMOOTH = BranchMode.SMOOTH_CONTINUATION
_POSITIVE = BranchMode.POSITIVE_ROOT


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] C{self.cid:02d} {self.title}: {self.detail} ({self.elapsed:.2f}s)"


def _cfg(wt: float, j0: float, omega: float) -> AtomConfig:
    return AtomConfig.from_detuning(wt, j0, omega_drive=omega)


def _identity_setups():
    return [
        ("cosine-a", _cfg(0.7, 1.3, 2.1), CosineDrive(1.3, 2.1)),
        ("cosine-b", _cfg(0.3, 0.5, 1.0), CosineDrive(0.5, 1.0)),
        ("cosine-c", _cfg(1.5, 2.0, 0.8), CosineDrive(2.0, 0.8)),
        ("constant", _cfg(0.4, 1.0, 1.0), ConstantDrive(1.0, 0.6)),
        ("rwa", _cfg(0.6, 0.8, 1.3), RwaPairDrive(0.8, 1.3)),
    ]


def _sample_times(drive, n: int, t_end: float = 10.0) -> np.ndarray:
    """Uniform samples, dropping any whose FD stencil straddles a coupling
    zero (|J| has a kink there; the identities assume a differentiable
    envelope)."""
    ts = np.linspace(0.02, t_end, n)
    zeros = np.asarray(drive.coupling_zero_times(0.0, t_end + 1.0))
    if len(zeros):
        dist = np.min(np.abs(ts[:, None] - zeros[None, :]), axis=1)
        ts = ts[dist > 5.0 * _TOLS.fd_step]
    return ts


def criterion_1(fast: bool = False) -> CriterionResult:
    """Identity suite: r1, r2 below 1e-8 * max(1, omega_r^2) everywhere."""
    t0 = time.perf_counter()
    n = 200 if fast else 1000
    worst = 0.0
    for name, cfg, drive in _identity_setups():
        ts = _sample_times(drive, n)
        r1, r2, _ = identity_residuals(cfg, drive, ts, _SMOOTH, _TOLS)
        wr2 = rabi_frequency(cfg, drive, ts, _POSITIVE, _TOLS) ** 2
        bound = 1e-8 * np.maximum(1.0, wr2)
        worst = max(worst, float(np.max(np.abs(r1) / bound)),
                    float(np.max(np.abs(r2) / bound)))
    elapsed = time.perf_counter() - t0
    passed = worst <= 1.0 and elapsed < 1.0
    return CriterionResult(1, "identity suite r1,r2", passed,
                           f"max residual/bound = {worst:.3e}, runtime {elapsed:.2f}s",
                           elapsed)


def criterion_2(fast: bool = False) -> CriterionResult:
    """Consistency: both quotient forms of dtheta/dt and the closed formula
    agree pairwise to 1e-7 relative wherever |sin th cos th| > 1e-3."""
    t0 = time.perf_counter()
    n = 200 if fast else 1000
    h = _TOLS.fd_step
    worst = 0.0
    for name, cfg, drive in _identity_setups():
        ts = _sample_times(drive, n)

        def cth_of(s):
            c, _ = mixing_angle_series(cfg, drive, np.atleast_1d(s), _TOLS)
            return c

        def sth_of(s):
            _, si = mixing_angle_series(cfg, drive, np.atleast_1d(s), _TOLS)
            return si

        w = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)
        off = (-2.0, -1.0, 1.0, 2.0)
        dc = sum(wi * cth_of(ts + oi * h) for wi, oi in zip(w, off)) / h
        ds = sum(wi * sth_of(ts + oi * h) for wi, oi in zip(w, off)) / h
        cth, sth = mixing_angle_series(cfg, drive, ts, _TOLS)
        mask = np.abs(sth * cth) > 1e-3
        q1 = dc[mask] / (-sth[mask])
        q2 = ds[mask] / cth[mask]
        q3 = np.asarray(connection_dtheta(cfg, drive, ts, _SMOOTH, _TOLS))[mask]
        # a relative comparison needs a nonzero value: points where every
        # form sits below the finite-difference noise floor (the identically
        # vanishing connections, covered at 1e-12 absolute by criterion 3)
        # are agreement by definition
        for a, b in ((q1, q2), (q1, q3), (q2, q3)):
            big = np.maximum(np.abs(a), np.abs(b))
            valid = big >= 1e-8
            if valid.any():
                worst = max(worst, float(np.max(
                    np.abs(a[valid] - b[valid]) / big[valid])))
    elapsed = time.perf_counter() - t0
    return CriterionResult(2, "connection consistency condition", worst <= 1e-7,
                           f"max pairwise relative gap = {worst:.3e} (tol 1e-7; "
                           "sub-1e-8 magnitudes covered by criterion 3)",
                           elapsed)


def criterion_3(fast: bool = False) -> CriterionResult:
    """|dtheta/dt| <= 1e-12 for constant, rotating-pair, and resonant cosine."""
    t0 = time.perf_counter()
    ts = np.linspace(0.0, 20.0, 501 if fast else 2001)
    cases = [
        ("constant", _cfg(0.3, 1.0, 1.0), ConstantDrive(1.0, 0.7)),
        ("rwa", _cfg(0.6, 0.8, 1.3), RwaPairDrive(0.8, 1.3)),
        ("cosine-resonant", _cfg(0.0, 1.0, 1.0), CosineDrive(1.0, 1.0)),
    ]
    worst = 0.0
    for name, cfg, drive in cases:
        dth = np.abs(connection_dtheta(cfg, drive, ts, _SMOOTH, _TOLS))
        worst = max(worst, float(np.max(dth)))
    elapsed = time.perf_counter() - t0
    return CriterionResult(3, "connection vanishing set", worst <= 1e-12,
                           f"max |dtheta/dt| = {worst:.3e} (tol 1e-12)", elapsed)


_RWA_CONFIGS = ((0.0, 1.0), (0.6, 0.8), (3.0, 4.0))


def _rwa_run(wt: float, j0: float, dt_scale: float = 0.5, stride: int = 10):
    omega = 1.0
    cfg = _cfg(wt, j0, omega)
    drive = RwaPairDrive(j0, omega)
    wr = math.hypot(wt, j0)
    t_end = 20.0 * math.pi / wr
    dt = enforced_step_bound(cfg, drive) * dt_scale
    c0 = initial_state_for_psi_frame(cfg, drive, _SMOOTH, _TOLS)
    res = propagate(cfg, drive, c0, t_end, dt, _SMOOTH, output_stride=stride,
                    tol=_TOLS)
    return cfg, drive, wr, res


def criterion_4(fast: bool = False, drifts: list | None = None) -> CriterionResult:
    """Rotating-pair exactness: dressed |psi0| is |sin(omega_r t)| to 1e-6."""
    t0 = time.perf_counter()
    worst = 0.0
    configs = _RWA_CONFIGS[:1] if fast else _RWA_CONFIGS
    for wt, j0 in configs:
        cfg, drive, wr, res = _rwa_run(wt, j0)
        if drifts is not None:
            drifts.append(res.step_report.norm_drift)
        closed = dressed_series(cfg, drive, res.times, _SMOOTH,
                                _TOLS.quad_tol, _TOLS)
        gap = np.abs(np.abs(closed["psi0"]) -
                     math.sqrt(2.0) * np.abs(res.psi0_oracle))
        worst = max(worst, float(np.max(gap)))
    elapsed = time.perf_counter() - t0
    return CriterionResult(4, "rotating-pair (Jaynes-Cummings) exactness",
                           worst <= 1e-6,
                           f"MaxAbs closed-vs-oracle |psi0| = {worst:.3e} (tol 1e-6)",
                           elapsed)


def _resonant_cosine_run(fast: bool = False, stride: int = 10):
    cfg = _cfg(0.0, 1.0, 1.0)
    drive = CosineDrive(1.0, 1.0)
    t_end = (4.0 if fast else 10.0) * 2.0 * math.pi
    dt = enforced_step_bound(cfg, drive) * 0.5
    c0 = initial_state_for_psi_frame(cfg, drive, _SMOOTH, _TOLS)
    res = propagate(cfg, drive, c0, t_end, dt, _SMOOTH, output_stride=stride,
                    tol=_TOLS)
    return cfg, drive, res


def criterion_5(fast: bool = False, drifts: list | None = None) -> CriterionResult:
    """Resonance limit: phase (j0/W) sin(W t) and the forced population law."""
    t0 = time.perf_counter()
    cfg, drive, res = _resonant_cosine_run(fast)
    if drifts is not None:
        drifts.append(res.step_report.norm_drift)
    z = phase_series(cfg, drive, res.times, _SMOOTH, _TOLS.quad_tol, _TOLS)
    beta = (drive.j0 / drive.omega) * np.sin(drive.omega * res.times)
    phase_gap = float(np.max(np.abs(z.real - beta)))
    pop_gap = float(np.max(np.abs(2.0 * np.abs(res.psi0_oracle) ** 2
                                  - np.sin(beta) ** 2)))
    elapsed = time.perf_counter() - t0
    passed = phase_gap <= 1e-8 and pop_gap <= 1e-6
    return CriterionResult(5, "resonance limit", passed,
                           f"phase gap {phase_gap:.3e} (tol 1e-8), "
                           f"population gap {pop_gap:.3e} (tol 1e-6)", elapsed)


def criterion_6(fast: bool = False) -> CriterionResult:
    """Washout: far off resonance the phase is omega_tilde * t to 0.1%."""
    t0 = time.perf_counter()
    cfg = _cfg(50.0, 0.1, 1.0)
    drive = CosineDrive(0.1, 1.0)
    ts = np.linspace(0.05, 2.0 * math.pi, 101 if fast else 401)
    z = phase_series(cfg, drive, ts, _SMOOTH, _TOLS.quad_tol, _TOLS)
    wt = detuning(cfg)
    rel = np.abs(z.real - wt * ts) / (wt * ts)
    worst = float(np.max(rel))
    elapsed = time.perf_counter() - t0
    return CriterionResult(6, "washout limit", worst <= 1e-3,
                           f"max relative phase deviation = {worst:.3e} (tol 1e-3)",
                           elapsed)


def criterion_7(fast: bool = False) -> CriterionResult:
    """Elliptic representation equals quadrature of |omega_r| to 1e-9."""
    t0 = time.perf_counter()
    wts = (0.1, 0.5, 1.0, 2.0, 5.0)
    j0s = (0.1, 0.5, 1.0, 2.0, 4.0)
    tss = (0.3, 1.0, 2.0, 4.0, 7.0)
    if fast:
        wts, j0s, tss = wts[:2], j0s[:2], tss[:2]
    omega = 1.6   # away from 1, where the literal prefactor would coincide
    worst = 0.0
    literal_worst = 0.0
    for wt in wts:
        for j0 in j0s:
            cfg = _cfg(wt, j0, omega)
            drive = CosineDrive(j0, omega)
            amp = resonant_amplitude(cfg, drive)
            for t in tss:
                ref = quad(lambda s: math.hypot(wt, j0 * math.cos(omega * s)),
                           0.0, t, limit=400, epsabs=1e-13, epsrel=1e-13,
                           points=list(drive.coupling_zero_times(0.0, t)) or None)[0]
                worst = max(worst, abs(elliptic_phase(cfg, drive, t) - ref))
                if amp > 0:
                    lit = (j0 * omega / amp) * ellip_e_incomplete(
                        EllipticArg(omega * t, amp))
                    literal_worst = max(literal_worst,
                                        abs(lit - ref) / max(abs(ref), 1e-30))
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        7, "elliptic representation", worst <= 1e-9,
        f"max |elliptic - quadrature| = {worst:.3e} (tol 1e-9); "
        f"the uncorrected prefactor J0*W/A disagrees by up to "
        f"{literal_worst:.3e} relative", elapsed)


def criterion_8(fast: bool = False, drifts: list | None = None) -> CriterionResult:
    """Unitarity (drift <= 1e-8 on all acceptance runs) and RK4 order."""
    t0 = time.perf_counter()
    wt, j0 = _RWA_CONFIGS[0]
    errs = []
    for scale in (0.5, 0.25):
        cfg, drive, wr, res = _rwa_run(wt, j0, dt_scale=scale, stride=1)
        target = np.abs(np.sin(wr * res.times)) / math.sqrt(2.0)
        errs.append(float(np.max(np.abs(np.abs(res.psi0_oracle) - target))))
        if drifts is not None:
            drifts.append(res.step_report.norm_drift)
    order = math.log2(errs[0] / errs[1]) if errs[1] > 0 else float("inf")
    max_drift = max(drifts) if drifts else 0.0
    elapsed = time.perf_counter() - t0
    passed = (3.5 <= order <= 4.5) and max_drift <= 1e-8
    return CriterionResult(8, "unitarity and RK4 order", passed,
                           f"convergence order = {order:.2f} (window [3.5, 4.5]), "
                           f"max norm drift = {max_drift:.3e} (tol 1e-8)", elapsed)


def criterion_9(fast: bool = False, drifts: list | None = None) -> CriterionResult:
    """Current dynamics follow the harmonic of twice the accumulated phase."""
    t0 = time.perf_counter()
    cfg, drive, wr, res = _rwa_run(0.6, 0.8, stride=5)
    if drifts is not None:
        drifts.append(res.step_report.norm_drift)
    fit_rwa = current_dynamics_check(res, cfg, drive, _SMOOTH, _TOLS)

    cfg2, drive2, res2 = _resonant_cosine_run(fast, stride=5)
    if drifts is not None:
        drifts.append(res2.step_report.norm_drift)
    fit_cos = current_dynamics_check(res2, cfg2, drive2, _SMOOTH, _TOLS)
    elapsed = time.perf_counter() - t0
    passed = abs(fit_rwa.correlation) >= 0.999 and abs(fit_cos.correlation) >= 0.99
    return CriterionResult(
        9, "current dynamics", passed,
        f"|rho| pair = {abs(fit_rwa.correlation):.6f} (tol 0.999), "
        f"resonant cosine = {abs(fit_cos.correlation):.6f} (tol 0.99)", elapsed)


def _autocorr_biased(x: np.ndarray) -> np.ndarray:
    x = x - x.mean()
    var = float(np.dot(x, x))
    if var == 0.0:
        return np.zeros(len(x))
    full = np.correlate(x, x, mode="full")[len(x) - 1:]
    return full / var


def criterion_10(fast: bool = False) -> CriterionResult:
    """Modulation structure in the weak fast-drive regime.

    The |omega_r| spectrum must peak at 2*Omega, and the |psi0|^2 series
    over ten drive periods shows no autocorrelation peak (strict local
    maximum of the standard biased estimator) at or above 0.99.
    """
    t0 = time.perf_counter()
    omega = 1.0
    j0 = 1e-3
    cfg = _cfg(0.5 * j0, j0, omega)
    drive = CosineDrive(j0, omega)
    t_span = 10.0 * 2.0 * math.pi / omega

    n = 1024 if fast else 4096
    ts = np.linspace(0.0, t_span, n, endpoint=False)
    wr = np.abs(rabi_frequency(cfg, drive, ts, _POSITIVE, _TOLS))
    fpeak = dominant_frequency(ts, wr)
    # one bin is omega/10 wide; the cos^2 line sits exactly on bin 20
    fft_ok = abs(fpeak - 2.0 * omega) < 1e-6

    m = 512 if fast else 2048
    ts2 = np.linspace(0.0, t_span, m)
    closed = dressed_series(cfg, drive, ts2, _SMOOTH, _TOLS.quad_tol, _TOLS)
    rho = _autocorr_biased(closed["p0_raw"])
    interior = rho[1:-1]
    peaks = interior[(interior > rho[:-2]) & (interior > rho[2:])]
    peak_max = float(np.max(peaks)) if len(peaks) else 0.0
    acorr_ok = peak_max < 0.99
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        10, "modulation structure", fft_ok and acorr_ok,
        f"|omega_r| peak at {fpeak:.6f} (want {2 * omega}); "
        f"max autocorrelation peak = {peak_max:.4f} (must stay < 0.99)", elapsed)


def criterion_11(fast: bool = False, drifts: list | None = None) -> CriterionResult:
    """Off-resonant cosine: record the closed-form vs oracle gap.

    No pass threshold: the integrating-factor step of the closed form is
    unproven off resonance and this number is the measurement of it.
    """
    t0 = time.perf_counter()
    cfg = _cfg(0.5, 1.0, 1.0)
    drive = CosineDrive(1.0, 1.0)
    t_end = 10.0 if fast else 20.0
    dt = enforced_step_bound(cfg, drive) * 0.5
    c0 = initial_state_for_psi_frame(cfg, drive, _SMOOTH, _TOLS)
    res = propagate(cfg, drive, c0, t_end, dt, _SMOOTH, output_stride=10,
                    tol=_TOLS)
    if drifts is not None:
        drifts.append(res.step_report.norm_drift)
    closed = dressed_series(cfg, drive, res.times, _SMOOTH, _TOLS.quad_tol, _TOLS)
    p0_oracle = 2.0 * np.abs(res.psi0_oracle) ** 2
    gap_raw = float(np.max(np.abs(closed["p0_raw"] - p0_oracle)))
    denom = p0_oracle + 2.0 * np.abs(res.psi1_oracle) ** 2
    gap_norm = float(np.max(np.abs(closed["p0_norm"] - p0_oracle / denom)))
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        11, "off-resonance gap (recorded, no threshold)", True,
        f"MaxAbs raw p0 gap = {gap_raw:.6f}, normalized gap = {gap_norm:.6f}",
        elapsed)


def run_all(fast: bool = False) -> list[CriterionResult]:
    """Run every criterion; criterion 8 checks the drift of every other run,
    so it executes last even though it reports in numeric order."""
    drifts: list[float] = []
    results = [
        criterion_1(fast),
        criterion_2(fast),
        criterion_3(fast),
        criterion_4(fast, drifts),
        criterion_5(fast, drifts),
        criterion_6(fast),
        criterion_7(fast),
        criterion_9(fast, drifts),
        criterion_10(fast),
        criterion_11(fast, drifts),
    ]
    results.append(criterion_8(fast, drifts))
    return sorted(results, key=lambda r: r.cid)


def main(fast: bool = False) -> int:
    try:
        results = run_all(fast)
    except DressedAtomError as exc:
        print(f"acceptance suite aborted: {exc}")
        return 2
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 0 if not failed else 3

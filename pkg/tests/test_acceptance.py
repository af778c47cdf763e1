"""Acceptance suite: every criterion runs at its stated tolerance and prints
one pass/fail line.  Run with `pytest tests/test_acceptance.py -s` to see the
report lines inline.
"""

import json
import math
import time

import numpy as np
import pytest

from sphpend import kernel_backend
from sphpend.actions import (
    BranchCutMarker,
    action_a1,
    action_bundle,
    action_jacobian,
    boundary_closed_forms,
    integral_i,
    period,
    rotation_number,
)
from sphpend.cli import main as cli_main
from sphpend.cubic import Classification, EnergyMomentum, boundary_point, classify
from sphpend.dynamics import (
    angular_momentum,
    constraint_residuals,
    energy,
    integrate_full,
    measure_first_return,
    seed_on_torus,
    FullState,
)
from sphpend.errors import PinchCollision
from sphpend.monodromy import (
    default_loop,
    monodromy_analytic,
    monodromy_spectral,
    repeat_loop,
    reverse_loop,
)
from sphpend.operators import verify_relations
from sphpend.spectrum import build_spectrum, solve_energy
from sphpend.cubic import min_energy_for_momentum


def report(number: int, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {number:2d}: {status} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_01_pinch_action():
    t0 = time.perf_counter()
    value = action_a1(EnergyMomentum(1.0, 0.0))
    elapsed = time.perf_counter() - t0
    err = abs(value - 4.0 / math.pi)
    ok = err <= 1e-8 and elapsed < 1.0
    report(1, ok, f"A1(1,0) = 4/pi +/- {err:.2e} in {elapsed:.3f}s")


def test_criterion_02_boundary_closed_forms():
    # the (1+1e-4) scaling leaves the admissible region, so the limit is
    # taken from inside at the same relative offset
    worst = 0.0
    for s in (-1.0, -0.75, -0.5, -0.25):
        bp = boundary_point(s, 1)
        t_cf, th_cf, i_cf = boundary_closed_forms(s)
        if s == -1.0:
            em = EnergyMomentum(bp.h, bp.l)  # offset of l = 0 degenerates
            marker = rotation_number(em)
            assert isinstance(marker, BranchCutMarker)
            errs = (
                abs(period(em) - t_cf),
                abs(marker.limit_pos - th_cf),
                abs(integral_i(em) - i_cf),
                abs(action_a1(em)),
            )
        else:
            em = EnergyMomentum(bp.h, bp.l * (1.0 - 1e-4))
            b = action_bundle(em)
            errs = (
                abs(b.t_tilde - t_cf),
                abs(b.theta_tilde - th_cf),
                abs(b.i_value - i_cf),
                abs(b.a1),
            )
        worst = max(worst, *errs)
    ok = worst <= 1e-3
    report(2, ok, f"boundary limits match closed forms, worst {worst:.2e}")


def test_criterion_03_jump_limits():
    errs = [
        abs(rotation_number(EnergyMomentum(0.5, 1e-6)) - 0.5),
        abs(rotation_number(EnergyMomentum(0.5, -1e-6)) + 0.5),
        abs(rotation_number(EnergyMomentum(2.0, 1e-6)) - 1.0),
        abs(rotation_number(EnergyMomentum(2.0, -1e-6)) + 1.0),
    ]
    ok = max(errs) <= 1e-4
    report(3, ok, f"rotation-number jump limits, worst {max(errs):.2e}")


def test_criterion_04_derivative_identities():
    step = 1e-5
    hs = np.linspace(0.4, 2.8, 10)  # above h_boundary(1.0) ~ 0.17: all Regular
    ls = np.concatenate([np.linspace(-1.0, -0.1, 5), np.linspace(0.1, 1.0, 5)])
    worst = 0.0
    checked = 0
    for h in hs:
        for l in ls:
            em = EnergyMomentum(float(h), float(l))
            if classify(em) is not Classification.REGULAR:
                continue
            checked += 1
            jac = action_jacobian(em)
            fd_h = (
                action_a1(EnergyMomentum(h + step, l))
                - action_a1(EnergyMomentum(h - step, l))
            ) / (2 * step)
            fd_l = (
                action_a1(EnergyMomentum(h, l + step))
                - action_a1(EnergyMomentum(h, l - step))
            ) / (2 * step)
            worst = max(
                worst,
                abs(fd_h - jac.d_a1_dh) / abs(jac.d_a1_dh),
                abs(fd_l - jac.d_a1_dl) / abs(jac.d_a1_dl),
            )
    ok = worst <= 1e-4 and checked == 100
    report(4, ok, f"dA1 = (T~, -Theta~) on {checked} grid points, worst rel {worst:.2e}")


def test_criterion_05_dynamics_oracle_agreement():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    points = []
    while len(points) < 20:
        h = rng.uniform(-0.8, 3.0)
        l = rng.uniform(0.1, 1.5) * rng.choice([-1.0, 1.0])
        em = EnergyMomentum(float(h), float(l))
        if classify(em) is Classification.REGULAR:
            points.append(em)
    worst = 0.0
    for em in points:
        ret = measure_first_return(em)
        t_rel = abs(ret.t_period / (2 * math.pi) - period(em)) / period(em)
        th_rel = abs(
            (ret.theta_angle / (2 * math.pi) - rotation_number(em))
            / rotation_number(em)
        )
        worst = max(worst, t_rel, th_rel)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 60.0
    report(5, ok, f"flow vs quadrature at 20 points, worst rel {worst:.2e}, {elapsed:.1f}s")


def test_criterion_06_classical_monodromy(capsys):
    code = cli_main(["monodromy", "--method", "analytic"])
    out = capsys.readouterr().out
    cli_matrix = json.loads(out)["matrix"]
    loop = default_loop(0.1)
    rev = monodromy_analytic(reverse_loop(loop)).matrix
    dbl = monodromy_analytic(repeat_loop(loop, 2)).matrix
    ok = (
        code == 0
        and cli_matrix == [[1, 0], [1, 1]]
        and rev == ((1, 0), (-1, 1))
        and dbl == ((1, 0), (2, 1))
    )
    with capsys.disabled():
        report(6, ok, f"analytic monodromy {cli_matrix}, reversed {rev}, double {dbl}")


def test_criterion_07_quantum_monodromy():
    loop = default_loop(0.1)
    analytic = monodromy_analytic(loop).matrix
    spectrum = build_spectrum(0.1, 24, 9)
    spectral = monodromy_spectral(spectrum, loop).matrix  # gate must not fire
    ok = spectral == analytic
    report(7, ok, f"spectral monodromy {spectral} == analytic {analytic} at hbar=0.1")


def test_criterion_08_spectrum_validity():
    t0 = time.perf_counter()
    hbar = 0.1
    spectrum = build_spectrum(hbar, 15, 15)
    by_qn = {(p.qn.n, p.qn.m): p for p in spectrum}
    worst_resid = 0.0
    worst_mirror = 0.0
    monotone = True
    for (n, m), p in by_qn.items():
        if p.stratum is Classification.REGULAR:
            worst_resid = max(
                worst_resid,
                abs(action_a1(EnergyMomentum(p.h, p.l)) - n * hbar),
            )
        worst_mirror = max(worst_mirror, abs(p.h - by_qn[(n, -m)].h))
        if (n + 1, m) in by_qn and by_qn[(n + 1, m)].h <= p.h:
            monotone = False
        if m >= 0 and (n, m + 1) in by_qn and by_qn[(n, m + 1)].h <= p.h:
            monotone = False
    ground = by_qn[(0, 0)]
    elapsed = time.perf_counter() - t0
    ok = (
        worst_resid <= 1e-9
        and worst_mirror <= 1e-9
        and monotone
        and (ground.h, ground.l) == (-1.0, 0.0)
        and elapsed < 120.0
    )
    report(
        8,
        ok,
        f"spectrum n<=15 |m|<=15: residual {worst_resid:.1e}, mirror "
        f"{worst_mirror:.1e}, monotone {monotone}, {elapsed:.1f}s",
    )


def test_criterion_09_pinch_exclusion():
    hbar = 4.0 / (5.0 * math.pi)
    raised = False
    try:
        solve_energy(5, 0, hbar)
    except PinchCollision:
        raised = True
    points = build_spectrum(hbar, 10, 0)
    keys = {(p.qn.n, p.qn.m) for p in points}
    ok = raised and (5, 0) not in keys and (4, 0) in keys
    report(9, ok, f"(5, 0) excluded at hbar = 4/(5*pi), flagged: {raised}")


def test_criterion_10_operator_relations():
    t0 = time.perf_counter()
    violations = verify_relations(0.1, 20, 20)
    elapsed = time.perf_counter() - t0
    ok = violations == [] and elapsed < 5.0
    report(10, ok, f"{len(violations)} violations on n,|m| <= 20 in {elapsed:.2f}s")


def test_criterion_11_conservation_suite():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        q = rng.normal(size=3)
        q /= np.linalg.norm(q)
        p = rng.normal(size=3)
        p -= (q @ p) * q
        p *= rng.uniform(0.3, 1.5) / max(1.0, np.linalg.norm(p))
        state = FullState(q=tuple(q), p=tuple(p))
        h0 = 0.5 * (p @ p) + q[2]
        l0 = q[0] * p[1] - q[1] * p[0]
        traj = integrate_full(state, duration=10.0, step=1e-4)
        r_qq, r_qp = constraint_residuals(traj)
        worst = max(
            worst,
            np.abs(energy(traj) - h0).max(),
            np.abs(angular_momentum(traj) - l0).max(),
            np.abs(r_qq).max(),
            np.abs(r_qp).max(),
        )
    ok = worst <= 1e-8
    report(11, ok, f"drift of H, L, constraints over 10 seeds: {worst:.2e}")


def test_backend_note():
    print(f"[acceptance] kernels backend: {kernel_backend()}")

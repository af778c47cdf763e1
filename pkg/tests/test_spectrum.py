import json
import math

import pytest

from sphpend.actions import action_a1
from sphpend.cubic import Classification, EnergyMomentum, min_energy_for_momentum
from sphpend.errors import PinchCollision
from sphpend.spectrum import (
    build_spectrum,
    solve_energy,
    spectrum_symmetry_check,
    to_csv,
    to_json,
)


@pytest.fixture(scope="module")
def spectrum_10():
    return build_spectrum(0.1, 10, 10)


def test_ground_state():
    p = solve_energy(0, 0, 0.1)
    assert (p.h, p.l) == (-1.0, 0.0)
    assert p.stratum is Classification.MIN_POINT


def test_boundary_states():
    p = solve_energy(0, 3, 0.1)
    assert p.stratum is Classification.BOUNDARY_CURVE
    assert p.h == min_energy_for_momentum(3 * 0.1)[1]
    assert p.l == 3 * 0.1


def test_regular_state_residual_and_bracketing():
    p = solve_energy(5, 2, 0.1)
    assert abs(action_a1(EnergyMomentum(p.h, 0.2)) - 0.5) <= 1e-9
    # bracketing oracle: the action is monotone in h across the solution
    assert action_a1(EnergyMomentum(p.h - 1e-6, 0.2)) < 0.5
    assert action_a1(EnergyMomentum(p.h + 1e-6, 0.2)) > 0.5


def test_pinch_collision():
    hbar = 4.0 / (5.0 * math.pi)
    with pytest.raises(PinchCollision):
        solve_energy(5, 0, hbar)
    points = build_spectrum(hbar, 10, 0)
    keys = {(p.qn.n, p.qn.m) for p in points}
    assert (5, 0) not in keys
    assert (4, 0) in keys and (6, 0) in keys


def test_spectrum_window_and_ordering(spectrum_10):
    keys = [(p.qn.m, p.qn.n) for p in spectrum_10]
    assert keys == sorted(keys)
    assert len(spectrum_10) == 21 * 11


def test_residuals_on_window(spectrum_10):
    for p in spectrum_10:
        if p.stratum is Classification.REGULAR:
            assert abs(action_a1(EnergyMomentum(p.h, p.l)) - p.qn.n * 0.1) <= 1e-9
        elif p.stratum is Classification.BOUNDARY_CURVE:
            assert action_a1(EnergyMomentum(p.h, p.l)) <= 1e-8


def test_symmetry_check_clean(spectrum_10):
    assert spectrum_symmetry_check(spectrum_10) == []


def test_symmetry_check_detects_perturbation(spectrum_10):
    from dataclasses import replace

    broken = list(spectrum_10)
    victim = next(
        i for i, p in enumerate(broken) if p.qn.n == 3 and p.qn.m == 2
    )
    broken[victim] = replace(broken[victim], h=broken[victim].h + 1e-3)
    assert len(spectrum_symmetry_check(broken)) >= 1


def test_monotone_ladders(spectrum_10):
    by_qn = {(p.qn.n, p.qn.m): p.h for p in spectrum_10}
    ladder = [by_qn[(n, 0)] for n in range(11)]
    assert all(a < b for a, b in zip(ladder, ladder[1:]))
    row = [by_qn[(4, m)] for m in range(11)]
    assert all(a < b for a, b in zip(row, row[1:]))


def test_hbar_scaling_coherence():
    coarse = solve_energy(3, 2, 0.1)
    fine = solve_energy(6, 4, 0.05)
    assert fine.h == pytest.approx(coarse.h, abs=1e-9)
    assert fine.l == coarse.l


def test_json_schema_and_determinism():
    points = build_spectrum(0.1, 2, 2)
    text = to_json(points)
    assert text == to_json(build_spectrum(0.1, 2, 2))
    records = json.loads(text)
    assert set(records[0]) == {"n", "m", "h", "l", "a1", "stratum"}
    ground = [r for r in records if r["n"] == 0 and r["m"] == 0]
    assert ground[0]["h"] == -1.0


def test_csv_schema():
    points = build_spectrum(0.1, 1, 1)
    lines = to_csv(points).strip().split("\n")
    assert lines[0] == "n,m,h,l,a1,stratum"
    assert len(lines) == 1 + len(points)


def test_serialized_floats_round_trip():
    points = build_spectrum(0.1, 3, 3)
    by_qn = {(p.qn.n, p.qn.m): p for p in points}
    for record in json.loads(to_json(points)):
        assert record["h"] == by_qn[(record["n"], record["m"])].h
    for line in to_csv(points).strip().split("\n")[1:]:
        n, m, h = line.split(",")[:3]
        assert float(h) == by_qn[(int(n), int(m))].h

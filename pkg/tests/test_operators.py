import pytest

from sphpend.errors import MissingPoint
from sphpend.operators import (
    StateVector,
    commutator,
    q_action,
    q_diagonal,
    raise_,
    shift,
    verify_relations,
)
from sphpend.spectrum import build_spectrum

HBAR = 0.1


def coeffs(op, idx):
    return op.apply_basis(idx).coeffs


def test_q_action_values():
    assert coeffs(q_action(1, HBAR), (0, 5)) == {}
    assert coeffs(q_action(2, HBAR), (3, -2)) == {(3, -2): -2 * HBAR}
    assert coeffs(q_action(1, HBAR), (7, 0)) == {(7, 0): 7 * HBAR}


def test_shift_rules():
    a1, a2 = shift(1), shift(2)
    assert coeffs(a1, (0, 4)) == {}
    assert coeffs(a1, (3, 4)) == {(2, 4): 1.0}
    assert coeffs(a2, (0, 0)) == {(0, -1): 1.0}


def test_raise_rules():
    assert coeffs(raise_(1), (0, 0)) == {(1, 0): 1.0}
    assert coeffs(raise_(2), (2, -1)) == {(2, 0): 1.0}
    raised = raise_(1).apply_basis((4, 2))
    assert raised.inner(StateVector.basis(5, 2)) == 1.0


def test_commutator_action_shift():
    c = commutator(q_action(1, HBAR), shift(1))
    out = coeffs(c, (3, 2))
    assert set(out) == {(2, 2)}
    assert out[(2, 2)] == pytest.approx(-HBAR, abs=1e-15)
    assert coeffs(c, (0, 7)) == {}
    # off-diagonal pairs commute everywhere, including n = 0
    assert coeffs(commutator(q_action(2, HBAR), shift(1)), (0, 3)) == {}
    assert coeffs(commutator(shift(1), shift(2)), (0, 0)) == {}
    assert coeffs(commutator(shift(1), shift(2)), (4, -2)) == {}


def test_ladder_identities():
    a1, a1d = shift(1), raise_(1)
    for k in (1, 2, 5):
        op = a1
        for _ in range(k - 1):
            op = op @ a1
        up = a1d
        for _ in range(k - 1):
            up = up @ a1d
        state = (op @ up).apply_basis((3, -1))
        assert state.coeffs == {(3, -1): 1.0}
    # n+1 lowerings annihilate
    op = a1
    for _ in range(3):
        op = op @ a1
    assert op.apply_basis((3, 5)).coeffs == {}


@pytest.fixture(scope="module")
def spectrum():
    return build_spectrum(HBAR, 6, 6)


def test_q_diagonal_energy(spectrum):
    q_h = q_diagonal(lambda h, l: h, spectrum, HBAR)
    assert coeffs(q_h, (0, 0)) == {(0, 0): -1.0}
    with pytest.raises(MissingPoint):
        q_h.apply_basis((100, 0))


def test_q_diagonal_matches_q_action(spectrum):
    q_l = q_diagonal(lambda h, l: l, spectrum, HBAR)
    qa2 = q_action(2, HBAR)
    for idx in [(0, 0), (3, -2), (5, 6), (1, 4)]:
        assert coeffs(q_l, idx) == coeffs(qa2, idx)


def test_q_diagonal_identity(spectrum):
    one = q_diagonal(lambda h, l: 1.0, spectrum, HBAR)
    for idx in [(0, 0), (2, 3), (6, -6)]:
        assert coeffs(one, idx) == {idx: 1.0}


def test_q_diagonal_energy_monotone(spectrum):
    q_h = q_diagonal(lambda h, l: h, spectrum, HBAR)
    for m in (-3, 0, 2):
        vals = [coeffs(q_h, (n, m))[(n, m)] for n in range(7)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_verify_relations_clean():
    assert verify_relations(HBAR, 20, 20) == []


def test_verify_relations_detects_corruption(monkeypatch):
    import sphpend.operators as ops

    good = ops.shift

    def bad_shift(which):
        op = good(which)
        if which != 1:
            return op
        return ops.LatticeOperator(
            lambda idx: [((idx[0] - 1, idx[1]), 0.5)] if idx[0] >= 1 else [],
            name="a1-corrupt",
        )

    monkeypatch.setattr(ops, "shift", bad_shift)
    assert len(ops.verify_relations(HBAR, 4, 4)) > 0


def test_state_vector_norm_and_inner():
    s = StateVector({(0, 0): 3 / 5, (1, 0): 4j / 5})
    assert s.norm_sq() == pytest.approx(1.0)
    t = StateVector.basis(1, 0)
    assert s.inner(t) == pytest.approx(-4j / 5)

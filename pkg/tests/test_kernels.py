"""Backend parity: the compiled kernels and the pure-Python fallback must
agree on every exported routine."""

import numpy as np
import pytest

from sphpend import _kernels_py
from sphpend.actions import _nodes

try:
    from sphpend import _kernels_cy
except ImportError:
    _kernels_cy = None

needs_compiled = pytest.mark.skipif(
    _kernels_cy is None, reason="compiled kernels not built"
)


def gap_cases():
    rng = np.random.default_rng(99)
    cases = []
    for _ in range(40):
        u = float(10.0 ** rng.uniform(-14.0, -0.4))
        v = float(10.0 ** rng.uniform(-14.0, -0.4))
        w0 = float(rng.uniform(1e-3, 3.0))
        cases.append((u, v, w0))
    cases += [(0.0, 0.3, 0.8), (0.2, 0.0, 1.5), (0.0, 0.0, 0.0), (0.0, 0.0, 2.0)]
    return cases


@needs_compiled
@pytest.mark.parametrize("n", [16, 256, 1024])
def test_quad_sums_parity(n):
    s, c, w = _nodes(n)
    for u, v, w0 in gap_cases():
        want_theta = u > 0.0 and v > 0.0 and w0 + v > 0.0
        a = np.array(_kernels_py.quad_sums(u, v, w0, 0.3, s, c, w, want_theta))
        b = np.array(_kernels_cy.quad_sums(u, v, w0, 0.3, s, c, w, want_theta))
        scale = np.maximum(1.0, np.abs(a))
        assert (np.abs(a - b) / scale).max() <= 1e-12


@needs_compiled
def test_rk4_full_parity():
    y0 = np.array([0.6, 0.0, 0.8, 0.0, 1.2, 0.0])
    out_py = np.empty((2001, 6))
    out_cy = np.empty((2001, 6))
    r_py = _kernels_py.rk4_full(y0, 1e-3, 2000, out_py)
    r_cy = _kernels_cy.rk4_full(y0, 1e-3, 2000, out_cy)
    assert np.abs(out_py - out_cy).max() <= 1e-13
    assert abs(r_py - r_cy) <= 1e-15


@needs_compiled
def test_rk4_reduced_parity():
    y0 = np.array([-0.4, 0.0, 2.0])
    out_py = np.empty((2001, 3))
    out_cy = np.empty((2001, 3))
    r_py = _kernels_py.rk4_reduced(y0, 0.5, 1e-3, 2000, out_py)
    r_cy = _kernels_cy.rk4_reduced(y0, 0.5, 1e-3, 2000, out_cy)
    assert np.abs(out_py - out_cy).max() <= 1e-13
    assert abs(r_py - r_cy) <= 1e-15


@needs_compiled
def test_reduced_return_parity():
    y0 = np.array([-0.4, 0.0, 2.0])
    a = _kernels_py.reduced_return(y0, 0.5, 1e-3, 100.0)
    b = _kernels_cy.reduced_return(y0, 0.5, 1e-3, 100.0)
    assert a[2] == b[2] == 0
    assert a[0] == pytest.approx(b[0], abs=1e-12)
    assert a[1] == pytest.approx(b[1], abs=1e-12)


def test_reduced_return_reports_missing_event():
    # time budget below one period: no second upward crossing
    y0 = np.array([-0.4, 0.0, 2.0])
    t, phi, status = _kernels_py.reduced_return(y0, 0.5, 1e-3, 1.0)
    assert status == 1


def test_backend_selector_env(tmp_path, monkeypatch):
    import importlib
    import sphpend._kernels as sel

    monkeypatch.setenv("SPHPEND_KERNELS", "python")
    mod = importlib.reload(sel)
    assert mod.BACKEND == "python"
    monkeypatch.delenv("SPHPEND_KERNELS")
    importlib.reload(sel)

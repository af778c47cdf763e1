"""Complete integrals over one oscillation: normalized period, rotation
number, first action and the auxiliary integral, plus branch tracking of the
rotation number along paths.

All four integrals are taken between the turning points x- < x+ with the
substitution x = x- + (x+ - x-)*sin^2(theta), which absorbs both square-root
endpoint singularities.  The rotation-number and action integrands carry
simple poles at x = -1 and x = +1; each pole factor 1/(a + b*sin^2) is split
into an exact closed form plus a smooth remainder so that fixed-node
Gauss-Legendre converges at every admissible point, including the l -> 0
collision of a turning point with a pole.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .cubic import (
    Classification,
    EnergyMomentum,
    classify,
    min_energy_for_momentum,
    turning_points,
)
from .errors import BranchCut, NotInRange, QuadratureError, RefinementLimit

QUAD_TOL = 1e-11
_MIN_NODES = 16
_MAX_NODES = 4096
_SQ2 = math.sqrt(2.0)
_PINCH_GUARD = 1e-9


@dataclass(frozen=True)
class BranchCutMarker:
    """Stands in for the rotation number on the l = 0 jump locus.

    Carries the one-sided limits from l > 0 and l < 0.
    """

    limit_pos: float
    limit_neg: float


@dataclass(frozen=True)
class ActionBundle:
    t_tilde: float
    theta_tilde: object  # float, or BranchCutMarker on l = 0
    a1: float
    i_value: float


@dataclass(frozen=True)
class BranchedTheta:
    value: float
    sheet: int


@dataclass(frozen=True)
class ActionJacobian:
    d_a1_dh: float
    d_a1_dl: float
    d_a2_dh: float
    d_a2_dl: float

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.d_a1_dh, self.d_a2_dh], [self.d_a1_dl, self.d_a2_dl]]
        )


@lru_cache(maxsize=16)
def _nodes(n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    theta = 0.25 * math.pi * (t + 1.0)
    sin2 = np.sin(theta) ** 2
    return sin2, 1.0 - sin2, 0.25 * math.pi * w


def _closed_block(a: float, b: float, f00: float, f10: float, f20: float) -> float:
    """Exact value of the first three subtraction layers of
    integral f(sin^2)/(a + b sin^2) dtheta over [0, pi/2]."""
    if a <= 0.0:
        return 0.0
    sa = math.sqrt(a)
    root = math.sqrt(a + b)
    out = -f10 * math.pi * sa / (2.0 * b * root)
    out += f20 * math.pi * a * sa / (2.0 * b * b * root)
    if f00 != 0.0:
        out += f00 * math.pi / (2.0 * sa * root)
    return out


def _assemble(l, u, v, w0, sums, want_theta):
    s_t, s_i, a1p, a1p_rem, a1m, a1m_rem, thp, thp_rem, thm, thm_rem = sums
    b = 2.0 - u - v
    ap = u
    am = v
    d = w0 + v
    e = d + b
    g0 = math.sqrt(e)
    q0 = math.sqrt(d)
    eps_p = ap / b
    eps_m = am / b

    t_tilde = (_SQ2 / math.pi) * s_t
    i_value = (2.0 * _SQ2 / math.pi) * s_i

    split = _kernels.SPLIT_EPS
    if eps_p < split:
        kp = (
            _closed_block(ap, b, 0.0, _SQ2 * g0, -_SQ2 * (b + 2.0 * e) / (2.0 * g0))
            + a1p / b
            - eps_p**3 * a1p_rem
        )
    else:
        kp = a1p
    if eps_m < split:
        if eps_m > 0.0:
            km = (
                _closed_block(am, b, 0.0, _SQ2 * q0, _SQ2 * (b - 2.0 * d) / (2.0 * q0))
                + a1m / b
                - eps_m**3 * a1m_rem
            )
        else:
            km = a1m / b
    else:
        km = a1m
    a1 = (b * b / math.pi) * (kp + km)

    theta = None
    if want_theta:
        if eps_p < split:
            ktp = (
                _closed_block(ap, b, 1.0 / g0, b / (2.0 * g0**3), 3.0 * b * b / (8.0 * g0**5))
                + thp / b
                - eps_p**3 * thp_rem
            )
        else:
            ktp = thp
        if eps_m < split:
            ktm = (
                _closed_block(am, b, 1.0 / q0, -b / (2.0 * q0**3), 3.0 * b * b / (8.0 * q0**5))
                + thm / b
                - eps_m**3 * thm_rem
            )
        else:
            ktm = thm
        theta = (l * _SQ2 / (2.0 * math.pi)) * (ktp + ktm)
    return t_tilde, theta, a1, i_value


def _root_gaps(h: float, l: float) -> tuple[float, float, float]:
    """Gaps u = 1 + x-, v = 1 - x+, w0 = x0 - 1 to full relative precision.

    The raw roots carry only absolute accuracy, which destroys u (and v for
    h > 1) as l -> 0.  The exact identities P(-1) = -l^2, P(1) = -l^2 and
    sum-of-roots = h recover the tiny gaps from O(1) quantities.
    """
    tp = turning_points(EnergyMomentum(h, l))
    u = 1.0 + tp.x_minus
    v = 1.0 - tp.x_plus
    w0 = tp.x_zero - 1.0
    ll = l * l
    if ll == 0.0:
        return u, v, w0
    u = ll / (2.0 * (2.0 - v) * (2.0 + w0))
    if h > 1.0:
        w0 = (h - 1.0) + v - u
        v = ll / (2.0 * (2.0 - u) * w0)
        w0 = (h - 1.0) + v - u
        u = ll / (2.0 * (2.0 - v) * (2.0 + w0))
    return u, v, w0


@lru_cache(maxsize=65536)
def _quad_bundle(h: float, l: float, mode: str, tol: float):
    """Node-doubled evaluation of (T~, Theta~, A1, I) at a Regular point.

    ``mode`` picks which components must settle: "a1" (action only, the one
    integral finite at the pinch point), "ti" (all but the rotation number,
    for l = 0), or "all".
    """
    want_theta = mode == "all"
    idx = {"a1": (2,), "ti": (0, 2, 3), "all": (0, 1, 2, 3)}[mode]
    u, v, w0 = _root_gaps(h, l)
    prev = None
    n = _MIN_NODES
    while n <= _MAX_NODES:
        s, c, w = _nodes(n)
        sums = _kernels.quad_sums(u, v, w0, l, s, c, w, want_theta)
        vals = _assemble(l, u, v, w0, sums, want_theta)
        if prev is not None:
            scale = max(1.0, *(abs(vals[i]) for i in idx))
            if all(abs(vals[i] - prev[i]) <= tol * scale for i in idx):
                return vals
        prev = vals
        n *= 2
    raise QuadratureError(
        f"integrals did not settle to {tol} by {_MAX_NODES} nodes at ({h}, {l})"
    )


def boundary_closed_forms(s: float) -> tuple[float, float, float]:
    """(T~, |Theta~|, I) on the boundary curve at parameter s."""
    root = math.sqrt(3.0 * s * s + 1.0)
    return math.sqrt(-s) / root, 1.0 / root, -2.0 * (-s) ** 1.5 / root


def _boundary_parameter(em: EnergyMomentum) -> float:
    s, _ = min_energy_for_momentum(em.l)
    return s


def _require_on_range(em: EnergyMomentum) -> Classification:
    kind = classify(em)
    if kind is Classification.OUTSIDE:
        raise NotInRange(f"({em.h}, {em.l}) outside the energy-momentum range")
    return kind


def period(em: EnergyMomentum, tol: float = QUAD_TOL) -> float:
    """Normalized period T~; diverges at the pinch point, guarded."""
    if em.l == 0.0 and abs(em.h - 1.0) <= _PINCH_GUARD:
        raise QuadratureError("period diverges at the pinch point (1, 0)")
    kind = _require_on_range(em)
    if kind in (Classification.BOUNDARY_CURVE, Classification.MIN_POINT):
        return boundary_closed_forms(_boundary_parameter(em))[0]
    return _quad_bundle(em.h, em.l, "ti", tol)[0]


def rotation_number(em: EnergyMomentum, tol: float = QUAD_TOL):
    """Principal rotation number, or a BranchCutMarker on l = 0."""
    kind = _require_on_range(em)
    if kind is Classification.PINCH_POINT:
        raise NotInRange("rotation number undefined at the pinch point")
    if kind is Classification.MIN_POINT:
        return BranchCutMarker(0.5, -0.5)
    if kind is Classification.BOUNDARY_CURVE:
        mag = boundary_closed_forms(_boundary_parameter(em))[1]
        return math.copysign(mag, em.l)
    if em.l == 0.0:
        lim = 0.5 if em.h < 1.0 else 1.0
        return BranchCutMarker(lim, -lim)
    return _quad_bundle(em.h, em.l, "all", tol)[1]


def integral_i(em: EnergyMomentum, tol: float = QUAD_TOL) -> float:
    kind = _require_on_range(em)
    if kind in (Classification.BOUNDARY_CURVE, Classification.MIN_POINT):
        return boundary_closed_forms(_boundary_parameter(em))[2]
    if kind is Classification.PINCH_POINT:
        raise QuadratureError("I diverges with the period at the pinch point")
    return _quad_bundle(em.h, em.l, "ti", tol)[3]


def action_a1(em: EnergyMomentum, tol: float = QUAD_TOL) -> float:
    """First action; vanishes on the boundary, 4/pi at the pinch point."""
    kind = _require_on_range(em)
    if kind in (Classification.BOUNDARY_CURVE, Classification.MIN_POINT):
        return 0.0
    return _quad_bundle(em.h, em.l, "a1", tol)[2]


def action_bundle(em: EnergyMomentum, tol: float = QUAD_TOL) -> ActionBundle:
    """One consistent evaluation of all four integrals."""
    kind = _require_on_range(em)
    if kind is Classification.PINCH_POINT:
        raise QuadratureError("period diverges at the pinch point (1, 0)")
    if kind in (Classification.BOUNDARY_CURVE, Classification.MIN_POINT):
        s = _boundary_parameter(em)
        t, mag, i_val = boundary_closed_forms(s)
        if em.l == 0.0:
            theta = BranchCutMarker(mag, -mag)
        else:
            theta = math.copysign(mag, em.l)
        return ActionBundle(t, theta, 0.0, i_val)
    if em.l == 0.0:
        if abs(em.h - 1.0) <= _PINCH_GUARD:
            raise QuadratureError("period diverges at the pinch point (1, 0)")
        t, _, a1, i_val = _quad_bundle(em.h, em.l, "ti", tol)
        lim = 0.5 if em.h < 1.0 else 1.0
        return ActionBundle(t, BranchCutMarker(lim, -lim), a1, i_val)
    t, theta, a1, i_val = _quad_bundle(em.h, em.l, "all", tol)
    return ActionBundle(t, theta, a1, i_val)


def action_jacobian(em: EnergyMomentum, tol: float = QUAD_TOL) -> ActionJacobian:
    """Derivative of the action map: [[T~, 0], [-Theta~, 1]]."""
    if em.l == 0.0:
        raise BranchCut("dA1/dl undefined on l = 0")
    if _require_on_range(em) is not Classification.REGULAR:
        raise NotInRange("action jacobian needs a Regular point")
    t, theta, _, _ = _quad_bundle(em.h, em.l, "all", tol)
    return ActionJacobian(d_a1_dh=t, d_a1_dl=-theta, d_a2_dh=0.0, d_a2_dl=1.0)


def _principal_theta(h: float, l: float, tol: float) -> float:
    if l == 0.0:
        raise BranchCut("sample fell exactly on the l = 0 cut")
    em = EnergyMomentum(h, l)
    if classify(em) is not Classification.REGULAR:
        raise NotInRange(f"continuation path leaves the regular region at ({h}, {l})")
    return _quad_bundle(h, l, "all", tol)[1]


_MAX_REFINE = 20


def continue_theta(
    path: list[EnergyMomentum], tol: float = QUAD_TOL
) -> list[BranchedTheta]:
    """Continuous branch of the rotation number along a polygonal path.

    At each step the representative (principal value + integer) nearest the
    previous value is taken; segments are bisected until every jump is below
    1/4.  Samples landing exactly on l = 0 are nudged along the segment.
    """
    if not path:
        return []

    def sample(p, q, t):
        # nudge samples off the l = 0 cut, staying on the segment
        for dt in (0.0, -0.0078125, 0.0078125, -0.03125, 0.03125):
            t2 = t + dt
            if not 0.0 <= t2 <= 1.0:
                continue
            h = p.h + (q.h - p.h) * t2
            l = p.l + (q.l - p.l) * t2
            if abs(l) >= 1e-12:
                return h, l
        raise BranchCut(
            f"continuation segment ({p.h},{p.l})-({q.h},{q.l}) runs along l = 0"
        )

    def nearest(principal: float, prev: float) -> float:
        return principal + round(prev - principal)

    first = _principal_theta(path[0].h, path[0].l, tol)
    out = [BranchedTheta(first, 0)]
    current = first
    for p, q in zip(path, path[1:]):
        # refine each segment by bisection until every jump is below 1/4
        stack = [(0.0, 1.0, 0)]
        last = None
        while stack:
            t0, t1, depth = stack.pop()
            h, l = sample(p, q, t1)
            cand = nearest(_principal_theta(h, l, tol), current)
            if abs(cand - current) <= 0.25:
                current = cand
                if t1 == 1.0:
                    last = (h, l)
                continue
            if depth >= _MAX_REFINE:
                raise RefinementLimit(
                    f"step jump {abs(cand - current):.3f} not bounded by 1/4 "
                    f"after {_MAX_REFINE} bisections near ({h}, {l})"
                )
            tm = 0.5 * (t0 + t1)
            stack.append((tm, t1, depth + 1))
            stack.append((t0, tm, depth + 1))
        principal_q = _principal_theta(*last, tol)
        out.append(BranchedTheta(current, round(current - principal_q)))
    return out

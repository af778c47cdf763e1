"""Turning-point cubic, discriminant locus and stratification of the
energy-momentum plane.

The oscillation in the vertical coordinate x is bounded by roots of

    P(x) = 2*(h - x)*(1 - x^2) - l^2,

and the admissible (h, l) region is bounded by the curve where P acquires a
double root, parametrized by s in [-1, 0).
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import ConvergenceError, DomainError, NotInRange

BOUNDARY_TOL = 1e-12  # band around the boundary curve counted as on-curve


class Classification(Enum):
    REGULAR = "Regular"
    BOUNDARY_CURVE = "BoundaryCurve"
    MIN_POINT = "MinPoint"
    PINCH_POINT = "PinchPoint"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class EnergyMomentum:
    h: float
    l: float


@dataclass(frozen=True)
class TurningPoints:
    x_minus: float
    x_plus: float
    x_zero: float


@dataclass(frozen=True)
class BoundaryPoint:
    s: float
    sign: int
    h: float
    l: float


def eval_cubic(em: EnergyMomentum, x: float) -> float:
    return 2.0 * (em.h - x) * (1.0 - x * x) - em.l * em.l


def _cubic_derivative(em: EnergyMomentum, x: float) -> float:
    return -2.0 * (1.0 - x * x) - 4.0 * x * (em.h - x)


def boundary_point(s: float, sign: int = 1) -> BoundaryPoint:
    if not (-1.0 <= s < 0.0):
        raise DomainError(f"boundary parameter s={s} outside [-1, 0)")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    h = 1.5 * s - 0.5 / s
    l = sign * (1.0 - s * s) / math.sqrt(-s)
    return BoundaryPoint(s=s, sign=sign, h=h, l=l)


def _locus_l(s: float) -> float:
    """|l| along the boundary curve; strictly increasing on [-1, 0)."""
    return (1.0 - s * s) / math.sqrt(-s)


def min_energy_for_momentum(l: float) -> tuple[float, float]:
    """Parameter s and minimal energy h on the level set L = l."""
    if l == 0.0:
        return -1.0, -1.0
    target = abs(l)
    lo, hi = -1.0 + 1e-15, -1e-12
    flo = _locus_l(lo) - target
    fhi = _locus_l(hi) - target
    if flo > 0.0 or fhi < 0.0:
        raise ConvergenceError(f"no bracket for boundary solve at |l|={target}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _locus_l(mid) - target <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12:
            break
    else:
        raise ConvergenceError("boundary bisection did not reach 1e-12 in s")
    s = 0.5 * (lo + hi)
    # Newton polish; d|l|/ds = (-2s + (1-s^2)/(-2s)) / sqrt(-s), positive
    for _ in range(2):
        deriv = (-2.0 * s + (1.0 - s * s) / (-2.0 * s)) / math.sqrt(-s)
        step = (_locus_l(s) - target) / deriv
        if -1.0 <= s - step < 0.0:
            s -= step
    return s, 1.5 * s - 0.5 / s


@lru_cache(maxsize=65536)
def _classify(h: float, l: float) -> Classification:
    if l == 0.0:
        if h == -1.0 or abs(h + 1.0) <= BOUNDARY_TOL:
            return Classification.MIN_POINT
        if abs(h - 1.0) <= BOUNDARY_TOL:
            return Classification.PINCH_POINT
        if h > -1.0:
            return Classification.REGULAR
        return Classification.OUTSIDE
    _, h_min = min_energy_for_momentum(l)
    if abs(h - h_min) <= BOUNDARY_TOL:
        return Classification.BOUNDARY_CURVE
    if h > h_min:
        return Classification.REGULAR
    return Classification.OUTSIDE


def classify(em: EnergyMomentum) -> Classification:
    return _classify(em.h, em.l)


def turning_points(em: EnergyMomentum) -> TurningPoints:
    """The three real roots of the cubic, sorted ascending."""
    kind = classify(em)
    if kind is Classification.OUTSIDE:
        raise NotInRange(f"({em.h}, {em.l}) outside the energy-momentum range")
    h, l = em.h, em.l
    if l == 0.0:
        return TurningPoints(*sorted((-1.0, h, 1.0)))
    # trigonometric solve of 2x^3 - 2hx^2 - 2x + (2h - l^2)
    p = -1.0 - h * h / 3.0
    q = -2.0 * h**3 / 27.0 + 2.0 * h / 3.0 - 0.5 * l * l
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    phi = math.acos(arg)
    shift = h / 3.0
    roots = sorted(
        m * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift for k in range(3)
    )
    # Newton polish, skipped near the boundary double root
    polished = []
    scale = max(1.0, abs(h)) ** 2
    for r in roots:
        for _ in range(3):
            d = _cubic_derivative(em, r)
            if abs(d) < 1e-6 * scale:
                break
            step = eval_cubic(em, r) / d
            r -= step
            if abs(step) < 1e-15 * max(1.0, abs(r)):
                break
        polished.append(r)
    polished.sort()
    return TurningPoints(*polished)


def sample_locus(count: int) -> list[BoundaryPoint]:
    """Boundary points for both signs, geometrically spaced in -s.

    Geometric spacing resolves the |l| blow-up as s -> 0; s = -1 is always
    included.
    """
    if count < 2:
        raise DomainError("count must be >= 2")
    s_small = 1e-4
    pts = []
    for k in range(count):
        s = -math.exp(math.log(s_small) * k / (count - 1))
        for sign in (1, -1):
            pts.append(boundary_point(s, sign))
    return pts

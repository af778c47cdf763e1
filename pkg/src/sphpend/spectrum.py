"""Joint energy-momentum spectrum from the quantization conditions
A1 = n*hbar, L = m*hbar, and the inverse energy function h_m(n).

Monotonicity of h -> A1(h, l) makes each energy a clean bracketing solve.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

from .actions import action_a1
from .cubic import Classification, EnergyMomentum, min_energy_for_momentum
from .errors import ConvergenceError, PinchCollision

PINCH_ACTION = 4.0 / math.pi
PINCH_TOL = 1e-12
H_TOL = 1e-12


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    m: int


@dataclass(frozen=True)
class SpectrumPoint:
    qn: QuantumNumbers
    h: float
    l: float
    hbar: float
    stratum: Classification

    @property
    def a1(self) -> float:
        return self.qn.n * self.hbar


def solve_energy(
    n: int, m: int, hbar: float, tol_root: float = H_TOL, tol_quad: float | None = None
) -> SpectrumPoint:
    """The unique h >= h_min(m*hbar) with A1(h, m*hbar) = n*hbar."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")
    l = m * hbar
    qn = QuantumNumbers(n, m)
    if n == 0:
        if m == 0:
            return SpectrumPoint(qn, -1.0, 0.0, hbar, Classification.MIN_POINT)
        _, h_min = min_energy_for_momentum(l)
        return SpectrumPoint(qn, h_min, l, hbar, Classification.BOUNDARY_CURVE)
    target = n * hbar
    if m == 0 and abs(target - PINCH_ACTION) <= PINCH_TOL:
        raise PinchCollision(
            f"n*hbar = {target} collides with the critical action 4/pi at m=0"
        )
    quad_kw = {} if tol_quad is None else {"tol": tol_quad}

    def a1(h):
        return action_a1(EnergyMomentum(h, l), **quad_kw)

    _, h_min = min_energy_for_momentum(l)
    lo = h_min + 1e-8
    if a1(lo) >= target:
        lo = h_min  # target below the first offset; A1 continuous with A1=0 here
    hi_off = 0.5
    for _ in range(80):
        hi = h_min + hi_off
        if a1(hi) > target:
            break
        hi_off *= 2.0
    else:
        raise ConvergenceError("upper bracket expansion failed")
    lo_val = lo
    hi_val = hi
    for _ in range(200):
        mid = 0.5 * (lo_val + hi_val)
        if a1(mid) < target:
            lo_val = mid
        else:
            hi_val = mid
        if hi_val - lo_val <= tol_root:
            break
    else:
        raise ConvergenceError(f"energy bisection stalled for (n={n}, m={m})")
    h = 0.5 * (lo_val + hi_val)
    return SpectrumPoint(qn, h, l, hbar, Classification.REGULAR)


def build_spectrum(
    hbar: float,
    n_max: int,
    m_max: int,
    tol_root: float = H_TOL,
    tol_quad: float | None = None,
) -> list[SpectrumPoint]:
    """All points with 0 <= n <= n_max, |m| <= m_max, pinch collisions
    skipped; sorted lexicographically by (m, n)."""
    if n_max < 0 or m_max < 0:
        raise ValueError("n_max and m_max must be >= 0")
    points = []
    for m in range(-m_max, m_max + 1):
        for n in range(n_max + 1):
            try:
                points.append(solve_energy(n, m, hbar, tol_root, tol_quad))
            except PinchCollision:
                continue
    return points


def spectrum_symmetry_check(spectrum: list[SpectrumPoint]) -> list[str]:
    """Mirror symmetry in m and strict monotonicity in n and |m|.

    Returns a list of violation messages; empty on success.
    """
    tol = 1e-9
    by_qn = {(p.qn.n, p.qn.m): p for p in spectrum}
    violations = []
    for (n, m), p in by_qn.items():
        mirror = by_qn.get((n, -m))
        if mirror is not None and abs(p.h - mirror.h) > tol:
            violations.append(
                f"mirror asymmetry at (n={n}, m={m}): {p.h!r} vs {mirror.h!r}"
            )
        up_n = by_qn.get((n + 1, m))
        if up_n is not None and up_n.h <= p.h:
            violations.append(f"h not increasing in n at (n={n}, m={m})")
        if m >= 0:
            up_m = by_qn.get((n, m + 1))
            if up_m is not None and up_m.h <= p.h:
                violations.append(f"h not increasing in |m| at (n={n}, m={m})")
        if m <= 0:
            dn_m = by_qn.get((n, m - 1))
            if dn_m is not None and dn_m.h <= p.h:
                violations.append(f"h not increasing in |m| at (n={n}, m={m})")
    return violations


def _fmt(x: float) -> str:
    return format(x, ".17g")


def json_dumps_17(obj) -> str:
    """json.dumps with every float at 17 significant digits.

    The stdlib encoder pins floats to repr(); rebuilding iterencode with a
    custom floatstr is the supported way around that.
    """

    class Encoder(json.JSONEncoder):
        def iterencode(self, o, _one_shot=False):
            markers = {} if self.check_circular else None

            def floatstr(x):
                if x != x or x in (float("inf"), float("-inf")):
                    raise ValueError(f"non-finite float {x} in output")
                return _fmt(x)

            make = json.encoder._make_iterencode(
                markers,
                self.default,
                json.encoder.encode_basestring_ascii,
                self.indent,
                floatstr,
                self.key_separator,
                self.item_separator,
                self.sort_keys,
                self.skipkeys,
                _one_shot,
            )
            return make(o, 0)

    return json.dumps(obj, indent=1, cls=Encoder)


def to_json(spectrum: list[SpectrumPoint]) -> str:
    records = [
        {
            "n": p.qn.n,
            "m": p.qn.m,
            "h": p.h,
            "l": p.l,
            "a1": p.a1,
            "stratum": p.stratum.value,
        }
        for p in spectrum
    ]
    return json_dumps_17(records)


def to_csv(spectrum: list[SpectrumPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "m", "h", "l", "a1", "stratum"])
    for p in spectrum:
        writer.writerow(
            [p.qn.n, p.qn.m, _fmt(p.h), _fmt(p.l), _fmt(p.a1), p.stratum.value]
        )
    return buf.getvalue()

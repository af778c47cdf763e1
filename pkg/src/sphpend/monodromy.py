"""Period-lattice bases, their transport around loops encircling the isolated
critical value (1, 0), and the monodromy matrix: analytically from branch
continuation of the rotation number, and spectrally from quadrilateral cells
of the joint spectrum.
"""

import math
from dataclasses import dataclass

import numpy as np

from .actions import action_bundle, continue_theta
from .cubic import Classification, EnergyMomentum, classify
from .errors import BranchCut, LatticeAmbiguous, LoopInvalid, MissingPoint
from .spectrum import SpectrumPoint

PINCH = (1.0, 0.0)
ROUND_GATE = 0.2  # max distance from integers in the change-of-basis solve
_WINDING_RESIDUAL = 1e-6


@dataclass(frozen=True)
class PeriodBasis:
    v1: tuple[float, float]  # (T, -Theta): first-return flow times
    v2: tuple[float, float]  # (0, 2*pi): the periodic symmetry flow


@dataclass(frozen=True)
class LoopSpec:
    vertices: list[EnergyMomentum]  # closed: last == first
    samples: list[EnergyMomentum]   # subdivided, closed
    winding: int
    orientation: int


@dataclass(frozen=True)
class MonodromyResult:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    method: str
    loop: LoopSpec


def period_basis(em: EnergyMomentum) -> PeriodBasis:
    if em.l == 0.0:
        raise BranchCut("period basis undefined on l = 0")
    b = action_bundle(em)
    two_pi = 2.0 * math.pi
    return PeriodBasis(
        v1=(two_pi * b.t_tilde, -two_pi * b.theta_tilde), v2=(0.0, two_pi)
    )


def winding_number(samples: list[EnergyMomentum], about=PINCH) -> int:
    """Accumulated signed angle about a point, divided by 2*pi."""
    total = 0.0
    cx, cy = about
    prev = math.atan2(samples[0].l - cy, samples[0].h - cx)
    for p in samples[1:]:
        ang = math.atan2(p.l - cy, p.h - cx)
        delta = ang - prev
        while delta > math.pi:
            delta -= 2.0 * math.pi
        while delta < -math.pi:
            delta += 2.0 * math.pi
        total += delta
        prev = ang
    w = total / (2.0 * math.pi)
    if abs(w - round(w)) > _WINDING_RESIDUAL:
        raise LoopInvalid(f"winding residual {abs(w - round(w)):.2e} for open loop")
    return round(w)


def make_loop(
    vertices: list[tuple[float, float]], max_spacing: float = 0.02
) -> LoopSpec:
    """Validate a closed polygonal loop and subdivide its edges.

    Every vertex and sample must classify Regular.
    """
    if len(vertices) < 3:
        raise LoopInvalid("need at least 3 vertices")
    pts = [tuple(map(float, v)) for v in vertices]
    if pts[0] != pts[-1]:
        pts.append(pts[0])
    samples: list[EnergyMomentum] = []
    for (h0, l0), (h1, l1) in zip(pts, pts[1:]):
        seg = math.hypot(h1 - h0, l1 - l0)
        nsub = max(1, int(math.ceil(seg / max_spacing)))
        for k in range(nsub):
            t = k / nsub
            samples.append(EnergyMomentum(h0 + (h1 - h0) * t, l0 + (l1 - l0) * t))
    samples.append(EnergyMomentum(*pts[0]))
    for p in samples:
        if classify(p) is not Classification.REGULAR:
            raise LoopInvalid(
                f"loop sample ({p.h}, {p.l}) is {classify(p).value}, not Regular"
            )
    w = winding_number(samples)
    orientation = 1 if w >= 0 else -1
    return LoopSpec(
        vertices=[EnergyMomentum(*p) for p in pts],
        samples=samples,
        winding=w,
        orientation=orientation,
    )


def default_loop(hbar: float = 0.1) -> LoopSpec:
    """Positively oriented rectangle crossing l = 0 on both sides of h = 1."""
    loop = make_loop([(0.0, -0.5), (2.0, -0.5), (2.0, 0.5), (0.0, 0.5)])
    if loop.winding != 1:
        raise LoopInvalid(f"default loop winding {loop.winding} != +1")
    return loop


def reverse_loop(loop: LoopSpec) -> LoopSpec:
    return LoopSpec(
        vertices=loop.vertices[::-1],
        samples=loop.samples[::-1],
        winding=-loop.winding,
        orientation=-loop.orientation,
    )


def repeat_loop(loop: LoopSpec, times: int) -> LoopSpec:
    samples = list(loop.samples)
    for _ in range(times - 1):
        samples.extend(loop.samples[1:])
    return LoopSpec(
        vertices=loop.vertices,
        samples=samples,
        winding=loop.winding * times,
        orientation=loop.orientation,
    )


def monodromy_analytic(loop: LoopSpec) -> MonodromyResult:
    """Monodromy from the variation of the continued rotation number.

    The period basis (T, -Theta), (0, 2*pi) returns with v1 shifted by
    (winding) copies of v2, so the matrix is [[1, 0], [-dTheta, 1]].
    """
    branch = continue_theta(loop.samples)
    variation = branch[-1].value - branch[0].value
    shift = round(-variation)
    if abs(-variation - shift) > 1e-6:
        raise LatticeAmbiguous(f"non-integer branch variation {variation}")
    return MonodromyResult(
        matrix=((1, 0), (shift, 1)), method="analytic", loop=loop
    )


def lattice_cell(
    spectrum: list[SpectrumPoint], n: int, m: int
) -> tuple[SpectrumPoint, SpectrumPoint, SpectrumPoint, SpectrumPoint]:
    """Quadrilateral (n,m), (n+1,m), (n+1,m+1), (n,m+1)."""
    by_qn = {(p.qn.n, p.qn.m): p for p in spectrum}
    cell = []
    for key in ((n, m), (n + 1, m), (n + 1, m + 1), (n, m + 1)):
        if key not in by_qn:
            raise MissingPoint(f"spectrum point (n={key[0]}, m={key[1]}) missing")
        cell.append(by_qn[key])
    return tuple(cell)


def _cell_frame(by_qn, n, m) -> np.ndarray:
    """Columns are the (h, l) edge vectors of the cell at (n, m)."""
    try:
        p = by_qn[(n, m)]
        pn = by_qn[(n + 1, m)]
        pm = by_qn[(n, m + 1)]
    except KeyError as exc:
        raise LatticeAmbiguous(
            f"lattice neighborhood of (n={n}, m={m}) not in the spectrum window"
        ) from exc
    return np.array(
        [[pn.h - p.h, pm.h - p.h], [pn.l - p.l, pm.l - p.l]]
    )


def _int_inv(m: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular 2x2 integer matrix."""
    a, b = int(m[0, 0]), int(m[0, 1])
    c, d = int(m[1, 0]), int(m[1, 1])
    det = a * d - b * c
    if det not in (1, -1):
        raise LatticeAmbiguous(f"matrix with det {det} is not unimodular")
    return det * np.array([[d, -b], [-c, a]], dtype=int)


def _nearest_base(by_qn, start, target) -> tuple[int, int]:
    """Hill-climb on the lattice to the base point nearest the target."""

    def dist(key):
        p = by_qn.get(key)
        if p is None:
            return math.inf
        return (p.h - target.h) ** 2 + (p.l - target.l) ** 2

    best = start
    best_d = dist(best)
    for _ in range(10000):
        n, m = best
        improved = False
        for cand in ((n + 1, m), (n - 1, m), (n, m + 1), (n, m - 1)):
            d = dist(cand)
            if d < best_d:
                best, best_d = cand, d
                improved = True
        if not improved:
            return best
    raise LatticeAmbiguous("nearest-lattice-point search did not settle")


def monodromy_spectral(
    spectrum: list[SpectrumPoint],
    loop: LoopSpec,
    frame_change: np.ndarray | None = None,
) -> MonodromyResult:
    """Monodromy read off the joint spectrum by transporting a cell frame.

    At each loop sample the frame is re-expressed in the local cell basis;
    the change-of-basis entries must round to integers within ROUND_GATE.
    The result is reported in the period-lattice convention, so it matches
    `monodromy_analytic` exactly.
    """
    by_qn = {(p.qn.n, p.qn.m): p for p in spectrum}
    start_keys = sorted(by_qn)
    base = _nearest_base(by_qn, start_keys[len(start_keys) // 2], loop.samples[0])
    if frame_change is None:
        basis0 = np.eye(2, dtype=int)
    else:
        basis0 = _int_inv(np.asarray(frame_change, dtype=int)).T.copy()

    frame = _cell_frame(by_qn, *base) @ basis0
    basis = basis0.copy()
    for sample in loop.samples[1:]:
        base = _nearest_base(by_qn, base, sample)
        local = _cell_frame(by_qn, *base)
        solve = np.linalg.solve(local, frame)
        rounded = np.rint(solve)
        residual = float(np.abs(solve - rounded).max())
        if residual > ROUND_GATE:
            raise LatticeAmbiguous(
                f"change-of-basis residual {residual:.3f} exceeds {ROUND_GATE} "
                f"near ({sample.h:.3f}, {sample.l:.3f}); refine hbar or the loop"
            )
        basis = rounded.astype(int)
        frame = local @ basis
    rel = _int_inv(basis0) @ basis
    # convert the frame transport to the period-lattice convention
    inv_t = _int_inv(rel).T
    m = tuple(tuple(int(x) for x in row) for row in inv_t)
    return MonodromyResult(matrix=m, method="spectral", loop=loop)


def report_json(result: MonodromyResult) -> dict:
    return {
        "method": result.method,
        "matrix": [list(row) for row in result.matrix],
        "winding": result.loop.winding,
        "loop": [[v.h, v.l] for v in result.loop.vertices],
    }

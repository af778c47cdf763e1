"""Pure-Python (numpy) implementations of the hot numerical kernels.

Mirrors the compiled module `_kernels_cy`; the active backend is picked in
`_kernels`.  Only tight loops live here: Gauss-Legendre node sums for the
complete integrals and fixed-step RK4 integration of the pendulum dynamics.
"""

import math

import numpy as np

BACKEND = "python"

_SQ2 = math.sqrt(2.0)

# Threshold on a/b below which the near-pole kernel 1/(a + b*sin^2) is split
# into closed form + smooth remainder; above it the direct integrand is
# already analytic with a comfortably distant pole.
SPLIT_EPS = 0.5


def quad_sums(u, v, w0, l, s, c, w, want_theta):
    """Node sums for the four complete integrals between turning points.

    Turning points enter through the gaps u = 1 + x-, v = 1 - x+ and
    w0 = x0 - 1, which the caller reconstructs to full relative precision;
    forming them from the roots themselves loses the l -> 0 regime.
    ``s``, ``c``, ``w`` are sin^2(theta), cos^2(theta) and weights of a
    Gauss-Legendre rule on [0, pi/2].  Returns ten partial sums; the scalar
    closed-form blocks are assembled by the caller (shared across backends).
    """
    b = 2.0 - u - v
    ap = u
    am = v
    d = w0 + v
    g = np.sqrt(d + b * c)  # sqrt(x0 - x) at the nodes
    g0 = math.sqrt(d + b)
    q0 = math.sqrt(d)
    x = (u - 1.0) + b * s

    wg = w / g
    s_t = wg.sum()
    s_i = (x * wg).sum()

    eps_p = ap / b
    eps_m = am / b

    # action integrand numerator f = s*(1-s)*sqrt(2*(x0-x)) against each pole
    if eps_p < SPLIT_EPS:
        gp = g + g0
        f1 = (1.0 - s) * _SQ2 * g
        if eps_p > 0.0:
            f2 = -_SQ2 * (b / gp + g)
            f3 = _SQ2 * b * (2.0 * g0 * gp - b) / (2.0 * g0 * gp * gp)
            a1p_main = (w * (f1 - eps_p * f2 + eps_p * eps_p * f3)).sum()
            a1p_rem = (w * f3 / (ap + b * s)).sum()
        else:
            a1p_main = (w * f1).sum()
            a1p_rem = 0.0
    else:
        a1p_main = (w * s * (1.0 - s) * _SQ2 * g / (ap + b * s)).sum()
        a1p_rem = 0.0

    if eps_m < SPLIT_EPS:
        qp = g + q0
        f1 = s * _SQ2 * g
        if eps_m > 0.0:
            f2 = _SQ2 * (b / qp - g)
            f3 = -_SQ2 * b * (b + 2.0 * q0 * qp) / (2.0 * q0 * qp * qp)
            a1m_main = (w * (f1 - eps_m * f2 + eps_m * eps_m * f3)).sum()
            a1m_rem = (w * f3 / (am + b * c)).sum()
        else:
            a1m_main = (w * f1).sum()
            a1m_rem = 0.0
    else:
        a1m_main = (w * s * (1.0 - s) * _SQ2 * g / (am + b * c)).sum()
        a1m_rem = 0.0

    thp_main = thp_rem = thm_main = thm_rem = 0.0
    if want_theta:
        # rotation integrand numerator W = 1/sqrt(x0 - x) against each pole
        if eps_p < SPLIT_EPS:
            gp = g + g0
            w1 = b / (g0 * g * gp)
            w2 = b * b * (2.0 * g0 + g) / (2.0 * g0**3 * g * gp * gp)
            w3 = b**3 * (3.0 * g * g + 9.0 * g0 * g + 8.0 * g0 * g0) / (
                8.0 * g0**5 * g * gp**3
            )
            thp_main = (w * (w1 - eps_p * w2 + eps_p * eps_p * w3)).sum()
            thp_rem = (w * w3 / (ap + b * s)).sum()
        else:
            thp_main = (w / (g * (ap + b * s))).sum()
        if eps_m < SPLIT_EPS:
            qp = g + q0
            v1 = -b / (q0 * g * qp)
            v2 = b * b * (2.0 * q0 + g) / (2.0 * q0**3 * g * qp * qp)
            v3 = -(b**3) * (3.0 * g * g + 9.0 * q0 * g + 8.0 * q0 * q0) / (
                8.0 * q0**5 * g * qp**3
            )
            thm_main = (w * (v1 - eps_m * v2 + eps_m * eps_m * v3)).sum()
            thm_rem = (w * v3 / (am + b * c)).sum()
        else:
            thm_main = (w / (g * (am + b * c))).sum()

    return (
        s_t,
        s_i,
        a1p_main,
        a1p_rem,
        a1m_main,
        a1m_rem,
        thp_main,
        thp_rem,
        thm_main,
        thm_rem,
    )


def _full_rhs(q0, q1, q2, p0, p1, p2):
    # dq/dt = p, dp/dt = -e3 + (q.e3 - p.p) q on the constraint manifold
    lam = q2 - (p0 * p0 + p1 * p1 + p2 * p2)
    return p0, p1, p2, lam * q0, lam * q1, lam * q2 - 1.0


def _full_step(y, dt):
    q0, q1, q2, p0, p1, p2 = y
    k1 = _full_rhs(q0, q1, q2, p0, p1, p2)
    h2 = 0.5 * dt
    k2 = _full_rhs(
        q0 + h2 * k1[0], q1 + h2 * k1[1], q2 + h2 * k1[2],
        p0 + h2 * k1[3], p1 + h2 * k1[4], p2 + h2 * k1[5],
    )
    k3 = _full_rhs(
        q0 + h2 * k2[0], q1 + h2 * k2[1], q2 + h2 * k2[2],
        p0 + h2 * k2[3], p1 + h2 * k2[4], p2 + h2 * k2[5],
    )
    k4 = _full_rhs(
        q0 + dt * k3[0], q1 + dt * k3[1], q2 + dt * k3[2],
        p0 + dt * k3[3], p1 + dt * k3[4], p2 + dt * k3[5],
    )
    sixth = dt / 6.0
    return tuple(
        y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(6)
    )


def _full_project(y):
    q0, q1, q2, p0, p1, p2 = y
    nq = math.sqrt(q0 * q0 + q1 * q1 + q2 * q2)
    q0, q1, q2 = q0 / nq, q1 / nq, q2 / nq
    qp = q0 * p0 + q1 * p1 + q2 * p2
    return q0, q1, q2, p0 - qp * q0, p1 - qp * q1, p2 - qp * q2


def rk4_full(y0, dt, nsteps, out):
    """Integrate the constrained dynamics, projecting back each step.

    ``out`` is an (nsteps+1, 6) array filled with the trajectory.  Returns the
    max post-projection constraint residual seen along the way.
    """
    y = tuple(float(v) for v in y0)
    out[0] = y
    worst = 0.0
    for k in range(1, nsteps + 1):
        y = _full_project(_full_step(y, dt))
        q0, q1, q2, p0, p1, p2 = y
        r1 = abs(q0 * q0 + q1 * q1 + q2 * q2 - 1.0)
        r2 = abs(q0 * p0 + q1 * p1 + q2 * p2)
        if r1 > worst:
            worst = r1
        if r2 > worst:
            worst = r2
        out[k] = y
    return worst


def _red_rhs(z, pz, psq, l, inv):
    # (z, pz, psq, phi) with dphi/dt = l/(1-z^2); inv toggles phi tracking
    dphi = l * inv / (1.0 - z * z) if inv else 0.0
    return pz, -z * psq + z * z - 1.0, -2.0 * pz, dphi


def _red_step(y, dt, l, track_phi):
    z, pz, psq, phi = y
    k1 = _red_rhs(z, pz, psq, l, track_phi)
    h2 = 0.5 * dt
    k2 = _red_rhs(z + h2 * k1[0], pz + h2 * k1[1], psq + h2 * k1[2], l, track_phi)
    k3 = _red_rhs(z + h2 * k2[0], pz + h2 * k2[1], psq + h2 * k2[2], l, track_phi)
    k4 = _red_rhs(z + dt * k3[0], pz + dt * k3[1], psq + dt * k3[2], l, track_phi)
    sixth = dt / 6.0
    return (
        z + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        pz + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        psq + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        phi + sixth * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    )


def _red_project(y, l):
    z, pz, psq, phi = y
    resid = pz * pz + l * l - psq * (1.0 - z * z)
    gz = 2.0 * z * psq
    gp = 2.0 * pz
    gs = -(1.0 - z * z)
    scale = resid / (gz * gz + gp * gp + gs * gs)
    return z - scale * gz, pz - scale * gp, psq - scale * gs, phi


def rk4_reduced(y0, l, dt, nsteps, out):
    """Trajectory of the reduced system; returns max relation residual."""
    y = (float(y0[0]), float(y0[1]), float(y0[2]), 0.0)
    out[0] = y[:3]
    worst = 0.0
    for k in range(1, nsteps + 1):
        y = _red_project(_red_step(y, dt, l, False), l)
        z, pz, psq, _ = y
        r = abs(pz * pz + l * l - psq * (1.0 - z * z))
        if r > worst:
            worst = r
        out[k] = y[:3]
    return worst


def reduced_return(y0, l, dt, t_max):
    """Time and azimuth advance between consecutive upward pz zero-crossings.

    Returns (t_period, dphi, status); status 0 on success, 1 if no event was
    found before t_max.
    """
    y = (float(y0[0]), float(y0[1]), float(y0[2]), 0.0)
    t = 0.0
    events = []
    prev = y
    nmax = int(t_max / dt) + 1
    for _ in range(nmax):
        ynew = _red_project(_red_step(prev, dt, l, True), l)
        if prev[1] < 0.0 <= ynew[1]:
            # refine crossing over the last step by bisection on the substep
            lo, hi = 0.0, dt
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                ym = _red_step(prev, mid, l, True)
                if ym[1] < 0.0:
                    lo = mid
                else:
                    hi = mid
            ym = _red_step(prev, 0.5 * (lo + hi), l, True)
            events.append((t + 0.5 * (lo + hi), ym[3]))
            if len(events) == 2:
                return events[1][0] - events[0][0], events[1][1] - events[0][1], 0
        prev = ynew
        t += dt
        if t > t_max:
            break
    return 0.0, 0.0, 1

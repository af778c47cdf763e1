# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot numerical kernels.

Same contract as `_kernels_py`; one C pass over the quadrature nodes, and
scalar RK4 loops without Python-object traffic.
"""

from libc.math cimport fabs, sqrt

BACKEND = "c"

SPLIT_EPS = 0.5

cdef double _SQ2 = sqrt(2.0)


def quad_sums(double u, double v, double w0, double l,
              double[::1] s, double[::1] c, double[::1] w, bint want_theta):
    cdef double b = 2.0 - u - v
    cdef double ap = u
    cdef double am = v
    cdef double d = w0 + v
    cdef double g0 = sqrt(d + b)
    cdef double q0 = sqrt(d)
    cdef double eps_p = ap / b
    cdef double eps_m = am / b
    cdef bint sub_p = eps_p < SPLIT_EPS
    cdef bint sub_m = eps_m < SPLIT_EPS

    cdef double s_t = 0.0, s_i = 0.0
    cdef double a1p_main = 0.0, a1p_rem = 0.0
    cdef double a1m_main = 0.0, a1m_rem = 0.0
    cdef double thp_main = 0.0, thp_rem = 0.0
    cdef double thm_main = 0.0, thm_rem = 0.0

    cdef Py_ssize_t i, n = s.shape[0]
    cdef double si, ci, wi, gi, xi, wg, gp, qp
    cdef double f1, f2, f3, w1, w2, w3

    for i in range(n):
        si = s[i]
        ci = c[i]
        wi = w[i]
        gi = sqrt(d + b * ci)
        xi = (u - 1.0) + b * si
        wg = wi / gi
        s_t += wg
        s_i += xi * wg

        gp = gi + g0
        qp = gi + q0

        if sub_p:
            f1 = (1.0 - si) * _SQ2 * gi
            if eps_p > 0.0:
                f2 = -_SQ2 * (b / gp + gi)
                f3 = _SQ2 * b * (2.0 * g0 * gp - b) / (2.0 * g0 * gp * gp)
                a1p_main += wi * (f1 - eps_p * f2 + eps_p * eps_p * f3)
                a1p_rem += wi * f3 / (ap + b * si)
            else:
                a1p_main += wi * f1
        else:
            a1p_main += wi * si * (1.0 - si) * _SQ2 * gi / (ap + b * si)

        if sub_m:
            f1 = si * _SQ2 * gi
            if eps_m > 0.0:
                f2 = _SQ2 * (b / qp - gi)
                f3 = -_SQ2 * b * (b + 2.0 * q0 * qp) / (2.0 * q0 * qp * qp)
                a1m_main += wi * (f1 - eps_m * f2 + eps_m * eps_m * f3)
                a1m_rem += wi * f3 / (am + b * ci)
            else:
                a1m_main += wi * f1
        else:
            a1m_main += wi * si * (1.0 - si) * _SQ2 * gi / (am + b * ci)

        if want_theta:
            if sub_p:
                w1 = b / (g0 * gi * gp)
                w2 = b * b * (2.0 * g0 + gi) / (2.0 * g0 * g0 * g0 * gi * gp * gp)
                w3 = b * b * b * (3.0 * gi * gi + 9.0 * g0 * gi + 8.0 * g0 * g0) / (
                    8.0 * g0 * g0 * g0 * g0 * g0 * gi * gp * gp * gp)
                thp_main += wi * (w1 - eps_p * w2 + eps_p * eps_p * w3)
                thp_rem += wi * w3 / (ap + b * si)
            else:
                thp_main += wi / (gi * (ap + b * si))
            if sub_m:
                w1 = -b / (q0 * gi * qp)
                w2 = b * b * (2.0 * q0 + gi) / (2.0 * q0 * q0 * q0 * gi * qp * qp)
                w3 = -b * b * b * (3.0 * gi * gi + 9.0 * q0 * gi + 8.0 * q0 * q0) / (
                    8.0 * q0 * q0 * q0 * q0 * q0 * gi * qp * qp * qp)
                thm_main += wi * (w1 - eps_m * w2 + eps_m * eps_m * w3)
                thm_rem += wi * w3 / (am + b * ci)
            else:
                thm_main += wi / (gi * (am + b * ci))

    return (s_t, s_i, a1p_main, a1p_rem, a1m_main, a1m_rem,
            thp_main, thp_rem, thm_main, thm_rem)


cdef inline void _full_rhs(double* y, double* dy) nogil:
    cdef double lam = y[2] - (y[3] * y[3] + y[4] * y[4] + y[5] * y[5])
    dy[0] = y[3]
    dy[1] = y[4]
    dy[2] = y[5]
    dy[3] = lam * y[0]
    dy[4] = lam * y[1]
    dy[5] = lam * y[2] - 1.0


cdef void _full_step(double* y, double dt, double* out) nogil:
    cdef double k1[6], k2[6], k3[6], k4[6], tmp[6]
    cdef int i
    cdef double h2 = 0.5 * dt
    _full_rhs(y, k1)
    for i in range(6):
        tmp[i] = y[i] + h2 * k1[i]
    _full_rhs(tmp, k2)
    for i in range(6):
        tmp[i] = y[i] + h2 * k2[i]
    _full_rhs(tmp, k3)
    for i in range(6):
        tmp[i] = y[i] + dt * k3[i]
    _full_rhs(tmp, k4)
    for i in range(6):
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef void _full_project(double* y) nogil:
    cdef double nq = sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])
    y[0] /= nq
    y[1] /= nq
    y[2] /= nq
    cdef double qp = y[0] * y[3] + y[1] * y[4] + y[2] * y[5]
    y[3] -= qp * y[0]
    y[4] -= qp * y[1]
    y[5] -= qp * y[2]


def rk4_full(double[::1] y0, double dt, long nsteps, double[:, ::1] out):
    cdef double y[6], ynew[6]
    cdef int i
    cdef long k
    cdef double worst = 0.0, r1, r2
    for i in range(6):
        y[i] = y0[i]
        out[0, i] = y[i]
    with nogil:
        for k in range(1, nsteps + 1):
            _full_step(y, dt, ynew)
            _full_project(ynew)
            for i in range(6):
                y[i] = ynew[i]
            r1 = fabs(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] - 1.0)
            r2 = fabs(y[0] * y[3] + y[1] * y[4] + y[2] * y[5])
            if r1 > worst:
                worst = r1
            if r2 > worst:
                worst = r2
            for i in range(6):
                out[k, i] = y[i]
    return worst


cdef inline void _red_rhs(double* y, double l, bint track, double* dy) nogil:
    dy[0] = y[1]
    dy[1] = -y[0] * y[2] + y[0] * y[0] - 1.0
    dy[2] = -2.0 * y[1]
    dy[3] = l / (1.0 - y[0] * y[0]) if track else 0.0


cdef void _red_step(double* y, double dt, double l, bint track, double* out) nogil:
    cdef double k1[4], k2[4], k3[4], k4[4], tmp[4]
    cdef int i
    cdef double h2 = 0.5 * dt
    _red_rhs(y, l, track, k1)
    for i in range(4):
        tmp[i] = y[i] + h2 * k1[i]
    _red_rhs(tmp, l, track, k2)
    for i in range(4):
        tmp[i] = y[i] + h2 * k2[i]
    _red_rhs(tmp, l, track, k3)
    for i in range(4):
        tmp[i] = y[i] + dt * k3[i]
    _red_rhs(tmp, l, track, k4)
    for i in range(4):
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef void _red_project(double* y, double l) nogil:
    cdef double resid = y[1] * y[1] + l * l - y[2] * (1.0 - y[0] * y[0])
    cdef double gz = 2.0 * y[0] * y[2]
    cdef double gp = 2.0 * y[1]
    cdef double gs = -(1.0 - y[0] * y[0])
    cdef double scale = resid / (gz * gz + gp * gp + gs * gs)
    y[0] -= scale * gz
    y[1] -= scale * gp
    y[2] -= scale * gs


def rk4_reduced(double[::1] y0, double l, double dt, long nsteps, double[:, ::1] out):
    cdef double y[4], ynew[4]
    cdef int i
    cdef long k
    cdef double worst = 0.0, r
    y[0] = y0[0]
    y[1] = y0[1]
    y[2] = y0[2]
    y[3] = 0.0
    for i in range(3):
        out[0, i] = y[i]
    with nogil:
        for k in range(1, nsteps + 1):
            _red_step(y, dt, l, 0, ynew)
            _red_project(ynew, l)
            for i in range(4):
                y[i] = ynew[i]
            r = fabs(y[1] * y[1] + l * l - y[2] * (1.0 - y[0] * y[0]))
            if r > worst:
                worst = r
            for i in range(3):
                out[k, i] = y[i]
    return worst


def reduced_return(double[::1] y0, double l, double dt, double t_max):
    cdef double prev[4], ynew[4], ym[4]
    cdef double t = 0.0, lo, hi, mid
    cdef double t_event0 = 0.0, phi_event0 = 0.0
    cdef int found = 0
    cdef long k, nmax = <long>(t_max / dt) + 1
    cdef int i, j
    prev[0] = y0[0]
    prev[1] = y0[1]
    prev[2] = y0[2]
    prev[3] = 0.0
    with nogil:
        for k in range(nmax):
            _red_step(prev, dt, l, 1, ynew)
            _red_project(ynew, l)
            if prev[1] < 0.0 <= ynew[1]:
                lo = 0.0
                hi = dt
                for j in range(60):
                    mid = 0.5 * (lo + hi)
                    _red_step(prev, mid, l, 1, ym)
                    if ym[1] < 0.0:
                        lo = mid
                    else:
                        hi = mid
                _red_step(prev, 0.5 * (lo + hi), l, 1, ym)
                if found == 0:
                    t_event0 = t + 0.5 * (lo + hi)
                    phi_event0 = ym[3]
                    found = 1
                else:
                    with gil:
                        return (
                            t + 0.5 * (lo + hi) - t_event0,
                            ym[3] - phi_event0,
                            0,
                        )
            for i in range(4):
                prev[i] = ynew[i]
            t += dt
            if t > t_max:
                break
    return 0.0, 0.0, 1

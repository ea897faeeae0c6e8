# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice ball scan kernel.

Hot inner loop of the package: a (c, d) rectangle walk solving the
determinant equation per coprime pair and intersecting the convex norm
quadratic exactly as in ``hypcount._ballscan_py`` (the pure-Python twin,
kept in lockstep; the benchmark and the determinism tests compare both).
"""

from libc.math cimport sqrt, ceil, floor
from libcpp.vector cimport vector

import numpy as np

KERNEL_NAME = "cython"


cdef inline long long _gcd_ll(long long x, long long y) nogil:
    cdef long long t
    if x < 0:
        x = -x
    if y < 0:
        y = -y
    while y:
        t = x % y
        x = y
        y = t
    return x


cdef inline void _xgcd_ll(long long x, long long y,
                          long long *g, long long *s_out, long long *t_out) nogil:
    cdef long long s0 = 1, s1 = 0, t0 = 0, t1 = 1
    cdef long long q, r, tmp
    while y:
        q = x // y
        r = x - q * y
        # emulate Python divmod semantics: remainder takes divisor's sign
        if r != 0 and ((r < 0) != (y < 0)):
            q -= 1
            r += y
        x = y
        y = r
        tmp = s1; s1 = s0 - q * s1; s0 = tmp
        tmp = t1; t1 = t0 - q * t1; t0 = tmp
    g[0] = x
    s_out[0] = s0
    t_out[0] = t0


cdef _pack(vector[long long] &quads, vector[double] &norms):
    cdef Py_ssize_t n = norms.size()
    q = np.empty((n, 4), dtype=np.int64)
    f = np.empty(n, dtype=np.float64)
    cdef long long[:, ::1] qv = q
    cdef double[::1] fv = f
    cdef Py_ssize_t i
    for i in range(n):
        qv[i, 0] = quads[4 * i]
        qv[i, 1] = quads[4 * i + 1]
        qv[i, 2] = quads[4 * i + 2]
        qv[i, 3] = quads[4 * i + 3]
        fv[i] = norms[i]
    return q, f


def scan_ball(double xz, double yz, double xw, double yw, double bound_hi,
              long long c_lo, long long c_hi):
    cdef vector[long long] quads
    cdef vector[double] norms
    cdef double alpha = yw / yz
    cdef double beta = 1.0 / (yz * yw)
    cdef double gamma_c = yz * yw
    cdef double delta = yz / yw
    cdef double d_half = sqrt(bound_hi * yw / yz)
    cdef long long c_max = <long long>(sqrt(bound_hi / (yz * yw)) + 1e-9)
    cdef long long c, d, k, k_lo, k_hi, d_lo, d_hi, a0, b0, a, b, g, s, t
    cdef double const, half, sv, f, base, cc_term, e, a_off, s_off
    cdef double q2, q1, q0, disc, root, av

    with nogil:
        if c_lo <= 0 and 0 <= c_hi:
            const = alpha + delta
            if const <= bound_hi:
                half = sqrt((bound_hi - const) / beta)
                k_lo = <long long>ceil(xz - xw - half) - 1
                k_hi = <long long>floor(xz - xw + half) + 1
                for k in range(k_lo, k_hi + 1):
                    sv = xw + k - xz
                    f = const + beta * sv * sv
                    if f <= bound_hi:
                        quads.push_back(1); quads.push_back(k)
                        quads.push_back(0); quads.push_back(1)
                        norms.push_back(f)

        c = c_lo if c_lo > 1 else 1
        while c <= c_hi and c <= c_max:
            base = -c * xw
            d_lo = <long long>ceil(base - d_half)
            d_hi = <long long>floor(base + d_half)
            cc_term = gamma_c * c * c
            for d in range(d_lo, d_hi + 1):
                if _gcd_ll(c, d) != 1:
                    continue
                _xgcd_ll(d, c, &g, &s, &t)
                if g == -1:
                    s = -s
                    t = -t
                a0 = s
                b0 = -t
                e = c * xw + d
                a_off = a0 - xz * c
                s_off = a_off * xw + (b0 - xz * d)
                q2 = alpha * c * c + beta * e * e
                q1 = 2.0 * (alpha * a_off * c + beta * s_off * e)
                q0 = alpha * a_off * a_off + beta * s_off * s_off + cc_term + delta * e * e
                disc = q1 * q1 - 4.0 * q2 * (q0 - bound_hi)
                if disc < 0.0:
                    continue
                root = sqrt(disc)
                k_lo = <long long>ceil((-q1 - root) / (2.0 * q2)) - 1
                k_hi = <long long>floor((-q1 + root) / (2.0 * q2)) + 1
                for k in range(k_lo, k_hi + 1):
                    a = a0 + k * c
                    b = b0 + k * d
                    av = a_off + k * c
                    sv = s_off + k * (c * xw + d)
                    f = alpha * av * av + beta * sv * sv + cc_term + delta * e * e
                    if f <= bound_hi:
                        quads.push_back(a); quads.push_back(b)
                        quads.push_back(c); quads.push_back(d)
                        norms.push_back(f)
            c += 1
    return _pack(quads, norms)


def scan_trace(double xz, double yz, double xw, double yw, double bound_hi,
               long long tau, long long c_lo, long long c_hi):
    cdef vector[long long] quads
    cdef vector[double] norms
    cdef double alpha = yw / yz
    cdef double beta = 1.0 / (yz * yw)
    cdef double gamma_c = yz * yw
    cdef double delta = yz / yw
    cdef double d_half = sqrt(bound_hi * yw / yz)
    cdef long long c_max = <long long>(sqrt(bound_hi / (yz * yw)) + 1e-9)
    cdef long long c, d, k, k_lo, k_hi, d_lo, d_hi, a0, b0, a, b, g, s, t
    cdef long long rem, tau_s, i_sign, n_signs
    cdef double const, half, sv, f, base, cc_term, e, a_off, s_off, av

    n_signs = 2 if tau != 0 else 1

    with nogil:
        if c_lo <= 0 and 0 <= c_hi and tau == 2:
            const = alpha + delta
            if const <= bound_hi:
                half = sqrt((bound_hi - const) / beta)
                k_lo = <long long>ceil(xz - xw - half) - 1
                k_hi = <long long>floor(xz - xw + half) + 1
                for k in range(k_lo, k_hi + 1):
                    sv = xw + k - xz
                    f = const + beta * sv * sv
                    if f <= bound_hi:
                        quads.push_back(1); quads.push_back(k)
                        quads.push_back(0); quads.push_back(1)
                        norms.push_back(f)

        c = c_lo if c_lo > 1 else 1
        while c <= c_hi and c <= c_max:
            base = -c * xw
            d_lo = <long long>ceil(base - d_half)
            d_hi = <long long>floor(base + d_half)
            cc_term = gamma_c * c * c
            for d in range(d_lo, d_hi + 1):
                if _gcd_ll(c, d) != 1:
                    continue
                _xgcd_ll(d, c, &g, &s, &t)
                if g == -1:
                    s = -s
                    t = -t
                a0 = s
                b0 = -t
                e = c * xw + d
                a_off = a0 - xz * c
                s_off = a_off * xw + (b0 - xz * d)
                for i_sign in range(n_signs):
                    tau_s = tau if i_sign == 0 else -tau
                    rem = tau_s - d - a0
                    if rem % c:
                        continue
                    k = rem // c
                    # trunc vs floor division agree here: rem is divisible
                    a = a0 + k * c
                    b = b0 + k * d
                    av = a_off + k * c
                    sv = s_off + k * (c * xw + d)
                    f = alpha * av * av + beta * sv * sv + cc_term + delta * e * e
                    if f <= bound_hi:
                        quads.push_back(a); quads.push_back(b)
                        quads.push_back(c); quads.push_back(d)
                        norms.push_back(f)
            c += 1
    return _pack(quads, norms)

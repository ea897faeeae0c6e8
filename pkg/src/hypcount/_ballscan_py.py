"""Pure-Python fallback for the lattice ball scan kernel.

Mirrors the compiled extension ``hypcount._ballscan`` exactly: same
iteration order, same quadruple/norm output.  Selected at import time by
:mod:`hypcount.modgroup` when the extension is unavailable.

The scan enumerates canonical-sign integer matrices (a b; c d) with
ad - bc = 1 whose conjugated Frobenius norm

    f(gamma) = || sigma_z^{-1} gamma sigma_w ||_F^2  ( = 2 cosh rho(z, gamma w) )

does not exceed ``bound_hi``.  For fixed (c, d) the determinant equation
has the one-parameter solution family (a, b) = (a0 + k c, b0 + k d) and f
is a strictly convex quadratic in k, so the scan is a (c, d) rectangle
walk with an exact k-interval per coprime pair.
"""

from __future__ import annotations

import math

import numpy as np

KERNEL_NAME = "python"


def _xgcd(x: int, y: int):
    """Return (g, s, t) with s*x + t*y = g = gcd(x, y)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return x, s0, t0


def _pack(quads, norms):
    if quads:
        q = np.array(quads, dtype=np.int64)
        f = np.array(norms, dtype=np.float64)
    else:
        q = np.empty((0, 4), dtype=np.int64)
        f = np.empty(0, dtype=np.float64)
    return q, f


def scan_ball(xz, yz, xw, yw, bound_hi, c_lo, c_hi):
    """All canonical quadruples with f <= bound_hi and c in [c_lo, c_hi]."""
    quads = []
    norms = []
    alpha = yw / yz
    beta = 1.0 / (yz * yw)
    gamma_c = yz * yw
    delta = yz / yw
    d_half = math.sqrt(bound_hi * yw / yz)
    c_max = int(math.sqrt(bound_hi / (yz * yw)) + 1e-9)

    if c_lo <= 0 <= c_hi:
        # c = 0 forces a = d = 1 (canonical sign), b free: (1, k; 0, 1).
        const = alpha + delta
        if const <= bound_hi:
            half = math.sqrt((bound_hi - const) / beta)
            k_lo = math.ceil(xz - xw - half) - 1
            k_hi = math.floor(xz - xw + half) + 1
            for k in range(k_lo, k_hi + 1):
                s = xw + k - xz
                f = const + beta * s * s
                if f <= bound_hi:
                    quads.append((1, k, 0, 1))
                    norms.append(f)

    for c in range(max(1, c_lo), min(c_hi, c_max) + 1):
        base = -c * xw
        d_lo = math.ceil(base - d_half)
        d_hi = math.floor(base + d_half)
        cc_term = gamma_c * c * c
        for d in range(d_lo, d_hi + 1):
            if math.gcd(c, d if d >= 0 else -d) != 1:
                continue
            g, s, t = _xgcd(d, c)
            if g == -1:
                s, t = -s, -t
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
            root = math.sqrt(disc)
            k_lo = math.ceil((-q1 - root) / (2.0 * q2)) - 1
            k_hi = math.floor((-q1 + root) / (2.0 * q2)) + 1
            for k in range(k_lo, k_hi + 1):
                a = a0 + k * c
                b = b0 + k * d
                av = a_off + k * c
                sv = s_off + k * (c * xw + d)
                f = alpha * av * av + beta * sv * sv + cc_term + delta * e * e
                if f <= bound_hi:
                    quads.append((a, b, c, d))
                    norms.append(f)
    return _pack(quads, norms)


def scan_trace(xz, yz, xw, yw, bound_hi, tau, c_lo, c_hi):
    """Canonical quadruples with |a + d| == tau and f <= bound_hi.

    Restricting the trace pins k to at most two values per (c, d) pair,
    so this path never materializes the full ball.
    """
    quads = []
    norms = []
    alpha = yw / yz
    beta = 1.0 / (yz * yw)
    gamma_c = yz * yw
    delta = yz / yw
    d_half = math.sqrt(bound_hi * yw / yz)
    c_max = int(math.sqrt(bound_hi / (yz * yw)) + 1e-9)

    if c_lo <= 0 <= c_hi and tau == 2:
        const = alpha + delta
        if const <= bound_hi:
            half = math.sqrt((bound_hi - const) / beta)
            k_lo = math.ceil(xz - xw - half) - 1
            k_hi = math.floor(xz - xw + half) + 1
            for k in range(k_lo, k_hi + 1):
                s = xw + k - xz
                f = const + beta * s * s
                if f <= bound_hi:
                    quads.append((1, k, 0, 1))
                    norms.append(f)

    signs = (tau, -tau) if tau != 0 else (0,)
    for c in range(max(1, c_lo), min(c_hi, c_max) + 1):
        base = -c * xw
        d_lo = math.ceil(base - d_half)
        d_hi = math.floor(base + d_half)
        cc_term = gamma_c * c * c
        for d in range(d_lo, d_hi + 1):
            if math.gcd(c, d if d >= 0 else -d) != 1:
                continue
            g, s, t = _xgcd(d, c)
            if g == -1:
                s, t = -s, -t
            a0 = s
            b0 = -t
            e = c * xw + d
            a_off = a0 - xz * c
            s_off = a_off * xw + (b0 - xz * d)
            for tau_s in signs:
                rem = tau_s - d - a0
                if rem % c:
                    continue
                k = rem // c
                a = a0 + k * c
                b = b0 + k * d
                av = a_off + k * c
                sv = s_off + k * (c * xw + d)
                f = alpha * av * av + beta * sv * sv + cc_term + delta * e * e
                if f <= bound_hi:
                    quads.append((a, b, c, d))
                    norms.append(f)
    return _pack(quads, norms)

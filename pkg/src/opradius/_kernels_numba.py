"""Numba kernel backend.

JIT-compiled mirrors of ``_kernels_numpy``: identical algorithms, sweep
orders and tie-breaking, with the grid scans parallelized over the t axis.
The per-slice reduction is sequential, so results do not depend on the
thread count.
"""

from __future__ import annotations

import math
import os

# avoid the noisy TBB version probe; omp handles the small-core scans
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
from numba import njit, prange

from ._kernels_numpy import (
    JACOBI_MAX_SWEEPS,
    JACOBI_REL_TOL,
    jacobi_eigensystem,  # noqa: F401  (cold path, shared with the numpy backend)
)

__all__ = [
    "jacobi_eigvals",
    "jacobi_eigvals_batch",
    "jacobi_eigensystem",
    "theta_scan",
    "sphere_scan",
    "sphere_scan_ab",
    "eval_single",
    "eval_pair",
    "eval_pair_ab",
    "hs_sphere_scan",
    "eval_hs_point",
    "oracle_values",
]


@njit(cache=True)
def _jacobi_inplace(A, ev, rel_tol, max_sweeps):
    """Cyclic complex Jacobi, eigenvalues only.  Destroys A, fills ev.

    Returns the relative off-diagonal residual at exit; values above rel_tol
    mean the sweep budget was exhausted.
    """
    n = A.shape[0]
    fro_sq = 0.0
    for i in range(n):
        for j in range(n):
            v = A[i, j]
            fro_sq += v.real * v.real + v.imag * v.imag
    if n == 1:
        ev[0] = A[0, 0].real
        return 0.0
    thresh_sq = rel_tol * rel_tol * fro_sq
    skip_sq = thresh_sq / (n * (n - 1))
    off_sq = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                v = A[i, j]
                off_sq += v.real * v.real + v.imag * v.imag
    sweeps = 0
    while off_sq > thresh_sq and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag_sq = apq.real * apq.real + apq.imag * apq.imag
                if mag_sq <= skip_sq or mag_sq == 0.0:
                    continue
                mag = math.sqrt(mag_sq)
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (app - aqq) / (2.0 * mag)
                if tau >= 0.0:
                    t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sigma = (s / mag) * apq
                sigc = sigma.conjugate()
                for r in range(n):
                    hp = A[r, p]
                    hq = A[r, q]
                    A[r, p] = c * hp - sigc * hq
                    A[r, q] = sigma * hp + c * hq
                for r in range(n):
                    hp = A[p, r]
                    hq = A[q, r]
                    A[p, r] = c * hp - sigma * hq
                    A[q, r] = sigc * hp + c * hq
                A[p, p] = (c * c * app - 2.0 * s * c * mag + s * s * aqq) + 0.0j
                A[q, q] = (s * s * app + 2.0 * s * c * mag + c * c * aqq) + 0.0j
                A[p, q] = 0.0 + 0.0j
                A[q, p] = 0.0 + 0.0j
        sweeps += 1
        off_sq = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = A[i, j]
                    off_sq += v.real * v.real + v.imag * v.imag
    ev[:] = 0.0
    for i in range(n):
        ev[i] = A[i, i].real
    if fro_sq > 0.0:
        return math.sqrt(off_sq / fro_sq)
    return 0.0


@njit(cache=True, parallel=True)
def _jacobi_batch_njit(Hs, rel_tol, max_sweeps):
    m = Hs.shape[0]
    n = Hs.shape[1]
    evals = np.empty((m, n))
    residuals = np.empty(m)
    for i in prange(m):
        A = Hs[i].copy()
        ev = np.empty(n)
        residuals[i] = _jacobi_inplace(A, ev, rel_tol, max_sweeps)
        evals[i] = np.sort(ev)
    return evals, residuals


@njit(cache=True)
def _eig3_inplace(H, ev):
    """Exact trigonometric eigenvalues of a 3x3 Hermitian matrix.

    Shift by tr/3, scale by the off-origin radius, then read the three roots
    of the characteristic cubic from a single arccos.  Used only inside the
    grid scans; the public eigensolver remains cyclic Jacobi.
    """
    a = H[0, 0].real
    b = H[1, 1].real
    c = H[2, 2].real
    f = H[0, 1]
    g = H[0, 2]
    h = H[1, 2]
    q = (a + b + c) / 3.0
    aa = a - q
    bb = b - q
    cc = c - q
    ff = f.real * f.real + f.imag * f.imag
    gg = g.real * g.real + g.imag * g.imag
    hh = h.real * h.real + h.imag * h.imag
    p2 = (aa * aa + bb * bb + cc * cc + 2.0 * (ff + gg + hh)) / 6.0
    if p2 <= 0.0:
        ev[0] = q
        ev[1] = q
        ev[2] = q
        return
    p = math.sqrt(p2)
    det = aa * (bb * cc - hh)
    det -= (f * (f.conjugate() * cc - h * g.conjugate())).real
    det += (g * (f.conjugate() * h.conjugate() - bb * g.conjugate())).real
    r = det / (2.0 * p2 * p)
    if r > 1.0:
        r = 1.0
    elif r < -1.0:
        r = -1.0
    phi = math.acos(r) / 3.0
    e0 = q + 2.0 * p * math.cos(phi)
    e2 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    ev[0] = e0
    ev[1] = 3.0 * q - e0 - e2
    ev[2] = e2


@njit(cache=True)
def _fill_buf_evals(buf, ev, ps):
    n = ev.shape[0]
    mx = 0.0
    ssq = 0.0
    sab = 0.0
    for i in range(n):
        a = abs(ev[i])
        if a > mx:
            mx = a
        ssq += ev[i] * ev[i]
        sab += a
    buf[0] = mx
    buf[1] = ssq
    buf[2] = sab
    for ip in range(ps.shape[0]):
        p = ps[ip]
        acc = 0.0
        if p == 3.0:
            for i in range(n):
                a = abs(ev[i])
                acc += a * a * a
        else:
            for i in range(n):
                acc += abs(ev[i]) ** p
        buf[3 + ip] = acc


@njit(cache=True)
def _theta_tables(ntheta):
    cth = np.empty(ntheta)
    sth = np.empty(ntheta)
    c2t = np.empty(ntheta)
    s2t = np.empty(ntheta)
    d = math.pi / ntheta
    for k in range(ntheta):
        th = k * d
        cth[k] = math.cos(th)
        sth[k] = math.sin(th)
        c2t[k] = math.cos(2.0 * th)
        s2t[k] = math.sin(2.0 * th)
    return cth, sth, c2t, s2t


@njit(cache=True)
def _phi_tables(nphi):
    cph = np.empty(nphi)
    sph = np.empty(nphi)
    d = 2.0 * math.pi / nphi
    for j in range(nphi):
        cph[j] = math.cos(j * d)
        sph[j] = math.sin(j * d)
    return cph, sph


# ---------------------------------------------------------------------------
# 2x2 sphere scans: eigenvalues are m(theta) +- r(theta) with trig-polynomial
# coefficients per (t, phi); see _kernels_numpy for the derivation.


@njit(cache=True, parallel=True, fastmath=True)
def _sphere2_direct(B, C, nt, nphi, ntheta, ps):
    nps = ps.shape[0]
    kk = 3 + nps
    cth, sth, c2t, s2t = _theta_tables(ntheta)
    cph, sph = _phi_tables(nphi)
    b00 = B[0, 0]
    b01 = B[0, 1]
    b10 = B[1, 0]
    b11 = B[1, 1]
    c00 = C[0, 0]
    c01 = C[0, 1]
    c10 = C[1, 0]
    c11 = C[1, 1]
    dt = (0.5 * math.pi) / (nt - 1)
    slice_best = np.full((nt, kk), -1.0)
    slice_ph = np.zeros((nt, kk), np.int64)
    slice_th = np.zeros((nt, kk), np.int64)
    for it in prange(nt):
        l1 = math.cos(it * dt)
        st_ = math.sin(it * dt)
        bb = slice_best[it]
        bp = slice_ph[it]
        bt = slice_th[it]
        for j in range(nphi):
            l2 = (st_ * cph[j]) + 1j * (st_ * sph[j])
            m00 = l1 * b00 + l2 * c00
            m01 = l1 * b01 + l2 * c01
            m10 = l1 * b10 + l2 * c10
            m11 = l1 * b11 + l2 * c11
            ar = 0.5 * (m00.real + m11.real)
            ai = 0.5 * (m00.imag + m11.imag)
            dr = 0.5 * (m00.real - m11.real)
            di = 0.5 * (m00.imag - m11.imag)
            kr = 0.5 * ((dr * dr - di * di) + (m01.real * m10.real - m01.imag * m10.imag))
            ki = 0.5 * ((2.0 * dr * di) + (m01.real * m10.imag + m01.imag * m10.real))
            k0 = 0.5 * (dr * dr + di * di) + 0.25 * (
                m01.real * m01.real
                + m01.imag * m01.imag
                + m10.real * m10.real
                + m10.imag * m10.imag
            )
            for k in range(ntheta):
                mm = ar * cth[k] - ai * sth[k]
                r2 = k0 + kr * c2t[k] - ki * s2t[k]
                if r2 < 0.0:
                    r2 = 0.0
                r = math.sqrt(r2)
                am = mm if mm >= 0.0 else -mm
                v = am + r
                if v > bb[0]:
                    bb[0] = v
                    bp[0] = j
                    bt[0] = k
                v = 2.0 * (mm * mm + r2)
                if v > bb[1]:
                    bb[1] = v
                    bp[1] = j
                    bt[1] = k
                v = 2.0 * (am if am > r else r)
                if v > bb[2]:
                    bb[2] = v
                    bp[2] = j
                    bt[2] = k
                for ip in range(nps):
                    p = ps[ip]
                    lp = am + r
                    lm = am - r
                    if lm < 0.0:
                        lm = -lm
                    if p == 3.0:
                        v = lp * lp * lp + lm * lm * lm
                    else:
                        v = lp**p + lm**p
                    if v > bb[3 + ip]:
                        bb[3 + ip] = v
                        bp[3 + ip] = j
                        bt[3 + ip] = k
    best = np.full(kk, -1.0)
    bidx = np.zeros((kk, 3), np.int64)
    for it in range(nt):
        for row in range(kk):
            if slice_best[it, row] > best[row]:
                best[row] = slice_best[it, row]
                bidx[row, 0] = it
                bidx[row, 1] = slice_ph[it, row]
                bidx[row, 2] = slice_th[it, row]
    return best, bidx, slice_best, slice_ph, slice_th


@njit(cache=True, parallel=True, fastmath=True)
def _sphere2_ab(B, C, nt, nphi, ntheta, ps):
    nps = ps.shape[0]
    kk = 3 + nps
    cth, sth, _, _ = _theta_tables(ntheta)
    cph, sph = _phi_tables(nphi)
    dt = (0.5 * math.pi) / (nt - 1)
    slice_best = np.full((nt, kk), -1.0)
    slice_ph = np.zeros((nt, kk), np.int64)
    slice_th = np.zeros((nt, kk), np.int64)
    for it in prange(nt):
        l1 = math.cos(it * dt)
        st_ = math.sin(it * dt)
        bb = slice_best[it]
        bp = slice_ph[it]
        bt = slice_th[it]
        for j in range(nphi):
            l2 = (st_ * cph[j]) + 1j * (st_ * sph[j])
            m00 = l1 * B[0, 0] + l2 * C[0, 0]
            m01 = l1 * B[0, 1] + l2 * C[0, 1]
            m10 = l1 * B[1, 0] + l2 * C[1, 0]
            m11 = l1 * B[1, 1] + l2 * C[1, 1]
            p00 = m00.real
            p11 = m11.real
            p01 = 0.5 * (m01 + m10.conjugate())
            q00 = m00.imag
            q11 = m11.imag
            q01 = 0.5j * (m10.conjugate() - m01)
            for k in range(ntheta):
                al = cth[k]
                be = -sth[k]
                h00 = al * p00 + be * q00
                h11 = al * p11 + be * q11
                b = al * p01 + be * q01
                mid = 0.5 * (h00 + h11)
                hd = 0.5 * (h00 - h11)
                r2 = hd * hd + b.real * b.real + b.imag * b.imag
                r = math.sqrt(r2)
                am = mid if mid >= 0.0 else -mid
                v = am + r
                if v > bb[0]:
                    bb[0] = v
                    bp[0] = j
                    bt[0] = k
                v = 2.0 * (mid * mid + r2)
                if v > bb[1]:
                    bb[1] = v
                    bp[1] = j
                    bt[1] = k
                v = 2.0 * (am if am > r else r)
                if v > bb[2]:
                    bb[2] = v
                    bp[2] = j
                    bt[2] = k
                for ip in range(nps):
                    p = ps[ip]
                    lp = am + r
                    lm = am - r
                    if lm < 0.0:
                        lm = -lm
                    if p == 3.0:
                        v = lp * lp * lp + lm * lm * lm
                    else:
                        v = lp**p + lm**p
                    if v > bb[3 + ip]:
                        bb[3 + ip] = v
                        bp[3 + ip] = j
                        bt[3 + ip] = k
    best = np.full(kk, -1.0)
    bidx = np.zeros((kk, 3), np.int64)
    for it in range(nt):
        for row in range(kk):
            if slice_best[it, row] > best[row]:
                best[row] = slice_best[it, row]
                bidx[row, 0] = it
                bidx[row, 1] = slice_ph[it, row]
                bidx[row, 2] = slice_th[it, row]
    return best, bidx, slice_best, slice_ph, slice_th


@njit(cache=True, parallel=True)
def _sphereN(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, route_ab):
    n = B.shape[0]
    nps = ps.shape[0]
    kk = 3 + nps
    cth, sth, _, _ = _theta_tables(ntheta)
    cph, sph = _phi_tables(nphi)
    dt = (0.5 * math.pi) / (nt - 1)
    slice_best = np.full((nt, kk), -1.0)
    slice_ph = np.zeros((nt, kk), np.int64)
    slice_th = np.zeros((nt, kk), np.int64)
    status = np.zeros(nt, np.int64)
    for it in prange(nt):
        l1 = math.cos(it * dt)
        st_ = math.sin(it * dt)
        M = np.empty((n, n), np.complex128)
        P = np.empty((n, n), np.complex128)
        Q = np.empty((n, n), np.complex128)
        H = np.empty((n, n), np.complex128)
        ev = np.empty(n)
        buf = np.empty(kk)
        bb = slice_best[it]
        bp = slice_ph[it]
        bt = slice_th[it]
        for j in range(nphi):
            l2 = (st_ * cph[j]) + 1j * (st_ * sph[j])
            for a in range(n):
                for b in range(n):
                    M[a, b] = l1 * B[a, b] + l2 * C[a, b]
            if route_ab:
                for a in range(n):
                    for b in range(n):
                        P[a, b] = 0.5 * (M[a, b] + M[b, a].conjugate())
                        Q[a, b] = 0.5j * (M[b, a].conjugate() - M[a, b])
            for k in range(ntheta):
                if route_ab:
                    al = cth[k]
                    be = -sth[k]
                    for a in range(n):
                        for b in range(n):
                            H[a, b] = al * P[a, b] + be * Q[a, b]
                else:
                    e = cth[k] + 1j * sth[k]
                    for a in range(n):
                        H[a, a] = (e * M[a, a]).real + 0.0j
                        for b in range(a + 1, n):
                            x = 0.5 * (e * M[a, b] + (e * M[b, a]).conjugate())
                            H[a, b] = x
                            H[b, a] = x.conjugate()
                if n == 3:
                    _eig3_inplace(H, ev)
                else:
                    res = _jacobi_inplace(H, ev, rel_tol, max_sweeps)
                    if res > rel_tol:
                        status[it] = 1
                _fill_buf_evals(buf, ev, ps)
                for row in range(kk):
                    if buf[row] > bb[row]:
                        bb[row] = buf[row]
                        bp[row] = j
                        bt[row] = k
    best = np.full(kk, -1.0)
    bidx = np.zeros((kk, 3), np.int64)
    bad = 0
    for it in range(nt):
        if status[it] != 0:
            bad = 1
        for row in range(kk):
            if slice_best[it, row] > best[row]:
                best[row] = slice_best[it, row]
                bidx[row, 0] = it
                bidx[row, 1] = slice_ph[it, row]
                bidx[row, 2] = slice_th[it, row]
    return best, bidx, bad, slice_best, slice_ph, slice_th


@njit(cache=True, fastmath=True)
def _theta_scan2(T, ntheta, ps):
    nps = ps.shape[0]
    kk = 3 + nps
    cth, sth, c2t, s2t = _theta_tables(ntheta)
    m00 = T[0, 0]
    m01 = T[0, 1]
    m10 = T[1, 0]
    m11 = T[1, 1]
    ar = 0.5 * (m00.real + m11.real)
    ai = 0.5 * (m00.imag + m11.imag)
    dr = 0.5 * (m00.real - m11.real)
    di = 0.5 * (m00.imag - m11.imag)
    kr = 0.5 * ((dr * dr - di * di) + (m01.real * m10.real - m01.imag * m10.imag))
    ki = 0.5 * ((2.0 * dr * di) + (m01.real * m10.imag + m01.imag * m10.real))
    k0 = 0.5 * (dr * dr + di * di) + 0.25 * (
        m01.real * m01.real + m01.imag * m01.imag + m10.real * m10.real + m10.imag * m10.imag
    )
    best = np.full(kk, -1.0)
    bidx = np.zeros(kk, np.int64)
    buf = np.empty(kk)
    for k in range(ntheta):
        mm = ar * cth[k] - ai * sth[k]
        r2 = k0 + kr * c2t[k] - ki * s2t[k]
        if r2 < 0.0:
            r2 = 0.0
        r = math.sqrt(r2)
        am = mm if mm >= 0.0 else -mm
        buf[0] = am + r
        buf[1] = 2.0 * (mm * mm + r2)
        buf[2] = 2.0 * (am if am > r else r)
        for ip in range(nps):
            p = ps[ip]
            lp = am + r
            lm = am - r
            if lm < 0.0:
                lm = -lm
            if p == 3.0:
                buf[3 + ip] = lp * lp * lp + lm * lm * lm
            else:
                buf[3 + ip] = lp**p + lm**p
        for row in range(kk):
            if buf[row] > best[row]:
                best[row] = buf[row]
                bidx[row] = k
    return best, bidx


@njit(cache=True)
def _theta_scanN(T, ntheta, ps, rel_tol, max_sweeps):
    n = T.shape[0]
    nps = ps.shape[0]
    kk = 3 + nps
    cth, sth, _, _ = _theta_tables(ntheta)
    H = np.empty((n, n), np.complex128)
    ev = np.empty(n)
    buf = np.empty(kk)
    best = np.full(kk, -1.0)
    bidx = np.zeros(kk, np.int64)
    bad = 0
    for k in range(ntheta):
        e = cth[k] + 1j * sth[k]
        for a in range(n):
            H[a, a] = (e * T[a, a]).real + 0.0j
            for b in range(a + 1, n):
                x = 0.5 * (e * T[a, b] + (e * T[b, a]).conjugate())
                H[a, b] = x
                H[b, a] = x.conjugate()
        if n == 3:
            _eig3_inplace(H, ev)
        else:
            res = _jacobi_inplace(H, ev, rel_tol, max_sweeps)
            if res > rel_tol:
                bad = 1
        _fill_buf_evals(buf, ev, ps)
        for row in range(kk):
            if buf[row] > best[row]:
                best[row] = buf[row]
                bidx[row] = k
    return best, bidx, bad


@njit(cache=True)
def _norm_from_evals_njit(ev, code, p):
    n = ev.shape[0]
    if code == 0:
        mx = 0.0
        for i in range(n):
            a = abs(ev[i])
            if a > mx:
                mx = a
        return mx
    if code == 1:
        s = 0.0
        for i in range(n):
            s += ev[i] * ev[i]
        return math.sqrt(s)
    if code == 2:
        s = 0.0
        for i in range(n):
            s += abs(ev[i])
        return s
    s = 0.0
    for i in range(n):
        s += abs(ev[i]) ** p
    return s ** (1.0 / p)


@njit(cache=True)
def _eval_hermitian(H, ev, code, p, rel_tol, max_sweeps):
    n = H.shape[0]
    if n == 2:
        h00 = H[0, 0].real
        h11 = H[1, 1].real
        b = H[0, 1]
        mid = 0.5 * (h00 + h11)
        rad = math.sqrt(0.25 * (h00 - h11) * (h00 - h11) + b.real * b.real + b.imag * b.imag)
        ev[0] = mid - rad
        ev[1] = mid + rad
        return _norm_from_evals_njit(ev, code, p)
    if n == 3:
        _eig3_inplace(H, ev)
        return _norm_from_evals_njit(ev, code, p)
    res = _jacobi_inplace(H, ev, rel_tol, max_sweeps)
    if res > rel_tol:
        return -1.0
    return _norm_from_evals_njit(ev, code, p)


@njit(cache=True)
def _eval_single_njit(T, theta, code, p, rel_tol, max_sweeps):
    n = T.shape[0]
    e = math.cos(theta) + 1j * math.sin(theta)
    H = np.empty((n, n), np.complex128)
    ev = np.empty(n)
    for a in range(n):
        H[a, a] = (e * T[a, a]).real + 0.0j
        for b in range(a + 1, n):
            x = 0.5 * (e * T[a, b] + (e * T[b, a]).conjugate())
            H[a, b] = x
            H[b, a] = x.conjugate()
    return _eval_hermitian(H, ev, code, p, rel_tol, max_sweeps)


@njit(cache=True)
def _eval_pair_njit(B, C, t, phi, theta, code, p, rel_tol, max_sweeps):
    n = B.shape[0]
    l1 = math.cos(t)
    l2 = math.sin(t) * (math.cos(phi) + 1j * math.sin(phi))
    M = np.empty((n, n), np.complex128)
    for a in range(n):
        for b in range(n):
            M[a, b] = l1 * B[a, b] + l2 * C[a, b]
    return _eval_single_njit(M, theta, code, p, rel_tol, max_sweeps)


@njit(cache=True)
def _eval_pair_ab_njit(B, C, t, phi, theta, code, p, rel_tol, max_sweeps):
    n = B.shape[0]
    l1 = math.cos(t)
    l2 = math.sin(t) * (math.cos(phi) + 1j * math.sin(phi))
    al = math.cos(theta)
    be = -math.sin(theta)
    H = np.empty((n, n), np.complex128)
    ev = np.empty(n)
    for a in range(n):
        for b in range(n):
            mab = l1 * B[a, b] + l2 * C[a, b]
            mba = l1 * B[b, a] + l2 * C[b, a]
            pab = 0.5 * (mab + mba.conjugate())
            qab = 0.5j * (mba.conjugate() - mab)
            H[a, b] = al * pab + be * qab
    return _eval_hermitian(H, ev, code, p, rel_tol, max_sweeps)


@njit(cache=True)
def _hs_sphere_njit(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, nt, nphi):
    dt = (0.5 * math.pi) / (nt - 1)
    dphi = 2.0 * math.pi / nphi
    best = -1.0
    bit = 0
    bip = 0
    for it in range(nt):
        l1 = math.cos(it * dt)
        st_ = math.sin(it * dt)
        for j in range(nphi):
            l2 = st_ * (math.cos(j * dphi) + 1j * math.sin(j * dphi))
            hs_sq = l1 * l1 * nb2 + (l2.real * l2.real + l2.imag * l2.imag) * nc2
            hs_sq += 2.0 * (l1 * l2 * tr_bsc).real
            tr_m2 = l1 * l1 * tr_b2 + l2 * l2 * tr_c2 + 2.0 * l1 * l2 * tr_bc
            v = 0.5 * hs_sq + 0.5 * abs(tr_m2)
            if v > best:
                best = v
                bit = it
                bip = j
    return best, bit, bip


@njit(cache=True, parallel=True)
def _oracle_njit(B, C, X):
    m, n = X.shape
    out = np.empty(m)
    for i in prange(m):
        qb = 0.0 + 0.0j
        qc = 0.0 + 0.0j
        for a in range(n):
            sb = 0.0 + 0.0j
            sc = 0.0 + 0.0j
            for b in range(n):
                sb += B[a, b] * X[i, b]
                sc += C[a, b] * X[i, b]
            xc = X[i, a].conjugate()
            qb += xc * sb
            qc += xc * sc
        out[i] = math.sqrt(
            qb.real * qb.real + qb.imag * qb.imag + qc.real * qc.real + qc.imag * qc.imag
        )
    return out


# ---------------------------------------------------------------------------
# python-level wrappers matching the numpy backend API


def _c128(A):
    return np.ascontiguousarray(A, dtype=np.complex128)


def _finalize(vals, ps):
    out = np.array(vals, dtype=np.float64, copy=True)
    out[1] = math.sqrt(max(float(vals[1]), 0.0))
    for i, p in enumerate(ps):
        out[3 + i] = max(float(vals[3 + i]), 0.0) ** (1.0 / p)
    return out


def jacobi_eigvals(H, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    A = _c128(H).copy()
    ev = np.empty(A.shape[0])
    residual = _jacobi_inplace(A, ev, rel_tol, max_sweeps)
    return np.sort(ev), bool(residual <= rel_tol), float(residual)


def jacobi_eigvals_batch(Hs, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    Hs = _c128(Hs)
    evals, residuals = _jacobi_batch_njit(Hs, rel_tol, max_sweeps)
    worst = float(residuals.max(initial=0.0))
    return evals, bool(worst <= rel_tol), worst


def theta_scan(T, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    T = _c128(T)
    ps = np.asarray(ps, dtype=np.float64)
    if T.shape[0] == 2:
        best, bidx = _theta_scan2(T, ntheta, ps)
    else:
        best, bidx, bad = _theta_scanN(T, ntheta, ps, rel_tol, max_sweeps)
        if bad:
            raise RuntimeError("jacobi failed to converge inside theta scan")
    return _finalize(best, ps), bidx


def sphere_scan(B, C, nt, nphi, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    B = _c128(B)
    C = _c128(C)
    ps = np.asarray(ps, dtype=np.float64)
    if B.shape[0] == 2:
        best, bidx, sv, sp, st = _sphere2_direct(B, C, nt, nphi, ntheta, ps)
    else:
        best, bidx, bad, sv, sp, st = _sphereN(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, False)
        if bad:
            raise RuntimeError("jacobi failed to converge inside sphere scan")
    return _finalize(best, ps), bidx, (sv, sp, st)


def sphere_scan_ab(B, C, nt, nphi, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    B = _c128(B)
    C = _c128(C)
    ps = np.asarray(ps, dtype=np.float64)
    if B.shape[0] == 2:
        best, bidx, sv, sp, st = _sphere2_ab(B, C, nt, nphi, ntheta, ps)
    else:
        best, bidx, bad, sv, sp, st = _sphereN(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, True)
        if bad:
            raise RuntimeError("jacobi failed to converge inside sphere scan")
    return _finalize(best, ps), bidx, (sv, sp, st)


def _checked(value):
    if value < 0.0:
        raise RuntimeError("jacobi failed to converge inside point evaluation")
    return float(value)


def eval_single(T, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    return _checked(_eval_single_njit(_c128(T), theta, code, p, rel_tol, max_sweeps))


def eval_pair(B, C, t, phi, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    return _checked(_eval_pair_njit(_c128(B), _c128(C), t, phi, theta, code, p, rel_tol, max_sweeps))


def eval_pair_ab(B, C, t, phi, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    return _checked(
        _eval_pair_ab_njit(_c128(B), _c128(C), t, phi, theta, code, p, rel_tol, max_sweeps)
    )


def hs_sphere_scan(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, nt, nphi):
    best, it, iphi = _hs_sphere_njit(
        complex(tr_b2), complex(tr_c2), complex(tr_bc), float(nb2), float(nc2), complex(tr_bsc),
        nt, nphi,
    )
    return float(best), int(it), int(iphi)


def eval_hs_point(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, t, phi):
    l1 = math.cos(t)
    l2 = math.sin(t) * complex(math.cos(phi), math.sin(phi))
    hs_sq = l1 * l1 * nb2 + abs(l2) ** 2 * nc2 + 2.0 * (l1 * l2 * tr_bsc).real
    tr_m2 = l1 * l1 * tr_b2 + l2 * l2 * tr_c2 + 2.0 * l1 * l2 * tr_bc
    return float(0.5 * hs_sq + 0.5 * abs(tr_m2))


def oracle_values(B, C, X):
    return _oracle_njit(_c128(B), _c128(C), _c128(X))

"""Pure-numpy kernel backend.

Vectorized reference implementations of the hot kernels: the cyclic complex
Jacobi eigensolver (batched across matrices) and the angle-grid scans behind
the radius computations.  The numba backend mirrors these exactly; grid
iteration order and tie-breaking (smallest t, then phi, then theta) match so
both backends return the same argmax on ties.

Norm codes used throughout: 0 = op, 1 = hs, 2 = trace, 3 = schatten(p).
Scan outputs are stacked per norm as rows [op, hs, trace, *schatten(ps)].
"""

from __future__ import annotations

import math

import numpy as np

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

_PHI_CHUNK = 64


def _off_mass_sq(A: np.ndarray) -> np.ndarray:
    # sum strictly off-diagonal entries; subtracting the diagonal from the
    # total would cancel catastrophically once the matrix is near diagonal
    d = np.abs(A) ** 2
    idx = np.arange(A.shape[1])
    d[:, idx, idx] = 0.0
    return d.sum(axis=(1, 2))


def jacobi_eigvals_batch(Hs, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic complex Jacobi on a stack of Hermitian matrices.

    Returns (evals ascending (m, n), all_converged, max_rel_residual).
    Rotations sweep pivots (p, q) in row-major order; a pivot is rotated only
    while its lane's off-diagonal mass exceeds rel_tol * frobenius.
    """
    A = np.array(Hs, dtype=np.complex128, copy=True)
    m, n, _ = A.shape
    if n == 1:
        return A[:, 0, 0].real.reshape(m, 1).copy(), True, 0.0
    fro_sq = (np.abs(A) ** 2).reshape(m, -1).sum(axis=1)
    thresh_sq = (rel_tol * rel_tol) * fro_sq
    skip_sq = thresh_sq / (n * (n - 1))
    off_sq = _off_mass_sq(A)
    active = off_sq > thresh_sq
    sweeps = 0
    while active.any() and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                # snapshot pivot data: slices of A are views and the column
                # updates below would otherwise alias them
                apq = A[:, p, q].copy()
                mag_sq = apq.real**2 + apq.imag**2
                rot = active & (mag_sq > skip_sq) & (mag_sq > 0.0)
                if not rot.any():
                    continue
                mag = np.sqrt(np.where(rot, mag_sq, 1.0))
                app = A[:, p, p].real.copy()
                aqq = A[:, q, q].real.copy()
                tau = (app - aqq) / (2.0 * mag)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = -sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                u = apq / mag
                sigma = np.where(rot, s * u, 0.0)
                c = np.where(rot, c, 1.0)
                s = np.where(rot, s, 0.0)
                # columns p, q (A <- A R), then rows (A <- R* A)
                colp = A[:, :, p].copy()
                colq = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * colp - sigma.conj()[:, None] * colq
                A[:, :, q] = sigma[:, None] * colp + c[:, None] * colq
                rowp = A[:, p, :].copy()
                rowq = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * rowp - sigma[:, None] * rowq
                A[:, q, :] = sigma.conj()[:, None] * rowp + c[:, None] * rowq
                new_app = c * c * app - 2.0 * s * c * mag + s * s * aqq
                new_aqq = s * s * app + 2.0 * s * c * mag + c * c * aqq
                A[:, p, p] = np.where(rot, new_app, app)
                A[:, q, q] = np.where(rot, new_aqq, aqq)
                zero = np.where(rot, 0.0 + 0.0j, apq)
                A[:, p, q] = zero
                A[:, q, p] = zero.conj()
        sweeps += 1
        off_sq = _off_mass_sq(A)
        active = off_sq > thresh_sq
    idx = np.arange(n)
    evals = np.sort(A[:, idx, idx].real, axis=1)
    converged = not active.any()
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.sqrt(np.where(fro_sq > 0.0, off_sq / fro_sq, 0.0))
    return evals, converged, float(rel.max(initial=0.0))


def jacobi_eigvals(H, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    evals, converged, residual = jacobi_eigvals_batch(
        np.asarray(H, dtype=np.complex128)[None, :, :], rel_tol, max_sweeps
    )
    return evals[0], converged, residual


def jacobi_eigensystem(H, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues and eigenvectors via the same rotation sequence.

    Returns (evals ascending, V with V[:, k] the k-th eigenvector).  Cold
    path: used for reconstruction checks, not inside grid scans.
    """
    A = np.array(H, dtype=np.complex128, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    if n == 1:
        return A[:, 0].real.copy(), V
    fro_sq = float(np.sum(np.abs(A) ** 2))
    thresh_sq = (rel_tol * rel_tol) * fro_sq
    skip_sq = thresh_sq / (n * (n - 1))

    def off_sq():
        d = np.abs(A) ** 2
        np.fill_diagonal(d, 0.0)
        return float(d.sum())

    sweeps = 0
    while off_sq() > thresh_sq and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag * mag <= skip_sq or mag == 0.0:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (app - aqq) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = -sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sigma = s * (apq / mag)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - np.conj(sigma) * colq
                A[:, q] = sigma * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - sigma * rowq
                A[q, :] = np.conj(sigma) * rowp + c * rowq
                A[p, p] = c * c * app - 2.0 * s * c * mag + s * s * aqq
                A[q, q] = s * s * app + 2.0 * s * c * mag + c * c * aqq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - np.conj(sigma) * vq
                V[:, q] = sigma * vp + c * vq
        sweeps += 1
    if off_sq() > thresh_sq:
        raise RuntimeError("jacobi eigensystem did not converge")
    evals = np.diag(A).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


# ---------------------------------------------------------------------------
# grid tables


def _theta_tables(ntheta: int):
    th = np.arange(ntheta) * (math.pi / ntheta)
    return np.cos(th), np.sin(th), np.cos(2.0 * th), np.sin(2.0 * th)


def _t_values(nt: int) -> np.ndarray:
    return np.linspace(0.0, math.pi / 2.0, nt)


def _phi_values(nphi: int) -> np.ndarray:
    return np.arange(nphi) * (2.0 * math.pi / nphi)


# ---------------------------------------------------------------------------
# closed-form 2x2 machinery
#
# For n = 2 the Hermitian pencil Re(e^{i theta} M) has eigenvalues
# m(theta) +- r(theta) with
#   m = Re(e^{i theta} (M00+M11)/2)
#   r^2 = K0 + Re(e^{2 i theta} K),   K = ((D^2 + M01*M10)) / 2,
#   K0 = |D|^2/2 + (|M01|^2 + |M10|^2)/4,   D = (M00-M11)/2
# which turns every spectral norm of the pencil into table lookups.


def _coeffs2(m00, m01, m10, m11):
    ar = 0.5 * (m00.real + m11.real)
    ai = 0.5 * (m00.imag + m11.imag)
    dr = 0.5 * (m00.real - m11.real)
    di = 0.5 * (m00.imag - m11.imag)
    kr = 0.5 * ((dr * dr - di * di) + (m01.real * m10.real - m01.imag * m10.imag))
    ki = 0.5 * ((2.0 * dr * di) + (m01.real * m10.imag + m01.imag * m10.real))
    k0 = 0.5 * (dr * dr + di * di) + 0.25 * (
        m01.real**2 + m01.imag**2 + m10.real**2 + m10.imag**2
    )
    return ar, ai, k0, kr, ki


def _accumulators2(m, r2, ps):
    """Stack raw per-norm objectives for eigenvalues m +- sqrt(r2)."""
    r2c = np.maximum(r2, 0.0)
    r = np.sqrt(r2c)
    am = np.abs(m)
    rows = [am + r, 2.0 * (m * m + r2c), 2.0 * np.maximum(am, r)]
    for p in ps:
        lp = am + r
        lm = np.abs(am - r)
        if p == 3.0:
            rows.append(lp * lp * lp + lm * lm * lm)
        else:
            rows.append(lp**p + lm**p)
    return np.stack(rows)


def _accumulators_from_evals(ev, ps):
    """Same raw objectives from a full eigenvalue array (..., n)."""
    a = np.abs(ev)
    rows = [a.max(axis=-1), (ev * ev).sum(axis=-1), a.sum(axis=-1)]
    for p in ps:
        if p == 3.0:
            rows.append((a * a * a).sum(axis=-1))
        else:
            rows.append((a**p).sum(axis=-1))
    return np.stack(rows)


def _finalize(vals: np.ndarray, ps) -> np.ndarray:
    """Convert raw accumulators to norm values: hs sqrt, schatten p-th root."""
    out = np.array(vals, dtype=np.float64, copy=True)
    out[1] = np.sqrt(np.maximum(vals[1], 0.0))
    for i, p in enumerate(ps):
        out[3 + i] = np.maximum(vals[3 + i], 0.0) ** (1.0 / p)
    return out


def _norm_from_evals(ev: np.ndarray, code: int, p: float) -> float:
    a = np.abs(ev)
    if code == 0:
        return float(a.max())
    if code == 1:
        return float(math.sqrt(float((ev * ev).sum())))
    if code == 2:
        return float(a.sum())
    return float((a**p).sum() ** (1.0 / p))


def _eig2(h00: float, h11: float, b: complex):
    mid = 0.5 * (h00 + h11)
    rad = math.sqrt(0.25 * (h00 - h11) ** 2 + b.real * b.real + b.imag * b.imag)
    return np.array([mid - rad, mid + rad])


def _hermitian_part(E: np.ndarray) -> np.ndarray:
    return 0.5 * (E + np.conj(np.swapaxes(E, -1, -2)))


def _eig3_stack(H: np.ndarray) -> np.ndarray:
    """Exact trigonometric eigenvalues of a stack of 3x3 Hermitian matrices.

    Scan-path specialization; the public eigensolver remains cyclic Jacobi.
    """
    a = H[..., 0, 0].real
    b = H[..., 1, 1].real
    c = H[..., 2, 2].real
    f = H[..., 0, 1]
    g = H[..., 0, 2]
    h = H[..., 1, 2]
    q = (a + b + c) / 3.0
    aa = a - q
    bb = b - q
    cc = c - q
    ff = f.real**2 + f.imag**2
    gg = g.real**2 + g.imag**2
    hh = h.real**2 + h.imag**2
    p2 = (aa * aa + bb * bb + cc * cc + 2.0 * (ff + gg + hh)) / 6.0
    p = np.sqrt(p2)
    det = aa * (bb * cc - hh)
    det -= (f * (f.conj() * cc - h * g.conj())).real
    det += (g * (f.conj() * h.conj() - bb * g.conj())).real
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(p2 > 0.0, det / np.maximum(2.0 * p2 * p, 1e-300), 0.0)
    r = np.clip(r, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    e0 = q + 2.0 * p * np.cos(phi)
    e2 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    e1 = 3.0 * q - e0 - e2
    return np.stack([e0, e1, e2], axis=-1)


def _eigvals_stack(H: np.ndarray, rel_tol, max_sweeps) -> np.ndarray:
    shape = H.shape[:-2]
    n = H.shape[-1]
    if n == 3:
        return _eig3_stack(H)
    flat = H.reshape(-1, n, n)
    evals, converged, residual = jacobi_eigvals_batch(flat, rel_tol, max_sweeps)
    if not converged:
        raise RuntimeError(f"jacobi failed to converge (residual {residual:.3e})")
    return evals.reshape(*shape, n)


# ---------------------------------------------------------------------------
# scans


def theta_scan(T, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Max over the theta grid of every norm of Re(e^{i theta} T).

    Returns (vals (3 + len(ps),), idx (3 + len(ps),) of best theta index).
    """
    T = np.asarray(T, dtype=np.complex128)
    n = T.shape[0]
    ps = np.asarray(ps, dtype=np.float64)
    cth, sth, c2th, s2th = _theta_tables(ntheta)
    if n == 2:
        ar, ai, k0, kr, ki = _coeffs2(T[0, 0], T[0, 1], T[1, 0], T[1, 1])
        m = ar * cth - ai * sth
        r2 = k0 + kr * c2th - ki * s2th
        vals = _accumulators2(m, r2, ps)
    else:
        e = cth + 1j * sth
        H = _hermitian_part(e[:, None, None] * T[None, :, :])
        ev = _eigvals_stack(H, rel_tol, max_sweeps)
        vals = _accumulators_from_evals(ev, ps)
    idx = np.argmax(vals, axis=1)
    best = vals[np.arange(vals.shape[0]), idx]
    return _finalize(best, ps), idx.astype(np.int64)


def _pair_grid_values(B, C, l1, l2, cth, sth, c2th, s2th, ps, rel_tol, max_sweeps):
    """Raw accumulator grids (k, nphi, ntheta) for M = l1 B + l2 C per phi."""
    n = B.shape[0]
    if n == 2:
        m00 = l1 * B[0, 0] + l2 * C[0, 0]
        m01 = l1 * B[0, 1] + l2 * C[0, 1]
        m10 = l1 * B[1, 0] + l2 * C[1, 0]
        m11 = l1 * B[1, 1] + l2 * C[1, 1]
        ar, ai, k0, kr, ki = _coeffs2(m00, m01, m10, m11)
        m = ar[:, None] * cth[None, :] - ai[:, None] * sth[None, :]
        r2 = k0[:, None] + kr[:, None] * c2th[None, :] - ki[:, None] * s2th[None, :]
        return _accumulators2(m, r2, ps)
    e = cth + 1j * sth
    M = l1 * B[None, :, :] + l2[:, None, None] * C[None, :, :]
    nphi = l2.shape[0]
    ntheta = cth.shape[0]
    out = np.empty((3 + len(ps), nphi, ntheta))
    for lo in range(0, nphi, _PHI_CHUNK):
        hi = min(lo + _PHI_CHUNK, nphi)
        Mc = M[lo:hi]
        H = _hermitian_part(e[None, :, None, None] * Mc[:, None, :, :])
        ev = _eigvals_stack(H, rel_tol, max_sweeps)
        out[:, lo:hi, :] = _accumulators_from_evals(ev, ps)
    return out


def _pair_grid_values_ab(B, C, l1, l2, cth, sth, ps, rel_tol, max_sweeps):
    """Alternative route: H = alpha Re(M) + beta Im(M), alpha = cos, beta = -sin."""
    n = B.shape[0]
    M = l1 * B[None, :, :] + l2[:, None, None] * C[None, :, :]
    P = _hermitian_part(M)
    Q = 0.5j * (np.conj(np.swapaxes(M, -1, -2)) - M)
    nphi = l2.shape[0]
    ntheta = cth.shape[0]
    if n == 2:
        h00 = cth[None, :] * P[:, 0, 0].real[:, None] - sth[None, :] * Q[:, 0, 0].real[:, None]
        h11 = cth[None, :] * P[:, 1, 1].real[:, None] - sth[None, :] * Q[:, 1, 1].real[:, None]
        b = cth[None, :] * P[:, 0, 1][:, None] - sth[None, :] * Q[:, 0, 1][:, None]
        mid = 0.5 * (h00 + h11)
        rad_sq = 0.25 * (h00 - h11) ** 2 + b.real**2 + b.imag**2
        return _accumulators2(mid, rad_sq, ps)
    out = np.empty((3 + len(ps), nphi, ntheta))
    for lo in range(0, nphi, _PHI_CHUNK):
        hi = min(lo + _PHI_CHUNK, nphi)
        H = (
            cth[None, :, None, None] * P[lo:hi, None, :, :]
            - sth[None, :, None, None] * Q[lo:hi, None, :, :]
        )
        ev = _eigvals_stack(H, rel_tol, max_sweeps)
        out[:, lo:hi, :] = _accumulators_from_evals(ev, ps)
    return out


def _sphere_scan_impl(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, route):
    B = np.ascontiguousarray(B, dtype=np.complex128)
    C = np.ascontiguousarray(C, dtype=np.complex128)
    ps = np.asarray(ps, dtype=np.float64)
    k = 3 + len(ps)
    ts = _t_values(nt)
    phis = _phi_values(nphi)
    cth, sth, c2th, s2th = _theta_tables(ntheta)
    eiphi = np.exp(1j * phis)
    best = np.full(k, -1.0)
    bidx = np.zeros((k, 3), dtype=np.int64)
    slice_vals = np.full((nt, k), -1.0)
    slice_phi = np.zeros((nt, k), dtype=np.int64)
    slice_theta = np.zeros((nt, k), dtype=np.int64)
    for it in range(nt):
        l1 = math.cos(ts[it])
        l2 = math.sin(ts[it]) * eiphi
        if route == "direct":
            vals = _pair_grid_values(B, C, l1, l2, cth, sth, c2th, s2th, ps, rel_tol, max_sweeps)
        else:
            vals = _pair_grid_values_ab(B, C, l1, l2, cth, sth, ps, rel_tol, max_sweeps)
        flat = vals.reshape(k, -1)
        pos = np.argmax(flat, axis=1)
        v = flat[np.arange(k), pos]
        slice_vals[it] = v
        slice_phi[it] = pos // ntheta
        slice_theta[it] = pos % ntheta
        for row in range(k):
            if v[row] > best[row]:
                best[row] = v[row]
                bidx[row, 0] = it
                bidx[row, 1] = pos[row] // ntheta
                bidx[row, 2] = pos[row] % ntheta
    return _finalize(best, ps), bidx, (slice_vals, slice_phi, slice_theta)


def sphere_scan(B, C, nt, nphi, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Fused multi-norm grid stage of the pair radius.

    Maximizes every norm of Re(e^{i theta}(cos(t) B + sin(t) e^{i phi} C))
    over the (t, phi, theta) product grid.  Returns (vals, idx (k, 3),
    per-t-slice bests) with rows ordered [op, hs, trace, *schatten(ps)].
    """
    return _sphere_scan_impl(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, "direct")


def sphere_scan_ab(B, C, nt, nphi, ntheta, ps, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Same supremum through the cartesian-parts parameterization."""
    return _sphere_scan_impl(B, C, nt, nphi, ntheta, ps, rel_tol, max_sweeps, "ab")


# ---------------------------------------------------------------------------
# single-point evaluations (refinement objectives)


def _pair_matrix(B, C, t, phi):
    return math.cos(t) * B + (math.sin(t) * complex(math.cos(phi), math.sin(phi))) * C


def _eig_point(H, rel_tol, max_sweeps):
    n = H.shape[0]
    if n == 2:
        return _eig2(H[0, 0].real, H[1, 1].real, complex(H[0, 1]))
    if n == 3:
        return _eig3_stack(H[None, :, :])[0]
    ev, converged, residual = jacobi_eigvals(H, rel_tol, max_sweeps)
    if not converged:
        raise RuntimeError(f"jacobi failed to converge (residual {residual:.3e})")
    return ev


def eval_single(T, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    e = complex(math.cos(theta), math.sin(theta))
    H = 0.5 * (e * T + np.conj((e * T).T))
    return _norm_from_evals(_eig_point(H, rel_tol, max_sweeps), code, p)


def eval_pair(B, C, t, phi, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    return eval_single(_pair_matrix(B, C, t, phi), theta, code, p, rel_tol, max_sweeps)


def eval_pair_ab(B, C, t, phi, theta, code, p, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    M = _pair_matrix(B, C, t, phi)
    P = 0.5 * (M + np.conj(M.T))
    Q = 0.5j * (np.conj(M.T) - M)
    H = math.cos(theta) * P - math.sin(theta) * Q
    return _norm_from_evals(_eig_point(H, rel_tol, max_sweeps), code, p)


# ---------------------------------------------------------------------------
# hs closed-form sphere scan (no theta loop)


def _hs_value_sq(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, l1, l2):
    hs_sq = l1 * l1 * nb2 + np.abs(l2) ** 2 * nc2 + 2.0 * (l1 * l2 * tr_bsc).real
    tr_m2 = l1 * l1 * tr_b2 + l2 * l2 * tr_c2 + 2.0 * l1 * l2 * tr_bc
    return 0.5 * hs_sq + 0.5 * np.abs(tr_m2)


def hs_sphere_scan(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, nt, nphi):
    """Maximize the closed-form hs radius over the (t, phi) sphere grid.

    Inputs are the precomputed pair invariants tr(B^2), tr(C^2), tr(BC),
    ||B||_2^2, ||C||_2^2 and tr(B* C).  Returns (best squared value, it, iphi).
    """
    ts = _t_values(nt)
    phis = _phi_values(nphi)
    l1 = np.cos(ts)[:, None]
    l2 = np.sin(ts)[:, None] * np.exp(1j * phis)[None, :]
    vals = _hs_value_sq(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, l1, l2)
    pos = int(np.argmax(vals))
    return float(vals.flat[pos]), pos // nphi, pos % nphi


def eval_hs_point(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, t, phi):
    l1 = math.cos(t)
    l2 = math.sin(t) * complex(math.cos(phi), math.sin(phi))
    return float(_hs_value_sq(tr_b2, tr_c2, tr_bc, nb2, nc2, tr_bsc, l1, l2))


# ---------------------------------------------------------------------------
# unit-vector oracle


def oracle_values(B, C, X):
    """sqrt(|<Bx,x>|^2 + |<Cx,x>|^2) for each row x of X (rows unit vectors)."""
    Xc = X.conj()
    qb = np.einsum("nj,nj->n", Xc, X @ B.T)
    qc = np.einsum("nj,nj->n", Xc, X @ C.T)
    return np.sqrt(np.abs(qb) ** 2 + np.abs(qc) ** 2)

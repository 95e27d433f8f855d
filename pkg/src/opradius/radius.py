"""Variational radius computations.

``w_N`` maximizes N(Re(e^{i theta} T)) over a theta grid with golden-section
refinement.  ``w_Ne`` extends this to pairs: the supremum over the unit ball
of (lambda1, lambda2) reduces to the sphere lambda1 = cos t,
lambda2 = sin t e^{i phi} (homogeneity plus absorption of a common phase into
theta), scanned on a (t, phi, theta) product grid and polished by
coordinate-wise golden-section rounds.  All returned values are certified
lower estimates of the true suprema; callers that compare against exact lower
bounds escalate grids before declaring a violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend, matrices
from .norms import NormDescriptor, OP, kernel_code, parse_norm
from .sampling import SplitMix64

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

_MIN_GRID = 8
_MAX_REFINE_ROUNDS = 16

ORACLE_RESTARTS = 64


@dataclass(frozen=True)
class RadiusOptions:
    """Grid sizes and refinement schedule for the sup optimizations."""

    theta_grid: int = 512
    t_grid: int = 129
    phi_grid: int = 256
    refine_passes: int = 3
    refine_tol: float = 1e-9
    escalation_rounds: int = 2

    def __post_init__(self):
        for name in ("theta_grid", "t_grid", "phi_grid"):
            if getattr(self, name) < _MIN_GRID:
                raise ValueError(f"{name} must be at least {_MIN_GRID}")
        if not self.refine_tol > 0.0:
            raise ValueError("refine_tol must be positive")
        if self.refine_passes < 1:
            raise ValueError("refine_passes must be at least 1")
        if self.escalation_rounds < 0:
            raise ValueError("escalation_rounds must be nonnegative")

    def scaled(self, factor: int) -> "RadiusOptions":
        """Copy with all grids multiplied by ``factor`` (escalation step)."""
        return RadiusOptions(
            theta_grid=self.theta_grid * factor,
            t_grid=self.t_grid * factor,
            phi_grid=self.phi_grid * factor,
            refine_passes=self.refine_passes,
            refine_tol=self.refine_tol,
            escalation_rounds=self.escalation_rounds,
        )


@dataclass(frozen=True)
class RadiusResult:
    value: float
    theta: float
    t: float
    phi: float
    refined: bool = True
    escalations_used: int = 0

    @property
    def argmax(self) -> dict:
        return {"theta": self.theta, "t": self.t, "phi": self.phi}

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "argmax": {"theta": self.theta, "t": self.t, "phi": self.phi},
            "escalations_used": self.escalations_used,
        }

    def with_escalations(self, used: int) -> "RadiusResult":
        return RadiusResult(self.value, self.theta, self.t, self.phi, self.refined, used)


def _golden_max(f, lo: float, hi: float, xtol: float):
    """Golden-section maximization on [lo, hi]; returns (x, f(x)) best seen."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = f(c)
    fd = f(d)
    if fc >= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    while (b - a) > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def _norm_rows(norms: list[NormDescriptor]):
    """Kernel schatten exponents and per-descriptor row indices."""
    ps: list[float] = []
    rows: dict[str, int] = {}
    for nd in norms:
        code, p = kernel_code(nd)
        if code == 3:
            if p not in ps:
                ps.append(p)
            rows[nd.id] = 3 + ps.index(p)
        else:
            rows[nd.id] = code
    return np.asarray(ps, dtype=np.float64), rows


def _wrap(x: float, period: float) -> float:
    return x - period * math.floor(x / period)


def w_N_multi(T, norms, opts: RadiusOptions | None = None) -> dict[str, RadiusResult]:
    """One theta scan serving several norms (fused grid stage)."""
    T = matrices.as_matrix(T)
    opts = opts or RadiusOptions()
    norms = [parse_norm(nd) for nd in norms]
    ps, rows = _norm_rows(norms)
    kern = backend.kernels()
    vals, idx = kern.theta_scan(T, opts.theta_grid, ps)
    h = math.pi / opts.theta_grid
    out: dict[str, RadiusResult] = {}
    for nd in norms:
        row = rows[nd.id]
        code, p = kernel_code(nd)
        theta0 = idx[row] * h
        best_v = float(vals[row])
        best_th = theta0

        def f(th, code=code, p=p):
            return kern.eval_single(T, th, code, p)

        x, v = _golden_max(f, theta0 - h, theta0 + h, opts.refine_tol)
        if v > best_v:
            best_v, best_th = v, x
        out[nd.id] = RadiusResult(best_v, _wrap(best_th, math.pi), 0.0, 0.0)
    return out


def w_N(T, norm=OP, opts: RadiusOptions | None = None) -> RadiusResult:
    """Generalized numerical radius sup over theta of N(Re(e^{i theta} T))."""
    nd = parse_norm(norm)
    return w_N_multi(T, [nd], opts)[nd.id]


_PATTERN_STEPS = (
    (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
    (1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0),
    (1, 0, 1), (1, 0, -1), (-1, 0, 1), (-1, 0, -1),
    (0, 1, 1), (0, 1, -1), (0, -1, 1), (0, -1, -1),
    (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
    (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1),
)


def _fold_sphere(t: float, phi: float, theta: float):
    """Map an unconstrained sphere point to canonical ranges.

    The pair objective extends smoothly to every real t via
    f(t + pi, phi) = f(t, phi) and f(-t, phi) = f(t, phi + pi), so the
    refinement roams freely and the argmax folds back afterwards.
    """
    t = _wrap(t, math.pi)
    if t > math.pi / 2.0:
        t = math.pi - t
        phi = phi + math.pi
    return t, _wrap(phi, 2.0 * math.pi), _wrap(theta, math.pi)


def _refine_pair(point_eval, grid_point, grid_value, spacings, opts):
    """Coordinate-wise golden-section rounds over (t, phi, theta).

    Runs at least ``refine_passes`` rounds and keeps going while a round
    still improves the value by more than ``refine_tol`` (capped), then a
    compass polish over joint directions mops up the zigzag stall that pure
    coordinate descent can leave on coupled ridges.  Coordinates are never
    clamped (the objective is periodic-smooth across the t seam); the final
    point is folded into canonical ranges.  The result can only move up
    from the grid stage.
    """
    t0, phi0, theta0 = grid_point
    ht, hphi, htheta = spacings
    best = grid_value
    pt = [t0, phi0, theta0]
    rounds = max(opts.refine_passes, _MAX_REFINE_ROUNDS)
    for rnd in range(rounds):
        start = best
        for coord, h in ((0, ht), (1, hphi), (2, htheta)):

            def along(x, coord=coord):
                probe = list(pt)
                probe[coord] = x
                return point_eval(*probe)

            x, v = _golden_max(along, pt[coord] - h, pt[coord] + h, opts.refine_tol)
            if v > best:
                best, pt[coord] = v, x
        if rnd + 1 >= opts.refine_passes and best - start <= opts.refine_tol:
            break
    step = 0.25 * max(ht, hphi, htheta)
    while step > opts.refine_tol:
        moved = False
        for dt_, dp_, dh_ in _PATTERN_STEPS:
            cand = (pt[0] + dt_ * step, pt[1] + dp_ * step, pt[2] + dh_ * step)
            v = point_eval(*cand)
            if v > best:
                best = v
                pt = list(cand)
                moved = True
                break
        if not moved:
            step *= 0.5
    return best, _fold_sphere(pt[0], pt[1], pt[2])


def _w_Ne_impl(B, C, norms, opts, route: str) -> dict[str, RadiusResult]:
    B = matrices.as_matrix(B)
    C = matrices.as_matrix(C)
    if B.shape != C.shape:
        raise ValueError(f"dimension mismatch: {B.shape} vs {C.shape}")
    opts = opts or RadiusOptions()
    norms = [parse_norm(nd) for nd in norms]
    ps, rows = _norm_rows(norms)
    kern = backend.kernels()
    if route == "direct":
        scan, point = kern.sphere_scan, kern.eval_pair
    else:
        scan, point = kern.sphere_scan_ab, kern.eval_pair_ab
    vals, idx, (slice_vals, slice_phi, slice_theta) = scan(
        B, C, opts.t_grid, opts.phi_grid, opts.theta_grid, ps
    )
    ht = (math.pi / 2.0) / (opts.t_grid - 1)
    hphi = 2.0 * math.pi / opts.phi_grid
    htheta = math.pi / opts.theta_grid
    out: dict[str, RadiusResult] = {}
    for nd in norms:
        row = rows[nd.id]
        code, p = kernel_code(nd)

        def f(t, phi, theta, code=code, p=p):
            return point(B, C, t, phi, theta, code, p)

        # primary start: global grid argmax; secondary start: the best grid
        # point in a distant t band, in case two near-tied basins compete
        starts = [(int(idx[row, 0]), int(idx[row, 1]), int(idx[row, 2]))]
        gap = max(2, opts.t_grid // 8)
        masked = slice_vals[:, row].copy()
        lo = max(0, starts[0][0] - gap)
        hi = min(opts.t_grid, starts[0][0] + gap + 1)
        masked[lo:hi] = -np.inf
        if np.isfinite(masked).any():
            it2 = int(np.argmax(masked))
            starts.append((it2, int(slice_phi[it2, row]), int(slice_theta[it2, row])))
        best_value = -1.0
        best_point = (0.0, 0.0, 0.0)
        for it_, iphi_, ith_ in starts:
            grid_point = (it_ * ht, iphi_ * hphi, ith_ * htheta)
            start_value = f(*grid_point)
            value, folded = _refine_pair(f, grid_point, start_value, (ht, hphi, htheta), opts)
            if value > best_value:
                best_value, best_point = value, folded
        best_value = max(best_value, float(vals[row]))
        out[nd.id] = RadiusResult(best_value, best_point[2], best_point[0], best_point[1])
    return out


def w_Ne_multi(B, C, norms, opts: RadiusOptions | None = None) -> dict[str, RadiusResult]:
    """One sphere scan serving several norms at once (fused grid stage)."""
    return _w_Ne_impl(B, C, norms, opts, "direct")


def w_Ne(B, C, norm=OP, opts: RadiusOptions | None = None) -> RadiusResult:
    """Pair radius sup over the lambda sphere and theta (see module docs)."""
    nd = parse_norm(norm)
    return _w_Ne_impl(B, C, [nd], opts, "direct")[nd.id]


def w_Ne_alpha_beta(B, C, norm=OP, opts: RadiusOptions | None = None) -> RadiusResult:
    """Same supremum through N(alpha Re(M) + beta Im(M)), alpha^2 + beta^2 = 1.

    Cross-check route for ``w_Ne``: substituting alpha = cos theta,
    beta = -sin theta reproduces the pencil Re(e^{i theta} M) from the
    cartesian parts, assembled with independent arithmetic.
    """
    nd = parse_norm(norm)
    return _w_Ne_impl(B, C, [nd], opts, "ab")[nd.id]


def w_Ne_alpha_beta_multi(B, C, norms, opts: RadiusOptions | None = None):
    """Fused multi-norm version of the alpha/beta cross-check route."""
    return _w_Ne_impl(B, C, norms, opts, "ab")


def w2_closed_form(T) -> float:
    """Exact hs radius: sqrt(||T||_2^2 / 2 + |tr(T^2)| / 2)."""
    T = matrices.as_matrix(T)
    fro = matrices.frobenius_norm(T)
    return math.sqrt(0.5 * fro * fro + 0.5 * abs(np.trace(T @ T)))


def _pair_hs_invariants(B, C):
    return (
        complex(np.trace(B @ B)),
        complex(np.trace(C @ C)),
        complex(np.trace(B @ C)),
        float(np.linalg.norm(B)) ** 2,
        float(np.linalg.norm(C)) ** 2,
        complex(np.trace(B.conj().T @ C)),
    )


def w2e_reduced(B, C, opts: RadiusOptions | None = None) -> RadiusResult:
    """hs pair radius by maximizing the closed form over (t, phi) only.

    The theta supremum has the exact value sqrt(||M||_2^2/2 + |tr M^2|/2)
    for every point M of the lambda sphere, so no theta loop is needed.
    """
    B = matrices.as_matrix(B)
    C = matrices.as_matrix(C)
    if B.shape != C.shape:
        raise ValueError(f"dimension mismatch: {B.shape} vs {C.shape}")
    opts = opts or RadiusOptions()
    kern = backend.kernels()
    inv = _pair_hs_invariants(B, C)
    best_sq, it, iphi = kern.hs_sphere_scan(*inv, opts.t_grid, opts.phi_grid)
    ht = (math.pi / 2.0) / (opts.t_grid - 1)
    hphi = 2.0 * math.pi / opts.phi_grid
    pt = [it * ht, iphi * hphi]
    best = best_sq
    for rnd in range(max(opts.refine_passes, _MAX_REFINE_ROUNDS)):
        start = best
        x, v = _golden_max(
            lambda t: kern.eval_hs_point(*inv, t, pt[1]), pt[0] - ht, pt[0] + ht,
            opts.refine_tol,
        )
        if v > best:
            best, pt[0] = v, x
        x, v = _golden_max(
            lambda ph: kern.eval_hs_point(*inv, pt[0], ph), pt[1] - hphi, pt[1] + hphi,
            opts.refine_tol,
        )
        if v > best:
            best, pt[1] = v, x
        if rnd + 1 >= opts.refine_passes and best - start <= opts.refine_tol:
            break
    t_, phi_, _ = _fold_sphere(pt[0], pt[1], 0.0)
    return RadiusResult(math.sqrt(max(best, 0.0)), 0.0, t_, phi_)


def w_e_vector_oracle(
    B, C, samples: int = 20000, seed: int = 0, polish_iters: int = 200,
    restarts: int = ORACLE_RESTARTS,
) -> float:
    """Lower estimate of the pair radius from random unit vectors.

    Draws ``samples`` complex-gaussian unit vectors, evaluates
    sqrt(|<Bx,x>|^2 + |<Cx,x>|^2), then hill-climbs the best ``restarts``
    candidates with x <- normalize(x + sigma g), halving sigma per candidate
    on non-improvement and expanding it (capped) on improvement so the climb
    does not freeze.  With C = 0 this is the classical numerical radius
    oracle.
    """
    B = matrices.as_matrix(B)
    C = matrices.as_matrix(C)
    if B.shape != C.shape:
        raise ValueError(f"dimension mismatch: {B.shape} vs {C.shape}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = B.shape[0]
    kern = backend.kernels()
    rng = SplitMix64(seed)
    X = rng.complex_gaussians(samples * n).reshape(samples, n)
    norms_ = np.linalg.norm(X, axis=1)
    bad = norms_ < 1e-12
    if bad.any():
        X[bad] = 0.0
        X[bad, 0] = 1.0
        norms_[bad] = 1.0
    X /= norms_[:, None]
    vals = kern.oracle_values(B, C, X)
    best = float(vals.max())
    r = min(restarts, samples)
    order = np.argsort(-vals, kind="stable")[:r]
    Xc = X[order].copy()
    vc = vals[order].copy()
    sigma = np.full(r, 0.5)
    for _ in range(polish_iters):
        G = rng.complex_gaussians(r * n).reshape(r, n)
        Xp = Xc + sigma[:, None] * G
        nn = np.linalg.norm(Xp, axis=1)
        nn[nn < 1e-12] = 1.0
        Xp /= nn[:, None]
        vp = kern.oracle_values(B, C, Xp)
        improved = vp > vc
        Xc[improved] = Xp[improved]
        vc[improved] = vp[improved]
        sigma[~improved] *= 0.5
        sigma[improved] = np.minimum(sigma[improved] * 2.0, 0.5)
    return max(best, float(vc.max()))

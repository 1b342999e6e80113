"""Forward solver for l y = lam y in quasi-derivative form.

The equation with q = sigma' is integrated as the 2x2 first-order system

    y'      = sigma y + y^[1]
    (y^[1])' = -sigma y^[1] - sigma^2 y - lam y

whose matrix A(sigma) satisfies A^2 = -lam I for frozen sigma.  Each step of
the integrator therefore uses the exact 2x2 exponential of the fourth-order
Magnus element built on two Gauss nodes; for piecewise-constant sigma (the
delta-interaction case) the propagation is exact to rounding once jump points
are mesh nodes.  Everything is vectorized over batches of lambda, which is
what makes the eigenvalue search and residue quadratures affordable.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._util import sqrt_lambda
from .errors import AtPole, CountMismatch, NoConvergence, NonFiniteState, PoleTooClose
from .problem import Polynomial, ProblemL, SigmaFunction, poly_eval
from .spectral import EigenRecord, SpectralData

PI = np.pi

_GAUSS_C1 = 0.5 - np.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + np.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class SolutionTrace:
    """Solution values on a uniform grid: y and the quasi-derivative y' - sigma y."""

    grid: np.ndarray
    y: np.ndarray
    y_quasi: np.ndarray


def _step_mesh(sigma: SigmaFunction, n_x: int):
    """Uniform n_x-node grid over [0, pi] with sigma jump points inserted.

    Returns (mesh, take) where take[i] is the mesh index of uniform node i.
    """
    base = np.linspace(0.0, PI, n_x)
    jumps = [j for j in sigma.jump_points() if 0.0 < j < PI]
    if not jumps:
        return base, np.arange(n_x)
    mesh = np.unique(np.concatenate([base, np.asarray(jumps, dtype=float)]))
    take = np.searchsorted(mesh, base)
    return mesh, take


def _propagate(sigma, lam, y0, yq0, mesh, record_at=None):
    """March the Magnus-4 propagator along mesh (ascending or descending).

    lam: (B,) complex.  y0/yq0: scalar or (B,).  record_at: optional array of
    mesh indices at which to store the state; returns either the endpoint pair
    or (Y, YQ) of shape (n_rec, B).
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    B = lam.shape[0]
    y = np.broadcast_to(np.asarray(y0, dtype=complex), (B,)).astype(complex)
    yq = np.broadcast_to(np.asarray(yq0, dtype=complex), (B,)).astype(complex)
    n_steps = len(mesh) - 1
    h_all = np.diff(mesh)
    s1_all = np.asarray(sigma(mesh[:-1] + _GAUSS_C1 * h_all), dtype=complex)
    s2_all = np.asarray(sigma(mesh[:-1] + _GAUSS_C2 * h_all), dtype=complex)

    recording = record_at is not None
    if recording:
        rec_pos = {int(ix): k for k, ix in enumerate(record_at)}
        Y = np.empty((len(record_at), B), dtype=complex)
        YQ = np.empty((len(record_at), B), dtype=complex)
        if 0 in rec_pos:
            Y[rec_pos[0]], YQ[rec_pos[0]] = y, yq

    fac_c = np.sqrt(3.0) / 12.0
    with np.errstate(invalid="ignore", over="ignore"):
        for i in range(n_steps):
            h = h_all[i]
            s1 = s1_all[i]
            s2 = s2_all[i]
            # Magnus element: h/2 (A1 + A2) + sqrt(3) h^2 / 12 [A2, A1]
            w11 = 0.5 * h * (s1 + s2)
            w12 = np.full(B, h, dtype=complex)
            w21 = -0.5 * h * (s1 * s1 + s2 * s2) - h * lam
            if s1 != s2:
                f = fac_c * h * h
                # [A2, A1] for A(s) = [[s, 1], [-s^2 - lam, -s]]
                c11 = (s2 * s1 - (s1 * s1 + lam)) - (s1 * s2 - (s2 * s2 + lam))
                c12 = 2 * (s2 - s1)
                c21 = (-(s2 * s2 + lam) * s1 + s2 * (s1 * s1 + lam)) \
                    - (-(s1 * s1 + lam) * s2 + s1 * (s2 * s2 + lam))
                w11 = w11 + f * c11
                w12 = w12 + f * c12
                w21 = w21 + f * c21
            # exp of the trace-free 2x2: u^2 = -det = w11^2 + w12 w21
            u = np.sqrt(w11 * w11 + w12 * w21)
            cu = np.cosh(u)
            au = np.abs(u)
            su = np.where(au < 1e-8, 1.0 + u * u / 6.0,
                          np.sinh(u) / np.where(au < 1e-300, 1.0, u))
            y, yq = (cu + su * w11) * y + (su * w12) * yq, \
                    (su * w21) * y + (cu - su * w11) * yq
            if recording and (i + 1) in rec_pos:
                k = rec_pos[i + 1]
                Y[k], YQ[k] = y, yq

    if recording:
        if not (np.all(np.isfinite(Y)) and np.all(np.isfinite(YQ))):
            raise NonFiniteState("integration overflow; |lambda| too large for step size")
        return Y, YQ
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(yq))):
        raise NonFiniteState("integration overflow; |lambda| too large for step size")
    return y, yq


def integrate_solution(sigma: SigmaFunction, lam, init, direction: str = "ltr",
                       n_x: int = 1024) -> SolutionTrace:
    """Trace of the quasi-derivative system on the uniform n_x grid.

    init is (y, y^[1]) at x=0 for direction "ltr" or at x=pi for "rtl".
    sigma is never differentiated.
    """
    if n_x < 33:
        raise ValueError("n_x must be at least 33")
    if direction not in ("ltr", "rtl"):
        raise ValueError("direction must be 'ltr' or 'rtl'")
    mesh, take = _step_mesh(sigma, n_x)
    if direction == "rtl":
        mesh = mesh[::-1]
        take = len(mesh) - 1 - take
    Y, YQ = _propagate(sigma, lam, init[0], init[1], mesh, record_at=take)
    return SolutionTrace(grid=np.linspace(0.0, PI, n_x), y=Y[:, 0], y_quasi=YQ[:, 0])


def _phi_end_batch(sigma, lam, n_x):
    mesh, _ = _step_mesh(sigma, n_x)
    return _propagate(sigma, lam, 1.0, 0.0, mesh)


def _psi_zero_batch(prob: ProblemL, lam, n_x):
    """(psi(0), psi^[1](0)) from the backward sweep with psi(pi)=r1, psi^[1](pi)=-r2."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    mesh, _ = _step_mesh(prob.sigma, n_x)
    return _propagate(prob.sigma, lam, poly_eval(prob.r1, lam),
                      -poly_eval(prob.r2, lam), mesh[::-1])


def phi_at(sigma: SigmaFunction, lam, n_x: int = 1024):
    """phi(pi, lam), phi^[1](pi, lam) for the initial data phi(0)=1, phi^[1](0)=0."""
    y, yq = _phi_end_batch(sigma, lam, n_x)
    if np.ndim(lam) == 0:
        return complex(y[0]), complex(yq[0])
    return y, yq


def char_delta(prob: ProblemL, lam, n_x: int = 1024):
    """Characteristic function Delta = r1 phi^[1](pi) + r2 phi(pi) = -psi^[1](0)."""
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    _, yq0 = _psi_zero_batch(prob, lam_arr, n_x)
    out = -yq0
    if np.ndim(lam) == 0:
        return complex(out[0])
    return out


def weyl_M(prob: ProblemL, lam, n_x: int = 1024):
    """Weyl function of the inner problem, the orientation with residues -> 2/pi.

    This is psi(0)/psi^[1](0) = -psi(0)/Delta; for the model problem it equals
    cos(rho pi) / (rho sin(rho pi)).
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    y0, yq0 = _psi_zero_batch(prob, lam_arr, n_x)
    if np.any(np.abs(yq0) < 1e-13 * np.maximum(np.abs(y0), 1.0)):
        raise AtPole("weyl_M evaluated at (or too near) an eigenvalue")
    out = y0 / yq0
    if np.ndim(lam) == 0:
        return complex(out[0])
    return out


def weyl_M1(prob: ProblemL, p1: Polynomial, p2: Polynomial, lam, n_x: int = 1024):
    """Weyl function with the polynomial condition at x = 0.

    Oriented so that the Moebius reduction M = p1 M1 / (1 + p2 M1) returns
    weyl_M exactly: M1 = psi(0) / (p1 psi^[1](0) - p2 psi(0)).
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    y0, yq0 = _psi_zero_batch(prob, lam_arr, n_x)
    den = poly_eval(p1, lam_arr) * yq0 - poly_eval(p2, lam_arr) * y0
    if np.any(np.abs(den) < 1e-13 * np.maximum(np.abs(y0), 1.0)):
        raise AtPole("weyl_M1 evaluated at a pole")
    out = y0 / den
    if np.ndim(lam) == 0:
        return complex(out[0])
    return out


# ---------------------------------------------------------------------------
# Eigenvalue search.


def _rho_shift(prob: ProblemL) -> float:
    if prob.case == "M1=M2":
        return prob.m1 + 1.0
    return prob.m2 + 0.5


def _winding_data(f, pts, max_refine=14):
    """Continuous log of f along the closed polyline pts.

    Returns (pts, vals, logf) refined so consecutive phase jumps stay below
    pi/2, or raises NoConvergence when a boundary point sits on a zero.
    """
    pts = np.asarray(pts, dtype=complex)
    vals = f(pts)
    for _ in range(max_refine):
        ratio = vals[1:] / vals[:-1]
        bad = np.abs(np.angle(ratio)) > PI / 2
        if not np.any(bad):
            break
        mid = 0.5 * (pts[:-1][bad] + pts[1:][bad])
        vmid = f(mid)
        idx = np.flatnonzero(bad)
        pts = np.insert(pts, idx + 1, mid)
        vals = np.insert(vals, idx + 1, vmid)
    else:
        raise NoConvergence("phase tracking did not settle on the contour")
    if np.any(np.abs(vals) == 0.0):
        raise NoConvergence("characteristic function vanishes on the contour")
    phase = np.concatenate([[0.0], np.cumsum(np.angle(vals[1:] / vals[:-1]))])
    logf = np.log(np.abs(vals)) + 1j * (np.angle(vals[0]) + phase)
    return pts, vals, logf


def _contour_moments(f, pts, orders=0):
    """(count, s1, ..., s_orders) for roots of f inside a closed polyline,
    derivative free: integrates lam^p dlog f by parts with the continuously
    tracked log."""
    pts, _, logf = _winding_data(f, pts)
    wind = (logf[-1] - logf[0]).imag / (2 * PI)
    count = int(round(wind))
    if abs(wind - count) > 0.05:
        raise NoConvergence(f"non-integer winding {wind:.3f}")
    lam0 = pts[0]
    moms = [count]
    for p in range(1, orders + 1):
        integrand = pts ** (p - 1) * logf
        integral = np.sum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(pts))
        moms.append(lam0**p * count - p / (2j * PI) * integral)
    return moms


def _edge_points(z0, z1, n_min=16, per_rho=14.0):
    """Points on the segment [z0, z1) spaced uniformly in rho = sqrt(lambda)
    arc length, so the phase of the characteristic function never aliases."""
    t_fine = np.linspace(0.0, 1.0, 257)
    z_fine = z0 + t_fine * (z1 - z0)
    arc = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(sqrt_lambda(z_fine))))])
    n = max(n_min, int(per_rho * arc[-1]) + 1)
    t = np.interp(np.linspace(0.0, arc[-1], n, endpoint=False), arc, t_fine)
    return z0 + t * (z1 - z0)


def _rect_points(corners, n_side=16):
    a, b, c, d = corners  # Re in [a,b], Im in [c,d]
    vv = [a + 1j * c, b + 1j * c, b + 1j * d, a + 1j * d]
    pts = np.concatenate([_edge_points(vv[i], vv[(i + 1) % 4], n_min=n_side)
                          for i in range(4)] + [[vv[0]]])
    return pts


def _circle_points(center, radius, n=96):
    th_fine = np.exp(2j * PI * np.linspace(0.0, 1.0, 513))
    z_fine = center + radius * th_fine
    arc = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(sqrt_lambda(z_fine))))])
    n = max(n, int(14.0 * arc[-1]) + 1)
    th = np.exp(2j * PI * np.arange(n) / n)
    return np.concatenate([center + radius * th, [center + radius]])


def _box_count(f, corners):
    return _contour_moments(f, _rect_points(corners), orders=0)[0]


def _roots_from_moments(count, moms):
    """Root multiset of size count (<= 3) from power sums, Newton identities."""
    s1 = moms[1]
    if count == 1:
        return [s1]
    s2 = moms[2]
    e1 = s1
    e2 = (e1 * s1 - s2) / 2.0
    if count == 2:
        disc = np.sqrt(e1 * e1 - 4 * e2)
        return [(e1 + disc) / 2.0, (e1 - disc) / 2.0]
    s3 = moms[3]
    e3 = (e2 * s1 - e1 * s2 + s3) / 3.0
    return list(np.roots([1.0, -e1, e2, -e3]))


def _subdivide_hunt(f, corners, count, depth=0, max_depth=60):
    """Locate roots inside a rectangle holding a known number of them.

    Returns a list of groups, each a list of raw root estimates: singletons
    come from single-root boxes (clean first moments), tight groups from
    boxes that still hold 2..3 roots at the resolution floor.  Splits are
    chosen so children partition the parent; a split is rejected when the
    child counts do not add up."""
    if count == 0:
        return []
    a, b, c, d = corners
    scale = 1.0 + max(abs(a), abs(b), abs(c), abs(d))
    if count == 1:
        moms = _contour_moments(f, _rect_points(corners, n_side=96), orders=1)
        return [[moms[1]]]
    small = max(b - a, d - c) < 1e-5 * scale
    if count <= 3 and small:
        moms = _contour_moments(f, _rect_points(corners, n_side=96), orders=count)
        return [_roots_from_moments(count, moms)]
    if depth >= max_depth:
        raise NoConvergence("subdivision depth exhausted")
    horizontal = b - a >= d - c
    for frac in (0.5, 0.54, 0.44, 0.58, 0.38, 0.62):
        if horizontal:
            m = a + frac * (b - a)
            boxes = [(a, m, c, d), (m, b, c, d)]
        else:
            m = c + frac * (d - c)
            boxes = [(a, b, c, m), (a, b, m, d)]
        try:
            c1 = _box_count(f, boxes[0])
            c2 = _box_count(f, boxes[1])
        except NoConvergence:
            continue
        if c1 + c2 != count:
            continue
        return (_subdivide_hunt(f, boxes[0], c1, depth + 1, max_depth)
                + _subdivide_hunt(f, boxes[1], c2, depth + 1, max_depth))
    raise NoConvergence("no clean split found for a counting box")


def _polish_simple(f, roots, iters=30):
    """Batched secant polish of simple roots."""
    z0 = np.asarray(roots, dtype=complex)
    z1 = z0 * (1 + 1e-7) + 1e-7
    f0 = f(z0)
    f1 = f(z1)
    for _ in range(iters):
        denom = f1 - f0
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        z2 = z1 - f1 * (z1 - z0) / denom
        z0, f0 = z1, f1
        z1 = z2
        f1 = f(z1)
        if np.all(np.abs(z1 - z0) <= 1e-13 * (1 + np.abs(z1))):
            break
    return z1


def _polish_cluster(f, center, m, scale, rounds=6):
    """Centroid refinement of an m-fold cluster by shrinking circle moments."""
    r = max(1e-3 * scale, 1e-8)
    for _ in range(rounds):
        try:
            moms = _contour_moments(f, _circle_points(center, r), orders=1)
        except NoConvergence:
            r *= 1.7
            continue
        if moms[0] != m:
            r *= 1.7
            continue
        center = moms[1] / m
        r = max(r / 8.0, 1e-9 * (1 + abs(center)))
    return center


def _analyze_group(f, group, merge_tol=1e-5):
    """Resolve a coarse group of nearby raw roots into simple roots and/or a
    genuine cluster, using circle moments around the group."""
    group = np.asarray(group, dtype=complex)
    m = len(group)
    center = complex(np.mean(group))
    spread = float(np.max(np.abs(group - center))) if m > 1 else 0.0
    radius = max(4.0 * spread, 1e-3 * (1 + abs(center)))
    r_min = max(2.0 * spread, 1e-9 * (1 + abs(center)))
    for _ in range(8):
        try:
            moms = _contour_moments(f, _circle_points(center, radius), orders=min(m, 3))
        except NoConvergence:
            radius *= 1.6
            continue
        if moms[0] == m:
            break
        radius = radius * 1.6 if moms[0] < m else max(radius * 0.5, r_min)
    else:
        raise NoConvergence("could not isolate a root group")
    if m > 3:
        raise NoConvergence(f"root group of size {m} exceeds the multiplicity cap")
    roots = _roots_from_moments(m, moms)
    rho = sqrt_lambda(np.asarray(roots))
    sep = np.max(np.abs(rho[:, None] - rho[None, :])) if m > 1 else 0.0
    distinct = m == 1 or sep >= merge_tol
    if distinct and m > 1:
        # the rho criterion over-resolves genuine multiples (noise in the
        # moment roots); accept the split only if each candidate isolates
        # exactly one root inside its own small circle
        lam_sep = min(abs(roots[a] - roots[b])
                      for a in range(m) for b in range(a + 1, m))
        r_ver = max(lam_sep / 4.0, 1e-10 * (1 + abs(center)))
        for z in roots:
            try:
                cnt = _contour_moments(f, _circle_points(z, r_ver), orders=0)[0]
            except NoConvergence:
                cnt = -1
            if cnt != 1:
                distinct = False
                break
    if distinct:
        polished = _polish_simple(f, roots)
        return [(complex(z), 1) for z in polished]
    center = complex(_polish_cluster(f, complex(np.mean(roots)), m, 1 + abs(center)))
    return [(center, m)]


def find_eigenvalues(prob: ProblemL, K: int, n_x: int = 1024) -> list[EigenRecord]:
    """First K eigenvalues (with multiplicity), ordered by the asymptotic
    numbering; real problems use the bracketed real-axis search, anything that
    fails the count check falls back to argument-principle subdivision."""
    if K < prob.m1 + 2:
        raise ValueError("K must be at least M1 + 2")
    shift = _rho_shift(prob)
    top_rho = (K - shift) + 0.5

    def delta(lams):
        return char_delta(prob, np.asarray(lams, dtype=complex), n_x)

    # magnitude of sigma controls how deep the negative spectrum can sit
    sig_max = float(np.max(np.abs(prob.sigma(np.linspace(0, PI, 257)))))
    t_neg = max(4.0, 2.0 * sig_max + 2.0, prob.m1 + 2.0)

    roots: list[complex] = []
    found_real = False
    if prob.is_real:
        found_real = True
        rho_grid = np.arange(1e-4, top_rho, 0.02)
        t_grid = np.arange(0.02, t_neg, 0.02)
        lam_grid = np.concatenate([-(t_grid[::-1] ** 2), rho_grid**2])
        vals = np.real(delta(lam_grid))
        sgn = np.sign(vals)
        flips = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
        lo, hi = lam_grid[flips].copy(), lam_grid[flips + 1].copy()
        for _ in range(52):
            mid = 0.5 * (lo + hi)
            vm = np.real(delta(mid))
            vl = np.real(delta(lo))
            left = vl * vm <= 0
            hi = np.where(left, mid, hi)
            lo = np.where(left, lo, mid)
        roots = list(0.5 * (lo + hi).astype(complex))

    # master region count check
    master = (-(t_neg**2) - 1.0, top_rho**2, -max(6.0, 1.5 * top_rho),
              max(6.0, 1.5 * top_rho))
    total = None
    for grow in range(3):
        try:
            total = _box_count(delta, master)
            break
        except NoConvergence:
            # nudge boundaries off any zero; the top edge moves gently so the
            # (K+1)-th eigenvalue stays outside
            master = (master[0] - 1.3, master[1] + 0.4 * top_rho,
                      master[2] * 1.1, master[3] * 1.1)
    if total is None:
        raise CountMismatch("could not count roots in the master region")

    if total != K:
        raise CountMismatch(
            f"master region holds {total} eigenvalues, expected {K}; "
            "window tuning failed for this problem")

    if found_real and len(roots) == total:
        groups = [[z] for z in roots]
    else:
        groups = _subdivide_hunt(delta, master, total)
        if sum(len(g) for g in groups) != total:
            raise CountMismatch("subdivision lost roots")

    found: list[tuple[complex, int]] = []
    singles = [g[0] for g in groups if len(g) == 1]
    if singles:
        polished = _polish_simple(delta, singles)
        found.extend((complex(z), 1) for z in polished)
    for g in groups:
        if len(g) > 1:
            found.extend(_analyze_group(delta, g))

    # merge polished duplicates (distinct search paths converging to one root)
    found.sort(key=lambda t: (t[0].real, t[0].imag))
    merged: list[list] = []
    for lam_c, m in found:
        if merged and (abs(lam_c - merged[-1][0]) <= 1e-8 * (1 + abs(lam_c))
                       or abs(sqrt_lambda(lam_c) - sqrt_lambda(merged[-1][0])) < 1e-5):
            merged[-1][1] += m
        else:
            merged.append([lam_c, m])

    records = [EigenRecord(lam=complex(lam_c), rho=complex(sqrt_lambda(lam_c)),
                           multiplicity=m, alpha_coeffs=())
               for lam_c, m in merged]
    records.sort(key=lambda r: (round(r.rho.real, 9), r.rho.imag))
    flat = sum(r.multiplicity for r in records)
    if flat != K:
        raise CountMismatch(f"assembled {flat} eigenvalues, expected {K}")
    return records


def weight_numbers(prob: ProblemL, eigs: list[EigenRecord], n_x: int = 1024,
                   n_quad: int = 64) -> list[EigenRecord]:
    """Fill principal-part coefficients alpha_{k+j} by circle quadrature of the
    forward-computed Weyl function; simple real poles are cross-checked against
    psi(0, lam)/Delta'(lam)."""
    lam_c = np.array([r.lam for r in eigs], dtype=complex)
    th = np.exp(2j * PI * (np.arange(n_quad) + 0.5) / n_quad)

    radii = np.empty(len(eigs))
    for k in range(len(eigs)):
        others = np.delete(lam_c, k)
        dmin = np.min(np.abs(others - lam_c[k])) if len(others) else np.inf
        radii[k] = min(1e-2 * max(1.0, abs(lam_c[k])), 0.25 * dmin)
        if radii[k] < 1e-10 * (1 + abs(lam_c[k])):
            raise PoleTooClose(f"poles too close near lambda={lam_c[k]:.6g}")

    pts = (lam_c[:, None] + radii[:, None] * th[None, :]).ravel()
    y0, yq0 = _psi_zero_batch(prob, pts, n_x)
    Mv = (y0 / yq0).reshape(len(eigs), n_quad)

    out: list[EigenRecord] = []
    for k, rec in enumerate(eigs):
        z = lam_c[k] + radii[k] * th
        alphas = []
        for j in range(rec.multiplicity):
            alphas.append(complex(np.mean(Mv[k] * (z - lam_c[k]) ** (j + 1))))
        if rec.multiplicity == 1 and abs(rec.lam.imag) < 1e-9:
            # cross-check against the simple-pole formula
            h = 1e-5 * max(1.0, abs(rec.lam))
            lam_s = np.array([rec.lam - h, rec.lam + h, rec.lam], dtype=complex)
            y0s, yq0s = _psi_zero_batch(prob, lam_s, n_x)
            dprime = (-yq0s[1] + yq0s[0]) / (2 * h)
            alt = y0s[2] / (-dprime)
            if abs(alt - alphas[0]) > 1e-4 * max(1.0, abs(alphas[0])):
                warnings.warn(
                    f"weight number cross-check mismatch at lambda={rec.lam:.6g}: "
                    f"circle {alphas[0]:.8g} vs psi/Delta' {alt:.8g}",
                    stacklevel=2)
        out.append(EigenRecord(lam=rec.lam, rho=rec.rho,
                               multiplicity=rec.multiplicity,
                               alpha_coeffs=tuple(alphas)))
    return out


def forward_spectral_data(prob: ProblemL, K: int, n_x: int = 1024) -> SpectralData:
    """find_eigenvalues + weight_numbers, packaged."""
    eigs = weight_numbers(prob, find_eigenvalues(prob, K, n_x), n_x)
    return SpectralData.from_records(eigs, m1=prob.m1, case=prob.case)

"""Truncated main equation: per grid point x, the 2K x 2K linear system

    (E + H(x)) psi(x) = psi_tilde(x)

whose solution carries the values phi_{n,i}(x) of the unknown problem's
solution at the data poles (i=0) and the model poles (i=1).  The vector and
matrix come from the raw relation between phi and the model solution through

    psi_{n0} = chi_n (phi_{n,0} - phi_{n,1}),   psi_{n1} = phi_{n,1},

which turns the conditionally convergent raw system into an absolutely
bounded one.  The x-derivative of the solution obeys the differentiated
system (E + H) psi' = psi_tilde' - H' psi, with H' available in closed form
because d/dx D(x, lam, mu) = phi_model(x, lam) phi_model(x, mu).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._util import phi_model, phi_model_dx
from .errors import Singular
from .model import ModelData, kernel_D, kernel_D_derivs_batch
from .spectral import SpectralData

PI = np.pi

XI_CUTOFF = 1e-12  # xi below this is treated as exactly zero (chi = 0)


def xi_chi(sd: SpectralData, md: ModelData, K: int | None = None):
    """Distance sequence xi_n = |rho_n - rho~_n| + |alpha_n - alpha~_n| and its
    guarded reciprocal chi_n."""
    K = sd.K if K is None else K
    mds = md.spectral_data(K)
    xi = np.abs(sd.rho[:K] - mds.rho) + np.abs(sd.alpha[:K] - mds.alpha)
    chi = np.where(xi > XI_CUTOFF, 1.0 / np.where(xi == 0, 1.0, xi), 0.0)
    return xi, chi


@dataclass(frozen=True)
class MainEquationSystem:
    K: int
    x: float
    psi_tilde: np.ndarray       # (2K,), interleaved (n, i)
    H: np.ndarray               # (2K, 2K)
    dpsi_tilde: np.ndarray      # x-derivatives, same layout
    dH: np.ndarray


class MainEquationContext:
    """x-independent precomputation for one (data, model, K) triple."""

    def __init__(self, sd: SpectralData, md: ModelData, K: int | None = None):
        K = sd.K if K is None else K
        sd = sd.truncated(K)
        self.sd = sd
        self.md = md
        self.K = K
        mds = md.spectral_data(K)
        self.mds = mds
        self.xi, self.chi = xi_chi(sd, md, K)

        self.fams = []
        for fam_sd in (sd, mds):
            head = np.zeros(K, dtype=int)
            order = np.zeros(K, dtype=int)
            for h, m in zip(fam_sd.heads, fam_sd.sizes):
                for j in range(m):
                    head[h + j] = h
                    order[h + j] = j
            self.fams.append({
                "sd": fam_sd,
                "head": head,
                "order": order,
                "lam_pt": fam_sd.lam[head],
                "alpha_flat": fam_sd.alpha,
            })

        # column term lists: for flat col k of family j, the principal-part
        # terms (dorder, alpha) with alpha != 0; a column is 'special' when it
        # has any dorder >= 1 term
        self.col_terms = []
        self.special_cols = []
        for fam in self.fams:
            fam_sd = fam["sd"]
            sizes = dict(zip(fam_sd.heads, fam_sd.sizes))
            terms = []
            spec = []
            for k in range(K):
                h = int(fam["head"][k])
                jk = int(fam["order"][k])
                lst = []
                for jp in range(jk, sizes[h]):
                    a = complex(fam_sd.alpha[h + jp])
                    if a != 0:
                        lst.append((jp - jk, a))
                terms.append(lst)
                if any(d >= 1 for d, _ in lst):
                    spec.append(k)
            self.col_terms.append(terms)
            self.special_cols.append(spec)

        self.special_rows = [np.flatnonzero(fam["order"] >= 1) for fam in self.fams]

        # flat arrays of all column terms per family, for vectorized G sums
        self.col_term_arrays = []
        for j, terms in enumerate(self.col_terms):
            k_idx, dords, wts = [], [], []
            for k, lst in enumerate(terms):
                for dord, a in lst:
                    k_idx.append(k)
                    dords.append(dord)
                    wts.append(a)
            self.col_term_arrays.append({
                "k": np.asarray(k_idx, dtype=int),
                "dord": np.asarray(dords, dtype=int),
                "w": np.asarray(wts, dtype=complex),
            })

        # batched index lists for the general-path entries of each block (i, j)
        self.blocks = {}
        for i in (0, 1):
            for j in (0, 1):
                rows_i = self.fams[i]
                ns, ks, lam_r, j_r, lam_c, dords, wts = [], [], [], [], [], [], []
                entry_pairs = set()
                for n in self.special_rows[i]:
                    for k in range(K):
                        entry_pairs.add((int(n), k))
                for k in self.special_cols[j]:
                    for n in range(K):
                        entry_pairs.add((n, int(k)))
                for (n, k) in sorted(entry_pairs):
                    for dord, a in self.col_terms[j][k]:
                        ns.append(n)
                        ks.append(k)
                        lam_r.append(rows_i["lam_pt"][n])
                        j_r.append(int(rows_i["order"][n]))
                        lam_c.append(self.fams[j]["lam_pt"][k])
                        dords.append(dord)
                        wts.append(a)
                self.blocks[(i, j)] = {
                    "pairs": sorted(entry_pairs),
                    "ns": np.asarray(ns, dtype=int),
                    "ks": np.asarray(ks, dtype=int),
                    "lam_r": np.asarray(lam_r, dtype=complex),
                    "j_r": np.asarray(j_r, dtype=int),
                    "lam_c": np.asarray(lam_c, dtype=complex),
                    "dords": np.asarray(dords, dtype=int),
                    "wts": np.asarray(wts, dtype=complex),
                }

        # rows where both families are simple: stable cosine-difference form
        self.plain_rows = (self.fams[0]["order"] == 0) & (self.fams[1]["order"] == 0) \
            & np.isin(np.arange(K), [h for h, m in zip(sd.heads, sd.sizes) if m == 1]) \
            & np.isin(np.arange(K), [h for h, m in zip(mds.heads, mds.sizes) if m == 1])

    # -- x-dependent pieces ------------------------------------------------

    def phi_tilde(self, x: float):
        """Model values phi~_{n,i}(x) and x-derivatives, both families, (K,) each."""
        out = []
        for fam in self.fams:
            vals = np.empty(self.K, dtype=complex)
            dvals = np.empty(self.K, dtype=complex)
            for jorder in np.unique(fam["order"]):
                sel = fam["order"] == jorder
                vals[sel] = phi_model(int(jorder), x, fam["lam_pt"][sel])
                dvals[sel] = phi_model_dx(int(jorder), x, fam["lam_pt"][sel])
            out.append((vals, dvals))
        return out

    def q_blocks(self, x: float):
        """Q blocks and their x-derivatives at x, each (K, K)."""
        K = self.K
        P0 = self.fams[0]["lam_pt"]
        P1 = self.fams[1]["lam_pt"]
        R = np.concatenate([P0, P1])
        D = kernel_D(x, R[:, None], R[None, :])
        Q = {}
        for i in (0, 1):
            for j in (0, 1):
                Qb = D[i * K:(i + 1) * K, j * K:(j + 1) * K] * self.fams[j]["alpha_flat"][None, :]
                blk = self.blocks[(i, j)]
                if blk["ns"].size:
                    vals = kernel_D_derivs_batch(x, blk["lam_r"], blk["j_r"],
                                                 blk["lam_c"], blk["dords"])
                    Qb = Qb.copy()
                    for (n, k) in blk["pairs"]:
                        Qb[n, k] = 0.0
                    np.add.at(Qb, (blk["ns"], blk["ks"]), blk["wts"] * vals)
                Q[(i, j)] = Qb

        (pt0, dpt0), (pt1, dpt1) = self.phi_tilde(x)
        dQ = {}
        Gs = []
        for j in (0, 1):
            ta = self.col_term_arrays[j]
            G = np.zeros(K, dtype=complex)
            for dord in np.unique(ta["dord"]) if ta["k"].size else []:
                sel = ta["dord"] == dord
                pts = self.fams[j]["lam_pt"][ta["k"][sel]]
                np.add.at(G, ta["k"][sel], ta["w"][sel] * phi_model(int(dord), x, pts))
            Gs.append(G)
        for i in (0, 1):
            frow = pt0 if i == 0 else pt1
            for j in (0, 1):
                dQ[(i, j)] = frow[:, None] * Gs[j][None, :]
        return Q, dQ, (pt0, dpt0, pt1, dpt1)


def _transform(ctx: MainEquationContext, Qb):
    """[[chi, -chi], [0, 1]] Q [[xi, 1], [0, -1]] assembled interleaved."""
    K = ctx.K
    chi, xi = ctx.chi, ctx.xi
    d00 = Qb[(0, 0)] - Qb[(1, 0)]
    d01 = Qb[(0, 1)] - Qb[(1, 1)]
    H = np.zeros((2 * K, 2 * K), dtype=complex)
    H[0::2, 0::2] = chi[:, None] * d00 * xi[None, :]
    H[0::2, 1::2] = chi[:, None] * (d00 - d01)
    H[1::2, 0::2] = Qb[(1, 0)] * xi[None, :]
    H[1::2, 1::2] = Qb[(1, 0)] - Qb[(1, 1)]
    return H


def build_system(sd: SpectralData, md: ModelData, x: float,
                 K: int | None = None, ctx: MainEquationContext | None = None) -> MainEquationSystem:
    """Assemble psi_tilde(x) and H(x) (plus x-derivatives) at one grid point."""
    if ctx is None:
        ctx = MainEquationContext(sd, md, K)
    K = ctx.K
    Q, dQ, (pt0, dpt0, pt1, dpt1) = ctx.q_blocks(x)
    H = _transform(ctx, Q)
    dH = _transform(ctx, dQ)

    psi = np.zeros(2 * K, dtype=complex)
    dpsi = np.zeros(2 * K, dtype=complex)
    diff = pt0 - pt1
    ddiff = dpt0 - dpt1
    pl = ctx.plain_rows
    if np.any(pl):
        # cos a - cos b = -2 sin((a+b)/2) sin((a-b)/2): avoids cancellation when
        # the data pole sits close to its model partner
        rs = ctx.sd.rho[:K][pl] + ctx.mds.rho[pl]
        rd = ctx.sd.rho[:K][pl] - ctx.mds.rho[pl]
        diff = diff.copy()
        ddiff = ddiff.copy()
        diff[pl] = -2.0 * np.sin(rs * x / 2) * np.sin(rd * x / 2)
        ddiff[pl] = -(rs * np.cos(rs * x / 2) * np.sin(rd * x / 2)
                      + rd * np.sin(rs * x / 2) * np.cos(rd * x / 2))
    psi[0::2] = ctx.chi * diff
    psi[1::2] = pt1
    dpsi[0::2] = ctx.chi * ddiff
    dpsi[1::2] = dpt1
    return MainEquationSystem(K=K, x=float(x), psi_tilde=psi, H=H,
                              dpsi_tilde=dpsi, dH=dH)


def solve_system(system: MainEquationSystem, cond_limit: float = 1e12):
    """Solve (E + H) psi = psi_tilde; returns (psi, dpsi, condition estimate)."""
    K = system.K
    A = np.eye(2 * K, dtype=complex) + system.H
    cond = float(abs(np.linalg.cond(A, 1)))
    if not np.isfinite(cond) or cond > cond_limit:
        raise Singular(f"main-equation matrix condition {cond:.3g} at x={system.x:.4f}")
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    psi = scipy.linalg.lu_solve((lu, piv), system.psi_tilde, check_finite=False)
    resid = np.max(np.abs(A @ psi - system.psi_tilde))
    scale = max(np.max(np.abs(system.psi_tilde)), 1e-30)
    if resid > 1e-10 * scale:
        psi = psi + scipy.linalg.lu_solve((lu, piv), system.psi_tilde - A @ psi,
                                          check_finite=False)
        resid = np.max(np.abs(A @ psi - system.psi_tilde))
        if resid > 1e-10 * scale:
            raise Singular(f"residual {resid:.3g} did not meet tolerance at x={system.x:.4f}")
    rhs = system.dpsi_tilde - system.dH @ psi
    dpsi = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    return psi, dpsi, cond


def recover_phi(psi: np.ndarray, xi: np.ndarray):
    """Invert the psi transform: phi_{n,0} = xi_n psi_{n0} + psi_{n1}, phi_{n,1} = psi_{n1}."""
    phi0 = xi * psi[0::2] + psi[1::2]
    phi1 = psi[1::2].copy()
    return phi0, phi1


@dataclass(frozen=True)
class PhiTable:
    """Solved phi^K_{n,i} and x-derivatives on the uniform grid."""

    x_grid: np.ndarray          # (n_x,)
    phi: np.ndarray             # (K, 2, n_x)
    dphi: np.ndarray            # (K, 2, n_x)
    cond: np.ndarray            # (n_x,)

    @property
    def K(self) -> int:
        return self.phi.shape[0]


def solve_at_x(ctx: MainEquationContext, x: float):
    """phi values and derivatives at a single (possibly off-grid) x."""
    system = build_system(ctx.sd, ctx.md, x, ctx=ctx)
    psi, dpsi, cond = solve_system(system)
    phi0, phi1 = recover_phi(psi, ctx.xi)
    dphi0, dphi1 = recover_phi(dpsi, ctx.xi)
    return phi0, phi1, dphi0, dphi1, cond


def dump_system(system: MainEquationSystem, psi: np.ndarray, cond: float, path):
    """Debug dump of one grid point's system: psi_tilde, H, solution, condition."""
    from ._util import cplx, write_json_atomic
    write_json_atomic(path, {
        "x": float(system.x),
        "K": system.K,
        "cond": float(cond),
        "psi_tilde": [cplx(v) for v in system.psi_tilde],
        "psi": [cplx(v) for v in psi],
        "H": [[cplx(v) for v in row] for row in system.H],
    })


def solve_on_grid(sd: SpectralData, md: ModelData, K: int, n_x: int = 512,
                  ctx: MainEquationContext | None = None,
                  threads: int = 1) -> PhiTable:
    """Build, factor and solve the system at every node of the uniform grid.

    Grid points are independent; threads > 1 maps them over a thread pool
    (assembly and LAPACK release the GIL for the bulk of the work)."""
    if ctx is None:
        ctx = MainEquationContext(sd, md, K)
    xs = np.linspace(0.0, PI, n_x)
    phi = np.empty((ctx.K, 2, n_x), dtype=complex)
    dphi = np.empty((ctx.K, 2, n_x), dtype=complex)
    cond = np.empty(n_x)

    def work(ix):
        try:
            return ix, solve_at_x(ctx, float(xs[ix]))
        except Singular as exc:
            raise Singular(f"{exc} (grid node {ix})") from exc

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(n_x)))
    else:
        results = [work(ix) for ix in range(n_x)]
    for ix, (p0, p1, d0, d1, c) in results:
        phi[:, 0, ix], phi[:, 1, ix] = p0, p1
        dphi[:, 0, ix], dphi[:, 1, ix] = d0, d1
        cond[ix] = c
    return PhiTable(x_grid=xs, phi=phi, dphi=dphi, cond=cond)
